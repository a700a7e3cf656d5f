//! `ghtail` — exact and asymptotic deep-tail diagnostics for the bivariate
//! equi-skew GH / VG model.
//!
//! Exit codes: 0 success, 2 invalid parameters/usage, 3 numerical failure.

mod config;
mod output;

use clap::{Parser, Subcommand};
use serde_json::json;

use ghtail::asymptotics::compute_constants;
use ghtail::dependence::{lambda_l_curve, tail_order_fit};
use ghtail::gig::{gig_log_pdf, GIGParams};
use ghtail::numerics::{integrate_log_with_splits, Interval, QuadratureSpec};
use ghtail::skew_gh::{
    joint_log_cdf_diagonal, marginal_log_cdf, sample_bivariate, skew_normal_cdf, xstar_log_pdf,
    EquiSkewGHParams,
};
use ghtail::special::log_bessel_k;
use ghtail::Error as GhError;

use config::{Format, ModelArgs, Resolved};

#[derive(Parser)]
#[command(name = "ghtail", version, about = "Tail dependence of the bivariate equi-skew GH / VG model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the closed-form asymptotic constants for one parameter point
    #[command(allow_negative_numbers = true)]
    Constants {
        #[command(flatten)]
        model: ModelArgs,
        /// Output format (text key = value lines, or json)
        #[arg(long, value_enum)]
        format: Option<Format>,
        /// Output path (stdout when omitted)
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Exact vs asymptotic copula diagonal over a log-spaced u grid
    #[command(allow_negative_numbers = true)]
    TailCurve {
        #[command(flatten)]
        model: ModelArgs,
        /// Largest u in the grid
        #[arg(long)]
        u_max: Option<f64>,
        /// Smallest u in the grid
        #[arg(long)]
        u_min: Option<f64>,
        /// Number of log-spaced grid points
        #[arg(long)]
        points: Option<usize>,
        /// Extra u values forced into the grid (repeatable)
        #[arg(long = "include-u")]
        include_u: Vec<f64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Draw seeded (x1, x2) pairs and print a summary
    #[command(allow_negative_numbers = true)]
    Sample {
        #[command(flatten)]
        model: ModelArgs,
        /// Number of pairs
        #[arg(long)]
        n: Option<usize>,
        /// RNG seed
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Fit the tail order from the exact pipeline on a deep u grid
    #[command(allow_negative_numbers = true)]
    Fit {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        u_max: Option<f64>,
        #[arg(long)]
        u_min: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long, value_enum)]
        format: Option<Format>,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Run the model invariant suite at the given parameters
    #[command(allow_negative_numbers = true)]
    Verify {
        #[command(flatten)]
        model: ModelArgs,
        /// Diagonal levels for the reduction-identity check (repeatable)
        #[arg(long = "y")]
        y: Vec<f64>,
    },
}

fn main() {
    // fixed filter: the tool takes no environment-variable configuration
    env_logger::Builder::new().parse_filters("warn").init();
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    };
    std::process::exit(code);
}

struct CliError {
    code: i32,
    message: String,
}

fn param_err(message: String) -> CliError {
    CliError { code: 2, message }
}

fn from_gh(e: GhError) -> CliError {
    let code = match e {
        GhError::InvalidParams(_) | GhError::Domain(_) => 2,
        _ => 3,
    };
    CliError {
        code,
        message: e.to_string(),
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Constants { model, format, out } => cmd_constants(&model, format, out.as_deref()),
        Command::TailCurve {
            model,
            u_max,
            u_min,
            points,
            include_u,
            format,
            out,
        } => cmd_tail_curve(&model, u_max, u_min, points, &include_u, format, out.as_deref()),
        Command::Sample {
            model,
            n,
            seed,
            format,
            out,
        } => cmd_sample(&model, n, seed, format, out.as_deref()),
        Command::Fit {
            model,
            u_max,
            u_min,
            points,
            format,
            out,
        } => cmd_fit(&model, u_max, u_min, points, format, out.as_deref()),
        Command::Verify { model, y } => cmd_verify(&model, &y),
    }
}

fn resolve(model: &ModelArgs) -> Result<Resolved, CliError> {
    config::resolve(model).map_err(param_err)
}

fn cmd_constants(
    model: &ModelArgs,
    format: Option<Format>,
    out: Option<&std::path::Path>,
) -> Result<i32, CliError> {
    let r = resolve(model)?;
    let consts = compute_constants(&r.params).map_err(from_gh)?;
    let format = format.or(r.file.format).unwrap_or(Format::Csv);
    let text = match format {
        Format::Json => output::json_document("constants", &r.effective, &[], consts),
        Format::Csv => {
            let pairs = [
                ("alpha", consts.alpha),
                ("beta", consts.beta),
                ("phi_alpha", consts.phi_alpha),
                ("theta_tilde_0", consts.theta_tilde0),
                ("A", consts.big_a),
                ("gamma", consts.gamma),
                ("delta", consts.delta),
                ("tau", consts.tau),
                ("C1", consts.c1),
                ("C2", consts.c2),
            ];
            let mut s = String::new();
            for (k, v) in pairs {
                s.push_str(&format!("{k} = {v:.12}\n"));
            }
            s
        }
    };
    output::emit(out, &text).map_err(param_err)?;
    Ok(0)
}

fn log_grid(u_max: f64, u_min: f64, points: usize, include: &[f64]) -> Result<Vec<f64>, CliError> {
    if !(u_max > u_min && u_min > 0.0 && u_max <= 0.5) {
        return Err(param_err(format!(
            "u grid requires 0 < u_min < u_max <= 0.5, got [{u_min}, {u_max}]"
        )));
    }
    if points < 2 {
        return Err(param_err("u grid needs at least 2 points".into()));
    }
    let l0 = u_max.ln();
    let l1 = u_min.ln();
    let mut grid: Vec<f64> = (0..points)
        .map(|i| (l0 + (l1 - l0) * i as f64 / (points - 1) as f64).exp())
        .collect();
    grid[0] = u_max;
    grid[points - 1] = u_min;
    for &u in include {
        if !(u > 0.0 && u <= 0.5) {
            return Err(param_err(format!("--include-u values must lie in (0, 0.5], got {u}")));
        }
        grid.push(u);
    }
    grid.sort_by(|a, b| b.total_cmp(a));
    grid.dedup();
    Ok(grid)
}

fn cmd_tail_curve(
    model: &ModelArgs,
    u_max: Option<f64>,
    u_min: Option<f64>,
    points: Option<usize>,
    include_u: &[f64],
    format: Option<Format>,
    out: Option<&std::path::Path>,
) -> Result<i32, CliError> {
    let r = resolve(model)?;
    let u_max = u_max.or(r.file.u_max).unwrap_or(1e-2);
    let u_min = u_min.or(r.file.u_min).unwrap_or(1e-12);
    let points = points.or(r.file.points).unwrap_or(11);
    let grid = log_grid(u_max, u_min, points, include_u)?;
    let curve = lambda_l_curve(&grid, &r.params).map_err(from_gh)?;
    let format = format.or(r.file.format).unwrap_or(Format::Csv);
    let text = match format {
        Format::Csv => output::csv_table(&curve),
        Format::Json => output::json_document(
            "tail-curve",
            &r.effective,
            &[
                ("u_max", json!(u_max)),
                ("u_min", json!(u_min)),
                ("points", json!(points)),
            ],
            &curve,
        ),
    };
    output::emit(out.or(r.file.out.as_deref()), &text).map_err(param_err)?;
    Ok(0)
}

#[derive(serde::Serialize)]
struct SampleRow {
    x1: f64,
    x2: f64,
}

fn cmd_sample(
    model: &ModelArgs,
    n: Option<usize>,
    seed: Option<u64>,
    format: Option<Format>,
    out: Option<&std::path::Path>,
) -> Result<i32, CliError> {
    let r = resolve(model)?;
    let n = n.or(r.file.n).ok_or_else(|| param_err("sample requires --n".into()))?;
    let seed = seed.or(r.file.seed).unwrap_or(0);
    let batch = sample_bivariate(&r.params, n, seed).map_err(from_gh)?;
    let rows: Vec<SampleRow> = batch
        .pairs
        .iter()
        .map(|&(x1, x2)| SampleRow { x1, x2 })
        .collect();
    let format = format.or(r.file.format).unwrap_or(Format::Csv);
    let text = match format {
        Format::Csv => output::csv_table(&rows),
        Format::Json => output::json_document(
            "sample",
            &r.effective,
            &[("n", json!(n)), ("seed", json!(seed))],
            &rows,
        ),
    };
    let out = out.or(r.file.out.as_deref());
    output::emit(out, &text).map_err(param_err)?;
    if out.is_some() {
        let mean1 = batch.pairs.iter().map(|p| p.0).sum::<f64>() / n as f64;
        let mean2 = batch.pairs.iter().map(|p| p.1).sum::<f64>() / n as f64;
        println!("n = {n}");
        println!("seed = {seed}");
        println!("mean_x1 = {mean1}");
        println!("mean_x2 = {mean2}");
    }
    Ok(0)
}

fn cmd_fit(
    model: &ModelArgs,
    u_max: Option<f64>,
    u_min: Option<f64>,
    points: Option<usize>,
    format: Option<Format>,
    out: Option<&std::path::Path>,
) -> Result<i32, CliError> {
    let r = resolve(model)?;
    let u_max = u_max.or(r.file.u_max).unwrap_or(1e-4);
    let u_min = u_min.or(r.file.u_min).unwrap_or(1e-16);
    let points = points.or(r.file.points).unwrap_or(13);
    let grid = log_grid(u_max, u_min, points, &[])?;
    let curve = lambda_l_curve(&grid, &r.params).map_err(from_gh)?;
    let fit = tail_order_fit(&curve, r.effective.p).map_err(from_gh)?;
    let consts = compute_constants(&r.params).map_err(from_gh)?;
    let closed_svf = (r.effective.p - 1.0) * (1.0 - consts.tau) - 0.5;
    let format = format.or(r.file.format).unwrap_or(Format::Csv);
    let text = match format {
        Format::Json => output::json_document(
            "fit",
            &r.effective,
            &[
                ("u_max", json!(u_max)),
                ("u_min", json!(u_min)),
                ("points", json!(points)),
            ],
            json!({
                "tau_hat": fit.tau_hat,
                "tau_closed_form": consts.tau,
                "svf_exponent_hat": fit.svf_exponent_hat,
                "svf_exponent_closed_form": closed_svf,
                "residual_max": fit.residual_max,
                "grid": fit.grid,
            }),
        ),
        Format::Csv => format!(
            "tau_hat = {:.12}\ntau_closed_form = {:.12}\nsvf_exponent_hat = {:.12}\nsvf_exponent_closed_form = {:.12}\nresidual_max = {:.3e}\npoints_used = {}\n",
            fit.tau_hat,
            consts.tau,
            fit.svf_exponent_hat,
            closed_svf,
            fit.residual_max,
            fit.grid.len(),
        ),
    };
    output::emit(out.or(r.file.out.as_deref()), &text).map_err(param_err)?;
    Ok(0)
}

struct Checker {
    failures: usize,
}

impl Checker {
    fn check(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            println!("ok   - {name} ({detail})");
        } else {
            println!("FAIL - {name} ({detail})");
            self.failures += 1;
        }
    }

    fn warn_only(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            println!("ok   - {name} ({detail})");
        } else {
            println!("warn - {name} ({detail})");
        }
    }
}

fn cmd_verify(model: &ModelArgs, y: &[f64]) -> Result<i32, CliError> {
    let r = resolve(model)?;
    let params = r.params;
    let ys: Vec<f64> = if y.is_empty() { vec![-2.0, -5.0, -10.0] } else { y.to_vec() };
    let mut c = Checker { failures: 0 };

    // closed-form constants and their structural inequalities
    match compute_constants(&params) {
        Ok(k) => {
            c.check(
                "constants",
                k.tau > 1.0 && k.phi_alpha + params.theta() > 0.0,
                format!("tau = {:.6}, phi(alpha)+theta = {:.6}", k.tau, k.phi_alpha + params.theta()),
            );
        }
        Err(e) => c.check("constants", false, e.to_string()),
    }

    // Bessel recurrence at model-scale arguments
    {
        let x = (params.gig().b() * (1.0 + params.gig().a())).max(0.5);
        let p = params.gig().p();
        let km = log_bessel_k(p - 1.0, x).map_err(from_gh)?.exp();
        let k0 = log_bessel_k(p, x).map_err(from_gh)?.exp();
        let kp = log_bessel_k(p + 1.0, x).map_err(from_gh)?.exp();
        let gap = (kp - (km + 2.0 * p / x * k0)).abs() / kp;
        c.check("bessel_recurrence", gap < 1e-10, format!("relative gap {gap:.2e}"));
    }

    // GIG density normalization
    {
        let spec = QuadratureSpec::default();
        let mean = params.mean_w();
        let norm = integrate_log_with_splits(
            |w| gig_log_pdf(w, params.gig()).unwrap_or(f64::NAN),
            Interval::UpperTail(0.0),
            &[mean / 4.0, mean, 4.0 * mean],
            &spec,
        );
        match norm {
            Ok(q) => c.check(
                "gig_density_normalizes",
                q.log_value.abs() < 1e-8,
                format!("log integral {:.2e}", q.log_value),
            ),
            Err(e) => c.check("gig_density_normalizes", false, e.to_string()),
        }
    }

    // marginal CDF reaches 1
    {
        let hi = 30.0 + 20.0 * params.theta().abs().max(1.0) * params.mean_w().max(1.0);
        match marginal_log_cdf(hi, &params) {
            Ok(l) => c.check(
                "marginal_total_mass",
                l.abs() < 1e-8,
                format!("log F({hi:.0}) = {l:.2e}"),
            ),
            Err(e) => c.check("marginal_total_mass", false, e.to_string()),
        }
    }

    // reduction identity: mixture route vs max-density route
    for &yv in &ys {
        let spec = QuadratureSpec::default();
        let mixture = joint_log_cdf_diagonal(yv, &params);
        let density = integrate_log_with_splits(
            |x| xstar_log_pdf(x, &params).unwrap_or(f64::NAN),
            Interval::LowerTail(yv),
            &[0.0, yv - 1.0, yv - 4.0, yv - 16.0],
            &spec,
        );
        match (mixture, density) {
            (Ok(m), Ok(d)) => {
                let gap = (m - d.log_value).abs();
                c.check(
                    &format!("reduction_identity_y_{yv}"),
                    gap < 1e-7,
                    format!("log gap {gap:.2e}"),
                );
            }
            (m, d) => c.check(
                &format!("reduction_identity_y_{yv}"),
                false,
                format!("mixture: {m:?}, density: {d:?}"),
            ),
        }
    }

    // skew normal CDF complement identity at the model's alpha
    {
        let alpha = params.alpha();
        let worst = [-4.0, -1.5, 0.0, 0.8, 3.2]
            .iter()
            .map(|&t| (skew_normal_cdf(t, alpha) + skew_normal_cdf(-t, -alpha) - 1.0).abs())
            .fold(0.0, f64::max);
        c.check("skew_normal_complement", worst < 1e-14, format!("worst gap {worst:.2e}"));
    }

    // orthant identity (theta = 0 only)
    if params.theta() == 0.0 {
        match joint_log_cdf_diagonal(0.0, &params) {
            Ok(l) => {
                let want = 0.25 + params.rho().asin() / (2.0 * std::f64::consts::PI);
                c.check(
                    "orthant_identity",
                    (l.exp() - want).abs() < 1e-9,
                    format!("{} vs {want}", l.exp()),
                );
            }
            Err(e) => c.check("orthant_identity", false, e.to_string()),
        }
    }

    // joint diagonal monotone in y
    {
        let mut ok = true;
        let mut last = f64::NEG_INFINITY;
        for &yv in &[-20.0, -10.0, -5.0, -2.0, 0.0, 2.0] {
            match joint_log_cdf_diagonal(yv, &params) {
                Ok(l) => {
                    ok &= l > last;
                    last = l;
                }
                Err(_) => ok = false,
            }
        }
        c.check("joint_cdf_monotone", ok, "grid -20..2".into());
    }

    // diagnostic only: copula diagonal nondecreasing in rho at u = 0.01
    {
        let mut vals = Vec::new();
        let mut ok = true;
        for &rho in &[-0.5, 0.0, 0.5] {
            let alt = GIGParams::new(params.gig().p(), params.gig().a(), params.gig().b())
                .and_then(|g| EquiSkewGHParams::new(g, params.theta(), rho))
                .and_then(|pp| ghtail::dependence::copula_diag_exact(0.01, &pp));
            match alt {
                Ok(v) => vals.push(v),
                Err(_) => ok = false,
            }
        }
        ok &= vals.windows(2).all(|w| w[1] >= w[0]);
        c.warn_only(
            "copula_monotone_in_rho",
            ok,
            format!("log C at rho -0.5,0,0.5: {vals:?}"),
        );
    }

    if c.failures == 0 {
        println!("verify: all checks passed");
        Ok(0)
    } else {
        println!("verify: {} check(s) failed", c.failures);
        Ok(1)
    }
}
