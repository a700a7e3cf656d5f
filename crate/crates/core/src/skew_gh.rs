//! The bivariate equi-skew GH model `X = theta W (1,1) + sqrt(W) Z` with
//! `W ~ GIG(p,a,b)` (b > 0) and `Z ~ N(0, R)`, `R` a correlation matrix with
//! off-diagonal `rho`.
//!
//! Everything here is exact (quadrature / Monte Carlo), no asymptotics:
//! the marginal density, CDF and quantile; the diagonal joint CDF
//! `P(X1 <= y, X2 <= y)` through two independent routes (the skew-normal
//! mixture and the max-variable density), usable at probabilities far below
//! `f64` underflow; and seeded sampling.
//!
//! The diagonal reduction: `max(Z1, Z2)` is skew normal with shape
//! `alpha = sqrt((1-rho)/(1+rho))`, so
//! `P(X1<=y, X2<=y) = E_W[ F_SN((y - theta W)/sqrt(W); alpha) ]`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gig::{self, gig_log_pdf_raw, GIGParams};
use crate::numerics::{
    find_root, integrate, integrate_log_with_splits, logdiffexp, Interval, QuadratureSpec,
    RootSpec,
};
use crate::special::{log_bessel_k_raw, owen_t_raw, std_normal_cdf, std_normal_log_cdf};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_74;

/// Shape of `max(Z1, Z2)`: `alpha = sqrt((1-rho)/(1+rho))`.
pub fn alpha_from_rho(rho: f64) -> Result<f64> {
    if !rho.is_finite() || rho.abs() >= 1.0 {
        return Err(Error::Domain(format!(
            "alpha_from_rho requires -1 < rho < 1, got {rho}"
        )));
    }
    Ok(((1.0 - rho) / (1.0 + rho)).sqrt())
}

/// Validated model parameters. `b > 0` and `|rho| < 1 - 1e-6` are enforced
/// at construction; `alpha` and the mixing mean are cached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquiSkewGHParams {
    gig: GIGParams,
    theta: f64,
    rho: f64,
    #[serde(skip)]
    alpha: f64,
    #[serde(skip)]
    mean_w: f64,
}

impl EquiSkewGHParams {
    pub fn new(gig: GIGParams, theta: f64, rho: f64) -> Result<Self> {
        if !(gig.b() > 0.0) {
            return Err(Error::InvalidParams(
                "the equi-skew GH model requires the GIG rate parameter b > 0".into(),
            ));
        }
        if !theta.is_finite() {
            return Err(Error::InvalidParams(format!("theta must be finite, got {theta}")));
        }
        if !rho.is_finite() || rho <= -1.0 + 1e-6 || rho >= 1.0 - 1e-6 {
            return Err(Error::InvalidParams(format!(
                "rho must satisfy -1 + 1e-6 < rho < 1 - 1e-6, got {rho}"
            )));
        }
        let alpha = alpha_from_rho(rho)?;
        let mean_w = gig::gig_mean(&gig)?;
        Ok(EquiSkewGHParams {
            gig,
            theta,
            rho,
            alpha,
            mean_w,
        })
    }

    pub fn gig(&self) -> &GIGParams {
        &self.gig
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn mean_w(&self) -> f64 {
        self.mean_w
    }
}

// --- skew normal CDF ---------------------------------------------------------

/// `F_SN(t; alpha) = Phi(t) - 2 T(t, alpha)`.
pub fn skew_normal_cdf(t: f64, alpha: f64) -> f64 {
    std_normal_cdf(t) - 2.0 * owen_t_raw(t, alpha)
}

const SHEPPARD_SPEC: QuadratureSpec = QuadratureSpec {
    relative_tolerance: 1e-12,
    absolute_log_tolerance: 1e-12,
    max_subdivisions: 800,
};

/// Diagonal orthant form of the skew-normal CDF for t < 0, alpha > 0:
/// `F_SN(t; alpha) = P(Z1 <= t, Z2 <= t)` at correlation
/// `rho = (1-alpha^2)/(1+alpha^2)`, and by central symmetry that equals
/// `(1/2pi) int_{arccos rho}^{pi} exp(-t^2 / (1 + cos s)) ds`.
fn sheppard_log(t: f64, alpha: f64) -> f64 {
    debug_assert!(t < 0.0 && alpha > 0.0);
    let rho = (1.0 - alpha * alpha) / (1.0 + alpha * alpha);
    let t2 = t * t;
    let lo = rho.clamp(-1.0, 1.0).acos();
    let sin_lo = (1.0 - rho * rho).sqrt();
    // width of the Laplace boundary layer at the lower endpoint
    let layer = (1.0 + rho) * (1.0 + rho) / (t2 * sin_lo);
    let laplace = -t2 / (1.0 + rho) + layer.ln() - (2.0 * std::f64::consts::PI).ln();
    if layer < 1e-8 {
        // endpoint evaluation: relative error O(layer), far below anything
        // the quadrature could resolve at such arguments
        return laplace;
    }
    let q = integrate_log_with_splits(
        |s| {
            let c = 2.0 * (0.5 * s).cos().powi(2); // 1 + cos(s)
            if c > 0.0 {
                -t2 / c
            } else {
                f64::NEG_INFINITY
            }
        },
        Interval::Finite(lo, std::f64::consts::PI),
        &[lo + layer, lo + 8.0 * layer],
        &SHEPPARD_SPEC,
    );
    match q {
        Ok(q) => q.log_value - (2.0 * std::f64::consts::PI).ln(),
        Err(_) => laplace,
    }
}

/// `ln F_SN(t; alpha)`, finite and relatively accurate for arbitrarily
/// negative `t` (where the plain `Phi - 2T` form loses all precision to
/// cancellation).
pub fn skew_normal_log_cdf(t: f64, alpha: f64) -> f64 {
    if alpha == 0.0 {
        return std_normal_log_cdf(t);
    }
    if t >= 0.0 {
        return skew_normal_cdf(t, alpha).ln();
    }
    if alpha > 0.0 {
        if t <= -8.0 || (alpha * t) * (alpha * t) > 16.0 {
            sheppard_log(t, alpha)
        } else {
            skew_normal_cdf(t, alpha).ln()
        }
    } else {
        // F_SN(t; -a) = 2 Phi(t) - F_SN(t; a)
        let cancel = (alpha * t) * (alpha * t) > 16.0 || t <= -8.0;
        if !cancel {
            skew_normal_cdf(t, alpha).ln()
        } else {
            let two_phi = std::f64::consts::LN_2 + std_normal_log_cdf(t);
            logdiffexp(two_phi, skew_normal_log_cdf(t, -alpha))
        }
    }
}

// --- univariate GH machinery ---------------------------------------------------

/// Log density of the univariate GH law with parameters `(p, a, b, theta)`
/// (zero location, unit scale):
/// `theta x - ln sqrt(2pi) - ln Kbar_p(a,b) + ln Kbar_{p-1/2}(sqrt(a^2+x^2), sqrt(theta^2+b^2))`.
///
/// At `x = 0` with `a = 0` the inner Kbar argument sits on its boundary: the
/// value is finite for `p > 1/2` and `+inf` (an integrable singularity) for
/// `p <= 1/2`.
fn gh_log_pdf_parts(x: f64, p: f64, a: f64, b: f64, theta: f64, log_norm: f64) -> f64 {
    let a1 = (a * a + x * x).sqrt();
    let b1 = (theta * theta + b * b).sqrt();
    let q = p - 0.5;
    let lk = if a1 == 0.0 {
        if q > 0.0 {
            -2.0 * q * b1.ln() + crate::special::log_gamma_raw(q) + (q - 1.0) * std::f64::consts::LN_2
        } else {
            return f64::INFINITY;
        }
    } else {
        q * (a1.ln() - b1.ln()) + log_bessel_k_raw(q, a1 * b1)
    };
    theta * x - LN_SQRT_2PI - log_norm + lk
}

struct GhLaw {
    p: f64,
    a: f64,
    b: f64,
    theta: f64,
    log_norm: f64, // ln Kbar_p(a, b)
    mean: f64,     // theta E[W]
    scale: f64,    // sqrt(theta^2 Var W + E[W])
}

impl GhLaw {
    fn new(p: f64, a: f64, b: f64, theta: f64) -> Result<Self> {
        let log_norm = gig::log_kbar(p, a, b)?;
        let m1 = (gig::log_kbar(p + 1.0, a, b)? - log_norm).exp();
        let m2 = (gig::log_kbar(p + 2.0, a, b)? - log_norm).exp();
        let var_w = (m2 - m1 * m1).max(0.0);
        Ok(GhLaw {
            p,
            a,
            b,
            theta,
            log_norm,
            mean: theta * m1,
            scale: (theta * theta * var_w + m1).sqrt(),
        })
    }

    fn log_pdf(&self, x: f64) -> f64 {
        gh_log_pdf_parts(x, self.p, self.a, self.b, self.theta, self.log_norm)
    }

    /// ln P(X <= t) by log-domain quadrature; the right tail is done by
    /// complement so the integrand always peaks at (or near) the finite
    /// endpoint of the mapped interval.
    fn log_cdf(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        let mut splits = vec![
            t - self.scale,
            t - 4.0 * self.scale,
            t + self.scale,
            t + 4.0 * self.scale,
            self.mean - self.scale,
            self.mean + self.scale,
        ];
        if self.a == 0.0 {
            splits.push(0.0);
        }
        if t <= self.mean {
            Ok(integrate_log_with_splits(
                |x| self.log_pdf(x),
                Interval::LowerTail(t),
                &splits,
                spec,
            )?
            .log_value)
        } else {
            let upper = integrate_log_with_splits(
                |x| self.log_pdf(x),
                Interval::UpperTail(t),
                &splits,
                spec,
            )?
            .log_value;
            Ok((-(upper.exp())).ln_1p())
        }
    }
}

fn marginal_law(params: &EquiSkewGHParams) -> GhLaw {
    GhLaw {
        p: params.gig.p(),
        a: params.gig.a(),
        b: params.gig.b(),
        theta: params.theta,
        log_norm: params.gig.log_norm(),
        mean: params.theta * params.mean_w,
        scale: {
            // spread scale used only for split hints and bracket seeds
            let m1 = params.mean_w;
            let m2 = (gig::log_kbar(params.gig.p() + 2.0, params.gig.a(), params.gig.b())
                .expect("b > 0")
                - params.gig.log_norm())
            .exp();
            (params.theta * params.theta * (m2 - m1 * m1).max(0.0) + m1).sqrt()
        },
    }
}

// --- marginal operations --------------------------------------------------------

/// Log marginal density of `X1` (equivalently `X2`).
///
/// For `a = 0`, `p <= 1/2` the value at exactly `x = 0` is `+inf`: the VG
/// density has an integrable logarithmic spike there.
pub fn marginal_log_pdf(x: f64, params: &EquiSkewGHParams) -> f64 {
    gh_log_pdf_parts(
        x,
        params.gig.p(),
        params.gig.a(),
        params.gig.b(),
        params.theta,
        params.gig.log_norm(),
    )
}

/// `ln F1(x) = ln P(X1 <= x)`, accurate for x as deep as -200 and beyond.
pub fn marginal_log_cdf(x: f64, params: &EquiSkewGHParams) -> Result<f64> {
    marginal_log_cdf_with(x, params, &QuadratureSpec::default())
}

/// [`marginal_log_cdf`] under a caller-chosen quadrature budget.
pub fn marginal_log_cdf_with(
    x: f64,
    params: &EquiSkewGHParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("marginal_log_cdf requires finite x, got {x}")));
    }
    marginal_law(params).log_cdf(x, spec)
}

/// `F1(x)`; underflows to zero around x ~ -700/delta, use the log form there.
pub fn marginal_cdf(x: f64, params: &EquiSkewGHParams) -> Result<f64> {
    Ok(marginal_log_cdf(x, params)?.exp())
}

/// Exact quantile `F1^{-1}(u)` by bracketed root finding on the log CDF.
/// For u < 0.01 the bracket is centred on the tail expansion; otherwise on a
/// mean +/- spread box. The bracket grows geometrically until it straddles.
pub fn marginal_quantile(u: f64, params: &EquiSkewGHParams) -> Result<f64> {
    marginal_quantile_with(u, params, &QuadratureSpec::default())
}

/// [`marginal_quantile`] under a caller-chosen quadrature budget for the
/// CDF evaluations inside the root finder.
pub fn marginal_quantile_with(
    u: f64,
    params: &EquiSkewGHParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !(u > 0.0 && u < 1.0) {
        return Err(Error::Domain(format!(
            "marginal_quantile requires 0 < u < 1, got {u}"
        )));
    }
    let law = marginal_law(params);
    let ln_u = u.ln();
    let g = |x: f64| law.log_cdf(x, spec).map(|l| l - ln_u);

    let center = if u < 0.01 {
        let consts = crate::asymptotics::compute_constants(params)?;
        crate::asymptotics::quantile_asymptotic(u, &consts, params)?
    } else {
        0.0
    };
    let half0 = if u < 0.01 {
        0.5
    } else {
        1.0 + params.theta.abs() * params.mean_w + 5.0 * params.mean_w.sqrt()
    };

    let mut lo = center - half0;
    let mut hi = center + half0;
    let mut g_lo = g(lo)?;
    let mut g_hi = g(hi)?;
    let mut width = half0;
    for _ in 0..200 {
        if g_lo <= 0.0 && g_hi >= 0.0 {
            break;
        }
        width *= 2.0;
        if g_lo > 0.0 {
            lo -= width;
            g_lo = g(lo)?;
        }
        if g_hi < 0.0 {
            hi += width;
            g_hi = g(hi)?;
        }
    }
    if !(g_lo <= 0.0 && g_hi >= 0.0) {
        return Err(Error::InvalidBracket(format!(
            "quantile bracket did not straddle u={u} after 200 expansions"
        )));
    }
    find_root(
        |x| law.log_cdf(x, spec).map_or(f64::NAN, |l| l - ln_u),
        (lo, hi),
        &RootSpec::default(),
    )
}

// --- the max-variable density (Arslan form) ---------------------------------------

const INNER_CDF_SPEC: QuadratureSpec = QuadratureSpec {
    relative_tolerance: 1e-11,
    absolute_log_tolerance: 1e-11,
    max_subdivisions: 2000,
};

/// Log density of `X* = theta W + sqrt(W) max(Z1, Z2)` at `x`:
///
/// ```text
/// f(x) = 2 e^{theta x} / (sqrt(2pi) Kbar_p(a,b))
///        * Kbar_{p-1/2}(sqrt(a^2+x^2), sqrt(theta^2+b^2)) * P(Y <= alpha x)
/// ```
///
/// with `Y` univariate GH with index `p - 1/2`, shifted Bessel arguments and
/// skewness `alpha theta`. `P(Y <= alpha x)` is evaluated by direct
/// quadrature of the GH density of `Y`, independently of any asymptotic
/// development, so this route can cross-check the mixture route of
/// [`joint_log_cdf_diagonal`].
pub fn xstar_log_pdf(x: f64, params: &EquiSkewGHParams) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("xstar_log_pdf requires finite x, got {x}")));
    }
    let (p, a, b) = (params.gig.p(), params.gig.a(), params.gig.b());
    let theta = params.theta;
    let base = gh_log_pdf_parts(x, p, a, b, theta, params.gig.log_norm());
    if base == f64::INFINITY {
        return Ok(f64::INFINITY);
    }
    let a1 = (a * a + x * x).sqrt();
    let b1 = (theta * theta + b * b).sqrt();
    let y_law = GhLaw::new(p - 0.5, a1, b1, params.alpha * theta)?;
    let log_prob = y_law.log_cdf(params.alpha * x, &INNER_CDF_SPEC)?;
    Ok(std::f64::consts::LN_2 + base + log_prob)
}

// --- joint CDF ---------------------------------------------------------------------

fn joint_diag_splits(y: f64, params: &EquiSkewGHParams) -> Vec<f64> {
    let ew = params.mean_w;
    let mut splits = vec![ew / 4.0, ew, 4.0 * ew];
    if y < -2.0 {
        let beta = (params.theta * params.theta * (1.0 + params.alpha * params.alpha)
            + params.gig.b() * params.gig.b())
        .sqrt();
        // saddle of the w-integrand in the deep tail
        let ws = y.abs() * (1.0 + params.alpha * params.alpha).sqrt() / beta;
        splits.extend_from_slice(&[ws / 8.0, ws / 2.0, ws, 2.0 * ws, 8.0 * ws]);
    }
    splits
}

/// `ln P(X1 <= y, X2 <= y)` via the skew-normal mixture: the probability is
/// `int_0^inf F_SN((y - theta w)/sqrt(w); alpha) f_W(w) dw`, accumulated in
/// the log domain (valid to y ~ -200 and beyond).
pub fn joint_log_cdf_diagonal(y: f64, params: &EquiSkewGHParams) -> Result<f64> {
    joint_log_cdf_diagonal_with(y, params, &QuadratureSpec::default())
}

/// [`joint_log_cdf_diagonal`] under a caller-chosen quadrature budget.
pub fn joint_log_cdf_diagonal_with(
    y: f64,
    params: &EquiSkewGHParams,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if !y.is_finite() {
        return Err(Error::Domain(format!(
            "joint_log_cdf_diagonal requires finite y, got {y}"
        )));
    }
    let alpha = params.alpha;
    let theta = params.theta;
    let q = integrate_log_with_splits(
        |w| {
            let t = (y - theta * w) / w.sqrt();
            skew_normal_log_cdf(t, alpha) + gig_log_pdf_raw(w, &params.gig)
        },
        Interval::UpperTail(0.0),
        &joint_diag_splits(y, params),
        spec,
    )?;
    Ok(q.log_value)
}

/// Bivariate standard normal CDF `P(Z1 <= h, Z2 <= k)` at correlation `rho`,
/// via the single-integral reduction
/// `Phi(h)Phi(k) + (1/2pi) int_0^rho exp(-(h^2 - 2 t h k + k^2)/(2(1-t^2)))/sqrt(1-t^2) dt`.
fn bivariate_normal_cdf(h: f64, k: f64, rho: f64) -> Result<f64> {
    let base = std_normal_cdf(h) * std_normal_cdf(k);
    if rho == 0.0 {
        return Ok(base);
    }
    let spec = QuadratureSpec {
        relative_tolerance: 1e-12,
        absolute_log_tolerance: 1e-12,
        max_subdivisions: 400,
    };
    let sign = rho.signum();
    let corr = integrate(
        |s| {
            let t = sign * s;
            let om = 1.0 - t * t;
            (-(h * h - 2.0 * t * h * k + k * k) / (2.0 * om)).exp() / om.sqrt()
        },
        Interval::Finite(0.0, rho.abs()),
        &spec,
    )?
    .value
        * sign
        / (2.0 * std::f64::consts::PI);
    Ok(base + corr)
}

/// Off-diagonal joint CDF `ln P(X1 <= y1, X2 <= y2)` by the same mixture with
/// the bivariate-normal rectangle probability. Intended for moderate
/// arguments (the rectangle factor is evaluated in plain arithmetic).
pub fn joint_log_cdf(y1: f64, y2: f64, params: &EquiSkewGHParams) -> Result<f64> {
    if !y1.is_finite() || !y2.is_finite() {
        return Err(Error::Domain(format!(
            "joint_log_cdf requires finite arguments, got ({y1}, {y2})"
        )));
    }
    let theta = params.theta;
    let rho = params.rho;
    let q = integrate_log_with_splits(
        |w| {
            let rw = w.sqrt();
            let h = (y1 - theta * w) / rw;
            let k = (y2 - theta * w) / rw;
            let rect = match bivariate_normal_cdf(h, k, rho) {
                Ok(v) if v > 0.0 => v.ln(),
                Ok(_) => f64::NEG_INFINITY,
                Err(_) => f64::NAN,
            };
            rect + gig_log_pdf_raw(w, &params.gig)
        },
        Interval::UpperTail(0.0),
        &joint_diag_splits(y1.min(y2), params),
        &QuadratureSpec::default(),
    )?;
    Ok(q.log_value)
}

// --- sampling -------------------------------------------------------------------------

/// Seeded draws of `(X1, X2)` pairs with their generation metadata.
#[derive(Debug, Clone, Serialize)]
pub struct SampleBatch {
    pub pairs: Vec<(f64, f64)>,
    pub seed: u64,
    pub params: EquiSkewGHParams,
}

impl SampleBatch {
    pub fn n(&self) -> usize {
        self.pairs.len()
    }
}

/// Draw `n` pairs: `W ~ GIG`, `Z` bivariate normal with correlation `rho`
/// (Cholesky), `X = theta W (1,1) + sqrt(W) Z`. Deterministic per seed.
pub fn sample_bivariate(params: &EquiSkewGHParams, n: usize, seed: u64) -> Result<SampleBatch> {
    if n == 0 {
        return Err(Error::InvalidParams("sample_bivariate requires n >= 1".into()));
    }
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let method = gig::sampler_method(&params.gig);
    let cross = (1.0 - params.rho * params.rho).sqrt();
    let mut pairs = Vec::with_capacity(n);
    for _ in 0..n {
        let w = gig::gig_draw(&params.gig, &method, &mut rng)?;
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let zb = params.rho * z1 + cross * z2;
        let rw = w.sqrt();
        pairs.push((
            params.theta * w + rw * z1,
            params.theta * w + rw * zb,
        ));
    }
    Ok(SampleBatch {
        pairs,
        seed,
        params: *params,
    })
}
