//! Effective run configuration: command-line flags override an optional
//! TOML config file, and the merged result is echoed into JSON metadata so
//! reported runs are reproducible from their own output.

use serde::{Deserialize, Serialize};

use ghtail::gig::GIGParams;
use ghtail::skew_gh::EquiSkewGHParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Vg,
    Gh,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Model parameters as they appear on the command line / in a config file.
#[derive(Debug, Clone, clap::Args)]
pub struct ModelArgs {
    /// Model family: `vg` (nu) or `gh` (p, a, b)
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// VG shape parameter (model = vg)
    #[arg(long)]
    pub nu: Option<f64>,
    /// GIG index (model = gh)
    #[arg(long)]
    pub p: Option<f64>,
    /// GIG parameter a >= 0 (model = gh)
    #[arg(long)]
    pub a: Option<f64>,
    /// GIG parameter b > 0 (model = gh)
    #[arg(long)]
    pub b: Option<f64>,
    /// Common skewness theta
    #[arg(long)]
    pub theta: Option<f64>,
    /// Correlation rho in (-1, 1)
    #[arg(long)]
    pub rho: Option<f64>,
    /// Optional TOML config file; explicit flags take precedence
    #[arg(long)]
    pub config: Option<std::path::PathBuf>,
}

/// The same fields as an optional config file.
#[derive(Debug, Clone, Default, Deserialize)]
pub struct FileConfig {
    pub model: Option<Model>,
    pub nu: Option<f64>,
    pub p: Option<f64>,
    pub a: Option<f64>,
    pub b: Option<f64>,
    pub theta: Option<f64>,
    pub rho: Option<f64>,
    pub u_max: Option<f64>,
    pub u_min: Option<f64>,
    pub points: Option<usize>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<std::path::PathBuf>,
}

/// Fully resolved model configuration, echoed into output metadata.
#[derive(Debug, Clone, Serialize)]
pub struct EffectiveModel {
    pub model: Model,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    pub p: f64,
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    pub rho: f64,
}

pub struct Resolved {
    pub effective: EffectiveModel,
    pub params: EquiSkewGHParams,
    pub file: FileConfig,
}

pub fn load_file(path: Option<&std::path::Path>) -> Result<FileConfig, String> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read config file {}: {e}", p.display()))?;
            toml::from_str(&text).map_err(|e| format!("invalid config file: {e}"))
        }
    }
}

/// Merge flags over the file config and validate into model parameters.
pub fn resolve(args: &ModelArgs) -> Result<Resolved, String> {
    let file = load_file(args.config.as_deref())?;
    let model = args
        .model
        .or(file.model)
        .ok_or("missing --model (vg or gh)")?;
    let theta = args.theta.or(file.theta).unwrap_or(0.0);
    let rho = args.rho.or(file.rho).unwrap_or(0.0);
    let (gig, nu, p, a, b) = match model {
        Model::Vg => {
            let nu = args.nu.or(file.nu).ok_or("model vg requires --nu")?;
            let gig = GIGParams::vg(nu).map_err(|e| e.to_string())?;
            (gig, Some(nu), gig.p(), gig.a(), gig.b())
        }
        Model::Gh => {
            let p = args.p.or(file.p).ok_or("model gh requires --p")?;
            let a = args.a.or(file.a).unwrap_or(0.0);
            let b = args.b.or(file.b).ok_or("model gh requires --b")?;
            let gig = GIGParams::new(p, a, b).map_err(|e| e.to_string())?;
            (gig, None, p, a, b)
        }
    };
    let params = EquiSkewGHParams::new(gig, theta, rho).map_err(|e| e.to_string())?;
    Ok(Resolved {
        effective: EffectiveModel {
            model,
            nu,
            p,
            a,
            b,
            theta,
            rho,
        },
        params,
        file,
    })
}
