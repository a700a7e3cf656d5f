//! The generalised inverse Gaussian mixing law `GIG(p, a, b)` with density
//!
//! ```text
//! f(w) = w^{p-1} exp(-(a^2/w + b^2 w)/2) / (2 Kbar_p(a, b)),   w > 0
//! ```
//!
//! where the normalizer `Kbar` has three parameter regimes: `(a>0, b>0)` for
//! any `p` via the Bessel K function, the gamma regime `(a=0, p>0)` and the
//! inverse-gamma regime `(b=0, p<0)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::special::{log_bessel_k_raw, log_gamma_raw};

/// One log-domain evaluation of the three-branch normalizer.
pub fn log_kbar(p: f64, a: f64, b: f64) -> Result<f64> {
    if !p.is_finite() || !a.is_finite() || !b.is_finite() || a < 0.0 || b < 0.0 {
        return Err(Error::Domain(format!(
            "kbar requires finite p and a, b >= 0, got p={p}, a={a}, b={b}"
        )));
    }
    if a > 0.0 && b > 0.0 {
        Ok(p * (a.ln() - b.ln()) + log_bessel_k_raw(p, a * b))
    } else if a == 0.0 && b > 0.0 && p > 0.0 {
        Ok(-2.0 * p * b.ln() + log_gamma_raw(p) + (p - 1.0) * std::f64::consts::LN_2)
    } else if b == 0.0 && a > 0.0 && p < 0.0 {
        Ok(2.0 * p * a.ln() + log_gamma_raw(-p) + (-p - 1.0) * std::f64::consts::LN_2)
    } else {
        Err(Error::Domain(format!(
            "no Kbar regime applies to p={p}, a={a}, b={b}"
        )))
    }
}

/// `Kbar_p(a, b)` itself; prefer [`log_kbar`] anywhere overflow is possible.
pub fn kbar(p: f64, a: f64, b: f64) -> Result<f64> {
    Ok(log_kbar(p, a, b)?.exp())
}

/// Validated GIG parameter triple.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GIGParams {
    p: f64,
    a: f64,
    b: f64,
    #[serde(skip)]
    log_norm: f64, // log Kbar_p(a, b), cached at construction
}

impl GIGParams {
    pub fn new(p: f64, a: f64, b: f64) -> Result<Self> {
        let log_norm = log_kbar(p, a, b)?;
        Ok(GIGParams { p, a, b, log_norm })
    }

    /// The variance gamma mixing law with shape `nu`: `GIG(1/2, 0, sqrt(2/nu))`.
    pub fn vg(nu: f64) -> Result<Self> {
        if !nu.is_finite() || nu <= 0.0 {
            return Err(Error::InvalidParams(format!(
                "vg mixing law requires nu > 0, got {nu}"
            )));
        }
        GIGParams::new(0.5, 0.0, (2.0 / nu).sqrt())
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub(crate) fn log_norm(&self) -> f64 {
        self.log_norm
    }
}

/// Log density of `GIG(p, a, b)` at `w > 0`.
pub fn gig_log_pdf(w: f64, params: &GIGParams) -> Result<f64> {
    if !w.is_finite() || w <= 0.0 {
        return Err(Error::Domain(format!("gig_log_pdf requires w > 0, got {w}")));
    }
    Ok(gig_log_pdf_raw(w, params))
}

pub(crate) fn gig_log_pdf_raw(w: f64, params: &GIGParams) -> f64 {
    debug_assert!(w > 0.0);
    (params.p - 1.0) * w.ln()
        - 0.5 * (params.a * params.a / w + params.b * params.b * w)
        - std::f64::consts::LN_2
        - params.log_norm
}

/// `E[W] = Kbar_{p+1}(a,b) / Kbar_p(a,b)`.
pub fn gig_mean(params: &GIGParams) -> Result<f64> {
    let up = log_kbar(params.p + 1.0, params.a, params.b).map_err(|_| {
        Error::Domain(format!(
            "gig_mean undefined: order p+1={} leaves the Kbar regime (a={}, b={})",
            params.p + 1.0,
            params.a,
            params.b
        ))
    })?;
    Ok((up - params.log_norm).exp())
}

pub(crate) enum SampleMethod {
    /// a = 0: W ~ Gamma(p, scale 2/b^2)
    GammaVariate(Gamma<f64>),
    /// b = 0: 1/W ~ Gamma(-p, scale 2/a^2)
    InverseGamma(Gamma<f64>),
    /// a, b > 0: ratio-of-uniforms rejection with the density normalized at
    /// its mode
    RatioOfUniforms { log_h_mode: f64, v_max: f64 },
}

fn log_h(w: f64, p: f64, a: f64, b: f64) -> f64 {
    (p - 1.0) * w.ln() - 0.5 * (a * a / w + b * b * w)
}

fn method_for(params: &GIGParams) -> SampleMethod {
    let (p, a, b) = (params.p, params.a, params.b);
    if a == 0.0 {
        SampleMethod::GammaVariate(Gamma::new(p, 2.0 / (b * b)).expect("validated"))
    } else if b == 0.0 {
        SampleMethod::InverseGamma(Gamma::new(-p, 2.0 / (a * a)).expect("validated"))
    } else {
        // mode of w^{p-1} e^{-(a^2/w + b^2 w)/2} and of w^2 * that; both are
        // roots of simple quadratics
        let mode = ((p - 1.0) + ((p - 1.0).powi(2) + a * a * b * b).sqrt()) / (b * b);
        let mode2 = ((p + 1.0) + ((p + 1.0).powi(2) + a * a * b * b).sqrt()) / (b * b);
        let log_h_mode = log_h(mode, p, a, b);
        let v_max = mode2 * (0.5 * (log_h(mode2, p, a, b) - log_h_mode)).exp();
        SampleMethod::RatioOfUniforms { log_h_mode, v_max }
    }
}

const ROU_ATTEMPT_CAP: u64 = 100_000;

pub(crate) fn gig_draw<R: Rng>(params: &GIGParams, method: &SampleMethod, rng: &mut R) -> Result<f64> {
    match method {
        SampleMethod::GammaVariate(g) => Ok(g.sample(rng)),
        SampleMethod::InverseGamma(g) => Ok(1.0 / g.sample(rng)),
        SampleMethod::RatioOfUniforms { log_h_mode, v_max } => {
            for _ in 0..ROU_ATTEMPT_CAP {
                let u: f64 = rng.gen::<f64>();
                if u == 0.0 {
                    continue;
                }
                let v: f64 = rng.gen::<f64>() * v_max;
                let w = v / u;
                if w > 0.0 && 2.0 * u.ln() <= log_h(w, params.p, params.a, params.b) - log_h_mode {
                    return Ok(w);
                }
            }
            Err(Error::NonConvergence(format!(
                "GIG rejection sampler acceptance below {:.0e} at p={}, a={}, b={}",
                1.0 / ROU_ATTEMPT_CAP as f64,
                params.p,
                params.a,
                params.b
            )))
        }
    }
}

/// Seeded GIG sampler. One instance owns one RNG stream; clone parameters
/// into distinct instances (distinct seeds) to sample in parallel.
pub struct GigSampler {
    params: GIGParams,
    method: SampleMethod,
    rng: ChaCha12Rng,
}

impl GigSampler {
    pub fn new(params: GIGParams, seed: u64) -> Self {
        GigSampler {
            method: method_for(&params),
            params,
            rng: ChaCha12Rng::seed_from_u64(seed),
        }
    }

    pub fn sample(&mut self) -> Result<f64> {
        gig_draw(&self.params, &self.method, &mut self.rng)
    }

    pub fn sample_n(&mut self, n: usize) -> Result<Vec<f64>> {
        (0..n).map(|_| self.sample()).collect()
    }
}

pub(crate) fn sampler_method(params: &GIGParams) -> SampleMethod {
    method_for(params)
}

/// `n` i.i.d. GIG draws, deterministic in `(params, n, seed)`.
pub fn gig_sample(params: &GIGParams, n: usize, seed: u64) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::InvalidParams("gig_sample requires n >= 1".into()));
    }
    GigSampler::new(*params, seed).sample_n(n)
}
