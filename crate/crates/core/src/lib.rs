//! Numerics for the bivariate equi-skew generalized hyperbolic (GH) family,
//! with the variance gamma (VG) law as a named special case.
//!
//! The model is the variance-mean mixture `X = theta * W * (1,1) + sqrt(W) * Z`
//! where `W ~ GIG(p, a, b)` and `Z` is bivariate standard normal with
//! correlation `rho`. Everything tail-related is computed twice, by
//! independent routes:
//!
//! * exact log-domain quadrature (marginal CDF/quantile, joint diagonal CDF,
//!   copula diagonal), usable down to probabilities far below `f64`
//!   underflow, and
//! * closed-form asymptotic constants and expansions for the same objects,
//!   ending in the copula decay `C(u,u) = u^tau L(u)` with `L` slowly
//!   varying.
//!
//! The [`dependence`] module confronts the two routes on a `u`-grid and fits
//! the tail order from the exact pipeline.

// negated comparisons are deliberate throughout: `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::excessive_precision)]

pub mod asymptotics;
pub mod dependence;
pub mod error;
pub mod gig;
pub mod numerics;
pub mod skew_gh;
pub mod special;

pub use error::{Error, Result};
