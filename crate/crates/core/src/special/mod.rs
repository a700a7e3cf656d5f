//! Scalar special functions used throughout the crate: modified Bessel K
//! (in log form), Owen's T, the standard normal distribution, and log-gamma.
//!
//! All operations here are pure functions of their arguments.

mod bessel;
mod gamma;
mod normal;
mod owen;

pub use bessel::{bessel_k_leading, log_bessel_k, log_bessel_k_leading};
pub use gamma::log_gamma_fn;
pub use normal::{
    std_normal_cdf, std_normal_log_cdf, std_normal_log_pdf, std_normal_pdf, std_normal_quantile,
};
pub use owen::owen_t;

pub(crate) use bessel::log_bessel_k_raw;
pub(crate) use gamma::log_gamma_raw;
pub(crate) use owen::owen_t_raw;
