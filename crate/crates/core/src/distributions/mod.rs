//! Scalar densities and samplers.
//!
//! All densities are exposed in log space. Parameter types validate their
//! domain on construction, so evaluation itself cannot fail.

mod gaussian;
mod scaled_beta;
pub mod special;
mod stephens;
mod von_mises;

pub use gaussian::{gaussian_cdf, gaussian_logpdf, GaussianParams};
pub use scaled_beta::{scaled_beta_logpdf, ScaledBetaParams};
pub use stephens::{stephens_logpdf, StephensParams};
pub use von_mises::{vm_dlogpdf, vm_logpdf, vm_sample, VonMisesParams};

/// A univariate density over a coarse-grained variable.
///
/// Implementations are evidence (target) or reference densities in a
/// reference-ratio update, and supply the CDF used by goodness-of-fit checks.
pub trait ScalarDensity: Send + Sync {
    /// Log-density; `-inf` outside the support.
    fn ln_pdf(&self, x: f64) -> f64;

    /// Derivative of [`ln_pdf`](Self::ln_pdf) with respect to `x`.
    fn dln_pdf(&self, x: f64) -> f64;

    fn cdf(&self, x: f64) -> f64;

    /// Closed interval outside which the density vanishes.
    fn support(&self) -> (f64, f64);
}
