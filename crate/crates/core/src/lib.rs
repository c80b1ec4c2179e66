//! Probability kinematics (Jeffrey conditioning) for densities over angular
//! random variables.
//!
//! The crate is organised bottom-up:
//!
//! - [`distributions`]: scalar log-densities, CDFs and samplers (von Mises,
//!   the Stephens resultant-length approximation, scaled Beta, Gaussian) and
//!   the special functions behind them.
//! - [`walk2d`]: the planar von Mises random walk and its resultant length.
//! - [`backbone3d`]: NeRF chain extension of an ideal protein backbone from
//!   (φ, ψ) dihedrals.
//! - [`pk`]: finite-partition Jeffrey updates and the continuous
//!   reference-ratio posterior `p(ξ(ω)) / π(ξ(ω)) · π(ω)`.
//! - [`sampler`]: leapfrog integration and a multinomial No-U-Turn sampler
//!   with dual-averaging step-size adaptation.
//! - [`stats`]: one-sample Kolmogorov–Smirnov test, thinning, histograms.

pub mod angle;
pub mod backbone3d;
pub mod distributions;
mod error;
pub mod pk;
pub mod sampler;
pub mod stats;
pub mod walk2d;

pub use angle::{wrap_angle, AngleVector};
pub use error::{Error, Result};
