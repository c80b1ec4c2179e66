//! Gradient-based MCMC: leapfrog integration, a multinomial No-U-Turn
//! sampler with the generalized U-turn criterion, and dual-averaging
//! step-size adaptation. The metric is the identity.

mod adapt;
mod gradient;
mod leapfrog;
mod nuts;

pub use adapt::DualAveraging;
pub use gradient::{
    check_gradient, CheckedTarget, GRADIENT_CHECK_POINTS, GRADIENT_CHECK_STEP,
    GRADIENT_CHECK_TOLERANCE,
};
pub use leapfrog::{leapfrog, LeapfrogStep};
pub use nuts::{nuts_sample, Nuts, Transition};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// An unnormalized log-density with its gradient.
pub trait TargetDensity: Send + Sync {
    fn dim(&self) -> usize;

    fn logpdf(&self, x: &[f64]) -> f64;

    /// Writes `∇ log p(x)` into `grad` and returns `log p(x)`.
    fn logpdf_and_grad(&self, x: &[f64], grad: &mut [f64]) -> f64;
}

impl<T: TargetDensity + ?Sized> TargetDensity for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn logpdf(&self, x: &[f64]) -> f64 {
        (**self).logpdf(x)
    }

    fn logpdf_and_grad(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        (**self).logpdf_and_grad(x, grad)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerConfig {
    pub warmup_steps: usize,
    pub sample_steps: usize,
    pub max_tree_depth: usize,
    pub target_accept: f64,
    pub seed: u64,
    pub initial_step_size: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig {
            warmup_steps: 1000,
            sample_steps: 1000,
            max_tree_depth: 10,
            target_accept: 0.8,
            seed: 0,
            initial_step_size: 0.1,
        }
    }
}

impl SamplerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.warmup_steps < 10 {
            return Err(Error::InvalidConfig(format!(
                "warmup_steps = {} (need >= 10)",
                self.warmup_steps
            )));
        }
        if !(1..=12).contains(&self.max_tree_depth) {
            return Err(Error::InvalidConfig(format!(
                "max_tree_depth = {} (need 1..=12)",
                self.max_tree_depth
            )));
        }
        if !(self.target_accept > 0.0 && self.target_accept < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "target_accept = {} (need 0 < t < 1)",
                self.target_accept
            )));
        }
        if !(self.initial_step_size > 0.0) || self.initial_step_size.is_infinite() {
            return Err(Error::InvalidConfig(format!(
                "initial_step_size = {} (need finite > 0)",
                self.initial_step_size
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainResult {
    /// `sample_steps` draws, each of length `dim`.
    pub samples: Vec<Vec<f64>>,
    /// Mean Metropolis acceptance over each sampling-phase trajectory.
    pub accept_stats: Vec<f64>,
    /// Step size used at each warmup iteration.
    pub step_size_trace: Vec<f64>,
    /// Adapted step size used after warmup.
    pub step_size: f64,
    pub tree_depths: Vec<usize>,
    pub n_leapfrog: Vec<usize>,
    /// Divergent transitions after warmup.
    pub divergence_count: usize,
    pub warmup_divergences: usize,
}

impl ChainResult {
    pub fn mean_accept(&self) -> f64 {
        if self.accept_stats.is_empty() {
            return f64::NAN;
        }
        self.accept_stats.iter().sum::<f64>() / self.accept_stats.len() as f64
    }
}
