//! Probability kinematics (Jeffrey conditioning).
//!
//! Evidence arrives as a new distribution `p(ξ)` over a coarse-grained
//! variable `ξ(ω)` rather than as an observed event. The update keeps the
//! prior's conditionals `π(ω | ξ)` and swaps in the new marginal:
//!
//! - finite partitions: `p(ω) = π(ω | ξ(ω)) · p(ξ(ω))`, see [`discrete_pk_update`];
//! - continuous variables, when `π(ω | ξ)` is intractable but the prior's
//!   own marginal `π(ξ)` is known or estimated:
//!   `p(ω) ∝ p(ξ(ω)) / π(ξ(ω)) · π(ω)`, see [`PkModel`].
//!
//! Dropping the division by `π(ξ)` (the "naive product") does not produce
//! the evidence marginal; [`PkModel`] keeps that variant behind an ablation
//! flag for comparison.

mod components;
mod discrete;
mod model;
mod robust;

pub use components::{CoarseMap, EndToEndDistance, FineDensity, ResultantLength, VonMisesProduct};
pub use discrete::{discrete_pk_update, marginalize, DiscreteDistribution, Partition};
pub use model::{faithfulness_check, reference_ratio_logpdf, PkModel, FAITHFULNESS_MIN_SAMPLES};
pub use robust::{estimate_reference_gaussian, RobustGaussianFit, MAD_TO_SIGMA};
