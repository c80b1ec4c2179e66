use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter or argument lies outside the domain of the function.
    #[error("{name} = {value} is outside its domain ({expected})")]
    Domain {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("resultant length {length:e} is too close to zero for a gradient")]
    SingularResultant { length: f64 },
    #[error("atoms defining the reference frame are collinear")]
    DegenerateFrame,
    #[error("invalid discrete distribution: {0}")]
    InvalidDistribution(String),
    #[error("partition element `{element}` has evidence {evidence} but zero prior mass")]
    SupportMismatch { element: String, evidence: f64 },
    #[error("target density is positive at {at} where the reference density vanishes")]
    ReferenceSupport { at: f64 },
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),
    #[error("cdf is not a monotone map into [0, 1] at x = {at}")]
    InvalidCdf { at: f64 },
    #[error("log-density evaluated to NaN")]
    NotANumber,
    #[error("gradient disagrees with finite differences (max relative error {max_rel_error:e})")]
    GradientMismatch { max_rel_error: f64 },
    #[error("step-size adaptation failed: {0}")]
    AdaptationFailure(String),
    #[error("invalid sampler configuration: {0}")]
    InvalidConfig(String),
}
