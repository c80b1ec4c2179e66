use serde::{Deserialize, Serialize};

use crate::distributions::GaussianParams;
use crate::{Error, Result};

/// Ratio of the standard deviation to the median absolute deviation of a
/// normal distribution.
pub const MAD_TO_SIGMA: f64 = 1.4826;

/// Gaussian fitted by median and scaled MAD.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RobustGaussianFit {
    pub mean: f64,
    pub variance: f64,
}

impl RobustGaussianFit {
    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }

    pub fn to_gaussian(&self) -> Result<GaussianParams> {
        GaussianParams::new(self.mean, self.variance)
    }
}

fn median_of_sorted(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Fits a Gaussian to `samples` by median and `1.4826 · MAD`.
pub fn estimate_reference_gaussian(samples: &[f64]) -> Result<RobustGaussianFit> {
    if samples.is_empty() {
        return Err(Error::DegenerateSample("no samples to fit".into()));
    }
    if samples.iter().any(|x| !x.is_finite()) {
        return Err(Error::NotANumber);
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let median = median_of_sorted(&sorted);
    let mut dev: Vec<f64> = sorted.iter().map(|x| (x - median).abs()).collect();
    dev.sort_by(f64::total_cmp);
    let sigma = MAD_TO_SIGMA * median_of_sorted(&dev);
    if !(sigma > 0.0) {
        return Err(Error::DegenerateSample(
            "median absolute deviation is zero".into(),
        ));
    }
    Ok(RobustGaussianFit {
        mean: median,
        variance: sigma * sigma,
    })
}
