use super::special::standard_normal_cdf;
use super::ScalarDensity;
use crate::{Error, Result};

const LN_2PI: f64 = 1.837_877_066_409_345_5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianParams {
    mean: f64,
    variance: f64,
}

impl GaussianParams {
    pub fn new(mean: f64, variance: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::Domain {
                name: "mean",
                value: mean,
                expected: "finite",
            });
        }
        if !(variance > 0.0) || variance.is_infinite() {
            return Err(Error::Domain {
                name: "variance",
                value: variance,
                expected: "finite and > 0",
            });
        }
        Ok(GaussianParams { mean, variance })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn std_dev(&self) -> f64 {
        self.variance.sqrt()
    }
}

pub fn gaussian_logpdf(x: f64, params: &GaussianParams) -> f64 {
    let z2 = (x - params.mean).powi(2) / params.variance;
    -0.5 * (z2 + LN_2PI + params.variance.ln())
}

pub fn gaussian_cdf(x: f64, params: &GaussianParams) -> f64 {
    standard_normal_cdf((x - params.mean) / params.std_dev())
}

impl ScalarDensity for GaussianParams {
    fn ln_pdf(&self, x: f64) -> f64 {
        gaussian_logpdf(x, self)
    }

    fn dln_pdf(&self, x: f64) -> f64 {
        -(x - self.mean) / self.variance
    }

    fn cdf(&self, x: f64) -> f64 {
        gaussian_cdf(x, self)
    }

    fn support(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}
