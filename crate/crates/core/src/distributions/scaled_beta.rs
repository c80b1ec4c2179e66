use super::special::{log_beta, regularized_incomplete_beta};
use super::ScalarDensity;
use crate::{Error, Result};

/// Beta(α, β) stretched onto `[0, n_scale]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledBetaParams {
    alpha: f64,
    beta: f64,
    n_scale: f64,
    log_norm: f64,
}

impl ScaledBetaParams {
    pub fn new(alpha: f64, beta: f64, n_scale: f64) -> Result<Self> {
        for (name, value) in [("alpha", alpha), ("beta", beta), ("n_scale", n_scale)] {
            if !(value > 0.0) || value.is_infinite() {
                return Err(Error::Domain {
                    name,
                    value,
                    expected: "finite and > 0",
                });
            }
        }
        Ok(ScaledBetaParams {
            alpha,
            beta,
            n_scale,
            log_norm: n_scale.ln() + log_beta(alpha, beta)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn n_scale(&self) -> f64 {
        self.n_scale
    }
}

// (a − 1)·ln t with the a = 1 case pinned to zero even at t = 0.
fn power_term(a: f64, t: f64) -> f64 {
    if a == 1.0 {
        0.0
    } else {
        (a - 1.0) * t.ln()
    }
}

pub fn scaled_beta_logpdf(d: f64, params: &ScaledBetaParams) -> f64 {
    if !(0.0..=params.n_scale).contains(&d) {
        return f64::NEG_INFINITY;
    }
    let u = d / params.n_scale;
    power_term(params.alpha, u) + power_term(params.beta, 1.0 - u) - params.log_norm
}

impl ScalarDensity for ScaledBetaParams {
    fn ln_pdf(&self, x: f64) -> f64 {
        scaled_beta_logpdf(x, self)
    }

    fn dln_pdf(&self, d: f64) -> f64 {
        let u = d / self.n_scale;
        ((self.alpha - 1.0) / u - (self.beta - 1.0) / (1.0 - u)) / self.n_scale
    }

    fn cdf(&self, d: f64) -> f64 {
        let u = (d / self.n_scale).clamp(0.0, 1.0);
        regularized_incomplete_beta(u, self.alpha, self.beta).unwrap_or(f64::NAN)
    }

    fn support(&self) -> (f64, f64) {
        (0.0, self.n_scale)
    }
}
