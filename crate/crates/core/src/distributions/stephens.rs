use super::special::{chi2_logpdf, chi2_sf};
use super::ScalarDensity;
use crate::{Error, Result};

/// Stephens' approximation to the resultant length `d` of an `n_steps`-step
/// von Mises random walk: `2Nγ(1 − d/N) ~ χ²_{N−1}` with
/// `1/γ = 1/κ + 3/(8κ²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StephensParams {
    kappa: f64,
    n_steps: usize,
    gamma: f64,
    // ln(2γ) + chi-square normalizer
    log_const: f64,
}

impl StephensParams {
    pub fn new(kappa: f64, n_steps: usize) -> Result<Self> {
        if !(kappa > 0.0) || kappa.is_infinite() {
            return Err(Error::Domain {
                name: "kappa",
                value: kappa,
                expected: "finite and > 0",
            });
        }
        if n_steps < 2 {
            return Err(Error::Domain {
                name: "n_steps",
                value: n_steps as f64,
                expected: ">= 2",
            });
        }
        let gamma = 1.0 / (1.0 / kappa + 3.0 / (8.0 * kappa * kappa));
        let dof = (n_steps - 1) as f64;
        // chi2_logpdf(1) = log_norm − ½
        let log_norm = chi2_logpdf(1.0, dof)? + 0.5;
        Ok(StephensParams {
            kappa,
            n_steps,
            gamma,
            log_const: (2.0 * gamma).ln() + log_norm,
        })
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    fn dof(&self) -> f64 {
        (self.n_steps - 1) as f64
    }

    fn n(&self) -> f64 {
        self.n_steps as f64
    }
}

/// Log-density of the resultant length, `-inf` on and outside the
/// boundary of `[0, N]`.
pub fn stephens_logpdf(d: f64, params: &StephensParams) -> f64 {
    let n = params.n();
    if !(d > 0.0 && d < n) {
        return f64::NEG_INFINITY;
    }
    let x = 2.0 * params.gamma * (n - d);
    (0.5 * params.dof() - 1.0) * x.ln() - 0.5 * x + params.log_const
}

impl ScalarDensity for StephensParams {
    fn ln_pdf(&self, x: f64) -> f64 {
        stephens_logpdf(x, self)
    }

    fn dln_pdf(&self, d: f64) -> f64 {
        let x = 2.0 * self.gamma * (self.n() - d);
        -2.0 * self.gamma * ((0.5 * self.dof() - 1.0) / x - 0.5)
    }

    fn cdf(&self, d: f64) -> f64 {
        let n = self.n();
        if d <= 0.0 {
            0.0
        } else if d >= n {
            1.0
        } else {
            chi2_sf(2.0 * self.gamma * (n - d), self.dof()).unwrap_or(f64::NAN)
        }
    }

    fn support(&self) -> (f64, f64) {
        (0.0, self.n())
    }
}
