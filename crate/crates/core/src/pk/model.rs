use crate::distributions::ScalarDensity;
use crate::pk::components::{CoarseMap, FineDensity};
use crate::sampler::TargetDensity;
use crate::stats::{ks_one_sample, KSReport};
use crate::{Error, Result};

/// Interior grid points scanned for reference support on construction.
const SUPPORT_SCAN_POINTS: usize = 1000;

/// Smallest posterior sample accepted by [`faithfulness_check`].
pub const FAITHFULNESS_MIN_SAMPLES: usize = 100;

/// Posterior of a reference-ratio update,
/// `log p(ω) = log p(ξ(ω)) − log π(ξ(ω)) + log π(ω)` up to a constant.
///
/// With `ablation` set the reference term is dropped, giving the naive
/// product of prior and evidence.
pub struct PkModel {
    prior: Box<dyn FineDensity>,
    coarse: Box<dyn CoarseMap>,
    target: Box<dyn ScalarDensity>,
    reference: Box<dyn ScalarDensity>,
    ablation: bool,
}

impl PkModel {
    /// Fails with [`Error::ReferenceSupport`] if the reference density
    /// vanishes somewhere the target does not.
    pub fn new(
        prior: Box<dyn FineDensity>,
        coarse: Box<dyn CoarseMap>,
        target: Box<dyn ScalarDensity>,
        reference: Box<dyn ScalarDensity>,
        ablation: bool,
    ) -> Result<Self> {
        let (range_lo, range_hi) = coarse.range();
        let (t_lo, t_hi) = target.support();
        let lo = range_lo.max(t_lo);
        let hi = range_hi.min(t_hi);
        if lo.is_finite() && hi.is_finite() && hi > lo {
            let width = (hi - lo) / (SUPPORT_SCAN_POINTS + 1) as f64;
            for i in 1..=SUPPORT_SCAN_POINTS {
                let x = lo + i as f64 * width;
                if target.ln_pdf(x) > f64::NEG_INFINITY && reference.ln_pdf(x) == f64::NEG_INFINITY
                {
                    return Err(Error::ReferenceSupport { at: x });
                }
            }
        }
        Ok(PkModel {
            prior,
            coarse,
            target,
            reference,
            ablation,
        })
    }

    pub fn is_ablation(&self) -> bool {
        self.ablation
    }

    pub fn coarse_map(&self) -> &dyn CoarseMap {
        self.coarse.as_ref()
    }

    pub fn target(&self) -> &dyn ScalarDensity {
        self.target.as_ref()
    }

    pub fn reference(&self) -> &dyn ScalarDensity {
        self.reference.as_ref()
    }

    pub fn prior(&self) -> &dyn FineDensity {
        self.prior.as_ref()
    }

    /// Combined log-density at coarse value `xi`, before the prior term.
    fn coarse_term(&self, xi: f64) -> Result<f64> {
        let t = self.target.ln_pdf(xi);
        if t == f64::NEG_INFINITY {
            return Ok(t);
        }
        if self.ablation {
            return Ok(t);
        }
        let r = self.reference.ln_pdf(xi);
        if r == f64::NEG_INFINITY {
            return Err(Error::ReferenceSupport { at: xi });
        }
        Ok(t - r)
    }

    fn coarse_slope(&self, xi: f64) -> f64 {
        let dt = self.target.dln_pdf(xi);
        if self.ablation {
            dt
        } else {
            dt - self.reference.dln_pdf(xi)
        }
    }
}

/// Log posterior density of `omega` under `model`, up to a constant.
pub fn reference_ratio_logpdf(model: &PkModel, omega: &[f64]) -> Result<f64> {
    let xi = model.coarse.value(omega)?;
    let coarse = model.coarse_term(xi)?;
    if coarse == f64::NEG_INFINITY {
        return Ok(coarse);
    }
    let value = coarse + model.prior.logpdf(omega);
    if value.is_nan() {
        return Err(Error::NotANumber);
    }
    Ok(value)
}

impl TargetDensity for PkModel {
    fn dim(&self) -> usize {
        self.prior.dim()
    }

    fn logpdf(&self, x: &[f64]) -> f64 {
        reference_ratio_logpdf(self, x).unwrap_or(f64::NEG_INFINITY)
    }

    /// Points where the coarse map is not differentiable or the density is
    /// undefined are reported as `-inf`, which the sampler treats as divergent.
    fn logpdf_and_grad(&self, x: &[f64], grad: &mut [f64]) -> f64 {
        let xi = match self.coarse.value_and_grad(x, grad) {
            Ok(xi) => xi,
            Err(_) => {
                grad.fill(0.0);
                return f64::NEG_INFINITY;
            }
        };
        let coarse = match self.coarse_term(xi) {
            Ok(c) if c > f64::NEG_INFINITY => c,
            _ => {
                grad.fill(0.0);
                return f64::NEG_INFINITY;
            }
        };
        let slope = self.coarse_slope(xi);
        for g in grad.iter_mut() {
            *g *= slope;
        }
        let mut prior_grad = vec![0.0; x.len()];
        let prior = self.prior.logpdf_and_grad(x, &mut prior_grad);
        for (g, pg) in grad.iter_mut().zip(&prior_grad) {
            *g += pg;
        }
        let value = coarse + prior;
        if value.is_nan() || grad.iter().any(|g| g.is_nan()) {
            grad.fill(0.0);
            return f64::NEG_INFINITY;
        }
        value
    }
}

/// KS test of the coarse-grained posterior sample against the evidence CDF.
pub fn faithfulness_check<S, F>(
    samples: &[S],
    coarse: &dyn CoarseMap,
    target_cdf: F,
) -> Result<KSReport>
where
    S: AsRef<[f64]>,
    F: Fn(f64) -> f64,
{
    if samples.len() < FAITHFULNESS_MIN_SAMPLES {
        return Err(Error::DegenerateSample(format!(
            "faithfulness check needs at least {FAITHFULNESS_MIN_SAMPLES} samples, got {}",
            samples.len()
        )));
    }
    let xi = samples
        .iter()
        .map(|s| coarse.value(s.as_ref()))
        .collect::<Result<Vec<f64>>>()?;
    ks_one_sample(&xi, target_cdf)
}
