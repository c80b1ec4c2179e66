//! Validation statistics: one-sample Kolmogorov–Smirnov test, fixed-stride
//! thinning and normalized histograms.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Smallest sample accepted by [`ks_one_sample`].
pub const KS_MIN_SAMPLES: usize = 10;

/// Slack allowed when checking that a CDF is nondecreasing on the samples.
const CDF_MONOTONE_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KSReport {
    pub statistic: f64,
    pub p_value: f64,
    pub n_effective: usize,
}

/// One-sample KS test of `samples` against `cdf`, with the p-value taken
/// from the asymptotic Kolmogorov distribution of `√n · D`.
pub fn ks_one_sample<F>(samples: &[f64], cdf: F) -> Result<KSReport>
where
    F: Fn(f64) -> f64,
{
    let n = samples.len();
    if n < KS_MIN_SAMPLES {
        return Err(Error::DegenerateSample(format!(
            "KS test needs at least {KS_MIN_SAMPLES} samples, got {n}"
        )));
    }
    if let Some(&bad) = samples.iter().find(|x| x.is_nan()) {
        return Err(Error::InvalidCdf { at: bad });
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);

    let nf = n as f64;
    let mut statistic: f64 = 0.0;
    let mut prev = f64::NEG_INFINITY;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        if !(-CDF_MONOTONE_SLACK..=1.0 + CDF_MONOTONE_SLACK).contains(&f)
            || f < prev - CDF_MONOTONE_SLACK
        {
            return Err(Error::InvalidCdf { at: x });
        }
        prev = f;
        let above = (i + 1) as f64 / nf - f;
        let below = f - i as f64 / nf;
        statistic = statistic.max(above).max(below);
    }
    let statistic = statistic.clamp(0.0, 1.0);
    Ok(KSReport {
        statistic,
        p_value: kolmogorov_survival(nf.sqrt() * statistic),
        n_effective: n,
    })
}

/// `Q(λ) = P(K > λ)` for the Kolmogorov distribution.
///
/// Uses `2 Σ (−1)^{k−1} exp(−2k²λ²)` for λ ≥ 1 and the equivalent Jacobi
/// theta form `1 − √(2π)/λ Σ exp(−(2k−1)²π²/(8λ²))` below, where the
/// alternating series converges too slowly.
pub fn kolmogorov_survival(lambda: f64) -> f64 {
    if !(lambda > 0.0) {
        return 1.0;
    }
    if lambda < 1.0 {
        let c = std::f64::consts::PI.powi(2) / (8.0 * lambda * lambda);
        let mut sum = 0.0;
        for k in 1..=100 {
            let m = (2 * k - 1) as f64;
            let term = (-m * m * c).exp();
            sum += term;
            if term < 1e-16 * sum {
                break;
            }
        }
        let cdf = (2.0 * std::f64::consts::PI).sqrt() / lambda * sum;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-12 * sum.abs() || term == 0.0 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Keeps indices `0, stride, 2·stride, …`.
pub fn thin<T: Clone>(samples: &[T], stride: usize) -> Result<Vec<T>> {
    if stride == 0 {
        return Err(Error::Domain {
            name: "stride",
            value: 0.0,
            expected: ">= 1",
        });
    }
    Ok(samples.iter().step_by(stride).cloned().collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// `bins + 1` uniformly spaced edges.
    pub edges: Vec<f64>,
    /// Counts divided by `n_total · width`; sums (times width) to the
    /// in-range fraction.
    pub densities: Vec<f64>,
}

/// Histogram of `samples` over `[lo, hi]`; the last bin is closed.
/// Out-of-range samples count towards the normalization but not any bin.
pub fn histogram(samples: &[f64], bins: usize, range: (f64, f64)) -> Result<Histogram> {
    let (lo, hi) = range;
    if bins == 0 {
        return Err(Error::Domain {
            name: "bins",
            value: 0.0,
            expected: ">= 1",
        });
    }
    if !(lo < hi) {
        return Err(Error::Domain {
            name: "hi",
            value: hi,
            expected: "> lo",
        });
    }
    let width = (hi - lo) / bins as f64;
    let edges = (0..=bins).map(|i| lo + i as f64 * width).collect();
    let mut counts = vec![0usize; bins];
    for &x in samples {
        if x < lo || x > hi || x.is_nan() {
            continue;
        }
        let b = (((x - lo) / width) as usize).min(bins - 1);
        counts[b] += 1;
    }
    let scale = if samples.is_empty() {
        0.0
    } else {
        1.0 / (samples.len() as f64 * width)
    };
    Ok(Histogram {
        edges,
        densities: counts.into_iter().map(|c| c as f64 * scale).collect(),
    })
}

/// Right-continuous empirical CDF of a sample.
#[derive(Debug, Clone)]
pub struct EmpiricalCdf {
    sorted: Vec<f64>,
}

impl EmpiricalCdf {
    pub fn new(samples: &[f64]) -> Result<Self> {
        if samples.is_empty() || samples.iter().any(|x| x.is_nan()) {
            return Err(Error::DegenerateSample(
                "empirical CDF needs finite, non-empty samples".into(),
            ));
        }
        let mut sorted = samples.to_vec();
        sorted.sort_by(f64::total_cmp);
        Ok(EmpiricalCdf { sorted })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.sorted.partition_point(|&s| s <= x) as f64 / self.sorted.len() as f64
    }
}
