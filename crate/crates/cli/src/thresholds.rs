//! Acceptance bands for each experiment and mode, shared by `--assert`
//! and the acceptance tests.

use crate::config::ExperimentKind;
use crate::report::{ExperimentReport, RunMode};

/// Allowed deviation of the three-horse posterior from (2/3, 1/6, 1/6).
pub const WHITWORTH_TOLERANCE: f64 = 1e-15;

/// Every repeat's KS statistic must lie in `statistic`; `max_p` bounds
/// every p-value from above, `min_p` from below, and `min_median_p` bounds
/// the median p-value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Band {
    pub statistic: (f64, f64),
    pub max_p: Option<f64>,
    pub min_p: Option<f64>,
    pub min_median_p: Option<f64>,
}

pub fn acceptance_band(experiment: ExperimentKind, mode: RunMode) -> Option<Band> {
    let any = (0.0, 1.0);
    match (experiment, mode) {
        (ExperimentKind::Vrw, RunMode::Pk) => Some(Band {
            statistic: (0.02, 0.12),
            max_p: None,
            min_p: None,
            min_median_p: Some(0.2),
        }),
        (ExperimentKind::Vrw, RunMode::Ablation) => Some(Band {
            statistic: (0.5, 1.0),
            max_p: Some(1e-50),
            min_p: None,
            min_median_p: None,
        }),
        (ExperimentKind::Protein, RunMode::Pk) => Some(Band {
            statistic: (0.02, 0.15),
            max_p: None,
            min_p: None,
            min_median_p: Some(0.2),
        }),
        (ExperimentKind::Protein, RunMode::Ablation) => Some(Band {
            statistic: (0.25, 1.0),
            max_p: Some(1e-10),
            min_p: None,
            min_median_p: None,
        }),
        (ExperimentKind::Vrw | ExperimentKind::Protein, RunMode::Identity) => Some(Band {
            statistic: any,
            max_p: None,
            min_p: Some(0.01),
            min_median_p: None,
        }),
        (ExperimentKind::Whitworth, _) => None,
    }
}

/// Human-readable description of every violated bound; empty on success.
pub fn check_report(report: &ExperimentReport) -> Vec<String> {
    let mut failures = Vec::new();
    if report.experiment == ExperimentKind::Whitworth {
        let expected = [("A", 2.0 / 3.0), ("B", 1.0 / 6.0), ("C", 1.0 / 6.0)];
        match &report.discrete_posterior {
            Some(post) => {
                for (label, want) in expected {
                    let got = post.prob(label);
                    if !((got - want).abs() <= WHITWORTH_TOLERANCE) {
                        failures.push(format!("P({label}) = {got:e}, expected {want:e}"));
                    }
                }
            }
            None => failures.push("report has no discrete posterior".into()),
        }
        return failures;
    }
    let Some(band) = acceptance_band(report.experiment, report.mode) else {
        return failures;
    };
    if report.repeats.len() != report.config.repeats {
        failures.push(format!(
            "{} repeats reported, {} configured",
            report.repeats.len(),
            report.config.repeats
        ));
    }
    let (lo, hi) = band.statistic;
    for r in &report.repeats {
        let d = r.ks.statistic;
        let p = r.ks.p_value;
        if !(d >= lo && d <= hi) {
            failures.push(format!(
                "seed {}: KS statistic {d:.4} outside [{lo}, {hi}]",
                r.seed
            ));
        }
        if let Some(max_p) = band.max_p {
            if !(p < max_p) {
                failures.push(format!(
                    "seed {}: p-value {p:e} not below {max_p:e}",
                    r.seed
                ));
            }
        }
        if let Some(min_p) = band.min_p {
            if !(p > min_p) {
                failures.push(format!("seed {}: p-value {p:e} not above {min_p}", r.seed));
            }
        }
    }
    if let (Some(min_median), Some(summary)) = (band.min_median_p, &report.summary) {
        if !(summary.median_p_value >= min_median) {
            failures.push(format!(
                "median p-value {:.4} below {min_median}",
                summary.median_p_value
            ));
        }
    }
    failures
}
