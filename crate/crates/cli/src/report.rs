//! Report types and their JSON / CSV serialization.

use std::fs::File;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use pk_core::pk::{DiscreteDistribution, RobustGaussianFit};
use pk_core::stats::KSReport;
use serde::{Deserialize, Serialize};

use crate::config::{ExperimentConfig, ExperimentKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunMode {
    Pk,
    Ablation,
    Identity,
}

impl RunMode {
    pub fn of(config: &ExperimentConfig) -> Self {
        if config.identity_check {
            RunMode::Identity
        } else if config.ablation {
            RunMode::Ablation
        } else {
            RunMode::Pk
        }
    }
}

/// Outcome of one chain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RepeatReport {
    pub seed: u64,
    pub ks: KSReport,
    pub step_size: f64,
    pub mean_accept: f64,
    pub divergences: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub min_statistic: f64,
    pub median_statistic: f64,
    pub max_statistic: f64,
    pub min_p_value: f64,
    pub median_p_value: f64,
    pub max_p_value: f64,
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let n = values.len();
    if n % 2 == 1 {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

impl Summary {
    /// `None` for an empty list.
    pub fn from_repeats(repeats: &[RepeatReport]) -> Option<Self> {
        if repeats.is_empty() {
            return None;
        }
        let mut stats: Vec<f64> = repeats.iter().map(|r| r.ks.statistic).collect();
        let mut ps: Vec<f64> = repeats.iter().map(|r| r.ks.p_value).collect();
        let median_statistic = median(&mut stats);
        let median_p_value = median(&mut ps);
        Some(Summary {
            min_statistic: stats[0],
            median_statistic,
            max_statistic: stats[stats.len() - 1],
            min_p_value: ps[0],
            median_p_value,
            max_p_value: ps[ps.len() - 1],
        })
    }
}

/// Densities on shared bins, for the prior, the reference-ratio posterior
/// and the naive-product posterior.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramTable {
    pub edges: Vec<f64>,
    pub prior_density: Vec<f64>,
    pub posterior_density: Vec<f64>,
    pub ablation_density: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct HistogramRow {
    bin_lo: f64,
    bin_hi: f64,
    prior_density: f64,
    posterior_density: f64,
    ablation_density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: ExperimentKind,
    pub mode: RunMode,
    pub config: ExperimentConfig,
    pub repeats: Vec<RepeatReport>,
    pub summary: Option<Summary>,
    /// Gaussian fitted to prior draws (protein experiment).
    pub reference_fit: Option<RobustGaussianFit>,
    pub histograms: Option<HistogramTable>,
    /// Posterior of the discrete update (whitworth experiment).
    pub discrete_posterior: Option<DiscreteDistribution>,
    pub wall_clock_seconds: f64,
}

impl ExperimentReport {
    pub fn to_json(&self) -> anyhow::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

/// Path of the histogram file written next to a CSV report.
pub fn histogram_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}_histograms.csv"))
}

/// Writes the report to `path`, or to stdout when `path` is `None`.
///
/// CSV output has one row per repeat; histograms, if present, go to
/// [`histogram_path`] (or follow the repeat table on stdout).
pub fn emit_report(
    report: &ExperimentReport,
    format: ReportFormat,
    path: Option<&Path>,
) -> anyhow::Result<()> {
    let mut out: Box<dyn Write> = match path {
        Some(p) => Box::new(File::create(p).with_context(|| format!("creating {}", p.display()))?),
        None => Box::new(std::io::stdout().lock()),
    };
    let describe = || path.map_or_else(|| "stdout".to_string(), |p| p.display().to_string());
    match format {
        ReportFormat::Json => {
            writeln!(out, "{}", report.to_json()?)
                .with_context(|| format!("writing {}", describe()))?;
        }
        ReportFormat::Csv => {
            write_csv(report, &mut out).with_context(|| format!("writing {}", describe()))?;
            if let Some(table) = &report.histograms {
                match path {
                    Some(p) => {
                        let hp = histogram_path(p);
                        let file = File::create(&hp)
                            .with_context(|| format!("creating {}", hp.display()))?;
                        write_histogram_csv(table, file)
                            .with_context(|| format!("writing {}", hp.display()))?;
                    }
                    None => {
                        writeln!(out)?;
                        write_histogram_csv(table, &mut out)?;
                    }
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_csv<W: Write>(report: &ExperimentReport, writer: W) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if let Some(post) = &report.discrete_posterior {
        w.write_record(["outcome", "probability"])?;
        for (label, p) in post.iter() {
            w.write_record([label.to_string(), format!("{p:e}")])?;
        }
    } else {
        w.write_record([
            "seed",
            "statistic",
            "p_value",
            "n_effective",
            "step_size",
            "mean_accept",
            "divergences",
        ])?;
        for r in &report.repeats {
            w.write_record([
                r.seed.to_string(),
                r.ks.statistic.to_string(),
                format!("{:e}", r.ks.p_value),
                r.ks.n_effective.to_string(),
                r.step_size.to_string(),
                r.mean_accept.to_string(),
                r.divergences.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_histogram_csv<W: Write>(table: &HistogramTable, writer: W) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for (i, pair) in table.edges.windows(2).enumerate() {
        w.serialize(HistogramRow {
            bin_lo: pair[0],
            bin_hi: pair[1],
            prior_density: table.prior_density[i],
            posterior_density: table.posterior_density[i],
            ablation_density: table.ablation_density[i],
        })?;
    }
    w.flush()?;
    Ok(())
}
