//! Experiment configuration, loaded from TOML and overridable from the
//! command line. Every field has a default, so an empty file is valid.

use std::path::Path;

use anyhow::{bail, Context};
use pk_core::backbone3d::GeometryParams;
use pk_core::distributions::{GaussianParams, ScaledBetaParams, StephensParams, VonMisesParams};
use pk_core::sampler::SamplerConfig;
use serde::{Deserialize, Serialize};

/// Default number of independent chains per experiment.
pub const DEFAULT_REPEATS: usize = 10;
/// Default stride applied to each chain before the KS test.
pub const DEFAULT_THIN: usize = 5;
/// Smallest prior sample accepted for the robust reference fit.
pub const MIN_REFERENCE_SAMPLES: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Vrw,
    Protein,
    Whitworth,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Vrw => "vrw",
            ExperimentKind::Protein => "protein",
            ExperimentKind::Whitworth => "whitworth",
        }
    }
}

/// Sampler settings; unset fields take the experiment's default.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerSettings {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warmup_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sample_steps: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_tree_depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub target_accept: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub initial_step_size: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VrwParams {
    /// Mean step direction (radians).
    pub mu: f64,
    pub kappa: f64,
    pub n_steps: usize,
    /// Shape parameters of the evidence on the end-to-end distance.
    pub alpha: f64,
    pub beta: f64,
    /// Forward draws used for the prior histogram.
    pub prior_samples: usize,
    pub histogram_bins: usize,
}

impl Default for VrwParams {
    fn default() -> Self {
        VrwParams {
            mu: 0.0,
            kappa: 10.0,
            n_steps: 5,
            alpha: 10.0,
            beta: 10.0,
            prior_samples: 10_000,
            histogram_bins: 40,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProteinParams {
    pub n_residues: usize,
    /// Prior mean torsions (degrees).
    pub mu_phi_deg: f64,
    pub mu_psi_deg: f64,
    pub kappa_phi: f64,
    pub kappa_psi: f64,
    /// Evidence on the first-to-last Cα distance (Å, Å²).
    pub target_mean: f64,
    pub target_variance: f64,
    /// Prior draws used to fit the reference density.
    pub reference_samples: usize,
    pub histogram_bins: usize,
    pub histogram_range: (f64, f64),
    pub geometry: GeometryParams,
}

impl Default for ProteinParams {
    fn default() -> Self {
        ProteinParams {
            n_residues: 8,
            mu_phi_deg: -60.0,
            mu_psi_deg: -40.0,
            kappa_phi: 20.0,
            kappa_psi: 20.0,
            target_mean: 11.0,
            target_variance: 0.25,
            reference_samples: 10_000,
            histogram_bins: 40,
            histogram_range: (8.0, 16.0),
            geometry: GeometryParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Drop the reference density (naive product of prior and evidence).
    pub ablation: bool,
    /// Use the reference density as the evidence; the posterior should
    /// then reproduce the prior.
    pub identity_check: bool,
    /// Also run the companion mode on the first repeat and report
    /// prior / posterior / ablation histograms.
    pub emit_histograms: bool,
    /// Repeat `r` uses seed `seed + r`.
    pub seed: u64,
    pub repeats: usize,
    pub thin: usize,
    pub sampler: SamplerSettings,
    pub vrw: VrwParams,
    pub protein: ProteinParams,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            experiment: ExperimentKind::Vrw,
            ablation: false,
            identity_check: false,
            emit_histograms: false,
            seed: 0,
            repeats: DEFAULT_REPEATS,
            thin: DEFAULT_THIN,
            sampler: SamplerSettings::default(),
            vrw: VrwParams::default(),
            protein: ProteinParams::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind) -> Self {
        ExperimentConfig {
            experiment,
            ..Self::default()
        }
    }

    pub fn from_toml_str(text: &str) -> anyhow::Result<Self> {
        let config: ExperimentConfig = toml::from_str(text)?;
        Ok(config)
    }

    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_toml_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn to_toml_string(&self) -> anyhow::Result<String> {
        Ok(toml::to_string(self)?)
    }

    /// Sampler configuration for repeat `repeat`.
    pub fn sampler_config(&self, repeat: usize) -> SamplerConfig {
        let base = SamplerConfig::default();
        let default_depth = match self.experiment {
            ExperimentKind::Protein => 6,
            _ => base.max_tree_depth,
        };
        let s = &self.sampler;
        SamplerConfig {
            warmup_steps: s.warmup_steps.unwrap_or(base.warmup_steps),
            sample_steps: s.sample_steps.unwrap_or(base.sample_steps),
            max_tree_depth: s.max_tree_depth.unwrap_or(default_depth),
            target_accept: s.target_accept.unwrap_or(base.target_accept),
            initial_step_size: s.initial_step_size.unwrap_or(base.initial_step_size),
            seed: self.repeat_seed(repeat),
        }
    }

    pub fn repeat_seed(&self, repeat: usize) -> u64 {
        self.seed.wrapping_add(repeat as u64)
    }

    pub fn validate(&self) -> anyhow::Result<()> {
        if self.ablation && self.identity_check {
            bail!("ablation and identity_check are mutually exclusive");
        }
        if self.experiment == ExperimentKind::Whitworth {
            return Ok(());
        }
        if self.repeats == 0 {
            bail!("repeats must be >= 1");
        }
        if self.thin == 0 {
            bail!("thin must be >= 1");
        }
        self.sampler_config(0).validate()?;
        match self.experiment {
            ExperimentKind::Vrw => {
                let v = &self.vrw;
                VonMisesParams::new(v.mu, v.kappa)?;
                StephensParams::new(v.kappa, v.n_steps)?;
                ScaledBetaParams::new(v.alpha, v.beta, v.n_steps as f64)?;
                if v.histogram_bins == 0 {
                    bail!("vrw.histogram_bins must be >= 1");
                }
                if self.emit_histograms && v.prior_samples == 0 {
                    bail!("vrw.prior_samples must be >= 1 to emit histograms");
                }
            }
            ExperimentKind::Protein => {
                let p = &self.protein;
                if p.n_residues < 2 {
                    bail!("protein.n_residues must be >= 2");
                }
                VonMisesParams::new(p.mu_phi_deg.to_radians(), p.kappa_phi)?;
                VonMisesParams::new(p.mu_psi_deg.to_radians(), p.kappa_psi)?;
                GaussianParams::new(p.target_mean, p.target_variance)?;
                p.geometry.validate()?;
                if p.reference_samples < MIN_REFERENCE_SAMPLES {
                    bail!(
                        "protein.reference_samples = {} (need >= {MIN_REFERENCE_SAMPLES})",
                        p.reference_samples
                    );
                }
                let (lo, hi) = p.histogram_range;
                if p.histogram_bins == 0 || !(hi > lo) {
                    bail!("protein histogram needs >= 1 bin and a nonempty range");
                }
            }
            ExperimentKind::Whitworth => unreachable!(),
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let c = ExperimentConfig::from_toml_str("").unwrap();
        assert_eq!(c, ExperimentConfig::default());
        c.validate().unwrap();
    }

    #[test]
    fn protein_defaults_to_shallow_trees() {
        let c = ExperimentConfig::new(ExperimentKind::Protein);
        assert_eq!(c.sampler_config(0).max_tree_depth, 6);
        assert_eq!(
            ExperimentConfig::new(ExperimentKind::Vrw)
                .sampler_config(0)
                .max_tree_depth,
            10
        );
    }

    #[test]
    fn nested_sections_parse() {
        let c = ExperimentConfig::from_toml_str(
            r#"
            experiment = "protein"
            seed = 7
            [sampler]
            sample_steps = 400
            [protein]
            n_residues = 6
            histogram_range = [9.0, 14.0]
            [protein.geometry]
            omega = 175.0
            "#,
        )
        .unwrap();
        assert_eq!(c.experiment, ExperimentKind::Protein);
        assert_eq!(c.sampler_config(3).seed, 10);
        assert_eq!(c.sampler_config(0).sample_steps, 400);
        assert_eq!(c.protein.n_residues, 6);
        assert_eq!(c.protein.geometry.omega, 175.0);
        assert_eq!(c.protein.geometry.n_ca, 1.458);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(ExperimentConfig::from_toml_str("repeat = 3").is_err());
        assert!(ExperimentConfig::from_toml_str("[vrw]\nsigma = 1.0").is_err());
    }

    #[test]
    fn round_trips_through_toml() {
        let mut c = ExperimentConfig::new(ExperimentKind::Protein);
        c.sampler.target_accept = Some(0.9);
        let text = c.to_toml_string().unwrap();
        assert_eq!(ExperimentConfig::from_toml_str(&text).unwrap(), c);
    }

    #[test]
    fn validation_catches_bad_values() {
        let c = ExperimentConfig {
            repeats: 0,
            ..Default::default()
        };
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::default();
        c.vrw.kappa = -1.0;
        assert!(c.validate().is_err());
        let mut c = ExperimentConfig::new(ExperimentKind::Protein);
        c.protein.reference_samples = 10;
        assert!(c.validate().is_err());
        let c = ExperimentConfig {
            ablation: true,
            identity_check: true,
            ..Default::default()
        };
        assert!(c.validate().is_err());
    }
}
