//! Experiment runners: the planar von Mises random walk, the protein
//! backbone end-to-end distance, and the discrete three-horse example.

use std::time::Instant;

use anyhow::{bail, Context};
use pk_core::distributions::{
    GaussianParams, ScalarDensity, ScaledBetaParams, StephensParams, VonMisesParams,
};
use pk_core::pk::{
    discrete_pk_update, estimate_reference_gaussian, CoarseMap, DiscreteDistribution,
    EndToEndDistance, Partition, PkModel, ResultantLength, RobustGaussianFit, VonMisesProduct,
};
use pk_core::sampler::{nuts_sample, CheckedTarget, TargetDensity};
use pk_core::stats::{histogram, ks_one_sample, thin, EmpiricalCdf};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::{ExperimentConfig, ExperimentKind};
use crate::report::{ExperimentReport, HistogramTable, RepeatReport, RunMode, Summary};

/// RNG stream for chain initial points; the sampler uses stream 0.
const INIT_STREAM: u64 = 1;
/// RNG stream for forward prior draws (reference fit, prior histogram).
const PRIOR_STREAM: u64 = 2;
/// Prior draws tried before giving up on a finite initial point.
const MAX_INIT_ATTEMPTS: usize = 1000;
/// Standard deviation of the gradient-check points around the prior mode.
const GRADIENT_CHECK_SPREAD: f64 = 0.3;

pub fn run_experiment(config: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
    match config.experiment {
        ExperimentKind::Vrw => run_vrw_experiment(config),
        ExperimentKind::Protein => run_protein_experiment(config),
        ExperimentKind::Whitworth => {
            let start = Instant::now();
            let posterior = run_whitworth();
            Ok(ExperimentReport {
                experiment: ExperimentKind::Whitworth,
                mode: RunMode::Pk,
                config: config.clone(),
                repeats: Vec::new(),
                summary: None,
                reference_fit: None,
                histograms: None,
                discrete_posterior: Some(posterior),
                wall_clock_seconds: start.elapsed().as_secs_f64(),
            })
        }
    }
}

/// Three horses with prior odds (1/2, 1/4, 1/4); new information moves the
/// probability that A wins to `p_a` without saying anything about B vs C.
pub fn whitworth_with_evidence(p_a: f64) -> anyhow::Result<DiscreteDistribution> {
    let prior = DiscreteDistribution::new([("A", 0.5), ("B", 0.25), ("C", 0.25)])?;
    let partition = Partition::new([("A", "A"), ("B", "not A"), ("C", "not A")]);
    let evidence = DiscreteDistribution::new([("A", p_a), ("not A", 1.0 - p_a)])?;
    Ok(discrete_pk_update(&prior, &partition, &evidence)?)
}

/// The three-horse update with P(A) raised to 2/3.
pub fn run_whitworth() -> DiscreteDistribution {
    whitworth_with_evidence(2.0 / 3.0).expect("fixed inputs are valid")
}

/// Everything a chain needs, shared read-only across repeats.
struct Setup<'a> {
    config: &'a ExperimentConfig,
    prior: VonMisesProduct,
    target: CheckedTarget<PkModel>,
    cdf: &'a (dyn Fn(f64) -> f64 + Sync),
}

impl Setup<'_> {
    fn model(&self) -> &PkModel {
        self.target.inner()
    }

    /// One chain; returns its report and the thinned coarse values.
    fn run_repeat(&self, repeat: usize) -> anyhow::Result<(RepeatReport, Vec<f64>)> {
        let sampler = self.config.sampler_config(repeat);
        let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
        rng.set_stream(INIT_STREAM);
        let init = (0..MAX_INIT_ATTEMPTS)
            .map(|_| self.prior.sample(&mut rng))
            .find(|x| self.target.logpdf(x).is_finite())
            .context("no prior draw has a finite posterior density")?;
        let chain = nuts_sample(&self.target, &init, &sampler)?;
        let kept = thin(&chain.samples, self.config.thin)?;
        let coarse = self.model().coarse_map();
        let xi = kept
            .iter()
            .map(|s| coarse.value(s))
            .collect::<pk_core::Result<Vec<f64>>>()?;
        let ks = ks_one_sample(&xi, self.cdf)?;
        let report = RepeatReport {
            seed: sampler.seed,
            ks,
            step_size: chain.step_size,
            mean_accept: chain.mean_accept(),
            divergences: chain.divergence_count,
        };
        Ok((report, xi))
    }

    fn run_all(&self) -> anyhow::Result<(Vec<RepeatReport>, Vec<f64>)> {
        let results = (0..self.config.repeats)
            .into_par_iter()
            .map(|r| {
                self.run_repeat(r).with_context(|| {
                    format!(
                        "repeat {r} (seed {}) failed; configuration:\n{}",
                        self.config.repeat_seed(r),
                        self.config.to_toml_string().unwrap_or_default()
                    )
                })
            })
            .collect::<anyhow::Result<Vec<_>>>()?;
        let mut first_xi = Vec::new();
        let mut reports = Vec::with_capacity(results.len());
        for (i, (report, xi)) in results.into_iter().enumerate() {
            if i == 0 {
                first_xi = xi;
            }
            reports.push(report);
        }
        Ok((reports, first_xi))
    }
}

fn checked(model: PkModel, center: &[f64], seed: u64) -> anyhow::Result<CheckedTarget<PkModel>> {
    Ok(CheckedTarget::new(
        model,
        center,
        GRADIENT_CHECK_SPREAD,
        seed,
    )?)
}

/// Coarse values of the first repeat under the reference-ratio and the
/// naive-product posteriors, reusing `main` where the mode matches.
fn companion_values<'a>(
    mode: RunMode,
    main: &[f64],
    build: &dyn Fn(RunMode) -> anyhow::Result<Setup<'a>>,
) -> anyhow::Result<(Vec<f64>, Vec<f64>)> {
    let run = |m: RunMode| -> anyhow::Result<Vec<f64>> {
        if m == mode {
            return Ok(main.to_vec());
        }
        Ok(build(m)?.run_repeat(0)?.1)
    };
    Ok((run(RunMode::Pk)?, run(RunMode::Ablation)?))
}

fn histogram_table(
    bins: usize,
    range: (f64, f64),
    prior: &[f64],
    pk: &[f64],
    naive: &[f64],
) -> anyhow::Result<HistogramTable> {
    let p = histogram(prior, bins, range)?;
    let q = histogram(pk, bins, range)?;
    let a = histogram(naive, bins, range)?;
    Ok(HistogramTable {
        edges: p.edges,
        prior_density: p.densities,
        posterior_density: q.densities,
        ablation_density: a.densities,
    })
}

fn finish(
    config: &ExperimentConfig,
    start: Instant,
    repeats: Vec<RepeatReport>,
    reference_fit: Option<RobustGaussianFit>,
    histograms: Option<HistogramTable>,
) -> ExperimentReport {
    ExperimentReport {
        experiment: config.experiment,
        mode: RunMode::of(config),
        config: config.clone(),
        summary: Summary::from_repeats(&repeats),
        repeats,
        reference_fit,
        histograms,
        discrete_posterior: None,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
    }
}

fn vrw_prior(config: &ExperimentConfig) -> anyhow::Result<VonMisesProduct> {
    let v = &config.vrw;
    Ok(VonMisesProduct::iid(
        VonMisesParams::new(v.mu, v.kappa)?,
        v.n_steps,
    )?)
}

fn vrw_model(config: &ExperimentConfig, mode: RunMode) -> anyhow::Result<PkModel> {
    let v = &config.vrw;
    let n = v.n_steps;
    let reference = StephensParams::new(v.kappa, n)?;
    let target: Box<dyn ScalarDensity> = match mode {
        RunMode::Identity => Box::new(reference),
        _ => Box::new(ScaledBetaParams::new(v.alpha, v.beta, n as f64)?),
    };
    Ok(PkModel::new(
        Box::new(vrw_prior(config)?),
        Box::new(ResultantLength::new(n)?),
        target,
        Box::new(reference),
        mode == RunMode::Ablation,
    )?)
}

/// Reference-ratio update of a von Mises random walk towards a scaled
/// Beta density on its end-to-end distance, checked by KS on each chain.
///
/// In identity mode the evidence is the Stephens reference itself and the
/// KS test is against the Stephens CDF.
pub fn run_vrw_experiment(config: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
    if config.experiment != ExperimentKind::Vrw {
        bail!(
            "expected a vrw configuration, got {}",
            config.experiment.name()
        );
    }
    config.validate()?;
    let start = Instant::now();
    let v = config.vrw;
    let n = v.n_steps;
    let mode = RunMode::of(config);
    let center = vec![v.mu; n];

    let stephens = StephensParams::new(v.kappa, n)?;
    let beta = ScaledBetaParams::new(v.alpha, v.beta, n as f64)?;
    let stephens_cdf = move |x: f64| stephens.cdf(x);
    let beta_cdf = move |x: f64| beta.cdf(x);
    let cdf: &(dyn Fn(f64) -> f64 + Sync) = match mode {
        RunMode::Identity => &stephens_cdf,
        _ => &beta_cdf,
    };

    let build = |m: RunMode| -> anyhow::Result<Setup<'_>> {
        Ok(Setup {
            config,
            prior: vrw_prior(config)?,
            target: checked(vrw_model(config, m)?, &center, config.seed)?,
            cdf,
        })
    };
    let setup = build(mode)?;
    let (repeats, first_xi) = setup.run_all()?;

    let histograms = if config.emit_histograms {
        let prior = vrw_prior(config)?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(PRIOR_STREAM);
        let coarse = ResultantLength::new(n)?;
        let prior_xi = (0..v.prior_samples)
            .map(|_| coarse.value(&prior.sample(&mut rng)))
            .collect::<pk_core::Result<Vec<f64>>>()?;
        let (pk, naive) = companion_values(mode, &first_xi, &build)?;
        Some(histogram_table(
            v.histogram_bins,
            (0.0, n as f64),
            &prior_xi,
            &pk,
            &naive,
        )?)
    } else {
        None
    };
    Ok(finish(config, start, repeats, None, histograms))
}

fn protein_prior(config: &ExperimentConfig) -> anyhow::Result<VonMisesProduct> {
    let p = &config.protein;
    let phi = VonMisesParams::new(p.mu_phi_deg.to_radians(), p.kappa_phi)?;
    let psi = VonMisesParams::new(p.mu_psi_deg.to_radians(), p.kappa_psi)?;
    let mut params = vec![phi; p.n_residues];
    params.extend(std::iter::repeat_n(psi, p.n_residues));
    Ok(VonMisesProduct::new(params)?)
}

fn protein_coarse(config: &ExperimentConfig) -> anyhow::Result<EndToEndDistance> {
    let p = &config.protein;
    Ok(EndToEndDistance::new(p.n_residues, p.geometry)?)
}

/// First-to-last Cα distances of forward prior draws.
pub fn protein_reference_distances(config: &ExperimentConfig) -> anyhow::Result<Vec<f64>> {
    let prior = protein_prior(config)?;
    let coarse = protein_coarse(config)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(PRIOR_STREAM);
    let draws: Vec<_> = (0..config.protein.reference_samples)
        .map(|_| prior.sample(&mut rng))
        .collect();
    let distances = draws
        .par_iter()
        .map(|w| coarse.value(w))
        .collect::<pk_core::Result<Vec<f64>>>()?;
    Ok(distances)
}

fn protein_model(
    config: &ExperimentConfig,
    mode: RunMode,
    fit: &RobustGaussianFit,
) -> anyhow::Result<PkModel> {
    let p = &config.protein;
    let reference = fit.to_gaussian()?;
    let target = match mode {
        RunMode::Identity => reference,
        _ => GaussianParams::new(p.target_mean, p.target_variance)?,
    };
    Ok(PkModel::new(
        Box::new(protein_prior(config)?),
        Box::new(protein_coarse(config)?),
        Box::new(target),
        Box::new(reference),
        mode == RunMode::Ablation,
    )?)
}

/// Reference-ratio update of a torsion-angle backbone prior towards a
/// Gaussian on the first-to-last Cα distance. The reference density is a
/// median/MAD Gaussian fit to forward prior draws.
///
/// In identity mode the evidence is the fitted reference and the KS test
/// is against the empirical CDF of the prior draws.
pub fn run_protein_experiment(config: &ExperimentConfig) -> anyhow::Result<ExperimentReport> {
    if config.experiment != ExperimentKind::Protein {
        bail!(
            "expected a protein configuration, got {}",
            config.experiment.name()
        );
    }
    config.validate()?;
    let start = Instant::now();
    let p = config.protein;
    let mode = RunMode::of(config);

    let distances = protein_reference_distances(config)?;
    let fit = estimate_reference_gaussian(&distances).with_context(|| {
        format!(
            "fitting the reference density to {} prior end-to-end distances",
            distances.len()
        )
    })?;

    let target = GaussianParams::new(p.target_mean, p.target_variance)?;
    let empirical = EmpiricalCdf::new(&distances)?;
    let target_cdf = move |x: f64| target.cdf(x);
    let empirical_cdf = move |x: f64| empirical.eval(x);
    let cdf: &(dyn Fn(f64) -> f64 + Sync) = match mode {
        RunMode::Identity => &empirical_cdf,
        _ => &target_cdf,
    };

    let mut center = vec![p.mu_phi_deg.to_radians(); p.n_residues];
    center.extend(std::iter::repeat_n(p.mu_psi_deg.to_radians(), p.n_residues));
    let build = |m: RunMode| -> anyhow::Result<Setup<'_>> {
        Ok(Setup {
            config,
            prior: protein_prior(config)?,
            target: checked(protein_model(config, m, &fit)?, &center, config.seed)?,
            cdf,
        })
    };
    let setup = build(mode)?;
    let (repeats, first_xi) = setup.run_all()?;

    let histograms = if config.emit_histograms {
        let (pk, naive) = companion_values(mode, &first_xi, &build)?;
        Some(histogram_table(
            p.histogram_bins,
            p.histogram_range,
            &distances,
            &pk,
            &naive,
        )?)
    } else {
        None
    };
    Ok(finish(config, start, repeats, Some(fit), histograms))
}

/// Backbone of the last posterior draw of the first repeat, as PDB text.
pub fn protein_posterior_pdb(config: &ExperimentConfig) -> anyhow::Result<String> {
    if config.experiment != ExperimentKind::Protein {
        bail!("coordinates are only available for the protein experiment");
    }
    config.validate()?;
    let p = config.protein;
    let mode = RunMode::of(config);
    let distances = protein_reference_distances(config)?;
    let fit = estimate_reference_gaussian(&distances)?;
    let model = protein_model(config, mode, &fit)?;
    let prior = protein_prior(config)?;
    let sampler = config.sampler_config(0);
    let mut rng = ChaCha8Rng::seed_from_u64(sampler.seed);
    rng.set_stream(INIT_STREAM);
    let init = (0..MAX_INIT_ATTEMPTS)
        .map(|_| prior.sample(&mut rng))
        .find(|x| model.logpdf(x).is_finite())
        .context("no prior draw has a finite posterior density")?;
    let chain = nuts_sample(&model, &init, &sampler)?;
    let last = chain.samples.last().context("chain produced no samples")?;
    let l = p.n_residues;
    let coords = pk_core::backbone3d::build_backbone(&last[..l], &last[l..], &p.geometry)?;
    Ok(coords.to_pdb())
}
