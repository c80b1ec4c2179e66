use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use pk_cli::experiments::protein_posterior_pdb;
use pk_cli::thresholds::check_report;
use pk_cli::{emit_report, run_experiment, ExperimentConfig, ExperimentKind, ReportFormat};

#[derive(Parser)]
#[command(name = "pk", version, about = "Probability-kinematics experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Planar von Mises random walk, evidence on the end-to-end distance.
    Vrw(RunArgs),
    /// Torsion-angle backbone, evidence on the first-to-last Cα distance.
    Protein(RunArgs),
    /// Three-horse discrete update.
    Whitworth(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML configuration file.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    repeats: Option<usize>,
    /// Drop the reference density (naive product).
    #[arg(long)]
    ablation: bool,
    /// Use the reference density as the evidence.
    #[arg(long)]
    identity_check: bool,
    /// Report file; stdout if omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: ReportFormat,
    /// Include prior / posterior / ablation histograms.
    #[arg(long)]
    emit_histograms: bool,
    /// Write a PDB file of a posterior backbone next to the report.
    #[arg(long)]
    emit_coords: bool,
    /// Exit with status 2 if the results miss the acceptance bands.
    #[arg(long = "assert")]
    assert_thresholds: bool,
}

fn resolve_config(kind: ExperimentKind, args: &RunArgs) -> anyhow::Result<ExperimentConfig> {
    let mut config = match &args.config {
        Some(path) => {
            let c = ExperimentConfig::load(path)?;
            if c.experiment != kind {
                let text = std::fs::read_to_string(path)?;
                if text
                    .lines()
                    .any(|l| l.trim_start().starts_with("experiment"))
                {
                    bail!(
                        "{} configures the {} experiment, not {}",
                        path.display(),
                        c.experiment.name(),
                        kind.name()
                    );
                }
            }
            c
        }
        None => ExperimentConfig::default(),
    };
    config.experiment = kind;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(repeats) = args.repeats {
        config.repeats = repeats;
    }
    config.ablation |= args.ablation;
    config.identity_check |= args.identity_check;
    config.emit_histograms |= args.emit_histograms;
    config.validate()?;
    Ok(config)
}

fn run(kind: ExperimentKind, args: &RunArgs) -> anyhow::Result<bool> {
    let config = resolve_config(kind, args)?;
    if args.emit_coords && kind != ExperimentKind::Protein {
        bail!("--emit-coords is only available for the protein experiment");
    }
    let report = run_experiment(&config)?;
    emit_report(&report, args.format, args.out.as_deref())?;
    if args.emit_coords {
        let pdb_path = match &args.out {
            Some(out) => out.with_extension("pdb"),
            None => PathBuf::from("posterior.pdb"),
        };
        let pdb = protein_posterior_pdb(&config)?;
        std::fs::write(&pdb_path, pdb)
            .with_context(|| format!("writing {}", pdb_path.display()))?;
    }
    if args.assert_thresholds {
        let failures = check_report(&report);
        for f in &failures {
            eprintln!("acceptance: {f}");
        }
        return Ok(failures.is_empty());
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Vrw(a) => (ExperimentKind::Vrw, a),
        Command::Protein(a) => (ExperimentKind::Protein, a),
        Command::Whitworth(a) => (ExperimentKind::Whitworth, a),
    };
    match run(kind, args) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
