//! `cd2`: metric evaluation, deformation experiments, timing benchmarks and
//! plots for the CD² loss family.

mod commands;
mod config;
mod fail;
mod plot;

use std::path::PathBuf;
use std::process::ExitCode;

use cd2_core::losses::LossVariant;
use clap::{Parser, Subcommand};

use config::{BenchBlock, DeformBlock, ExperimentConfig, MetricsBlock};
use fail::CliError;

/// Environment variable overriding the output directory.
const OUT_DIR_ENV: &str = "CD2_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "cd2_out";

#[derive(Parser, Debug)]
#[command(name = "cd2", version, about = "Chamfer-distance loss family: metrics, deformation and timing")]
struct Cli {
    /// Experiment config (.toml or .json).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides CD2_OUT_DIR and the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed (overrides the config).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate CD, EMD, VC, IT and DPVI of a mesh against a point set.
    Metrics {
        /// Mesh file (.obj or .off)
        mesh: Option<PathBuf>,
        /// Point file (.xyz, .txt, .pts or .csv; mesh files give their vertices)
        points: Option<PathBuf>,
        /// Comma-separated VC ρ values.
        #[arg(long, value_delimiter = ',')]
        rho: Option<Vec<f64>>,
        /// EMD subsample size.
        #[arg(long)]
        emd_points: Option<usize>,
    },
    /// Run a template deformation experiment.
    Deform {
        /// Loss variant (cd, cd2_distance, cd2_threshold, cd2_percent).
        #[arg(long)]
        variant: Option<LossVariant>,
    },
    /// Time the CD family and exact EMD on random point pairs.
    Bench {
        /// Comma-separated ascending set sizes.
        #[arg(long, value_delimiter = ',')]
        sizes: Option<Vec<usize>>,
        #[arg(long)]
        reps: Option<usize>,
        /// Time a single loss variant, or `emd`.
        #[arg(long)]
        variant: Option<String>,
    },
    /// Render SVG charts from a deform or bench output directory.
    Report {
        /// Directory holding timeline.csv and/or bench.csv.
        dir: Option<PathBuf>,
    },
}

fn out_dir(cli_out: Option<PathBuf>, cfg: &ExperimentConfig) -> PathBuf {
    cli_out
        .or_else(|| std::env::var_os(OUT_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => config::load(path)?,
        None => ExperimentConfig::default(),
    };
    let seed = cli.seed.or(cfg.seed).unwrap_or(0);
    match cli.command {
        Command::Metrics { ref mesh, ref points, ref rho, emd_points } => {
            let block = cfg.metrics.get_or_insert_with(MetricsBlock::default);
            block.mesh = mesh.clone().or(block.mesh.take());
            block.points = points.clone().or(block.points.take());
            if let Some(r) = rho {
                block.rho = r.clone();
            }
            block.emd_points = emd_points.or(block.emd_points);
        }
        Command::Deform { .. } => {
            let block = cfg.deform.get_or_insert_with(DeformBlock::default);
            if cli.seed.is_some() || cfg.seed.is_some() {
                block.opt.seed = seed;
            }
        }
        Command::Bench { ref sizes, reps, ref variant } => {
            let block = cfg.bench.get_or_insert_with(BenchBlock::default);
            if let Some(s) = sizes {
                block.sizes = s.clone();
            }
            if let Some(r) = reps {
                block.reps = r;
            }
            if let Some(v) = variant {
                block.metrics = vec![v.clone()];
            }
        }
        Command::Report { .. } => {}
    }
    let errs = config::validate(&cfg);
    if !errs.is_empty() {
        return Err(CliError::invalid_config(errs));
    }
    let out = out_dir(cli.out.clone(), &cfg);
    match cli.command {
        Command::Metrics { .. } => commands::metrics(cfg.metrics.as_ref().expect("set above"), seed, &out),
        Command::Deform { variant } => {
            commands::deform(cfg.deform.as_ref().expect("set above"), variant, &out).map(|_| ())
        }
        Command::Bench { .. } => commands::bench(cfg.bench.as_ref().expect("set above"), seed, &out),
        Command::Report { dir } => {
            let input = dir.unwrap_or_else(|| out.clone());
            let target = cli.out.unwrap_or_else(|| input.clone());
            for path in commands::report(&input, &target)? {
                println!("{}", path.display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
