//! `plusform build | analyze | report`.
//!
//! Exit status: 0 success, 2 configuration or input error, 3 failed
//! mathematical certificate, 4 fit non-convergence, 1 anything else.

mod analyze;
mod build;
mod config;
mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use plusform::lab::ModelKind;

use config::{parse_interval, validate_weight, RunConfig, DEFAULT_BOUND};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("missing inputs: {}", .0.join(", "))]
    Missing(Vec<String>),
    #[error("{}", .0.join("\n"))]
    FitFailures(Vec<String>),
    #[error(transparent)]
    Core(#[from] plusform::Error),
}

impl CliError {
    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Core(plusform::Error::Io { path: path.to_path_buf(), source: e })
    }

    fn exit_code(&self) -> u8 {
        use plusform::Error as E;
        match self {
            CliError::Config(_) | CliError::Missing(_) => 2,
            CliError::FitFailures(_) => 4,
            CliError::Core(e) if e.is_certificate_failure() => 3,
            CliError::Core(E::InvalidArgument(_) | E::Parse { .. } | E::Io { .. }) => 2,
            CliError::Core(_) => 1,
        }
    }
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

#[derive(Parser)]
#[command(name = "plusform", version, about = "Plus-space eigenforms and the distribution of their coefficients")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Output (run) directory.
    #[arg(long, default_value = "run")]
    out: PathBuf,
    /// Worker threads, 0 for one per core.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Seed recorded in the reports.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Compute eigenforms of weight k/2 and write their normalised coefficients.
    Build {
        /// Weight numerator (odd, 13..=61, not 15).
        #[arg(long)]
        weight: Vec<u32>,
        /// Largest index n.
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u64,
        /// Depth of the Shimura-lift certificates.
        #[arg(long, default_value_t = plusform::shimura::DEFAULT_DEPTH)]
        lift_depth: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Histogram, fit and sign statistics for coefficient files.
    Analyze {
        files: Vec<PathBuf>,
        /// Box widths, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = config::DEFAULT_WIDTHS)]
        widths: Vec<f64>,
        /// Models, comma separated (GGG, GG, Laplace, Cauchy).
        #[arg(long, value_delimiter = ',')]
        models: Vec<ModelKind>,
        /// Number of consecutive subsets to fit separately.
        #[arg(long, default_value_t = 1)]
        subsets: usize,
        /// Compare fits on all indices with fits on prime indices.
        #[arg(long)]
        prime_only: bool,
        /// Interval lo:hi for an independence ratio; repeatable.
        #[arg(long, value_parser = parse_interval)]
        interval: Vec<(f64, f64)>,
        #[command(flatten)]
        common: Common,
    },
    /// Summarise a run directory and write plot scripts.
    Report {
        /// Run directory (defaults to --out).
        dir: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

fn base(common: Common) -> RunConfig {
    RunConfig { out: common.out, threads: common.threads, seed: common.seed, ..Default::default() }
}

fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Build { weight, bound, lift_depth, common } => {
            if weight.is_empty() {
                return Err(CliError::Config("build needs --weight".into()));
            }
            for &w in &weight {
                validate_weight(w)?;
            }
            let threads = common.threads;
            for w in weight {
                let cfg = RunConfig { two_k: Some(w), bound, lift_depth, ..base(common.clone()) };
                cfg.validate()?;
                let r = plusform::exec::with_threads(threads, || build::run(&cfg))?;
                for f in &r.forms {
                    println!("{}\t{}\t{} coefficients\tlift certified", f.label, f.file, f.count);
                }
            }
            Ok(())
        }
        Command::Analyze { files, widths, models, subsets, prime_only, interval, common } => {
            let mut cfg = RunConfig { widths, subsets, prime_only, ..base(common) };
            if !models.is_empty() {
                cfg.models = models;
            }
            if !interval.is_empty() {
                cfg.intervals = interval;
            }
            cfg.validate()?;
            let reports = plusform::exec::with_threads(cfg.threads, || analyze::run(&files, &cfg))?;
            let mut failures = Vec::new();
            for (r, f) in reports.iter().zip(&files) {
                println!("{}\t{} values\t{}", r.label, r.count, analyze::analysis_dir(&cfg.out, f).display());
                failures.extend(r.fit_failures());
            }
            if failures.is_empty() {
                Ok(())
            } else {
                Err(CliError::FitFailures(failures))
            }
        }
        Command::Report { dir, common } => {
            let dir = dir.unwrap_or(common.out);
            match report::run(&dir)? {
                report::Status::NothingToReport => println!("nothing to report in {}", dir.display()),
                report::Status::Written { report, plots } => {
                    println!("{}", report.display());
                    for p in plots {
                        println!("{}", p.display());
                    }
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("plusform: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
