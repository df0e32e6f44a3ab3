//! `staggered`: run lattice experiments from a JSON configuration.
//!
//! Exit status: 0 on success, 1 for usage or configuration errors, 2 when
//! an input violates an operation's precondition, 3 when a computed result
//! breaks a guaranteed tolerance.

mod config;
mod output;
mod run;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand};

use config::{Experiment, Format, RunConfig};

#[derive(Debug, Parser)]
#[command(name = "staggered", version, about = "Hopping-amplitude lattice experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; defaults to the 4x4x4 staggered field.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Seed for randomized states and gauges.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for parallel sections.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
enum Command {
    /// Dense eigenvalues of the Hamiltonian.
    Spectrum,
    /// Bloch bands over the 2x2x2 cell.
    Bands,
    /// Unitary evolution of a random state or Gaussian packet.
    Evolve,
    /// Check one symmetry operation modulo gauge.
    VerifySymmetry,
    /// Gauge classes of symmetric configurations.
    Classify,
    /// Maximal gauge fixing and its residual stabilizer.
    GaugeFix,
    /// Scalar versus staggered packet displacement.
    Staticity,
    /// Lattice field versus component Dirac operator.
    SpinorCheck,
    /// Parity residual of the Hamiltonian.
    Parity,
}

impl Command {
    fn experiment(self) -> Experiment {
        match self {
            Command::Spectrum => Experiment::Spectrum,
            Command::Bands => Experiment::Bands,
            Command::Evolve => Experiment::Evolve,
            Command::VerifySymmetry => Experiment::VerifySymmetry,
            Command::Classify => Experiment::Classify,
            Command::GaugeFix => Experiment::GaugeFix,
            Command::Staticity => Experiment::Staticity,
            Command::SpinorCheck => Experiment::SpinorCheck,
            Command::Parity => Experiment::Parity,
        }
    }
}

enum Failure {
    Usage(anyhow::Error),
    Library(staggered::Error),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        use staggered::Error as E;
        match self {
            Failure::Usage(_) | Failure::Library(E::Format(_)) => 1,
            Failure::Library(E::Numerical { .. }) => 3,
            Failure::Library(_) => 2,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Usage(e)
    }
}

impl From<staggered::Error> for Failure {
    fn from(e: staggered::Error) -> Self {
        Failure::Library(e)
    }
}

fn load_config(cli: &Cli) -> anyhow::Result<RunConfig> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str(&text).with_context(|| format!("invalid configuration {}", path.display()))?
        }
        None => RunConfig::default(),
    };
    let experiment = cli.command.experiment();
    if let Some(listed) = config.experiment {
        anyhow::ensure!(
            listed == experiment,
            "configuration is for {listed:?} but the {experiment:?} subcommand was given"
        );
    }
    config.experiment = Some(experiment);
    if let Some(out) = &cli.out {
        config.output.path = Some(out.clone());
    }
    if let Some(format) = cli.format {
        config.output.format = format;
    }
    if let Some(seed) = cli.seed {
        config.params.seed = Some(seed);
    }
    Ok(config)
}

fn execute(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the thread pool")?;
    }
    let config = load_config(&cli)?;
    let experiment = cli.command.experiment();
    let report = run::run(experiment, &config)?;
    // The destination does not affect results, so it stays out of the hash.
    let mut hashed = config.clone();
    hashed.output.path = None;
    let name = serde_json::to_value(experiment).context("naming the experiment")?;
    let text = output::render(&report, &hashed, name.as_str().unwrap_or_default(), config.output.format);
    match &config.output.path {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => {
            let mut stdout = io::stdout().lock();
            match stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()) {
                Err(e) if e.kind() == io::ErrorKind::BrokenPipe => {}
                other => other.context("writing to standard output")?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(e) => eprintln!("error: {e:#}"),
                Failure::Library(e) => eprintln!("error: {e}"),
            }
            ExitCode::from(f.exit_code())
        }
    }
}
