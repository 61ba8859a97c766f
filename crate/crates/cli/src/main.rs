//! `leafcoh`: batch front-end for scenes.
//!
//! Exit codes: 0 success, 1 violation found, 2 input error, 3 precondition
//! failure.

mod commands;
mod scene;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
    /// Report to emit before failing, if any.
    pub report: Option<String>,
}

impl Failure {
    pub fn input(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
            report: None,
        }
    }

    pub fn from_core(context: &str, e: leafcoh::Error) -> Self {
        use leafcoh::Error::*;
        let code = match e {
            Parse { .. }
            | UnknownVariable { .. }
            | DegreeAboveBudget { .. }
            | Json(_)
            | DimensionMismatch(_)
            | IndexOutOfRange { .. }
            | InvalidMorphism(_)
            | InvalidPair(_)
            | BidegreeMismatch(_) => 2,
            NotClosed(_) | NonUnit => 3,
            _ => 1,
        };
        Failure {
            code,
            message: format!("{context}: {e}"),
            report: None,
        }
    }
}

/// Output of a successful run: the text to emit and the exit code.
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Parser, Debug)]
#[command(name = "leafcoh", version, about = "Twisted leafwise Dolbeault, Bott-Chern and Aeppli computations")]
struct Cli {
    /// Scene file (JSON).
    #[arg(long, global = true)]
    scene: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Overrides the scene seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the scene trial count.
    #[arg(long, global = true)]
    trials: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a randomized identity suite.
    Check {
        /// operators, leibniz, rescale, intertwine or pairing.
        #[arg(long)]
        suite: String,
    },
    /// Tabulate cohomology dimensions over the scene grid.
    Cohomology {
        /// dolbeault, k, bc, aeppli, canonical or untwisted.
        #[arg(long, default_value = "dolbeault")]
        variant: String,
        /// Weight shift for `--variant k`.
        #[arg(long)]
        k: Option<i64>,
    },
    /// Build and verify a long exact sequence.
    Sequence {
        /// mv, relative, corollary28 or delta.
        #[arg(long)]
        kind: String,
    },
    /// Search for a primitive of the scene target.
    Solve {
        /// Weight shift when the scene operator is `dbar_f_k`.
        #[arg(long)]
        k: Option<i64>,
    },
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    let path = cli.scene.as_ref().ok_or_else(|| Failure::input("--scene is required"))?;
    let scene = scene::Scene::load(path)?;
    let opts = commands::Options {
        format: cli.format,
        seed: cli.seed,
        trials: cli.trials,
    };
    match &cli.command {
        Command::Check { suite } => commands::check(&scene, suite, &opts),
        Command::Cohomology { variant, k } => commands::cohomology(&scene, variant, *k, &opts),
        Command::Sequence { kind } => commands::sequence(&scene, kind, &opts),
        Command::Solve { k } => commands::solve(&scene, *k, &opts),
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    match &cli.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => match emit(&cli, &outcome.text) {
            Ok(()) => ExitCode::from(outcome.code),
            Err(f) => {
                eprintln!("error: {}", f.message);
                ExitCode::from(f.code)
            }
        },
        Err(f) => {
            if let Some(report) = &f.report {
                if let Err(e) = emit(&cli, report) {
                    eprintln!("error: {}", e.message);
                }
            }
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
