use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use morita_cli::commands::{self, AdjointSide, ComposeMode};
use morita_cli::{CliError, Outcome};

/// Exact checks of duals, adjoints and compositions of finite-dimensional
/// algebras and bimodules.
///
/// Exit codes: 0 success, 1 negative verdict on valid input, 2 input error,
/// 3 a check that must always pass failed.
#[derive(Parser)]
#[command(name = "morita", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Duality, separability, adjoint and pointed verdicts for an algebra.
    Report { algebra: PathBuf },
    /// Adjoint of a bimodule, or "none".
    Adjoint {
        bimodule: PathBuf,
        #[arg(long, value_enum, default_value = "right")]
        side: AdjointSide,
    },
    /// Composite of two bimodules.
    Compose {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value = "both")]
        mode: ComposeMode,
    },
    /// Rewrite trace and zigzag verdicts for a strip word.
    Diagram { word: PathBuf },
    /// Round trip of an algebra or pointed bimodule through its stratified presentation.
    DictRoundtrip { input: PathBuf },
    /// Runs every command over the built-in corpus.
    CorpusRun {
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Report { algebra } => commands::cmd_report(&algebra),
        Command::Adjoint { bimodule, side } => commands::cmd_adjoint(&bimodule, side),
        Command::Compose { first, second, mode } => commands::cmd_compose(&first, &second, mode),
        Command::Diagram { word } => commands::cmd_diagram(&word),
        Command::DictRoundtrip { input } => commands::cmd_dict_roundtrip(&input),
        Command::CorpusRun { jobs, out } => commands::cmd_corpus_run(jobs, out.as_deref()),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(outcome) => {
            print!("{}", outcome.json);
            ExitCode::from(outcome.status.exit_code())
        }
        Err(e) => {
            eprintln!("morita: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
