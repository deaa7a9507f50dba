//! `qfuzzy`: encode fuzzy sets, evaluate pipelines, report on and sample
//! register states. All input and output is JSON.
//!
//! Exit codes: 0 success, 2 invalid input, 3 qubit cap exceeded,
//! 4 expression parse or evaluation error.

mod commands;
mod error;
mod input;

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qfuzzy::statevec::DEFAULT_QUBIT_CAP;
use qfuzzy::QubitCap;
use serde::Serialize;

use commands::{Overrides, DEFAULT_TRIALS};
use error::CliError;
use input::{read_text, ModeArg};

#[derive(Debug, Parser)]
#[command(name = "qfuzzy", version, about = "Quantum fuzzy sets on a simulated qubit register")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Input JSON file; standard input when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Output file; standard output when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Seed for every random draw [default: 0].
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Number of measurement shots or defuzzifier trials [default: 10000].
    #[arg(long, visible_alias = "trials", global = true)]
    shots: Option<u64>,

    /// Evaluation mode for `eval`; overrides the pipeline file.
    #[arg(long, value_enum, global = true)]
    mode: Option<ModeArg>,

    /// Largest register allowed, in qubits [default: 24].
    #[arg(long, global = true)]
    qubit_cap: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode a fuzzy set `{"universe_size", "memberships"}` as a register state.
    Encode,
    /// Evaluate a pipeline file `{"universe_size", "sets", "expression", ...}`.
    Eval,
    /// Entanglement report and Bloch points of a register state.
    Report,
    /// Measure every qubit of a register state `--shots` times.
    Sample,
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let text = read_text(cli.input.as_deref())?;
    let cap = QubitCap(cli.qubit_cap.unwrap_or(DEFAULT_QUBIT_CAP));
    match cli.command {
        Command::Encode => emit(&commands::cmd_encode(&text, cap)?, cli.output.as_deref()),
        Command::Eval => {
            let over = Overrides { seed: cli.seed, trials: cli.shots, mode: cli.mode, qubit_cap: cli.qubit_cap };
            emit(&commands::cmd_eval(&text, &over)?, cli.output.as_deref())
        }
        Command::Report => emit(&commands::cmd_report(&text, cap)?, cli.output.as_deref()),
        Command::Sample => {
            let out = commands::cmd_sample(&text, cli.shots.unwrap_or(DEFAULT_TRIALS), cli.seed.unwrap_or(0), cap)?;
            emit(&out, cli.output.as_deref())
        }
    }
}

fn emit<T: Serialize>(value: &T, output: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(CliError::validation)?;
    text.push('\n');
    match output {
        Some(p) => fs::write(p, text).map_err(|e| CliError::validation(format!("cannot write {}: {e}", p.display()))),
        None => io::stdout()
            .lock()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::validation(format!("cannot write standard output: {e}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
