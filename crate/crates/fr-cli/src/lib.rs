//! Command-line front end for the extended Wigner's-friend artifact.
//!
//! Four verbs share one binary: `simulate` draws seeded protocol rounds from
//! the exact outcome table, `derive` runs the epistemic engine in either
//! trust mode and prints a certificate, `check` re-verifies every exact
//! quantum identity, and `report` combines both derivations into a single
//! verdict.  `--format jsonl` switches any verb from human text to
//! line-delimited JSON records; identical arguments (and seed) always produce
//! byte-identical standard output.  Set `FRSIM_LOG=1` to get timing
//! diagnostics on standard error.

mod check;
mod derive_cmd;
mod report_cmd;
mod simulate;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

/// How command output is rendered.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    /// Human-readable text (the default).
    Text,
    /// Line-delimited JSON records, one per line.
    Jsonl,
}

/// Which trust discipline the derivation engine applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Unrestricted trust: knowledge transfers across every measurement boundary.
    Naive,
    /// Context-tagged trust: transfers across incompatible bases are blocked.
    Contextual,
}

#[derive(Parser, Debug)]
#[command(
    name = "frsim",
    version,
    about = "Exact simulator and epistemic derivation engine for the extended Wigner's-friend protocol",
    long_about = "Exact simulator and epistemic derivation engine for the extended \
Wigner's-friend protocol.\n\nAll quantum amplitudes are exact elements of the field \
Q(sqrt2, sqrt3); every derivation is emitted as a checkable trace.  Set FRSIM_LOG=1 \
for timing diagnostics on standard error."
)]
pub struct Cli {
    /// Output format for all verbs.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Draw protocol rounds from the exact outcome table until one halts.
    Simulate {
        /// Seed for the deterministic generator.
        #[arg(long)]
        seed: u64,
        /// Cap on the number of rounds drawn per run.
        #[arg(long)]
        max_trials: u64,
        /// Fan out this many independent runs (seeds seed, seed+1, ...) in parallel.
        #[arg(long)]
        jobs: Option<u64>,
    },
    /// Run the epistemic engine and print a derivation or block certificate.
    Derive {
        /// Trust discipline to saturate under.
        #[arg(long, value_enum)]
        mode: Mode,
        /// Agent whose clash to derive (naive mode only; default W2).
        #[arg(long)]
        agent: Option<String>,
        /// Saturation depth budget (contextual mode only; default is the
        /// naive closure depth plus a safety margin).
        #[arg(long)]
        depth: Option<usize>,
    },
    /// Re-verify every exact quantum identity and print PASS/FAIL per line.
    Check,
    /// Run both derivations and print the combined verdict report.
    Report,
}

/// A command failure: message for standard error, process exit code, and
/// (for `check`) any partial standard output that should still be shown.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
    pub stdout: Option<String>,
}

impl CliError {
    fn usage(message: impl Into<String>) -> CliError {
        CliError {
            code: 2,
            message: message.into(),
            stdout: None,
        }
    }

    fn failure(message: impl Into<String>) -> CliError {
        CliError {
            code: 1,
            message: message.into(),
            stdout: None,
        }
    }
}

impl From<fr_derivation::Error> for CliError {
    fn from(e: fr_derivation::Error) -> CliError {
        CliError::failure(e.to_string())
    }
}

impl From<fr_protocol::Error> for CliError {
    fn from(e: fr_protocol::Error) -> CliError {
        CliError::failure(e.to_string())
    }
}

impl From<quantum_core::Error> for CliError {
    fn from(e: quantum_core::Error) -> CliError {
        CliError::failure(e.to_string())
    }
}

/// Parse `argv`, execute, and write the result to `out`.  Returns the
/// process exit code: 0 on success, 1 on a check or derivation failure,
/// 2 on a usage error.
pub fn run<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests arrive here too; they are not errors.
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let started = Instant::now();
    let verb = match &cli.command {
        Command::Simulate { .. } => "simulate",
        Command::Derive { .. } => "derive",
        Command::Check => "check",
        Command::Report => "report",
    };
    let outcome = execute(&cli);
    log_elapsed(verb, started);
    match outcome {
        Ok(text) => {
            if out.write_all(text.as_bytes()).is_err() {
                return 1;
            }
            0
        }
        Err(e) => {
            if let Some(text) = &e.stdout {
                let _ = out.write_all(text.as_bytes());
            }
            eprintln!("frsim: {}", e.message);
            e.code
        }
    }
}

fn execute(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Simulate {
            seed,
            max_trials,
            jobs,
        } => simulate::run(*seed, *max_trials, *jobs, cli.format),
        Command::Derive { mode, agent, depth } => {
            derive_cmd::run(*mode, agent.as_deref(), *depth, cli.format)
        }
        Command::Check => check::run(cli.format),
        Command::Report => report_cmd::run(cli.format),
    }
}

fn log_elapsed(verb: &str, started: Instant) {
    if std::env::var("FRSIM_LOG").is_ok_and(|v| !v.is_empty() && v != "0") {
        eprintln!("frsim: {verb} finished in {:?}", started.elapsed());
    }
}
