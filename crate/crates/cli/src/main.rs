//! `malmsten` command-line front end.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 quadrature
//! non-convergence. Data goes to stdout, diagnostics to stderr.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use malmsten_cli::commands::{
    self, CommandError, EvalArgs, Format, Outcome, QuadArgs, Status, TableArgs, VerifyArgs,
};

#[derive(Debug, Parser)]
#[command(
    name = "malmsten",
    version,
    about = "Closed forms and quadrature checks for Malmsten-type log integrals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a closed form
    Eval(EvalArgs),
    /// Recompute an integral by double-exponential quadrature
    Quad(QuadArgs),
    /// Run every proof-chain identity over a grid of a values
    Verify(VerifyArgs),
    /// Tabulate Δ(a) closed form against quadrature on a uniform grid
    Table(TableArgs),
}

const EXIT_VERIFICATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

fn emit(outcome: &Outcome, format: Format) -> io::Result<()> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match format {
        Format::Json => {
            let json = outcome.record.to_json().map_err(io::Error::other)?;
            writeln!(out, "{json}")?;
        }
        Format::Csv => outcome
            .record
            .write_csv(&mut out)
            .map_err(io::Error::other)?,
    }
    out.flush()
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };

    let (result, format) = match &cli.command {
        Command::Eval(args) => (commands::eval(args), args.format),
        Command::Quad(args) => (commands::quad(args), args.target.format),
        Command::Verify(args) => (commands::verify(args), args.format),
        Command::Table(args) => (commands::table(args), args.format),
    };

    let outcome = match result {
        Ok(outcome) => outcome,
        Err(CommandError::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(CommandError::Core(e)) if e.is_precondition() => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
        Err(CommandError::Core(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NOT_CONVERGED);
        }
    };

    if let Err(e) = emit(&outcome, format) {
        eprintln!("error: writing output: {e}");
        return ExitCode::FAILURE;
    }

    match outcome.status {
        Status::Ok => ExitCode::SUCCESS,
        Status::VerificationFailed => {
            eprintln!("verification failed: at least one identity did not hold within tolerance");
            ExitCode::from(EXIT_VERIFICATION)
        }
        Status::NotConverged => {
            eprintln!("quadrature did not converge within the requested tolerance");
            ExitCode::from(EXIT_NOT_CONVERGED)
        }
    }
}
