//! `bloch`: Bloch groups of finite fields from the command line.
//!
//! Exit status is 0 when every check passes, 1 when a check fails and 2 on
//! usage errors (bad arguments, `q` not a prime power, field too small or
//! above the size bound).

mod report;
mod suites;

use std::process::ExitCode;

use anyhow::Result;
use bloch_core::ffield::DEFAULT_MAX_Q;
use clap::{Parser, Subcommand};

use report::Output;
use suites::Suite;

#[derive(Parser)]
#[command(name = "bloch", version, about = "Pre-Bloch and Bloch groups of finite fields")]
struct Cli {
    /// Largest field size accepted.
    #[arg(long, env = "BLOCH_MAX_Q", default_value_t = DEFAULT_MAX_Q, global = true)]
    max_q: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Structure of P(F_q) and B(F_q), or of RP and RB with --refined.
    Compute {
        /// Field size; a comma-separated list gives one report per field.
        #[arg(long, required = true, value_delimiter = ',')]
        q: Vec<u64>,
        /// Use the refined presentation over Z[F^x/(F^x)^2].
        #[arg(long)]
        refined: bool,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        out: Output,
    },
    /// Table of the discrete dilogarithm D: F_q^x -> Z/(q+1).
    Dilog {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        out: Output,
    },
    /// Run verification suites over all prime powers 4 <= q <= qmax.
    Verify {
        #[arg(long, default_value_t = 128)]
        qmax: u64,
        /// Suites to run (default: all).
        #[arg(long, value_enum, value_delimiter = ',')]
        suite: Vec<Suite>,
        #[arg(long, value_enum, default_value_t = Output::Text)]
        out: Output,
    },
}

fn run(cli: Cli) -> Result<bool> {
    let (text, passed) = match cli.command {
        Command::Compute { q, refined, out } => report::compute(&q, refined, cli.max_q, out)?,
        Command::Dilog { q, out } => report::dilog(q, cli.max_q, out)?,
        Command::Verify { qmax, suite, out } => {
            let suites = if suite.is_empty() { Suite::ALL.to_vec() } else { suite };
            report::verify(qmax, &suites, cli.max_q, out)?
        }
    };
    print!("{text}");
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
