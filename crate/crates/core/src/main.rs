use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use halfline::cli::{self, RunConfig};
use halfline::error::Result;
use serde_json::Value;

/// Half-line boundary value problems for `q_t + a(−i∂x)^n q = 0`.
#[derive(Parser)]
#[command(name = "halfline", version)]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ray directions of the FLODE system.
    Theta {
        #[arg(long)]
        n: usize,
        /// `i`, `-i`, a real, `re,im` or `polar:φ` (e.g. `polar:-pi/6`).
        #[arg(long, allow_hyphen_values = true)]
        a: String,
        /// Boundary condition count; implied by `(n, a)` when absent.
        #[arg(long = "big-n")]
        big_n: Option<usize>,
    },
    /// Boundary values as fractional series.
    Dtn { config: PathBuf },
    /// Field on a grid, written as CSV.
    Solve { config: PathBuf },
    /// Every consistency check, as a JSON report.
    Verify { config: PathBuf },
    /// Finite-difference reference on the solve grid.
    Oracle { config: PathBuf },
}

fn run(command: Command) -> Result<(Value, bool)> {
    let load = |p: &PathBuf| RunConfig::load(p);
    Ok(match command {
        Command::Theta { n, a, big_n } => {
            let r = cli::cmd_theta(n, cli::parse_complex(&a)?, big_n)?;
            (serde_json::to_value(r).expect("serializes"), true)
        }
        Command::Dtn { config } => (cli::cmd_dtn(&load(&config)?)?, true),
        Command::Solve { config } => (cli::cmd_solve(&load(&config)?)?, true),
        Command::Oracle { config } => (cli::cmd_oracle(&load(&config)?)?, true),
        Command::Verify { config } => {
            let r = cli::cmd_verify(&load(&config)?)?;
            let pass = r.all_pass;
            (serde_json::to_value(r).expect("serializes"), pass)
        }
    })
}

fn main() -> ExitCode {
    match run(Args::parse().command) {
        Ok((report, pass)) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializes"));
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("{}", cli::error_payload(&e));
            ExitCode::from(2)
        }
    }
}
