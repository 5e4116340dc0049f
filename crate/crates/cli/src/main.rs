mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use padic_kernel::{Place, Rat};

use commands::{CliError, Command};
use config::{OutputMode, Overrides, RunConfig, BUDGET_ENV};

#[derive(Parser, Debug)]
#[command(
    name = "padic-kernel",
    version,
    about = "Exact p-adic and real propagators for quadratic actions"
)]
struct Cli {
    /// key=value file with defaults for the options below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// A prime or "inf".
    #[arg(long, alias = "p", global = true)]
    place: Option<Place>,
    /// Planck constant, as an integer or num/den.
    #[arg(long, global = true, allow_hyphen_values = true)]
    h: Option<Rat>,
    #[arg(long, alias = "tolerance", global = true)]
    tol: Option<f64>,
    /// Term budget for brute-force sums.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, value_enum, global = true)]
    output: Option<OutputMode>,
    #[command(subcommand)]
    command: Command,
}

fn run(cli: Cli) -> Result<bool, CliError> {
    let flags = Overrides {
        place: cli.place,
        h: cli.h,
        tolerance: cli.tol,
        term_budget: cli.budget,
        seed: cli.seed,
        output: cli.output,
    };
    let cfg = RunConfig::resolve(cli.config.as_deref(), std::env::var(BUDGET_ENV).ok(), flags)
        .map_err(CliError::Usage)?;
    let (out, passed) = commands::run(&cli.command, &cfg)?;
    commands::emit(&out, &cfg);
    Ok(passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(cli).and_then(|passed| {
        if passed {
            Ok(())
        } else {
            Err(CliError::CheckFailed)
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            match &e {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Domain { name, message } => eprintln!("{name}: {message}"),
                CliError::Budget(msg) => eprintln!("BudgetExhausted: {msg}"),
                CliError::CheckFailed => eprintln!("verification failed"),
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
