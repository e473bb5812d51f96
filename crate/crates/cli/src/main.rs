//! Batch front-end: experiment orchestration and report emission.
//!
//! Worker parallelism is capped by the `HCMA_THREADS` environment variable.

mod commands;
mod config;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "hcma",
    version,
    about = "Geodesic-strip solver over flat complex tori with convexity verification"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Suppress progress output (files are still written).
    #[arg(long, global = true)]
    quiet: bool,
    /// Output directory override.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 20240817)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Solve the boundary-value problem and verify convexity preservation.
    Solve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run a descending-epsilon sweep and emit the convergence table.
    Sweep {
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the randomized matrix-identity suites.
    LemmaTests {
        /// Case count override for every suite (0 = vacuous pass).
        #[arg(long)]
        count: Option<usize>,
    },
    /// Re-verify a stored solution grid against its configuration.
    Report {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        solution: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::CmdContext {
        out_override: cli.out,
        quiet: cli.quiet,
        seed: cli.seed,
    };
    let code = match &cli.command {
        Command::Solve { config } => commands::cmd_solve(config, &ctx),
        Command::Sweep { config } => commands::cmd_sweep(config, &ctx),
        Command::LemmaTests { count } => commands::cmd_lemma_tests(cli.seed, *count, &ctx),
        Command::Report { config, solution } => commands::cmd_report(config, solution, &ctx),
    };
    ExitCode::from(code)
}
