//! `weakbea`: reproducible numerical experiments on the modified-equation
//! expansion of the Euler-Maruyama scheme on the circle.
//!
//! Every command writes `report.json` (plus CSV tables and a gnuplot script)
//! to the output directory and exits with 0 when all enforced checks pass, 1
//! on a numerical failure and 2 on a configuration error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use weakbea::Execution;

use report::Report;

#[derive(Debug, Parser)]
#[command(name = "weakbea", version, about)]
struct Cli {
    /// TOML experiment file; defaults describe `dX = -sin X dt + sqrt(2) dW`.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for `report.json` and the tables.
    #[arg(long, global = true, default_value = "results")]
    out: PathBuf,
    /// `key.path=value` edits applied on top of the config; repeatable.
    #[arg(long = "override", global = true, value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Run every data-parallel loop on the current thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Suppress the per-check summary on stdout.
    #[arg(long, short, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build A_n and L_n and verify their algebraic identities.
    Expand,
    /// Stationary and modified invariant densities.
    Invariant,
    /// One-step and long-time weak convergence orders.
    Converge,
    /// Monte Carlo checks against quadrature and kernel expectations.
    Simulate,
    /// Exponential mixing rates of the continuous and discrete semigroups.
    Mixing,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Expand => "expand",
            Command::Invariant => "invariant",
            Command::Converge => "converge",
            Command::Simulate => "simulate",
            Command::Mixing => "mixing",
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match config::load(cli.config.as_deref(), &cli.overrides) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    };
    let mut rep = match Report::new(&cli.out, cli.command.name(), cfg.clone()) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: cannot create {}: {e}", cli.out.display());
            return ExitCode::from(2);
        }
    };
    let run = match cli.command {
        Command::Expand => commands::expand(&cfg, &mut rep),
        Command::Invariant => commands::invariant(&cfg, &mut rep, exec),
        Command::Converge => commands::converge(&cfg, &mut rep, exec),
        Command::Simulate => commands::simulate(&cfg, &mut rep, exec),
        Command::Mixing => commands::mixing(&cfg, &mut rep, exec),
    };
    if let Err(e) = run {
        eprintln!("error: {e}");
        rep.set_error(e.to_string());
    }
    if !cli.quiet {
        for c in rep.checks() {
            let verdict = match (c.pass, c.enforced) {
                (true, _) => "PASS",
                (false, true) => "FAIL",
                (false, false) => "SOFT",
            };
            let value = c.value.map_or("n/a".to_string(), |v| format!("{v:.4e}"));
            println!(
                "{verdict} {} = {value} {} {}",
                c.name, c.comparison, c.threshold
            );
        }
    }
    match rep.finish() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: cannot write report: {e}");
            ExitCode::from(1)
        }
    }
}
