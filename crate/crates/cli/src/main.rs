use std::path::PathBuf;
use std::process::ExitCode;

use alphagan_cli::alphas::parse_alphas;
use alphagan_cli::checks::{run_check, CheckName};
use alphagan_cli::convergence::{cmd_convergence, SequenceKind};
use alphagan_cli::output::write_json;
use alphagan_cli::sweep::cmd_sweep_divergence;
use alphagan_cli::train::cmd_train;
use alphagan_cli::CliResult;
use clap::{Parser, Subcommand};

/// Tunable α-loss GAN toolkit.
#[derive(Parser)]
#[command(name = "alphagan", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Arimoto divergence between Ber(1/2) and Ber(θ) on a θ grid (CSV: alpha,theta,divergence).
    SweepDivergence {
        /// Comma-separated orders; `inf` for the infinite order.
        #[arg(long, default_value = "0.2,0.5,1,2,5,100,inf")]
        alphas: String,
        /// Number of θ points, evenly spaced over [0, 1].
        #[arg(long, default_value_t = 201)]
        theta_steps: usize,
        /// Output file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized numeric check; prints a JSON verdict.
    Check {
        /// equilibrium, variational, bounds, limits, metric or lin.
        name: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the verdict to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Divergence trace of a built-in sequence (CSV: n,alpha,divergence); verdicts go to stdout as JSON.
    Convergence {
        /// drift, constant or mixture.
        #[arg(long, default_value = "drift")]
        sequence: String,
        #[arg(long, default_value_t = 10_000)]
        n_max: usize,
        #[arg(long, default_value = "0.5,1,2,inf")]
        alphas: String,
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        /// CSV trace file (required: stdout carries the verdict JSON).
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a toy α-GAN from a config file; writes the report JSON.
    Train {
        #[arg(long)]
        config: PathBuf,
        /// Report file (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::SweepDivergence {
            alphas,
            theta_steps,
            out,
        } => {
            cmd_sweep_divergence(&parse_alphas(&alphas)?, theta_steps, out.as_deref())?;
            Ok(true)
        }
        Command::Check { name, trials, seed, out } => {
            let verdict = run_check(name.parse::<CheckName>()?, trials, seed)?;
            write_json(None, &verdict)?;
            if out.is_some() {
                write_json(out.as_deref(), &verdict)?;
            }
            Ok(verdict.pass)
        }
        Command::Convergence {
            sequence,
            n_max,
            alphas,
            tol,
            out,
        } => {
            let kind = sequence.parse::<SequenceKind>()?;
            let summary = cmd_convergence(kind, n_max, &parse_alphas(&alphas)?, tol, Some(&out))?;
            write_json(None, &summary)?;
            Ok(true)
        }
        Command::Train { config, out } => {
            let report = cmd_train(&config, out.as_deref())?;
            eprintln!("trained in {:.3} s", report.wall_clock.as_secs_f64());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        // a check that ran but failed its tolerance
        Ok(false) => ExitCode::from(4),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
