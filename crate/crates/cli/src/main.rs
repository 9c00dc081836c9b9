use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qgame_cli::{
    cmd_braid_verify, cmd_classical, cmd_entangle, cmd_pennyflip, cmd_qgame, cmd_ssqm, CliError, QgameAction,
    RunReport, SsqmOptions, DEFAULT_TOL,
};
use qgame_core::ssqm::Superpotential;

#[derive(Parser)]
#[command(name = "qgame", version, about = "Quantum 2x2 games, braid gates and SSQM spectra")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Report destination (stdout when absent).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Seed for randomized property sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Penny-flip game with a Hadamard-playing Bob.
    Pennyflip {
        /// Probability that Alice flips the coin.
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
    /// Classical analysis of a game file.
    Classical { path: PathBuf },
    /// Quantum game on a game file.
    Qgame {
        path: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        gamma1: f64,
        #[arg(long, default_value_t = 0.0)]
        gamma2: f64,
        #[command(subcommand)]
        action: QgameCommand,
    },
    Braid {
        #[command(subcommand)]
        action: BraidCommand,
    },
    Ssqm {
        #[command(subcommand)]
        action: SsqmCommand,
    },
    /// Entanglement of a two-qubit state given as re/im pairs of c00 c01 c10 c11.
    Entangle {
        #[arg(num_args = 8, allow_negative_numbers = true, required = true)]
        amplitudes: Vec<f64>,
    },
}

#[derive(Subcommand)]
enum QgameCommand {
    Payoff {
        #[arg(long, default_value_t = 0.0)]
        theta_a: f64,
        #[arg(long, default_value_t = 0.0)]
        phi_a: f64,
        #[arg(long, default_value_t = 0.0)]
        theta_b: f64,
        #[arg(long, default_value_t = 0.0)]
        phi_b: f64,
    },
    Nash {
        #[arg(long, default_value_t = 32)]
        grid: usize,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
    },
    Sweep {
        #[arg(long, default_value_t = 16)]
        grid_gamma: usize,
        #[arg(long, default_value_t = 16)]
        grid_strategy: usize,
        #[arg(long, default_value_t = 1e-6)]
        epsilon: f64,
        /// Where to write the sweep CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BraidCommand {
    /// Runs the braid verification suite.
    Verify {
        /// Use the matrices exactly as transcribed, without corrections.
        #[arg(long)]
        strict_paper: bool,
    },
}

#[derive(Subcommand)]
enum SsqmCommand {
    /// Partner spectra and superalgebra residuals.
    Spectrum {
        /// zero, linear, tanh or poly:c0,c1,...
        #[arg(long, default_value = "linear")]
        potential: Superpotential,
        #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
        xmin: f64,
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        xmax: f64,
        #[arg(long, default_value_t = 1000)]
        n: usize,
        #[arg(long, default_value_t = 5)]
        levels: usize,
        #[arg(long, default_value_t = 1e-8)]
        pair_tol: f64,
    },
}

fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let Common { tol, seed, .. } = cli.common;
    match &cli.command {
        Command::Pennyflip { p } => cmd_pennyflip(*p, tol),
        Command::Classical { path } => cmd_classical(path, tol),
        Command::Qgame {
            path,
            gamma1,
            gamma2,
            action,
        } => {
            let action = match *action {
                QgameCommand::Payoff {
                    theta_a,
                    phi_a,
                    theta_b,
                    phi_b,
                } => QgameAction::Payoff {
                    theta_a,
                    phi_a,
                    theta_b,
                    phi_b,
                },
                QgameCommand::Nash { grid, epsilon } => QgameAction::Nash { grid, epsilon },
                QgameCommand::Sweep {
                    grid_gamma,
                    grid_strategy,
                    epsilon,
                    ref csv,
                } => QgameAction::Sweep {
                    grid_gamma,
                    grid_strategy,
                    epsilon,
                    csv: csv.clone(),
                },
            };
            cmd_qgame(path, (*gamma1, *gamma2), &action, tol, seed)
        }
        Command::Braid {
            action: BraidCommand::Verify { strict_paper },
        } => cmd_braid_verify(*strict_paper),
        Command::Ssqm {
            action:
                SsqmCommand::Spectrum {
                    potential,
                    xmin,
                    xmax,
                    n,
                    levels,
                    pair_tol,
                },
        } => cmd_ssqm(&SsqmOptions {
            potential: potential.clone(),
            x_min: *xmin,
            x_max: *xmax,
            n: *n,
            levels: *levels,
            pair_tol: *pair_tol,
            algebra_tol: tol,
        }),
        Command::Entangle { amplitudes } => {
            let amps: [f64; 8] = amplitudes
                .as_slice()
                .try_into()
                .map_err(|_| CliError::Invalid("expected 8 amplitudes".into()))?;
            cmd_entangle(amps, tol)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = match run(&cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let json = report.to_json();
    match &cli.common.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => print!("{json}"),
    }
    for (name, r) in report.failing() {
        eprintln!("FAIL {name}: {:.3e} > {:.3e}", r.value, r.tolerance);
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
