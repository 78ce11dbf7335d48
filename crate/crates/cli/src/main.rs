use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod output;

#[derive(Debug, Parser)]
#[command(name = "phasefan", version, about = "Exact Riemann solutions for isothermal liquid-vapor flow")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Saturation table (CSV with T_K,p0_Pa,v0_m3kg,K0_Pa); defaults to the bundled water table.
    #[arg(long, global = true)]
    saturation_table: Option<PathBuf>,

    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Relative tolerance of the outer pressure solve.
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Audit the assumptions of a fluid pair. Exits 1 if any check fails.
    Validate {
        /// Pair file, or a problem config whose pair is audited.
        #[arg(long)]
        config: PathBuf,
    },
    /// Solve a Riemann problem and print a JSON summary.
    Solve {
        #[arg(long)]
        config: PathBuf,
    },
    /// Solve a Riemann problem and print the profile on the ξ = x/t grid.
    Sample {
        #[arg(long)]
        config: PathBuf,
    },
    /// Tabulate the assumption quantities of the water pairs over temperature.
    Sweep(commands::SweepArgs),
}

/// Exit 1: the problem is well posed but has no solution, or an audit failed.
/// Exit 2: the input could not be used.
pub enum Failure {
    Domain(anyhow::Error),
    Usage(anyhow::Error),
}

impl Failure {
    fn report(&self) -> ExitCode {
        let (e, code) = match self {
            Self::Domain(e) => (e, 1),
            Self::Usage(e) => (e, 2),
        };
        // core errors often embed their source in the message already
        let mut msg = e.to_string();
        for cause in e.chain().skip(1) {
            let c = cause.to_string();
            if !msg.contains(&c) {
                msg = format!("{msg}: {c}");
            }
        }
        eprintln!("error: {msg}");
        ExitCode::from(code)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Context {
        saturation_table: cli.saturation_table,
        out: cli.out,
        format: cli.format,
        tol: cli.tol,
    };
    let result = match &cli.command {
        Command::Validate { config } => commands::validate(&ctx, config),
        Command::Solve { config } => commands::solve_cmd(&ctx, config),
        Command::Sample { config } => commands::sample(&ctx, config),
        Command::Sweep(args) => commands::sweep(&ctx, args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
