use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use antkinetics::config::KeyValues;
use antkinetics::experiments::{
    all_passed, execute, execute_eigen, ExperimentConfig, ExperimentKind, Outcome,
};

#[derive(Parser)]
#[command(
    name = "antkinetics",
    version,
    about = "Kinetic ant-trail model: simulations and linear stability"
)]
struct Cli {
    /// `key = value` configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory for tables, streams, checkpoints and the manifest.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long = "rng-seed", global = true)]
    rng_seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate one trajectory.
    Simulate {
        /// Continue from the newest checkpoint in `--out`.
        #[arg(long)]
        resume: bool,
    },
    /// Rightmost eigenvalue over wavenumbers and the sweep grid.
    Dispersion,
    /// Leading eigenvalues of the truncated operator per wavenumber.
    Eigen,
    /// Instability margin, dispersion root and viscous eigenvalue per wavenumber.
    Scan,
    /// Growth of the four orthogonal eigenfunction seeds against the prediction.
    GrowthMatch,
    /// Decay or growth from random data across interaction strengths.
    StabilitySweep,
}

fn load(cli: &Cli, kind: ExperimentKind) -> antkinetics::Result<ExperimentConfig> {
    let kv = match &cli.config {
        Some(p) => KeyValues::load(p).map_err(|e| match e {
            antkinetics::Error::Io(io) => antkinetics::Error::Format {
                path: p.clone(),
                message: io.to_string(),
            },
            other => other,
        })?,
        None => KeyValues::new(),
    };
    let mut cfg = ExperimentConfig::from_key_values(&kv, Some(kind))?;
    if let Some(out) = &cli.out {
        cfg.output_dir = Some(out.clone());
    }
    if let Some(seed) = cli.rng_seed {
        cfg.rng_seed = seed;
    }
    Ok(cfg)
}

fn dispatch(cli: &Cli) -> antkinetics::Result<Outcome> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| antkinetics::Error::InvalidParameter(e.to_string()))?;
    }
    match &cli.command {
        Command::Simulate { resume } => execute(&load(cli, ExperimentKind::Simulate)?, *resume),
        Command::Dispersion => execute(&load(cli, ExperimentKind::DispersionMap)?, false),
        Command::Eigen => execute_eigen(&load(cli, ExperimentKind::InstabilityScan)?),
        Command::Scan => execute(&load(cli, ExperimentKind::InstabilityScan)?, false),
        Command::GrowthMatch => execute(&load(cli, ExperimentKind::GrowthMatch)?, false),
        Command::StabilitySweep => execute(&load(cli, ExperimentKind::StabilitySweep)?, false),
    }
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(outcome) => {
            match serde_json::to_string_pretty(&outcome) {
                Ok(s) => println!("{s}"),
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(1);
                }
            }
            for c in &outcome.checks {
                eprintln!(
                    "{} {}: {}",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.detail
                );
            }
            if all_passed(&outcome.checks) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
