//! Drive an experiment from `key = value` text, as the CLI does.

use antkinetics::config::KeyValues;
use antkinetics::experiments::{execute, ExperimentConfig};

const CONFIG: &str = "
kind = dispersion
chi = 1.0
tau = 0.2
k_max = 3
n_modes = 32
sweep.sigma_theta = 1e-4, 1e-3, 1e-2, 1e-1
";

fn main() -> antkinetics::Result<()> {
    let cfg = ExperimentConfig::from_key_values(&KeyValues::parse(CONFIG)?, None)?;
    println!("config hash {}", cfg.hash());
    let out = execute(&cfg, false)?;
    for row in out.summary.as_array().into_iter().flatten() {
        println!(
            "k {}  sigma_theta {:7}  rightmost {:+.6}",
            row["k"], row["sigma_theta"], row["rightmost_re"]
        );
    }
    Ok(())
}
