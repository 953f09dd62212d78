//! Late-time rate of `‖f − f*‖` from random data as the interaction grows.

use antkinetics::experiments::{run_stability_sweep, ExperimentConfig, ExperimentKind};
use antkinetics::spectral::SpectralGrid;

fn main() -> antkinetics::Result<()> {
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::StabilitySweep);
    cfg.grid = SpectralGrid::cube(16)?;
    cfg.params.sigma_x = 0.01;
    cfg.params.sigma_theta = 0.01;
    cfg.t_end = 60.0;
    cfg.k_max = 4;
    cfg.rng_seed = 7;
    let r = run_stability_sweep(&cfg)?;
    for row in &r.rows {
        println!(
            "chi {:.4}  rate {:?}  r2 {:?}",
            row.chi, row.rate, row.r_squared
        );
    }
    println!(
        "empirical {:?}, inviscid {:.4} (k = {}), viscous {:?}",
        r.empirical_threshold, r.inviscid_threshold, r.most_unstable_k, r.viscous_threshold
    );
    Ok(())
}
