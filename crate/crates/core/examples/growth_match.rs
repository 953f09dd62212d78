//! Seed the four growing modes at k = 1 and compare fitted rates with the
//! eigenvalue.

use antkinetics::experiments::{run_growth_match, ExperimentConfig, ExperimentKind, SeedSpec};
use antkinetics::spectral::SpectralGrid;

fn main() -> antkinetics::Result<()> {
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::GrowthMatch);
    cfg.grid = SpectralGrid::cube(32)?;
    cfg.params.chi = 4.0;
    cfg.params.lambda = 0.5;
    cfg.params.tau = 0.1;
    cfg.seed = SeedSpec::Eigenfunction {
        k: 1,
        w: [1.0, 0.0],
        amplitude: 1e-6,
        rotate: false,
    };
    cfg.observe_every = 1;
    let r = run_growth_match(&cfg)?;
    println!(
        "mu = {:.6}, gram off-diagonal {:.1e}",
        r.mu_predicted, r.gram_off_diagonal
    );
    for s in &r.seeds {
        println!(
            "{:11} rate {:?}  rel. error {:?}  ({} samples)",
            s.label, s.rate, s.relative_error, s.samples
        );
    }
    Ok(())
}
