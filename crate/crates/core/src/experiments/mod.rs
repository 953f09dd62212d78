//! Config-driven experiments: instability scans, growth matching, stability
//! sweeps and plain simulations, each writing a manifest next to its data.

pub mod config;
pub mod growth;
pub mod manifest;
pub mod output;
pub mod scan;
pub mod simulate;
pub mod sweep;

use serde::Serialize;

pub use config::{ExperimentConfig, ExperimentKind, SeedSpec, EXPERIMENT_KEYS};
pub use growth::{run_growth_match, GrowthReport, SeedRun};
pub use manifest::{write_manifest, Manifest};
pub use output::{execute, execute_eigen, write_csv, write_json, Outcome};
pub use scan::{
    run_dispersion_map, run_eigen, run_instability_scan, DispersionRow, EigenRow, ScanReport,
    ScanRow,
};
pub use simulate::{run_simulate, SimulateReport};
pub use sweep::{run_stability_sweep, SweepReport, SweepRow};

use crate::dynamics::{
    advisory_dt, concentrated_seed, eigenfunction_seed, random_smooth_seed, PhaseState, Stepper,
};
use crate::error::{Error, Result};
use crate::spectral::io::read_field3;
use crate::spectral::SpectralContext;

/// A pass/fail statement an experiment makes about its own output.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Initial state described by the seed spec of `cfg`.
pub fn initial_state(cfg: &ExperimentConfig, ctx: &SpectralContext) -> Result<PhaseState> {
    let p = &cfg.params;
    let slaved = |f| PhaseState::with_elliptic_chemical(f, p, ctx);
    Ok(match &cfg.seed {
        config::SeedSpec::Homogeneous => PhaseState::homogeneous(cfg.grid, p, ctx),
        config::SeedSpec::Eigenfunction {
            k,
            w,
            amplitude,
            rotate,
        } => eigenfunction_seed(cfg.grid, p, ctx, *k, *w, *rotate, *amplitude, cfg.n_modes)?.state,
        config::SeedSpec::Random {
            max_mode,
            amplitude,
        } => slaved(random_smooth_seed(
            cfg.grid,
            *max_mode,
            *amplitude,
            cfg.rng_seed,
        )?),
        config::SeedSpec::Concentrated { l6 } => slaved(concentrated_seed(cfg.grid, *l6)?),
        config::SeedSpec::File(path) => {
            let f = read_field3(path)?;
            if *f.grid() != cfg.grid {
                return Err(Error::InvalidGrid(format!(
                    "seed file grid {:?} differs from the configured {:?}",
                    f.grid(),
                    cfg.grid
                )));
            }
            slaved(f)
        }
    })
}

/// Stepper and initial state for `cfg`. When no `dt` was configured it is
/// taken from the advisory bound at the initial state.
pub fn prepare(cfg: &ExperimentConfig) -> Result<(Stepper, PhaseState)> {
    let ctx = SpectralContext::new(cfg.grid);
    let state = initial_state(cfg, &ctx)?;
    let mut sc = cfg.stepper;
    if cfg.dt_from_cfl {
        let dt = advisory_dt(&state, &cfg.params, &ctx, sc.cfl_safety);
        sc.dt = if dt.is_finite() { dt } else { 0.05 };
    }
    Ok((Stepper::new(cfg.grid, cfg.params, sc)?, state))
}
