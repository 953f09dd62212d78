use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, SeedSpec};
use super::Check;
use crate::diagnostics::{fit_exponential_rate, ObservableRecord};
use crate::dynamics::{
    advisory_dt, eigenfunction_seed, run, PhaseState, RecordLog, RunOptions, Stepper,
};
use crate::error::{Error, Result};
use crate::linstab::{find_unstable_root, gram_matrix, gram_off_diagonal};
use crate::params::reduce;
use crate::spectral::SpectralContext;

/// The four seeds in order: both members of the `w`-family, then their
/// quarter turns.
pub const SEEDS: [([f64; 2], bool, &str); 4] = [
    ([1.0, 0.0], false, "w1"),
    ([0.0, 1.0], false, "w2"),
    ([1.0, 0.0], true, "w1_rotated"),
    ([0.0, 1.0], true, "w2_rotated"),
];

#[derive(Clone, Debug, Serialize)]
pub struct SeedRun {
    pub label: String,
    pub w: [f64; 2],
    pub rotate: bool,
    pub rate: Option<f64>,
    pub r_squared: Option<f64>,
    pub relative_error: Option<f64>,
    /// Fit window `[0, t]`, ending when `l2_f_dev` has grown by the
    /// configured factor.
    pub window_end: f64,
    pub samples: usize,
    /// Set instead of a rate when the window is too short to fit.
    pub diagnostic: Option<String>,
    pub max_mass_drift: f64,
    /// Smallest `min f / max f` inside the fit window.
    pub min_ratio: f64,
    #[serde(skip)]
    pub records: Vec<ObservableRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct GrowthReport {
    pub k: u32,
    pub epsilon: f64,
    pub dt: f64,
    /// Rightmost eigenvalue of the truncated viscous operator.
    pub mu_predicted: f64,
    /// Root of the dispersion relation, if any.
    pub mu0_inviscid: Option<f64>,
    pub gram_off_diagonal: f64,
    pub seeds: Vec<SeedRun>,
    /// Largest relative error over the seeds that produced a rate.
    pub relative_error: Option<f64>,
    /// `(max − min)/|μ|` over the four fitted rates.
    pub rate_spread: Option<f64>,
    pub checks: Vec<Check>,
}

/// Relative tolerance for rates against the prediction and each other.
pub const RATE_TOL: f64 = 0.05;

fn linear_window(records: &[ObservableRecord], growth_factor: f64) -> (Vec<(f64, f64)>, f64) {
    let base = records[0].l2_f_dev;
    let mut series = Vec::new();
    let mut end = records[0].t;
    for r in records {
        if r.l2_f_dev > growth_factor * base {
            break;
        }
        series.push((r.t, r.l2_f_dev));
        end = r.t;
    }
    (series, end)
}

/// Seed each of the four growing modes at wavenumber `k` with amplitude
/// `ε`, integrate, and fit the growth of `‖f − f*‖` over the linear window.
pub fn run_growth_match(cfg: &ExperimentConfig) -> Result<GrowthReport> {
    let SeedSpec::Eigenfunction { k, amplitude, .. } = cfg.seed else {
        return Err(Error::InvalidParameter(
            "growth matching needs an eigenfunction seed".into(),
        ));
    };
    let p = cfg.params;
    let ctx = SpectralContext::new(cfg.grid);
    let seeds: Vec<_> = SEEDS
        .iter()
        .map(|&(w, rotate, _)| {
            eigenfunction_seed(cfg.grid, &p, &ctx, k, w, rotate, amplitude, cfg.n_modes)
        })
        .collect::<Result<_>>()?;
    let mu = seeds[0].mu;
    let rp = reduce(&p, k, p.coupling)?;
    let mu0_inviscid = find_unstable_root(&rp, p.coupling)?.mu0();
    let gram = gram_off_diagonal(&gram_matrix(
        &seeds
            .iter()
            .map(|s| s.perturbation.clone())
            .collect::<Vec<_>>(),
    )?);

    let mut sc = cfg.stepper;
    if cfg.dt_from_cfl {
        sc.dt = advisory_dt(&seeds[0].state, &p, &ctx, sc.cfl_safety);
    }
    // Run a little past the predicted end of the linear window.
    let t_end = if mu > 0.0 {
        cfg.t_end.min(1.1 * cfg.growth_factor.ln() / mu)
    } else {
        cfg.t_end
    };
    let opts = RunOptions {
        t_end,
        observe_every: cfg.observe_every,
        track_energy: false,
        ..Default::default()
    };

    let runs: Vec<SeedRun> = seeds
        .into_par_iter()
        .zip(SEEDS.par_iter())
        .map(|(seed, &(w, rotate, label))| -> Result<SeedRun> {
            let mut stepper = Stepper::new(cfg.grid, p, sc)?;
            let mut log = RecordLog::default();
            let mut ratio = f64::INFINITY;
            let mut window_open = true;
            let base = seed.perturbation.l2_norm();
            let mut watch = |rec: &ObservableRecord, st: &PhaseState| -> Result<()> {
                if window_open && rec.l2_f_dev > cfg.growth_factor * base {
                    window_open = false;
                }
                if window_open {
                    let (lo, hi) = st.min_max(&ctx);
                    ratio = ratio.min(lo / hi);
                }
                Ok(())
            };
            let summary = run(&mut stepper, seed.state, &opts, &mut [&mut log, &mut watch])?;
            let (series, window_end) = if mu > 0.0 {
                linear_window(&log.records, cfg.growth_factor)
            } else {
                let s: Vec<(f64, f64)> = log.records.iter().map(|r| (r.t, r.l2_f_dev)).collect();
                (s, t_end)
            };
            let samples = series.len();
            let (rate, r_squared, diagnostic) = match fit_exponential_rate(&series, None) {
                Ok(fit) => (Some(fit.rate), Some(fit.r_squared), None),
                Err(e) => (
                    None,
                    None,
                    Some(format!(
                        "linear window too short ({e}); reduce the amplitude or observe more often"
                    )),
                ),
            };
            Ok(SeedRun {
                label: label.to_string(),
                w,
                rotate,
                rate,
                r_squared,
                relative_error: rate.map(|r| (r - mu).abs() / mu.abs()),
                window_end,
                samples,
                diagnostic,
                max_mass_drift: summary.max_mass_drift,
                min_ratio: ratio,
                records: log.records,
            })
        })
        .collect::<Result<_>>()?;

    let rates: Vec<f64> = runs.iter().filter_map(|r| r.rate).collect();
    let relative_error = runs
        .iter()
        .filter_map(|r| r.relative_error)
        .reduce(f64::max);
    let rate_spread = (rates.len() == SEEDS.len()).then(|| {
        let (lo, hi) = rates
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &r| {
                (a.min(r), b.max(r))
            });
        (hi - lo) / mu.abs()
    });
    let drift = runs.iter().map(|r| r.max_mass_drift).fold(0.0, f64::max);
    let ratio = runs
        .iter()
        .map(|r| r.min_ratio)
        .fold(f64::INFINITY, f64::min);
    let checks = vec![
        Check::new(
            "seeds orthogonal",
            gram <= 1e-10,
            format!("gram off-diagonal {gram:.3e}"),
        ),
        Check::new(
            "rates match prediction",
            rates.len() == SEEDS.len() && relative_error.is_some_and(|e| e <= RATE_TOL),
            format!("mu = {mu:.6}, rates = {rates:?}, worst relative error {relative_error:?}"),
        ),
        Check::new(
            "rates agree",
            rate_spread.is_some_and(|s| s <= RATE_TOL),
            format!("spread {rate_spread:?}"),
        ),
        Check::new(
            "mass conserved",
            drift <= 1e-10,
            format!("max drift {drift:.3e}"),
        ),
        Check::new(
            "positive in linear window",
            ratio >= -1e-8,
            format!("min f/max f = {ratio:.3e}"),
        ),
    ];
    Ok(GrowthReport {
        k,
        epsilon: amplitude,
        dt: sc.dt,
        mu_predicted: mu,
        mu0_inviscid,
        gram_off_diagonal: gram,
        seeds: runs,
        relative_error,
        rate_spread,
        checks,
    })
}
