use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::{prepare, Check};
use crate::diagnostics::{compute_observables, fit_exponential_rate};
use crate::dynamics::{run, RecordLog, RunOptions};
use crate::error::{Error, Result};
use crate::linstab::viscous_spectrum;
use crate::params::{reduce, ModelParams};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub chi: f64,
    /// Fitted rate of `‖f − f*‖` over the tail of the run.
    pub rate: Option<f64>,
    pub r_squared: Option<f64>,
    pub l2_initial: f64,
    pub l2_final: Option<f64>,
    pub max_mass_drift: Option<f64>,
    pub positivity_violations: Option<u64>,
    /// Smallest `min f / max f` at step starts.
    pub min_ratio: Option<f64>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepReport {
    pub rng_seed: u64,
    pub dt: f64,
    pub rows: Vec<SweepRow>,
    /// Midpoint of the first bracket where the fitted rate turns from
    /// negative to positive.
    pub empirical_threshold: Option<f64>,
    /// Smallest inviscid threshold over `k = 1..=k_max`, and its `k`.
    pub inviscid_threshold: f64,
    pub most_unstable_k: u32,
    /// Where the largest viscous rightmost eigenvalue over `k` crosses zero.
    pub viscous_threshold: Option<f64>,
    pub checks: Vec<Check>,
}

/// `χ_inv·{0, 1/4, …, 2}` when no `chi` axis is configured.
pub fn default_chi_grid(inviscid: f64) -> Vec<f64> {
    (0..=8).map(|i| inviscid * f64::from(i) / 4.0).collect()
}

fn inviscid_threshold(p: &ModelParams, k_max: u32) -> (f64, u32) {
    (1..=k_max)
        .map(|k| (p.chi_threshold(k), k))
        .fold((f64::INFINITY, 0), |a, b| if b.0 < a.0 { b } else { a })
}

/// Largest viscous rightmost eigenvalue over `k` at interaction `chi`.
fn viscous_growth(p: &ModelParams, chi: f64, k_max: u32, n_modes: usize) -> Result<f64> {
    let q = ModelParams { chi, ..*p };
    let mut best = f64::NEG_INFINITY;
    for k in 1..=k_max {
        best = best.max(
            viscous_spectrum(&reduce(&q, k, q.coupling)?, n_modes, q.coupling)?
                .rightmost
                .re,
        );
    }
    Ok(best)
}

/// Bisect for the interaction strength where the truncated viscous
/// operator first has a growing mode, searching up to `hi`.
fn viscous_threshold(p: &ModelParams, k_max: u32, n_modes: usize, hi: f64) -> Result<Option<f64>> {
    if viscous_growth(p, hi, k_max, n_modes)? <= 0.0 {
        return Ok(None);
    }
    let (mut lo, mut hi) = (0.0, hi);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        if viscous_growth(p, mid, k_max, n_modes)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Integrate random smooth data for each interaction strength and fit the
/// late-time rate of `‖f − f*‖`.
pub fn run_stability_sweep(cfg: &ExperimentConfig) -> Result<SweepReport> {
    if let Some((axis, _)) = cfg.sweep.iter().find(|(a, _)| a != "chi") {
        return Err(Error::InvalidParameter(format!(
            "stability sweeps vary chi only, got axis {axis:?}"
        )));
    }
    let (inviscid, most_unstable_k) = inviscid_threshold(&cfg.params, cfg.k_max);
    let mut chis = match cfg.sweep.first() {
        Some((_, v)) => v.clone(),
        None => default_chi_grid(inviscid),
    };
    chis.sort_by(f64::total_cmp);
    chis.dedup();

    let points: Vec<ExperimentConfig> = chis
        .iter()
        .map(|&c| cfg.with_param("chi", c))
        .collect::<Result<_>>()?;
    // One step size for the whole sweep, taken from the weakest interaction.
    let (probe, _) = prepare(&points[0])?;
    let dt = probe.config().dt;
    let opts = RunOptions {
        t_end: cfg.t_end,
        observe_every: cfg.observe_every,
        track_energy: false,
        ..Default::default()
    };
    let window = (cfg.fit_from * cfg.t_end, cfg.t_end);

    let rows: Vec<SweepRow> = points
        .par_iter()
        .map(|pc| {
            let mut fixed = pc.clone();
            fixed.stepper.dt = dt;
            fixed.dt_from_cfl = false;
            let (mut stepper, state) = match prepare(&fixed) {
                Ok(x) => x,
                Err(e) => return failed_row(pc.params.chi, f64::NAN, e),
            };
            let l2_initial = compute_observables(&state, &pc.params, stepper.context())
                .map(|r| r.l2_f_dev)
                .unwrap_or(f64::NAN);
            let mut log = RecordLog::default();
            match run(&mut stepper, state, &opts, &mut [&mut log]) {
                Ok(summary) => {
                    let series: Vec<(f64, f64)> =
                        log.records.iter().map(|r| (r.t, r.l2_f_dev)).collect();
                    let fit = fit_exponential_rate(&series, Some(window));
                    SweepRow {
                        chi: pc.params.chi,
                        rate: fit.as_ref().ok().map(|f| f.rate),
                        r_squared: fit.as_ref().ok().map(|f| f.r_squared),
                        l2_initial,
                        l2_final: log.records.last().map(|r| r.l2_f_dev),
                        max_mass_drift: Some(summary.max_mass_drift),
                        positivity_violations: Some(summary.positivity_violations),
                        min_ratio: Some(summary.min_ratio),
                        error: fit.err().map(|e| e.to_string()),
                    }
                }
                Err(e) => failed_row(pc.params.chi, l2_initial, e),
            }
        })
        .collect();

    let mut empirical_threshold = None;
    for w in rows.windows(2) {
        if let (Some(a), Some(b)) = (w[0].rate, w[1].rate) {
            if a < 0.0 && b > 0.0 {
                empirical_threshold = Some(0.5 * (w[0].chi + w[1].chi));
                break;
            }
        }
    }
    let viscous_threshold = viscous_threshold(
        &cfg.params,
        cfg.k_max,
        cfg.n_modes.min(32),
        4.0 * inviscid.max(chis.last().copied().unwrap_or(0.0)),
    )?;
    let checks = sweep_checks(&rows, empirical_threshold, inviscid);
    Ok(SweepReport {
        rng_seed: cfg.rng_seed,
        dt,
        rows,
        empirical_threshold,
        inviscid_threshold: inviscid,
        most_unstable_k,
        viscous_threshold,
        checks,
    })
}

fn failed_row(chi: f64, l2_initial: f64, e: Error) -> SweepRow {
    SweepRow {
        chi,
        rate: None,
        r_squared: None,
        l2_initial,
        l2_final: None,
        max_mass_drift: None,
        positivity_violations: None,
        min_ratio: None,
        error: Some(e.to_string()),
    }
}

fn decays(row: &SweepRow) -> bool {
    row.rate.is_some_and(|r| r < 0.0) && row.r_squared.is_some_and(|r2| r2 > 0.99)
}

fn sweep_checks(rows: &[SweepRow], empirical: Option<f64>, inviscid: f64) -> Vec<Check> {
    let mut checks = Vec::new();
    if let Some(r) = rows.iter().find(|r| r.chi == 0.0) {
        checks.push(Check::new(
            "decay without interaction",
            decays(r),
            format!("rate {:?}, r2 {:?}", r.rate, r.r_squared),
        ));
    }
    let below = rows
        .iter()
        .find(|r| r.chi > 0.0 && empirical.is_none_or(|t| r.chi < t));
    match below {
        Some(r) => checks.push(Check::new(
            "decay at small interaction",
            decays(r),
            format!("chi {}, rate {:?}, r2 {:?}", r.chi, r.rate, r.r_squared),
        )),
        None => checks.push(Check::new(
            "decay at small interaction",
            false,
            "no positive chi below the threshold",
        )),
    }
    checks.push(Check::new(
        "empirical threshold below inviscid",
        empirical.is_some_and(|t| t <= inviscid),
        format!("empirical {empirical:?}, inviscid {inviscid}"),
    ));
    checks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::{ExperimentKind, SeedSpec};
    use crate::spectral::SpectralGrid;

    fn cfg(chis: Vec<f64>) -> ExperimentConfig {
        let mut c = ExperimentConfig::defaults(ExperimentKind::StabilitySweep);
        c.grid = SpectralGrid::cube(16).unwrap();
        c.params.sigma_x = 0.05;
        c.params.sigma_theta = 0.05;
        c.sweep = vec![("chi".into(), chis)];
        c.seed = SeedSpec::Random {
            max_mode: 2,
            amplitude: 0.1,
        };
        c.t_end = 40.0;
        c.k_max = 4;
        c.rng_seed = 5;
        c
    }

    #[test]
    fn pure_diffusion_decays_at_the_slowest_angular_rate() {
        let r = run_stability_sweep(&cfg(vec![0.0])).unwrap();
        let row = &r.rows[0];
        // The spatially constant first angular harmonic decays at exactly
        // σ_θ, and everything else faster.
        assert!((row.rate.unwrap() + 0.05).abs() < 2e-3, "{:?}", row.rate);
        assert!(row.r_squared.unwrap() > 0.99);
        assert!(r.checks[0].passed);
    }

    #[test]
    fn sweep_is_deterministic_and_finds_a_sign_change() {
        let c = cfg(vec![0.0, 0.2, 2.0]);
        let a = run_stability_sweep(&c).unwrap();
        let b = run_stability_sweep(&c).unwrap();
        assert_eq!(a.rows, b.rows);
        let rates: Vec<f64> = a.rows.iter().map(|r| r.rate.unwrap()).collect();
        assert!(
            rates[0] < 0.0 && rates[1] < 0.0 && rates[2] > 0.0,
            "{rates:?}"
        );
        assert_eq!(a.empirical_threshold, Some(1.1));
        assert!(a.viscous_threshold.unwrap() > a.inviscid_threshold);
    }

    #[test]
    fn other_axes_are_rejected() {
        let mut c = cfg(vec![0.0]);
        c.sweep = vec![("tau".into(), vec![0.0])];
        assert!(run_stability_sweep(&c).is_err());
    }
}
