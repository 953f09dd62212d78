use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::config::ExperimentConfig;
use super::Check;
use crate::error::Result;
use crate::linstab::{find_unstable_root, viscous_spectrum};
use crate::params::{instability_margin, reduce, ModelParams};

/// One wavenumber of an instability scan. `error` is set, and the numeric
/// columns left empty, when some stage failed at this `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScanRow {
    pub k: u32,
    pub margin: Option<f64>,
    pub chi_threshold: f64,
    pub headline_lhs: f64,
    pub headline_rhs: f64,
    pub mu0: Option<f64>,
    pub rightmost_re: Option<f64>,
    pub rightmost_im: Option<f64>,
    pub multiplicity: Option<usize>,
    pub consistent: Option<bool>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ScanReport {
    pub rows: Vec<ScanRow>,
    /// Wavenumbers whose viscous rightmost eigenvalue is positive.
    pub unstable: Vec<u32>,
    pub checks: Vec<Check>,
}

/// Above this a viscous eigenvalue counts as growing.
const GROWTH_TOL: f64 = 1e-10;

fn scan_row(params: &ModelParams, k: u32, n_modes: usize) -> ScanRow {
    let (headline_lhs, headline_rhs) = params.headline_condition(k);
    let mut row = ScanRow {
        k,
        margin: None,
        chi_threshold: params.chi_threshold(k),
        headline_lhs,
        headline_rhs,
        mu0: None,
        rightmost_re: None,
        rightmost_im: None,
        multiplicity: None,
        consistent: None,
        error: None,
    };
    let filled = (|| -> Result<()> {
        let margin = instability_margin(params, k)?;
        row.margin = Some(margin);
        let rp = reduce(params, k, params.coupling)?;
        let root = find_unstable_root(&rp, params.coupling)?;
        row.mu0 = root.mu0();
        let spec = viscous_spectrum(&rp, n_modes, params.coupling)?;
        row.rightmost_re = Some(spec.rightmost.re);
        row.rightmost_im = Some(spec.rightmost.im);
        row.multiplicity = Some(spec.rightmost_multiplicity);
        let grows = spec.rightmost.re > GROWTH_TOL;
        row.consistent = Some((!grows || row.mu0.is_some()) && (row.mu0.is_none() || margin > 0.0));
        Ok(())
    })();
    if let Err(e) = filled {
        row.error = Some(e.to_string());
    }
    row
}

/// Margin, dispersion root and viscous rightmost eigenvalue for
/// `k = 1..=k_max`. Failures at one `k` are recorded in that row.
pub fn run_instability_scan(cfg: &ExperimentConfig) -> Result<ScanReport> {
    cfg.params.validate()?;
    let rows: Vec<ScanRow> = (1..=cfg.k_max)
        .into_par_iter()
        .map(|k| scan_row(&cfg.params, k, cfg.n_modes))
        .collect();
    let unstable = rows
        .iter()
        .filter(|r| r.rightmost_re.is_some_and(|re| re > GROWTH_TOL))
        .map(|r| r.k)
        .collect();
    let bad: Vec<u32> = rows
        .iter()
        .filter(|r| r.consistent == Some(false))
        .map(|r| r.k)
        .collect();
    let checks = vec![Check::new(
        "columns consistent",
        bad.is_empty(),
        if bad.is_empty() {
            "every row satisfies growth => root => margin".to_string()
        } else {
            format!("inconsistent at k = {bad:?}")
        },
    )];
    Ok(ScanReport {
        rows,
        unstable,
        checks,
    })
}

/// Rightmost eigenvalue at one wavenumber and one point of the sweep grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DispersionRow {
    pub k: u32,
    pub sigma_x: f64,
    pub sigma_theta: f64,
    pub sigma_c: f64,
    pub gamma: f64,
    pub lambda: f64,
    pub chi: f64,
    pub tau: f64,
    pub margin: f64,
    pub mu0: Option<f64>,
    pub rightmost_re: f64,
    pub rightmost_im: f64,
    pub unstable: bool,
}

/// Every combination of the sweep axes. Without axes, `σ_x` and `σ_θ` are
/// both swept over four decades.
pub fn sweep_points(cfg: &ExperimentConfig) -> Result<Vec<ModelParams>> {
    let decades = vec![1e-4, 1e-3, 1e-2, 1e-1];
    let axes: Vec<(String, Vec<f64>)> = if cfg.sweep.is_empty() {
        vec![
            ("sigma_x".into(), decades.clone()),
            ("sigma_theta".into(), decades),
        ]
    } else {
        cfg.sweep.clone()
    };
    let mut points = vec![cfg.params];
    for (key, values) in &axes {
        let mut next = Vec::with_capacity(points.len() * values.len());
        for p in &points {
            for &v in values {
                let mut q = *p;
                q.set(key, v)?;
                q.validate()?;
                next.push(q);
            }
        }
        points = next;
    }
    Ok(points)
}

/// Rightmost eigenvalue over `k = 1..=k_max` times the sweep grid.
pub fn run_dispersion_map(cfg: &ExperimentConfig) -> Result<Vec<DispersionRow>> {
    let mut jobs = Vec::new();
    for p in sweep_points(cfg)? {
        for k in 1..=cfg.k_max {
            jobs.push((p, k));
        }
    }
    jobs.into_par_iter()
        .map(|(p, k)| {
            let rp = reduce(&p, k, p.coupling)?;
            let spec = viscous_spectrum(&rp, cfg.n_modes, p.coupling)?;
            Ok(DispersionRow {
                k,
                sigma_x: p.sigma_x,
                sigma_theta: p.sigma_theta,
                sigma_c: p.sigma_c,
                gamma: p.gamma,
                lambda: p.lambda,
                chi: p.chi,
                tau: p.tau,
                margin: instability_margin(&p, k)?,
                mu0: find_unstable_root(&rp, p.coupling)?.mu0(),
                rightmost_re: spec.rightmost.re,
                rightmost_im: spec.rightmost.im,
                unstable: spec.rightmost.re > GROWTH_TOL,
            })
        })
        .collect()
}

/// Leading part of the truncated spectrum at one wavenumber.
#[derive(Clone, Debug, Serialize)]
pub struct EigenRow {
    pub k: u32,
    pub sigma: f64,
    pub n_modes: usize,
    pub mu0: Option<f64>,
    pub rightmost: Complex64,
    pub multiplicity: usize,
    pub leading: Vec<Complex64>,
    /// Right-half-plane eigenvalues as (cluster mean, count).
    pub unstable_clusters: Vec<(Complex64, usize)>,
}

/// How many eigenvalues `run_eigen` lists per wavenumber.
pub const LEADING: usize = 8;

pub fn run_eigen(cfg: &ExperimentConfig) -> Result<Vec<EigenRow>> {
    (1..=cfg.k_max)
        .into_par_iter()
        .map(|k| {
            let p = &cfg.params;
            let rp = reduce(p, k, p.coupling)?;
            let spec = viscous_spectrum(&rp, cfg.n_modes, p.coupling)?;
            Ok(EigenRow {
                k,
                sigma: spec.sigma,
                n_modes: cfg.n_modes,
                mu0: find_unstable_root(&rp, p.coupling)?.mu0(),
                rightmost: spec.rightmost,
                multiplicity: spec.rightmost_multiplicity,
                leading: spec.eigenvalues.iter().take(LEADING).copied().collect(),
                unstable_clusters: spec.unstable_clusters(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiments::ExperimentKind;

    fn cfg(params: ModelParams, k_max: u32) -> ExperimentConfig {
        ExperimentConfig {
            params,
            k_max,
            n_modes: 24,
            ..ExperimentConfig::defaults(ExperimentKind::InstabilityScan)
        }
    }

    #[test]
    fn zero_interaction_is_stable_everywhere() {
        let p = ModelParams {
            chi: 0.0,
            ..ModelParams::default()
        };
        let r = run_instability_scan(&cfg(p, 6)).unwrap();
        assert!(r.unstable.is_empty());
        assert!(r
            .rows
            .iter()
            .all(|row| row.mu0.is_none() && row.error.is_none()));
        assert!(r.checks[0].passed);
    }

    #[test]
    fn one_unstable_row_between_first_two_thresholds() {
        // With τ = 0 the threshold λν(k) grows with k, so a value between the
        // k = 1 and k = 2 thresholds destabilises k = 1 only.
        let mut p = ModelParams {
            sigma_x: 1e-6,
            sigma_theta: 1e-6,
            sigma_c: 0.05,
            ..ModelParams::default()
        };
        p.chi = 0.5 * (p.chi_threshold(1) + p.chi_threshold(2));
        let r = run_instability_scan(&cfg(p, 5)).unwrap();
        assert_eq!(r.unstable, vec![1]);
        let margins: Vec<bool> = r.rows.iter().map(|row| row.margin.unwrap() > 0.0).collect();
        assert_eq!(margins, vec![true, false, false, false, false]);
        assert_eq!(r.rows[0].multiplicity, Some(2));
        assert!(r.checks[0].passed);
    }

    #[test]
    fn dispersion_map_covers_the_grid_in_order() {
        let c = cfg(ModelParams::default(), 2);
        let rows = run_dispersion_map(&c).unwrap();
        assert_eq!(rows.len(), 4 * 4 * 2);
        assert_eq!(
            (rows[0].sigma_x, rows[0].sigma_theta, rows[0].k),
            (1e-4, 1e-4, 1)
        );
        assert_eq!(
            (rows[1].sigma_x, rows[1].sigma_theta, rows[1].k),
            (1e-4, 1e-4, 2)
        );
        assert_eq!((rows[2].sigma_x, rows[2].sigma_theta), (1e-4, 1e-3));
        // More diffusion never helps growth.
        for k in [1, 2] {
            let along: Vec<f64> = rows
                .iter()
                .filter(|r| r.k == k && r.sigma_x == 1e-4)
                .map(|r| r.rightmost_re)
                .collect();
            assert!(along.windows(2).all(|w| w[1] <= w[0] + 1e-12), "{along:?}");
        }
    }

    #[test]
    fn eigen_rows_list_leading_values() {
        let p = ModelParams {
            chi: 3.0,
            ..ModelParams::default()
        };
        let rows = run_eigen(&cfg(p, 2)).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].leading.len(), LEADING);
        assert_eq!(rows[0].leading[0], rows[0].rightmost);
        assert!(rows[0].rightmost.re > 0.0 && rows[0].mu0.unwrap() > rows[0].rightmost.re);
    }
}
