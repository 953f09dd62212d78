use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::state::min_max;
use crate::dynamics::{PhaseState, F_STAR};
use crate::error::Result;
use crate::params::ModelParams;
use crate::spectral::field::half_weight;
use crate::spectral::{is_nyquist, signed_mode, SpatialField2, SpectralContext, SpectralGrid};

/// Exponents reported in `lp_rho`.
pub const LP_EXPONENTS: [u32; 3] = [1, 2, 6];

/// One snapshot of the monitored quantities.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservableRecord {
    pub t: f64,
    pub mass: f64,
    pub min_f: f64,
    /// `‖f − 1/2π‖` in `L²` over phase space.
    pub l2_f_dev: f64,
    pub lp_rho: BTreeMap<u32, f64>,
    pub h1_f: f64,
    pub grad_c_l2: f64,
    pub hess_c_l2: f64,
    /// Filled in once the following state is known; `None` at the ends of a
    /// run or across a change of step size.
    pub dissipation_residual: Option<f64>,
    pub dominant_k: u32,
    pub trail_count: u32,
}

#[derive(Clone, Copy, Debug)]
pub struct ObservableOptions {
    /// Minimum peak prominence for `trail_count`, as a fraction of the
    /// range of `ρ`.
    pub prominence: f64,
    /// Spatial modes below this fraction of the mean are ignored.
    pub noise_floor: f64,
}

impl Default for ObservableOptions {
    fn default() -> Self {
        Self {
            prominence: 0.05,
            noise_floor: 1e-10,
        }
    }
}

pub fn compute_observables(
    state: &PhaseState,
    params: &ModelParams,
    ctx: &SpectralContext,
) -> Result<ObservableRecord> {
    compute_observables_with(state, params, ctx, &ObservableOptions::default())
}

pub fn compute_observables_with(
    state: &PhaseState,
    _params: &ModelParams,
    ctx: &SpectralContext,
    opts: &ObservableOptions,
) -> Result<ObservableRecord> {
    let g = *state.grid();
    let fc = state.f.fourier_coeffs(ctx);
    let (min_f, _) = min_max(&ctx.inverse3(&fc));

    let nh = g.theta_half();
    let mut l2 = 0.0;
    let mut grad = 0.0;
    let mut dth = 0.0;
    for i1 in 0..g.n_x1 {
        let k1 = wavenumber(i1, g.n_x1);
        for i2 in 0..g.n_x2 {
            let k2 = wavenumber(i2, g.n_x2);
            for j in 0..nh {
                let idx = g.fourier_index(i1, i2, j);
                let mut z = fc[idx];
                if idx == 0 {
                    z -= F_STAR * g.len() as f64;
                }
                let w = half_weight(j, g.n_theta) * z.norm_sqr();
                l2 += w;
                grad += w * (k1 * k1 + k2 * k2);
                let n = if is_nyquist(j, g.n_theta) {
                    0.0
                } else {
                    j as f64
                };
                dth += w * n * n;
            }
        }
    }
    let norm = g.cell_volume() / g.len() as f64;
    // The constant state contributes `‖f*‖²` to the full H¹ norm.
    let h1 = (l2 + grad + dth) * norm + F_STAR * F_STAR * g.volume();

    let rho = state.f.density(ctx);
    let rho_vals = rho.physical_values(ctx);
    let lp_rho = LP_EXPONENTS
        .iter()
        .map(|&p| (p, lp_norm(&rho_vals, p as f64, g.spatial_cell_area())))
        .collect();

    let (grad_c, hess_c) = chemical_norms(&state.c, ctx);
    let (dominant_k, axis) = dominant_mode(&g, &fc, opts.noise_floor);
    let trail_count = if dominant_k == 0 {
        0
    } else {
        count_trails(&g, &rho_vals, axis, opts)
    };

    Ok(ObservableRecord {
        t: state.t,
        mass: state.mass(),
        min_f,
        l2_f_dev: (l2 * norm).max(0.0).sqrt(),
        lp_rho,
        h1_f: h1.max(0.0).sqrt(),
        grad_c_l2: grad_c,
        hess_c_l2: hess_c,
        dissipation_residual: None,
        dominant_k,
        trail_count,
    })
}

/// `2πm`, zero at the Nyquist index.
fn wavenumber(i: usize, n: usize) -> f64 {
    if is_nyquist(i, n) {
        0.0
    } else {
        2.0 * PI * signed_mode(i, n) as f64
    }
}

fn lp_norm(v: &[f64], p: f64, cell: f64) -> f64 {
    (cell * v.iter().map(|x| x.abs().powf(p)).sum::<f64>()).powf(1.0 / p)
}

/// `(‖∇c‖, ‖∇²c‖)` by Parseval.
fn chemical_norms(c: &SpatialField2, ctx: &SpectralContext) -> (f64, f64) {
    let g = *c.grid();
    let cc = c.fourier_coeffs(ctx);
    let (mut grad, mut hess) = (0.0, 0.0);
    for i1 in 0..g.n_x1 {
        let k1 = wavenumber(i1, g.n_x1);
        for i2 in 0..g.x2_half() {
            let k2 = wavenumber(i2, g.n_x2);
            let w = half_weight(i2, g.n_x2) * cc[g.spatial_fourier_index(i1, i2)].norm_sqr();
            let q = k1 * k1 + k2 * k2;
            grad += w * q;
            hess += w * q * q;
        }
    }
    let norm = g.spatial_cell_area() / g.spatial_len() as f64;
    ((grad * norm).sqrt(), (hess * norm).sqrt())
}

/// Wavenumber `round(|m|)` of the strongest non-constant spatial mode of
/// `f` (angular modes summed in quadrature) and the axis it mostly points
/// along (0 for `x1`).
fn dominant_mode(g: &SpectralGrid, fc: &[Complex64], floor: f64) -> (u32, usize) {
    let nh = g.theta_half();
    let mean = fc[0].norm();
    let mut best: Option<(f64, i64, i64)> = None;
    for i1 in 0..g.n_x1 {
        for i2 in 0..g.n_x2 {
            if i1 == 0 && i2 == 0 {
                continue;
            }
            let a: f64 = (0..nh)
                .map(|j| half_weight(j, g.n_theta) * fc[g.fourier_index(i1, i2, j)].norm_sqr())
                .sum::<f64>()
                .sqrt();
            if best.is_none_or(|(b, _, _)| a > b) {
                best = Some((a, signed_mode(i1, g.n_x1), signed_mode(i2, g.n_x2)));
            }
        }
    }
    match best {
        Some((a, m1, m2)) if a > floor * mean.max(f64::MIN_POSITIVE) => {
            let k = ((m1 * m1 + m2 * m2) as f64).sqrt().round() as u32;
            (k, if m1.abs() >= m2.abs() { 0 } else { 1 })
        }
        _ => (0, 0),
    }
}

/// Maxima of `ρ` averaged over the axis other than `axis`.
fn count_trails(g: &SpectralGrid, rho: &[f64], axis: usize, opts: &ObservableOptions) -> u32 {
    let (lo, hi) = min_max(rho);
    let range = hi - lo;
    let mean = rho.iter().sum::<f64>() / rho.len() as f64;
    if range <= opts.noise_floor * mean.abs() {
        return 0;
    }
    let profile: Vec<f64> = if axis == 0 {
        (0..g.n_x1)
            .map(|i1| {
                (0..g.n_x2)
                    .map(|i2| rho[g.spatial_index(i1, i2)])
                    .sum::<f64>()
                    / g.n_x2 as f64
            })
            .collect()
    } else {
        (0..g.n_x2)
            .map(|i2| {
                (0..g.n_x1)
                    .map(|i1| rho[g.spatial_index(i1, i2)])
                    .sum::<f64>()
                    / g.n_x1 as f64
            })
            .collect()
    };
    periodic_peaks(&profile, opts.prominence * range) as u32
}

/// Number of local maxima of a periodic sequence whose topographic
/// prominence is at least `min_prominence`.
pub fn periodic_peaks(p: &[f64], min_prominence: f64) -> usize {
    let n = p.len();
    if n < 3 {
        return 0;
    }
    let (lo, _) = min_max(p);
    let at = |i: isize| p[i.rem_euclid(n as isize) as usize];
    let mut count = 0;
    for i in 0..n as isize {
        let v = at(i);
        if !(v > at(i - 1) && v >= at(i + 1)) {
            continue;
        }
        let walk = |dir: isize| -> Option<f64> {
            let mut m = v;
            for s in 1..n as isize {
                let u = at(i + dir * s);
                if u > v {
                    return Some(m);
                }
                m = m.min(u);
            }
            None
        };
        let base = match (walk(-1), walk(1)) {
            (Some(a), Some(b)) => a.max(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => lo,
        };
        if v - base >= min_prominence {
            count += 1;
        }
    }
    count
}

/// `Σ` over stored coefficients, shared with the energy diagnostics.
pub(crate) fn parseval_sum(
    g: &SpectralGrid,
    c: &[Complex64],
    weight: impl Fn(usize, usize, usize) -> f64,
) -> f64 {
    let nh = g.theta_half();
    let mut s = 0.0;
    for i1 in 0..g.n_x1 {
        for i2 in 0..g.n_x2 {
            for j in 0..nh {
                let z = c[g.fourier_index(i1, i2, j)];
                s += half_weight(j, g.n_theta) * weight(i1, i2, j) * z.norm_sqr();
            }
        }
    }
    s * g.cell_volume() / g.len() as f64
}
