//! Initial data: growing-mode seeds, random smooth perturbations and
//! concentrated bumps.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::state::{min_max, PhaseState, F_STAR};
use super::stepper::cfl_limit;
use crate::error::{Error, Result};
use crate::linstab::{rotate_quarter, viscous_eigenfunction, viscous_spectrum};
use crate::params::{reduce, Coupling, ModelParams};
use crate::spectral::{
    InteractionField, SpatialField2, SpectralContext, SpectralField3, SpectralGrid,
};

/// `‖f*‖` in `L²` over phase space.
pub fn homogeneous_norm() -> f64 {
    F_STAR * (2.0 * PI).sqrt()
}

#[derive(Clone, Debug)]
pub struct EigenSeed {
    pub state: PhaseState,
    /// Rightmost eigenvalue of the truncated operator at `k`.
    pub mu: f64,
    /// `f₀ − f*`.
    pub perturbation: SpectralField3,
}

/// `f* + ε·(growing mode at wavenumber k)` with `‖f₀ − f*‖ = amplitude·‖f*‖`.
/// `w` picks the mode inside the two-dimensional family; `rotate` turns
/// the pattern a quarter turn so that it varies along `x2`.
#[allow(clippy::too_many_arguments)]
pub fn eigenfunction_seed(
    grid: SpectralGrid,
    params: &ModelParams,
    ctx: &SpectralContext,
    k: u32,
    w: [f64; 2],
    rotate: bool,
    amplitude: f64,
    n_modes: usize,
) -> Result<EigenSeed> {
    if !(amplitude > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "amplitude must be > 0, got {amplitude}"
        )));
    }
    if w == [0.0, 0.0] {
        return Err(Error::InvalidParameter("w must be nonzero".into()));
    }
    let rp = reduce(params, k, params.coupling)?;
    let mu = viscous_spectrum(&rp, n_modes, params.coupling)?
        .rightmost
        .re;
    let pair = viscous_eigenfunction(&rp, params.coupling, mu, w, n_modes, grid.n_theta)?;
    let mut pert = pair.expand(grid, k)?;
    if rotate {
        pert = rotate_quarter(&pert)?;
    }
    let s = amplitude * homogeneous_norm() / pert.l2_norm();
    pert.scale(s);
    let mut f = SpectralField3::constant(grid, F_STAR);
    f.axpy(1.0, &pert)?;

    let state = match params.coupling {
        Coupling::Elliptic => PhaseState::with_elliptic_chemical(f, params, ctx),
        Coupling::Parabolic => {
            let kk = 2.0 * PI * f64::from(k);
            let amp = s / (mu + rp.nu_breve);
            let c = SpatialField2::from_fn(grid, |x1, x2| {
                let y = if rotate { x2 } else { x1 };
                let (sn, cs) = (kk * y).sin_cos();
                1.0 / params.gamma + amp * (w[0] * cs + w[1] * sn)
            });
            PhaseState::new(f, c, 0.0, ctx)?
        }
    };
    Ok(EigenSeed {
        state,
        mu,
        perturbation: pert.into_fourier(ctx),
    })
}

/// Positive band-limited perturbation of `f*`: random phases and amplitudes
/// on modes with `|m₁|, |m₂|, |n| ≤ max_mode`, scaled so that
/// `max |f − f*| = amplitude·f*`, then renormalised to unit mass.
pub fn random_smooth_seed(
    grid: SpectralGrid,
    max_mode: i64,
    amplitude: f64,
    rng_seed: u64,
) -> Result<SpectralField3> {
    if !(amplitude > 0.0 && amplitude < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "amplitude must lie in (0, 1), got {amplitude}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut modes = Vec::new();
    for n in 0..=max_mode {
        for m1 in -max_mode..=max_mode {
            for m2 in -max_mode..=max_mode {
                // One representative of each ± pair.
                if n == 0 && (m1, m2) <= (0, 0) {
                    continue;
                }
                let a: f64 = rng.random_range(0.0..1.0);
                let phase: f64 = rng.random_range(0.0..2.0 * PI);
                modes.push((m1 as f64, m2 as f64, n as f64, a, phase));
            }
        }
    }
    let p = SpectralField3::from_fn(grid, |x1, x2, th| {
        modes
            .iter()
            .map(|&(m1, m2, n, a, ph)| a * (2.0 * PI * (m1 * x1 + m2 * x2) + n * th + ph).cos())
            .sum()
    });
    let (lo, hi) = min_max(p.values()?);
    let s = amplitude * F_STAR / lo.abs().max(hi.abs());
    let mut f = SpectralField3::constant(grid, F_STAR);
    f.axpy(s, &p)?;
    let m = f.integral();
    f.scale(1.0 / m);
    Ok(f)
}

/// `ρ₀ ∝ exp(κ(cos 2πx₁ + cos 2πx₂))` with `κ` chosen so that
/// `‖ρ₀‖_{L⁶} = target`, and headings weighted by `(1 + cosθ/2)/2π`.
pub fn concentrated_seed(grid: SpectralGrid, target_l6: f64) -> Result<SpectralField3> {
    if !(target_l6 >= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "L6 target must be >= 1, got {target_l6}"
        )));
    }
    let density = |kappa: f64| -> Vec<f64> {
        let mut v = Vec::with_capacity(grid.spatial_len());
        for i1 in 0..grid.n_x1 {
            for i2 in 0..grid.n_x2 {
                let e = (2.0 * PI * grid.x1(i1)).cos() + (2.0 * PI * grid.x2(i2)).cos();
                v.push((kappa * (e - 2.0)).exp());
            }
        }
        let mass = grid.spatial_cell_area() * v.iter().sum::<f64>();
        v.iter_mut().for_each(|x| *x /= mass);
        v
    };
    let l6 = |v: &[f64]| {
        (grid.spatial_cell_area() * v.iter().map(|x| x.powi(6)).sum::<f64>()).powf(1.0 / 6.0)
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    while l6(&density(hi)) < target_l6 {
        hi *= 2.0;
        if hi > 1e4 {
            return Err(Error::InvalidParameter(format!(
                "L6 target {target_l6} is not reachable on this grid"
            )));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if l6(&density(mid)) < target_l6 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let rho = density(0.5 * (lo + hi));
    let mut v = Vec::with_capacity(grid.len());
    for r in &rho {
        for j in 0..grid.n_theta {
            v.push(r * (1.0 + 0.5 * grid.theta(j).cos()) / (2.0 * PI));
        }
    }
    SpectralField3::physical(grid, v)
}

/// Step size suggested by the transport and interaction speeds of `state`.
pub fn advisory_dt(
    state: &PhaseState,
    params: &ModelParams,
    ctx: &SpectralContext,
    safety: f64,
) -> f64 {
    let b = InteractionField::from_chemical(&state.c, params.tau, ctx);
    cfl_limit(state.grid(), params, b.max_abs(), safety)
}
