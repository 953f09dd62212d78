//! The energy balance `d/dt ∫f²/2 = −σ_x‖∇_x f‖² − σ_θ‖∂_θ f‖² − (χ/2)∫f²∂_θB`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::observables::parseval_sum;
use crate::dynamics::PhaseState;
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::spectral::ops::AngleTable;
use crate::spectral::{
    is_nyquist, signed_mode, InteractionField, SpatialField2, SpectralContext, SpectralField3,
    SpectralGrid,
};

/// `∫f²/2`.
pub fn half_l2_squared(f: &SpectralField3) -> Result<f64> {
    Ok(0.5 * f.inner(f)?)
}

fn k2(i: usize, n: usize) -> f64 {
    if is_nyquist(i, n) {
        0.0
    } else {
        let m = 2.0 * PI * signed_mode(i, n) as f64;
        m * m
    }
}

/// Copy coefficients onto a finer grid, dropping Nyquist entries and
/// rescaling for the unnormalised forward transform.
fn pad3(g: &SpectralGrid, c: &[Complex64], fine: &SpectralGrid) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); fine.fourier_len()];
    let s = fine.len() as f64 / g.len() as f64;
    let place = |i: usize, n: usize, nf: usize| (signed_mode(i, n).rem_euclid(nf as i64)) as usize;
    for i1 in (0..g.n_x1).filter(|&i| !is_nyquist(i, g.n_x1)) {
        for i2 in (0..g.n_x2).filter(|&i| !is_nyquist(i, g.n_x2)) {
            for j in (0..g.theta_half()).filter(|&j| !is_nyquist(j, g.n_theta)) {
                let dst = fine.fourier_index(
                    place(i1, g.n_x1, fine.n_x1),
                    place(i2, g.n_x2, fine.n_x2),
                    j,
                );
                out[dst] = c[g.fourier_index(i1, i2, j)] * s;
            }
        }
    }
    out
}

fn pad2(g: &SpectralGrid, c: &[Complex64], fine: &SpectralGrid) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); fine.spatial_fourier_len()];
    let s = fine.spatial_len() as f64 / g.spatial_len() as f64;
    for i1 in (0..g.n_x1).filter(|&i| !is_nyquist(i, g.n_x1)) {
        let d1 = signed_mode(i1, g.n_x1).rem_euclid(fine.n_x1 as i64) as usize;
        for i2 in (0..g.x2_half()).filter(|&i| !is_nyquist(i, g.n_x2)) {
            out[fine.spatial_fourier_index(d1, i2)] = c[g.spatial_fourier_index(i1, i2)] * s;
        }
    }
    out
}

/// `−σ_x‖∇_x f‖² − σ_θ‖∂_θ f‖²` by Parseval.
pub fn diffusion_rate(f: &SpectralField3, params: &ModelParams, ctx: &SpectralContext) -> f64 {
    let g = *f.grid();
    let fc = f.fourier_coeffs(ctx);
    let nt = g.n_theta;
    -parseval_sum(&g, &fc, |i1, i2, j| {
        let n = if is_nyquist(j, nt) {
            0.0
        } else {
            (j * j) as f64
        };
        params.sigma_x * (k2(i1, g.n_x1) + k2(i2, g.n_x2)) + params.sigma_theta * n
    })
}

/// `−(χ/2)∫f²∂_θB[c]`, integrated on a grid twice as fine so that the
/// cubic product is resolved.
pub fn interaction_rate(
    f: &SpectralField3,
    c: &SpatialField2,
    params: &ModelParams,
    ctx: &SpectralContext,
) -> Result<f64> {
    if params.chi == 0.0 {
        return Ok(0.0);
    }
    let g = *f.grid();
    let fine = g.refined(2)?;
    let fctx = SpectralContext::new(fine);
    let fv = fctx.inverse3(&pad3(&g, &f.fourier_coeffs(ctx), &fine));
    let cf = SpatialField2::fourier(fine, pad2(&g, &c.fourier_coeffs(ctx), &fine))?;
    let b = InteractionField::from_chemical(&cf, params.tau, &fctx);
    let table = AngleTable::new(&fine);
    let mut sum = 0.0;
    for s in 0..fine.spatial_len() {
        for j in 0..fine.n_theta {
            let v = fv[s * fine.n_theta + j];
            sum += v * v * b.d_theta_value(s, j, &table);
        }
    }
    Ok(-0.5 * params.chi * sum * fine.cell_volume())
}

/// Right-hand side of the energy balance at `state`.
pub fn energy_rate(state: &PhaseState, params: &ModelParams, ctx: &SpectralContext) -> Result<f64> {
    Ok(diffusion_rate(&state.f, params, ctx) + interaction_rate(&state.f, &state.c, params, ctx)?)
}

/// Centred difference of `∫f²/2` across three equally spaced states minus
/// the balance at the middle one, relative to `∫f²` there.
pub fn dissipation_residual(
    window: [&PhaseState; 3],
    params: &ModelParams,
    ctx: &SpectralContext,
) -> Result<f64> {
    let [a, m, b] = window;
    let (h0, h1) = (m.t - a.t, b.t - m.t);
    if !(h0 > 0.0) || (h0 - h1).abs() > 1e-9 * h0 {
        return Err(Error::InvalidParameter(format!(
            "dissipation residual needs a uniform step, got {h0} and {h1}"
        )));
    }
    let e_mid = half_l2_squared(&m.f)?;
    let centred = (half_l2_squared(&b.f)? - half_l2_squared(&a.f)?) / (h0 + h1);
    Ok((centred - energy_rate(m, params, ctx)?) / (2.0 * e_mid))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{Stepper, StepperConfig, F_STAR};

    #[test]
    fn heat_flow_rate() {
        let g = SpectralGrid::cube(16).unwrap();
        let ctx = SpectralContext::new(g);
        let p = ModelParams {
            chi: 0.0,
            lambda: 0.0,
            sigma_x: 0.03,
            sigma_theta: 0.2,
            ..ModelParams::default()
        };
        let a = 0.5;
        let f = SpectralField3::from_fn(g, |x1, _, th| {
            F_STAR * (1.0 + a * (2.0 * PI * x1).cos() * th.cos())
        });
        let s = PhaseState::with_elliptic_chemical(f, &p, &ctx);
        // ‖cos(2πx₁)sinθ‖² = π/2.
        let amp = F_STAR * F_STAR * a * a * PI / 2.0;
        let expect = -(0.03 * 4.0 * PI * PI + 0.2) * amp;
        assert!((energy_rate(&s, &p, &ctx).unwrap() - expect).abs() < 1e-15);
    }

    #[test]
    fn interaction_rate_against_direct_quadrature() {
        let g = SpectralGrid::cube(16).unwrap();
        let ctx = SpectralContext::new(g);
        let p = ModelParams {
            chi: 1.7,
            tau: 0.4,
            gamma: 1.2,
            sigma_c: 0.05,
            ..ModelParams::default()
        };
        let a = 0.6;
        // The last two terms leave ρ alone but overlap with ∂_θB.
        let f = |x1: f64, th: f64| {
            let (s, c) = (2.0 * PI * x1).sin_cos();
            F_STAR
                * (1.0 + a * c * (1.0 + th.cos()) + 0.3 * s * th.cos() + 0.2 * c * (2.0 * th).cos())
        };
        let s = PhaseState::with_elliptic_chemical(
            SpectralField3::from_fn(g, |x1, _, th| f(x1, th)),
            &p,
            &ctx,
        );
        // c = 1/γ + A cos 2πx₁ with ∂_θB = 2πA sin2πx₁ cosθ + 4τπ²A cos2πx₁ cos2θ.
        let amp = a / (p.gamma + 4.0 * PI * PI * p.sigma_c);
        let n = 96;
        let h = 1.0 / n as f64;
        let mut sum = 0.0;
        for i in 0..n {
            let x = (i as f64 + 0.5) * h;
            for j in 0..n {
                let th = 2.0 * PI * (j as f64 + 0.5) * h;
                let db = 2.0 * PI * amp * (2.0 * PI * x).sin() * th.cos()
                    + 4.0 * p.tau * PI * PI * amp * (2.0 * PI * x).cos() * (2.0 * th).cos();
                sum += f(x, th).powi(2) * db;
            }
        }
        let expect = -0.5 * p.chi * sum * h * 2.0 * PI * h;
        let got = interaction_rate(&s.f, &s.c, &p, &ctx).unwrap();
        assert!(
            (got - expect).abs() < 1e-13 * expect.abs(),
            "{got} vs {expect}"
        );
        assert!(expect.abs() > 1e-4);
    }

    #[test]
    fn homogeneous_residual_vanishes() {
        let g = SpectralGrid::cube(8).unwrap();
        let p = ModelParams {
            chi: 2.0,
            ..ModelParams::default()
        };
        let mut st = Stepper::new(
            g,
            p,
            StepperConfig {
                dt: 0.01,
                ..Default::default()
            },
        )
        .unwrap();
        let s0 = PhaseState::homogeneous(g, &p, st.context());
        let (s1, _) = st.step(&s0).unwrap();
        let (s2, _) = st.step(&s1).unwrap();
        let r = dissipation_residual([&s0, &s1, &s2], &p, st.context()).unwrap();
        assert!(r.abs() < 1e-13);
        assert!(dissipation_residual([&s0, &s1, &s1], &p, st.context()).is_err());
    }

    #[test]
    fn heat_flow_residual_is_second_order() {
        let g = SpectralGrid::cube(8).unwrap();
        let p = ModelParams {
            chi: 0.0,
            lambda: 0.0,
            sigma_x: 0.05,
            sigma_theta: 0.5,
            ..ModelParams::default()
        };
        let f0 = SpectralField3::from_fn(g, |x1, x2, th| {
            F_STAR
                * (1.0
                    + 0.5 * (2.0 * PI * x1).cos() * th.cos()
                    + 0.3 * (2.0 * PI * x2).sin() * (2.0 * th).sin())
        });
        let res = |dt: f64| {
            let mut st = Stepper::new(
                g,
                p,
                StepperConfig {
                    dt,
                    ..Default::default()
                },
            )
            .unwrap();
            let s0 = PhaseState::with_elliptic_chemical(f0.clone(), &p, st.context());
            let (s1, _) = st.step(&s0).unwrap();
            let (s2, _) = st.step(&s1).unwrap();
            dissipation_residual([&s0, &s1, &s2], &p, st.context())
                .unwrap()
                .abs()
        };
        let (r1, r2) = (res(0.02), res(0.01));
        let order = (r1 / r2).log2();
        assert!((order - 2.0).abs() < 0.2, "order {order}");
    }
}
