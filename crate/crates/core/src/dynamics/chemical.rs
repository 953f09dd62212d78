use std::f64::consts::PI;

use super::phi::phi1;
use crate::params::ModelParams;
use crate::spectral::{signed_mode, SpatialField2, SpectralContext, SpectralGrid};

/// `γ + σ_c 4π²|m|²` for the stored 2-D coefficient `(i1, i2)`.
#[inline]
pub(crate) fn chemical_rate(g: &SpectralGrid, params: &ModelParams, i1: usize, i2: usize) -> f64 {
    let m1 = signed_mode(i1, g.n_x1) as f64;
    let m2 = signed_mode(i2, g.n_x2) as f64;
    params.gamma + params.sigma_c * 4.0 * PI * PI * (m1 * m1 + m2 * m2)
}

/// Steady chemical field: `ĉ(m) = ρ̂(m)/(γ + σ_c 4π²|m|²)`.
pub fn chemical_solve_elliptic(
    rho: &SpatialField2,
    params: &ModelParams,
    ctx: &SpectralContext,
) -> SpatialField2 {
    let g = *rho.grid();
    let mut c = rho.fourier_coeffs(ctx);
    for i1 in 0..g.n_x1 {
        for i2 in 0..g.x2_half() {
            c[g.spatial_fourier_index(i1, i2)] /= chemical_rate(&g, params, i1, i2);
        }
    }
    SpatialField2::fourier(g, c).expect("layout preserved")
}

/// Exact per-mode update of `∂_t c = −γc + σ_cΔc + ρ` over `dt` with `ρ`
/// frozen.
pub fn chemical_step_parabolic(
    c: &SpatialField2,
    rho: &SpatialField2,
    dt: f64,
    params: &ModelParams,
    ctx: &SpectralContext,
) -> SpatialField2 {
    let g = *c.grid();
    let mut out = c.fourier_coeffs(ctx);
    let r = rho.fourier_coeffs(ctx);
    for i1 in 0..g.n_x1 {
        for i2 in 0..g.x2_half() {
            let idx = g.spatial_fourier_index(i1, i2);
            let z = -chemical_rate(&g, params, i1, i2) * dt;
            out[idx] = out[idx] * z.exp() + r[idx] * (dt * phi1(z));
        }
    }
    SpatialField2::fourier(g, out).expect("layout preserved")
}
