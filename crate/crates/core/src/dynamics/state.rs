use std::f64::consts::PI;

use num_complex::Complex64;

use super::chemical::chemical_solve_elliptic;
use crate::error::{Error, Result};
use crate::params::ModelParams;
use crate::spectral::{SpatialField2, SpectralContext, SpectralField3, SpectralGrid};

/// `1/2π`, the homogeneous phase-space density of unit mass.
pub const F_STAR: f64 = 1.0 / (2.0 * PI);

/// The pair `(f, c)` at time `t`. Both fields are held as Fourier
/// coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseState {
    pub f: SpectralField3,
    pub c: SpatialField2,
    pub t: f64,
}

impl PhaseState {
    /// `(1/2π, 1/γ)`.
    pub fn homogeneous(grid: SpectralGrid, params: &ModelParams, ctx: &SpectralContext) -> Self {
        Self {
            f: SpectralField3::constant(grid, F_STAR).into_fourier(ctx),
            c: SpatialField2::constant(grid, 1.0 / params.gamma).into_fourier(ctx),
            t: 0.0,
        }
    }

    /// Pair `f` with the chemical field slaved to its density.
    pub fn with_elliptic_chemical(
        f: SpectralField3,
        params: &ModelParams,
        ctx: &SpectralContext,
    ) -> Self {
        let f = f.into_fourier(ctx);
        let c = chemical_solve_elliptic(&f.density(ctx), params, ctx);
        Self { f, c, t: 0.0 }
    }

    pub fn new(f: SpectralField3, c: SpatialField2, t: f64, ctx: &SpectralContext) -> Result<Self> {
        if f.grid().n_x1 != c.grid().n_x1 || f.grid().n_x2 != c.grid().n_x2 {
            return Err(Error::InvalidGrid(
                "f and c live on different spatial grids".into(),
            ));
        }
        Ok(Self {
            f: f.into_fourier(ctx),
            c: c.into_fourier(ctx),
            t,
        })
    }

    pub fn grid(&self) -> &SpectralGrid {
        self.f.grid()
    }

    /// `∫ f dθ dx`.
    pub fn mass(&self) -> f64 {
        self.f.integral()
    }

    pub fn min_max(&self, ctx: &SpectralContext) -> (f64, f64) {
        min_max(&self.f.physical_values(ctx))
    }

    /// `Ok` when `min f ≥ −tol·max f`; otherwise reports the violation.
    pub fn check_positivity(&self, rel_tol: f64, ctx: &SpectralContext) -> Result<()> {
        let (lo, hi) = self.min_max(ctx);
        if lo < -rel_tol * hi {
            return Err(Error::InvalidParameter(format!(
                "positivity violated: min f = {lo:e}, max f = {hi:e}"
            )));
        }
        Ok(())
    }

    pub fn check_mass(&self, tol: f64) -> Result<()> {
        let m = self.mass();
        if (m - 1.0).abs() > tol {
            return Err(Error::InvalidParameter(format!("mass {m} differs from 1")));
        }
        Ok(())
    }

    /// Perturbation `f − 1/2π` as coefficients.
    pub fn deviation(&self) -> Result<Vec<Complex64>> {
        let mut d = self.f.coeffs()?.to_vec();
        d[0] -= F_STAR * self.grid().len() as f64;
        Ok(d)
    }
}

pub(crate) fn min_max(v: &[f64]) -> (f64, f64) {
    v.iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_invariants() {
        let g = SpectralGrid::cube(8).unwrap();
        let ctx = SpectralContext::new(g);
        let s = PhaseState::homogeneous(g, &ModelParams::default(), &ctx);
        assert!((s.mass() - 1.0).abs() < 1e-14);
        s.check_mass(1e-10).unwrap();
        s.check_positivity(1e-8, &ctx).unwrap();
        let (lo, hi) = s.min_max(&ctx);
        assert!((lo - F_STAR).abs() < 1e-15 && (hi - F_STAR).abs() < 1e-15);
        assert!(s.deviation().unwrap().iter().all(|z| z.norm() < 1e-12));
    }

    #[test]
    fn negative_values_are_reported() {
        let g = SpectralGrid::cube(8).unwrap();
        let ctx = SpectralContext::new(g);
        let f = SpectralField3::from_fn(g, |x1, _, _| F_STAR * (1.0 + 1.5 * (2.0 * PI * x1).cos()));
        let s = PhaseState::with_elliptic_chemical(f, &ModelParams::default(), &ctx);
        assert!(s.check_positivity(1e-8, &ctx).is_err());
        s.check_mass(1e-12).unwrap();
    }
}
