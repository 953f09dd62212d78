use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::SpectralGrid;
use super::transform::SpectralContext;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Representation {
    Physical,
    Fourier,
}

/// Either collocation values or half-spectrum coefficients.
#[derive(Clone, Debug, PartialEq)]
pub enum FieldData {
    Physical(Vec<f64>),
    Fourier(Vec<Complex64>),
}

impl FieldData {
    pub fn representation(&self) -> Representation {
        match self {
            FieldData::Physical(_) => Representation::Physical,
            FieldData::Fourier(_) => Representation::Fourier,
        }
    }
}

/// Parseval weight of a stored half-spectrum column: interior columns stand
/// for themselves and their conjugate partner.
#[inline]
pub(crate) fn half_weight(j: usize, n: usize) -> f64 {
    if j == 0 || j == n / 2 {
        1.0
    } else {
        2.0
    }
}

/// A phase-space field `u(x1, x2, θ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralField3 {
    grid: SpectralGrid,
    data: FieldData,
}

impl SpectralField3 {
    pub fn physical(grid: SpectralGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} physical values, got {}",
                grid.len(),
                values.len()
            )));
        }
        Ok(Self {
            grid,
            data: FieldData::Physical(values),
        })
    }

    pub fn fourier(grid: SpectralGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.fourier_len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} coefficients, got {}",
                grid.fourier_len(),
                coeffs.len()
            )));
        }
        Ok(Self {
            grid,
            data: FieldData::Fourier(coeffs),
        })
    }

    pub fn constant(grid: SpectralGrid, value: f64) -> Self {
        Self {
            grid,
            data: FieldData::Physical(vec![value; grid.len()]),
        }
    }

    /// Sample `f(x1, x2, θ)` on the collocation points.
    pub fn from_fn(grid: SpectralGrid, f: impl Fn(f64, f64, f64) -> f64) -> Self {
        let mut v = Vec::with_capacity(grid.len());
        for i1 in 0..grid.n_x1 {
            let x1 = grid.x1(i1);
            for i2 in 0..grid.n_x2 {
                let x2 = grid.x2(i2);
                for j in 0..grid.n_theta {
                    v.push(f(x1, x2, grid.theta(j)));
                }
            }
        }
        Self {
            grid,
            data: FieldData::Physical(v),
        }
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn data(&self) -> &FieldData {
        &self.data
    }

    pub fn representation(&self) -> Representation {
        self.data.representation()
    }

    pub fn values(&self) -> Result<&[f64]> {
        match &self.data {
            FieldData::Physical(v) => Ok(v),
            FieldData::Fourier(_) => Err(Error::Representation {
                expected: "physical",
            }),
        }
    }

    pub fn coeffs(&self) -> Result<&[Complex64]> {
        match &self.data {
            FieldData::Fourier(c) => Ok(c),
            FieldData::Physical(_) => Err(Error::Representation {
                expected: "fourier",
            }),
        }
    }

    pub fn coeffs_mut(&mut self) -> Result<&mut [Complex64]> {
        match &mut self.data {
            FieldData::Fourier(c) => Ok(c),
            FieldData::Physical(_) => Err(Error::Representation {
                expected: "fourier",
            }),
        }
    }

    pub fn values_mut(&mut self) -> Result<&mut [f64]> {
        match &mut self.data {
            FieldData::Physical(v) => Ok(v),
            FieldData::Fourier(_) => Err(Error::Representation {
                expected: "physical",
            }),
        }
    }

    pub fn into_fourier(self, ctx: &SpectralContext) -> Self {
        match self.data {
            FieldData::Physical(v) => Self {
                grid: self.grid,
                data: FieldData::Fourier(ctx.forward3(&v)),
            },
            FieldData::Fourier(_) => self,
        }
    }

    pub fn into_physical(self, ctx: &SpectralContext) -> Self {
        match self.data {
            FieldData::Fourier(c) => Self {
                grid: self.grid,
                data: FieldData::Physical(ctx.inverse3(&c)),
            },
            FieldData::Physical(_) => self,
        }
    }

    pub fn to_fourier(&self, ctx: &SpectralContext) -> Self {
        self.clone().into_fourier(ctx)
    }

    pub fn to_physical(&self, ctx: &SpectralContext) -> Self {
        self.clone().into_physical(ctx)
    }

    /// Coefficients, transforming if needed.
    pub fn fourier_coeffs(&self, ctx: &SpectralContext) -> Vec<Complex64> {
        match &self.data {
            FieldData::Fourier(c) => c.clone(),
            FieldData::Physical(v) => ctx.forward3(v),
        }
    }

    /// Collocation values, transforming if needed.
    pub fn physical_values(&self, ctx: &SpectralContext) -> Vec<f64> {
        match &self.data {
            FieldData::Physical(v) => v.clone(),
            FieldData::Fourier(c) => ctx.inverse3(c),
        }
    }

    /// `∫ u v dθ dx` by collocation quadrature (Parseval in Fourier space).
    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("inner product across grids".into()));
        }
        let g = self.grid;
        match (&self.data, &other.data) {
            (FieldData::Physical(a), FieldData::Physical(b)) => {
                Ok(g.cell_volume() * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
            }
            (FieldData::Fourier(a), FieldData::Fourier(b)) => {
                let nh = g.theta_half();
                let mut s = 0.0;
                for (idx, (x, y)) in a.iter().zip(b).enumerate() {
                    s += half_weight(idx % nh, g.n_theta) * (x * y.conj()).re;
                }
                Ok(s * g.cell_volume() / g.len() as f64)
            }
            _ => Err(Error::Representation {
                expected: "matching",
            }),
        }
    }

    /// Discrete `L²` norm over phase space.
    pub fn l2_norm(&self) -> f64 {
        self.inner(self)
            .expect("same grid and representation")
            .max(0.0)
            .sqrt()
    }

    /// `∫ u dθ dx`.
    pub fn integral(&self) -> f64 {
        let g = self.grid;
        match &self.data {
            FieldData::Physical(v) => g.cell_volume() * v.iter().sum::<f64>(),
            FieldData::Fourier(c) => c[0].re * g.cell_volume(),
        }
    }

    pub fn scale(&mut self, a: f64) {
        match &mut self.data {
            FieldData::Physical(v) => v.iter_mut().for_each(|x| *x *= a),
            FieldData::Fourier(c) => c.iter_mut().for_each(|x| *x *= a),
        }
    }

    /// `self += a · other` in matching representations.
    pub fn axpy(&mut self, a: f64, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("axpy across grids".into()));
        }
        match (&mut self.data, &other.data) {
            (FieldData::Physical(x), FieldData::Physical(y)) => {
                x.iter_mut().zip(y).for_each(|(x, y)| *x += a * y)
            }
            (FieldData::Fourier(x), FieldData::Fourier(y)) => {
                x.iter_mut().zip(y).for_each(|(x, y)| *x += a * y)
            }
            _ => {
                return Err(Error::Representation {
                    expected: "matching",
                })
            }
        }
        Ok(())
    }

    /// Spatial density `ρ = ∫ u dθ` as coefficients.
    pub fn density(&self, ctx: &SpectralContext) -> SpatialField2 {
        let g = self.grid;
        let nh = g.theta_half();
        let coeffs = self.fourier_coeffs(ctx);
        let h2 = g.x2_half();
        let scale = g.dtheta();
        let mut out = vec![Complex64::new(0.0, 0.0); g.spatial_fourier_len()];
        for i1 in 0..g.n_x1 {
            for i2 in 0..h2 {
                out[g.spatial_fourier_index(i1, i2)] = coeffs[(i1 * g.n_x2 + i2) * nh] * scale;
            }
        }
        SpatialField2 {
            grid: g,
            data: FieldData::Fourier(out),
        }
    }

    pub fn is_finite(&self) -> bool {
        match &self.data {
            FieldData::Physical(v) => v.iter().all(|x| x.is_finite()),
            FieldData::Fourier(c) => c.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
        }
    }
}

/// A spatial field `c(x1, x2)` on the `x`-part of a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SpatialField2 {
    grid: SpectralGrid,
    data: FieldData,
}

impl SpatialField2 {
    pub fn physical(grid: SpectralGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.spatial_len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} spatial values, got {}",
                grid.spatial_len(),
                values.len()
            )));
        }
        Ok(Self {
            grid,
            data: FieldData::Physical(values),
        })
    }

    pub fn fourier(grid: SpectralGrid, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != grid.spatial_fourier_len() {
            return Err(Error::InvalidGrid(format!(
                "expected {} spatial coefficients, got {}",
                grid.spatial_fourier_len(),
                coeffs.len()
            )));
        }
        Ok(Self {
            grid,
            data: FieldData::Fourier(coeffs),
        })
    }

    pub fn constant(grid: SpectralGrid, value: f64) -> Self {
        Self {
            grid,
            data: FieldData::Physical(vec![value; grid.spatial_len()]),
        }
    }

    pub fn from_fn(grid: SpectralGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let mut v = Vec::with_capacity(grid.spatial_len());
        for i1 in 0..grid.n_x1 {
            for i2 in 0..grid.n_x2 {
                v.push(f(grid.x1(i1), grid.x2(i2)));
            }
        }
        Self {
            grid,
            data: FieldData::Physical(v),
        }
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    pub fn data(&self) -> &FieldData {
        &self.data
    }

    pub fn representation(&self) -> Representation {
        self.data.representation()
    }

    pub fn values(&self) -> Result<&[f64]> {
        match &self.data {
            FieldData::Physical(v) => Ok(v),
            FieldData::Fourier(_) => Err(Error::Representation {
                expected: "physical",
            }),
        }
    }

    pub fn coeffs(&self) -> Result<&[Complex64]> {
        match &self.data {
            FieldData::Fourier(c) => Ok(c),
            FieldData::Physical(_) => Err(Error::Representation {
                expected: "fourier",
            }),
        }
    }

    pub fn into_fourier(self, ctx: &SpectralContext) -> Self {
        match self.data {
            FieldData::Physical(v) => Self {
                grid: self.grid,
                data: FieldData::Fourier(ctx.forward2(&v)),
            },
            FieldData::Fourier(_) => self,
        }
    }

    pub fn into_physical(self, ctx: &SpectralContext) -> Self {
        match self.data {
            FieldData::Fourier(c) => Self {
                grid: self.grid,
                data: FieldData::Physical(ctx.inverse2(&c)),
            },
            FieldData::Physical(_) => self,
        }
    }

    pub fn to_fourier(&self, ctx: &SpectralContext) -> Self {
        self.clone().into_fourier(ctx)
    }

    pub fn to_physical(&self, ctx: &SpectralContext) -> Self {
        self.clone().into_physical(ctx)
    }

    pub fn fourier_coeffs(&self, ctx: &SpectralContext) -> Vec<Complex64> {
        match &self.data {
            FieldData::Fourier(c) => c.clone(),
            FieldData::Physical(v) => ctx.forward2(v),
        }
    }

    pub fn physical_values(&self, ctx: &SpectralContext) -> Vec<f64> {
        match &self.data {
            FieldData::Physical(v) => v.clone(),
            FieldData::Fourier(c) => ctx.inverse2(c),
        }
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.grid != other.grid {
            return Err(Error::InvalidGrid("inner product across grids".into()));
        }
        let g = self.grid;
        match (&self.data, &other.data) {
            (FieldData::Physical(a), FieldData::Physical(b)) => {
                Ok(g.spatial_cell_area() * a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
            }
            (FieldData::Fourier(a), FieldData::Fourier(b)) => {
                let h2 = g.x2_half();
                let mut s = 0.0;
                for (idx, (x, y)) in a.iter().zip(b).enumerate() {
                    s += half_weight(idx % h2, g.n_x2) * (x * y.conj()).re;
                }
                let n = g.spatial_len() as f64;
                Ok(s / (n * n))
            }
            _ => Err(Error::Representation {
                expected: "matching",
            }),
        }
    }

    pub fn l2_norm(&self) -> f64 {
        self.inner(self)
            .expect("same grid and representation")
            .max(0.0)
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        match &self.data {
            FieldData::Physical(v) => v.iter().all(|x| x.is_finite()),
            FieldData::Fourier(c) => c.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn grid() -> SpectralGrid {
        SpectralGrid::new(8, 10, 12).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn roundtrip_and_parseval(seed in any::<u64>()) {
            let g = grid();
            let ctx = SpectralContext::new(g);
            let mut s = seed;
            let v: Vec<f64> = (0..g.len()).map(|_| {
                s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
            }).collect();
            let u = SpectralField3::physical(g, v).unwrap();
            let uh = u.to_fourier(&ctx);
            let back = uh.to_physical(&ctx);
            let diff = {
                let mut d = back.clone();
                d.axpy(-1.0, &u).unwrap();
                d.l2_norm()
            };
            prop_assert!(diff <= 1e-12 * u.l2_norm());
            let (np, nf) = (u.l2_norm(), uh.l2_norm());
            prop_assert!((np - nf).abs() <= 1e-12 * np);
        }
    }

    #[test]
    fn density_of_separable_field() {
        let g = grid();
        let ctx = SpectralContext::new(g);
        let u = SpectralField3::from_fn(g, |x1, _, th| {
            (1.0 + 0.5 * (2.0 * PI * x1).cos()) / (2.0 * PI) + th.cos()
        });
        let rho = u.density(&ctx).into_physical(&ctx);
        for (i, r) in rho.values().unwrap().iter().enumerate() {
            let x1 = g.x1(i / g.n_x2);
            assert!((r - (1.0 + 0.5 * (2.0 * PI * x1).cos())).abs() < 1e-13);
        }
    }

    #[test]
    fn integral_both_representations() {
        let g = grid();
        let ctx = SpectralContext::new(g);
        let u = SpectralField3::constant(g, 1.0 / (2.0 * PI));
        assert!((u.integral() - 1.0).abs() < 1e-14);
        assert!((u.to_fourier(&ctx).integral() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spatial_parseval() {
        let g = grid();
        let ctx = SpectralContext::new(g);
        let c = SpatialField2::from_fn(g, |x1, x2| (2.0 * PI * x1).sin() + (4.0 * PI * x2).cos());
        let a = c.l2_norm();
        assert!((a - 1.0).abs() < 1e-13);
        assert!((c.to_fourier(&ctx).l2_norm() - a).abs() < 1e-13);
    }

    #[test]
    fn rejects_wrong_lengths() {
        let g = grid();
        assert!(SpectralField3::physical(g, vec![0.0; 3]).is_err());
        assert!(SpatialField2::fourier(g, vec![Complex64::new(0.0, 0.0); 3]).is_err());
    }
}
