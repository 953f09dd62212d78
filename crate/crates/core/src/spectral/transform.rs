//! Forward and inverse transforms between collocation values and Fourier
//! coefficients. Forward transforms are unnormalised; inverses divide by the
//! number of points.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use realfft::{ComplexToReal, RealFftPlanner, RealToComplex};
use rustfft::{Fft, FftPlanner};

use super::grid::SpectralGrid;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Immutable FFT plans for one grid. Cheap to clone and safe to share.
#[derive(Clone)]
pub struct SpectralContext {
    grid: SpectralGrid,
    r2c_theta: Arc<dyn RealToComplex<f64>>,
    c2r_theta: Arc<dyn ComplexToReal<f64>>,
    r2c_x2: Arc<dyn RealToComplex<f64>>,
    c2r_x2: Arc<dyn ComplexToReal<f64>>,
    fwd_x1: Arc<dyn Fft<f64>>,
    inv_x1: Arc<dyn Fft<f64>>,
    fwd_x2: Arc<dyn Fft<f64>>,
    inv_x2: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for SpectralContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SpectralContext")
            .field("grid", &self.grid)
            .finish_non_exhaustive()
    }
}

impl SpectralContext {
    pub fn new(grid: SpectralGrid) -> Self {
        let mut real = RealFftPlanner::<f64>::new();
        let mut cplx = FftPlanner::<f64>::new();
        Self {
            grid,
            r2c_theta: real.plan_fft_forward(grid.n_theta),
            c2r_theta: real.plan_fft_inverse(grid.n_theta),
            r2c_x2: real.plan_fft_forward(grid.n_x2),
            c2r_x2: real.plan_fft_inverse(grid.n_x2),
            fwd_x1: cplx.plan_fft_forward(grid.n_x1),
            inv_x1: cplx.plan_fft_inverse(grid.n_x1),
            fwd_x2: cplx.plan_fft_forward(grid.n_x2),
            inv_x2: cplx.plan_fft_inverse(grid.n_x2),
        }
    }

    pub fn grid(&self) -> &SpectralGrid {
        &self.grid
    }

    /// Phase-space values to half-spectrum coefficients.
    pub fn forward3(&self, values: &[f64]) -> Vec<Complex64> {
        let g = self.grid;
        assert_eq!(values.len(), g.len());
        let (nt, nh) = (g.n_theta, g.theta_half());
        let mut out = vec![ZERO; g.fourier_len()];

        let mut line = self.r2c_theta.make_input_vec();
        let mut scratch = self.r2c_theta.make_scratch_vec();
        for (src, dst) in values.chunks_exact(nt).zip(out.chunks_exact_mut(nh)) {
            line.copy_from_slice(src);
            self.r2c_theta
                .process_with_scratch(&mut line, dst, &mut scratch)
                .expect("r2c buffer sizes");
        }
        self.along_x2(&mut out, nh, &self.fwd_x2);
        along_x1(&mut out, g.n_x1, &self.fwd_x1);
        out
    }

    /// Half-spectrum coefficients back to phase-space values.
    pub fn inverse3(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let g = self.grid;
        assert_eq!(coeffs.len(), g.fourier_len());
        let (nt, nh) = (g.n_theta, g.theta_half());
        let mut work = coeffs.to_vec();
        along_x1(&mut work, g.n_x1, &self.inv_x1);
        self.along_x2(&mut work, nh, &self.inv_x2);

        let norm = 1.0 / g.len() as f64;
        let mut out = vec![0.0; g.len()];
        let mut scratch = self.c2r_theta.make_scratch_vec();
        for (src, dst) in work.chunks_exact_mut(nh).zip(out.chunks_exact_mut(nt)) {
            src[0].im = 0.0;
            src[nh - 1].im = 0.0;
            self.c2r_theta
                .process_with_scratch(src, dst, &mut scratch)
                .expect("c2r buffer sizes");
            dst.iter_mut().for_each(|v| *v *= norm);
        }
        out
    }

    /// Spatial values to coefficients (half spectrum in `x2`).
    pub fn forward2(&self, values: &[f64]) -> Vec<Complex64> {
        let g = self.grid;
        assert_eq!(values.len(), g.spatial_len());
        let (n2, h2) = (g.n_x2, g.x2_half());
        let mut out = vec![ZERO; g.spatial_fourier_len()];
        let mut line = self.r2c_x2.make_input_vec();
        let mut scratch = self.r2c_x2.make_scratch_vec();
        for (src, dst) in values.chunks_exact(n2).zip(out.chunks_exact_mut(h2)) {
            line.copy_from_slice(src);
            self.r2c_x2
                .process_with_scratch(&mut line, dst, &mut scratch)
                .expect("r2c buffer sizes");
        }
        along_x1(&mut out, g.n_x1, &self.fwd_x1);
        out
    }

    pub fn inverse2(&self, coeffs: &[Complex64]) -> Vec<f64> {
        let g = self.grid;
        assert_eq!(coeffs.len(), g.spatial_fourier_len());
        let (n2, h2) = (g.n_x2, g.x2_half());
        let mut work = coeffs.to_vec();
        along_x1(&mut work, g.n_x1, &self.inv_x1);
        let norm = 1.0 / g.spatial_len() as f64;
        let mut out = vec![0.0; g.spatial_len()];
        let mut scratch = self.c2r_x2.make_scratch_vec();
        for (src, dst) in work.chunks_exact_mut(h2).zip(out.chunks_exact_mut(n2)) {
            src[0].im = 0.0;
            src[h2 - 1].im = 0.0;
            self.c2r_x2
                .process_with_scratch(src, dst, &mut scratch)
                .expect("c2r buffer sizes");
            dst.iter_mut().for_each(|v| *v *= norm);
        }
        out
    }

    /// Transform the `x2` axis of a `(n_x1, n_x2, inner)` array in place.
    fn along_x2(&self, data: &mut [Complex64], inner: usize, fft: &Arc<dyn Fft<f64>>) {
        let n2 = self.grid.n_x2;
        let block = n2 * inner;
        let mut buf = vec![ZERO; block];
        let mut scratch = vec![ZERO; fft.get_inplace_scratch_len()];
        for slab in data.chunks_exact_mut(block) {
            transpose(slab, &mut buf, n2, inner);
            fft.process_with_scratch(&mut buf, &mut scratch);
            transpose(&buf, slab, inner, n2);
        }
    }
}

/// Transform the leading axis of an `(n1, rest)` array in place.
fn along_x1(data: &mut [Complex64], n1: usize, fft: &Arc<dyn Fft<f64>>) {
    let rest = data.len() / n1;
    let mut buf = vec![ZERO; data.len()];
    let mut scratch = vec![ZERO; fft.get_inplace_scratch_len()];
    transpose(data, &mut buf, n1, rest);
    fft.process_with_scratch(&mut buf, &mut scratch);
    transpose(&buf, data, rest, n1);
}

/// `dst[c * rows + r] = src[r * cols + c]`
fn transpose(src: &[Complex64], dst: &mut [Complex64], rows: usize, cols: usize) {
    const TILE: usize = 16;
    for r0 in (0..rows).step_by(TILE) {
        for c0 in (0..cols).step_by(TILE) {
            for r in r0..(r0 + TILE).min(rows) {
                for c in c0..(c0 + TILE).min(cols) {
                    dst[c * rows + r] = src[r * cols + c];
                }
            }
        }
    }
}
