use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::config::KeyValues;
use crate::error::{Error, Result};

/// Collocation grid on `[0,1)² × [0,2π)`.
///
/// Physical arrays are indexed `(i1, i2, j)` with the angle `j` fastest.
/// Fourier arrays keep the non-negative half of the angular spectrum, so a
/// 3-D coefficient array has `n_x1 · n_x2 · (n_theta/2 + 1)` entries and a
/// 2-D one `n_x1 · (n_x2/2 + 1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpectralGrid {
    pub n_x1: usize,
    pub n_x2: usize,
    pub n_theta: usize,
}

impl Default for SpectralGrid {
    fn default() -> Self {
        Self {
            n_x1: 64,
            n_x2: 64,
            n_theta: 64,
        }
    }
}

impl SpectralGrid {
    pub fn new(n_x1: usize, n_x2: usize, n_theta: usize) -> Result<Self> {
        for (name, n) in [("n_x1", n_x1), ("n_x2", n_x2), ("n_theta", n_theta)] {
            if n < 8 || n % 2 != 0 {
                return Err(Error::InvalidGrid(format!(
                    "{name} must be even and >= 8, got {n}"
                )));
            }
        }
        Ok(Self {
            n_x1,
            n_x2,
            n_theta,
        })
    }

    pub fn cube(n: usize) -> Result<Self> {
        Self::new(n, n, n)
    }

    pub fn from_key_values(kv: &KeyValues, base: SpectralGrid) -> Result<Self> {
        Self::new(
            kv.get_usize("n_x1")?.unwrap_or(base.n_x1),
            kv.get_usize("n_x2")?.unwrap_or(base.n_x2),
            kv.get_usize("n_theta")?.unwrap_or(base.n_theta),
        )
    }

    /// Number of physical points in phase space.
    pub fn len(&self) -> usize {
        self.n_x1 * self.n_x2 * self.n_theta
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn spatial_len(&self) -> usize {
        self.n_x1 * self.n_x2
    }

    /// Stored angular modes `0..=n_theta/2`.
    pub fn theta_half(&self) -> usize {
        self.n_theta / 2 + 1
    }

    /// Stored `x2` modes of a 2-D coefficient array.
    pub fn x2_half(&self) -> usize {
        self.n_x2 / 2 + 1
    }

    pub fn fourier_len(&self) -> usize {
        self.spatial_len() * self.theta_half()
    }

    pub fn spatial_fourier_len(&self) -> usize {
        self.n_x1 * self.x2_half()
    }

    /// Measure of the phase space `𝕋²₁ × 𝕋₂π`.
    pub fn volume(&self) -> f64 {
        2.0 * PI
    }

    /// Quadrature weight of one phase-space collocation point.
    pub fn cell_volume(&self) -> f64 {
        self.volume() / self.len() as f64
    }

    pub fn spatial_cell_area(&self) -> f64 {
        1.0 / self.spatial_len() as f64
    }

    pub fn x1(&self, i1: usize) -> f64 {
        i1 as f64 / self.n_x1 as f64
    }

    pub fn x2(&self, i2: usize) -> f64 {
        i2 as f64 / self.n_x2 as f64
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.n_theta as f64
    }

    pub fn dx(&self) -> f64 {
        (1.0 / self.n_x1 as f64).min(1.0 / self.n_x2 as f64)
    }

    pub fn dtheta(&self) -> f64 {
        2.0 * PI / self.n_theta as f64
    }

    #[inline]
    pub fn index(&self, i1: usize, i2: usize, j: usize) -> usize {
        (i1 * self.n_x2 + i2) * self.n_theta + j
    }

    #[inline]
    pub fn fourier_index(&self, i1: usize, i2: usize, j: usize) -> usize {
        (i1 * self.n_x2 + i2) * self.theta_half() + j
    }

    #[inline]
    pub fn spatial_index(&self, i1: usize, i2: usize) -> usize {
        i1 * self.n_x2 + i2
    }

    #[inline]
    pub fn spatial_fourier_index(&self, i1: usize, i2: usize) -> usize {
        i1 * self.x2_half() + i2
    }

    /// Same grid with `factor`-times finer spacing in every direction.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(
            self.n_x1 * factor,
            self.n_x2 * factor,
            self.n_theta * factor,
        )
    }
}

/// Signed wavenumber stored at FFT index `i` of a length-`n` transform.
#[inline]
pub fn signed_mode(i: usize, n: usize) -> i64 {
    if i <= n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

#[inline]
pub fn is_nyquist(i: usize, n: usize) -> bool {
    i == n / 2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_sizes() {
        assert!(SpectralGrid::new(8, 8, 8).is_ok());
        assert!(SpectralGrid::new(6, 8, 8).is_err());
        assert!(SpectralGrid::new(8, 9, 8).is_err());
        assert!(SpectralGrid::new(8, 8, 0).is_err());
    }

    #[test]
    fn modes() {
        let n = 8;
        let m: Vec<i64> = (0..n).map(|i| signed_mode(i, n)).collect();
        assert_eq!(m, vec![0, 1, 2, 3, 4, -3, -2, -1]);
        assert!(is_nyquist(4, 8));
    }

    #[test]
    fn layout_sizes() {
        let g = SpectralGrid::new(8, 10, 12).unwrap();
        assert_eq!(g.len(), 960);
        assert_eq!(g.fourier_len(), 8 * 10 * 7);
        assert_eq!(g.spatial_fourier_len(), 8 * 6);
        assert_eq!(g.index(1, 2, 3), (10 + 2) * 12 + 3);
    }
}
