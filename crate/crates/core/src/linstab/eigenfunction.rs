//! Angular profiles of the growing modes and their phase-space expansions.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;

use super::operator::{shifted_transport, ModeLayout};
use crate::error::{Error, Result};
use crate::params::{Coupling, ReducedParams};
use crate::spectral::{SpectralField3, SpectralGrid};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// `𝐀 = (a(θ), b(θ))` sampled at `θ_j = 2πj/n`, describing
/// `f = a(θ)cos(2πkx₁) + b(θ)sin(2πkx₁)`.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaProfilePair {
    pub a: Vec<Complex64>,
    pub b: Vec<Complex64>,
    /// `∫ a dθ`
    pub a_bar: Complex64,
    /// `∫ b dθ`
    pub b_bar: Complex64,
}

impl ThetaProfilePair {
    pub fn from_samples(a: Vec<Complex64>, b: Vec<Complex64>) -> Result<Self> {
        if a.len() != b.len() || a.is_empty() {
            return Err(Error::InvalidParameter(
                "profile components need equal, non-zero lengths".into(),
            ));
        }
        let w = 2.0 * PI / a.len() as f64;
        let a_bar = a.iter().sum::<Complex64>() * w;
        let b_bar = b.iter().sum::<Complex64>() * w;
        Ok(Self { a, b, a_bar, b_bar })
    }

    pub fn from_fn(n: usize, f: impl Fn(f64) -> (Complex64, Complex64)) -> Result<Self> {
        let (a, b) = (0..n).map(|j| f(2.0 * PI * j as f64 / n as f64)).unzip();
        Self::from_samples(a, b)
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn theta(&self, j: usize) -> f64 {
        2.0 * PI * j as f64 / self.len() as f64
    }

    /// `(∫|a|² + |b|² dθ)^{1/2}` by the trapezoid rule.
    pub fn l2_norm(&self) -> f64 {
        let w = 2.0 * PI / self.len() as f64;
        (w * self
            .a
            .iter()
            .chain(&self.b)
            .map(|z| z.norm_sqr())
            .sum::<f64>())
        .sqrt()
    }

    /// Largest imaginary part relative to the largest modulus.
    pub fn imaginary_fraction(&self) -> f64 {
        let it = self.a.iter().chain(&self.b);
        let max = it.clone().map(|z| z.norm()).fold(0.0, f64::max);
        let im = it.map(|z| z.im.abs()).fold(0.0, f64::max);
        if max == 0.0 {
            0.0
        } else {
            im / max
        }
    }

    /// Real part expanded to `a(θ)cos(2πkx₁) + b(θ)sin(2πkx₁)` on a grid
    /// whose angular resolution equals the profile length.
    pub fn expand(&self, grid: SpectralGrid, k: u32) -> Result<SpectralField3> {
        if grid.n_theta != self.len() {
            return Err(Error::InvalidGrid(format!(
                "profile has {} angles, grid has {}",
                self.len(),
                grid.n_theta
            )));
        }
        let kk = 2.0 * PI * f64::from(k);
        let mut v = Vec::with_capacity(grid.len());
        for i1 in 0..grid.n_x1 {
            let (s, c) = (kk * grid.x1(i1)).sin_cos();
            for _ in 0..grid.n_x2 {
                for j in 0..grid.n_theta {
                    v.push(self.a[j].re * c + self.b[j].re * s);
                }
            }
        }
        SpectralField3::physical(grid, v)
    }
}

/// `𝖡_τ̆(θ) w`.
fn b_tau(tau: f64, theta: f64, w: [Complex64; 2]) -> [Complex64; 2] {
    let (c1, c2) = (theta.cos(), (2.0 * theta).cos());
    [-tau * c2 * w[0] + c1 * w[1], -c1 * w[0] - tau * c2 * w[1]]
}

/// Mode amplitude `w/(μ + ν̆)` that the chemical unknowns take in the
/// parabolic eigenvector, or `w` itself for the elliptic coupling.
fn chemical_factor(rp: &ReducedParams, coupling: Coupling, mu: f64) -> f64 {
    match coupling {
        Coupling::Elliptic => 1.0,
        Coupling::Parabolic => 1.0 / (mu + rp.nu_breve),
    }
}

/// `𝐀(θ) = χ̆ (μ' − 𝖵_λ̆)⁻¹ 𝖡_τ̆(θ) w` with `μ' = μ₀ + σ̆ₓ`, sampled at
/// `n_theta` angles. At a root of the dispersion relation `∫𝐀 dθ = w`
/// (elliptic) and `𝐀` is an eigenvector of the inviscid operator.
pub fn inviscid_eigenfunction(
    rp: &ReducedParams,
    coupling: Coupling,
    mu0: f64,
    w: [f64; 2],
    n_theta: usize,
) -> Result<ThetaProfilePair> {
    if !(mu0 > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "eigenvalue must be positive, got {mu0}"
        )));
    }
    let m = mu0 + rp.sigma_x_breve;
    let l = rp.lambda_breve;
    let scale = rp.chi_breve * chemical_factor(rp, coupling, mu0);
    let w = [Complex64::new(w[0], 0.0), Complex64::new(w[1], 0.0)];
    ThetaProfilePair::from_fn(n_theta, |th| {
        let c = th.cos();
        let d = scale / (m * m + l * l * c * c);
        let bw = b_tau(rp.tau_breve, th, w);
        (
            d * (m * bw[0] - l * c * bw[1]),
            d * (l * c * bw[0] + m * bw[1]),
        )
    })
}

/// Same construction with the viscous resolvent
/// `(μ' − σ d²/dθ² − 𝖵_λ̆)⁻¹` solved in `−N..N` angular modes.
pub fn viscous_eigenfunction(
    rp: &ReducedParams,
    coupling: Coupling,
    mu: f64,
    w: [f64; 2],
    n_modes: usize,
    n_theta: usize,
) -> Result<ThetaProfilePair> {
    let lay = ModeLayout { n_modes };
    let mp = Complex64::new(mu + rp.sigma_x_breve, 0.0);
    let m = shifted_transport(rp, mp, n_modes)?;
    let scale = rp.chi_breve * chemical_factor(rp, coupling, mu);
    let mut rhs = DVector::from_element(m.nrows(), ZERO);
    // Fourier coefficients of 𝖡_τ̆ w: cosθ → ½ on ±1, cos2θ → ½ on ±2.
    for n in [-1i64, 1] {
        rhs[lay.a(n)] += 0.5 * scale * w[1];
        rhs[lay.b(n)] -= 0.5 * scale * w[0];
    }
    for n in [-2i64, 2] {
        rhs[lay.a(n)] -= 0.5 * scale * rp.tau_breve * w[0];
        rhs[lay.b(n)] -= 0.5 * scale * rp.tau_breve * w[1];
    }
    let x = m
        .lu()
        .solve(&rhs)
        .ok_or_else(|| Error::Singular(format!("resolvent at mu = {mu}")))?;
    let nm = n_modes as i64;
    ThetaProfilePair::from_fn(n_theta, |th| {
        let mut a = ZERO;
        let mut b = ZERO;
        for n in -nm..=nm {
            let e = Complex64::from_polar(1.0, n as f64 * th);
            a += x[lay.a(n)] * e;
            b += x[lay.b(n)] * e;
        }
        (a, b)
    })
}

/// Apply the inviscid elliptic operator `𝖵_λ̆ 𝐀 − σ̆ₓ𝐀 + χ̆ 𝖡_τ̆ ∫𝐀` on the
/// sample points (trapezoid rule for the mean).
pub fn apply_inviscid_operator(
    rp: &ReducedParams,
    pair: &ThetaProfilePair,
) -> Result<ThetaProfilePair> {
    let l = rp.lambda_breve;
    let mean = [pair.a_bar, pair.b_bar];
    let (a, b) = (0..pair.len())
        .map(|j| {
            let th = pair.theta(j);
            let c = th.cos();
            let bm = b_tau(rp.tau_breve, th, mean);
            (
                -l * c * pair.b[j] - rp.sigma_x_breve * pair.a[j] + rp.chi_breve * bm[0],
                l * c * pair.a[j] - rp.sigma_x_breve * pair.b[j] + rp.chi_breve * bm[1],
            )
        })
        .unzip();
    ThetaProfilePair::from_samples(a, b)
}

/// Quarter turn of a phase-space field: `g(x₁, x₂, θ) = f(x₂, −x₁, θ − π/2)`.
///
/// This is the rotation of positions by `+π/2` carried along with headings,
/// under which the transport term is invariant. Applying it twice gives
/// `f(−x, θ + π)`. Needs a square spatial grid and `n_theta` divisible by 4.
pub fn rotate_quarter(u: &SpectralField3) -> Result<SpectralField3> {
    let g = *u.grid();
    if g.n_x1 != g.n_x2 || !g.n_theta.is_multiple_of(4) {
        return Err(Error::InvalidGrid(
            "quarter rotation needs n_x1 = n_x2 and n_theta divisible by 4".into(),
        ));
    }
    let v = u.values()?;
    let (n, nt) = (g.n_x1, g.n_theta);
    let q = nt / 4;
    let mut out = vec![0.0; g.len()];
    for i1 in 0..n {
        for i2 in 0..n {
            let src1 = i2;
            let src2 = (n - i1) % n;
            for j in 0..nt {
                out[g.index(i1, i2, j)] = v[g.index(src1, src2, (j + nt - q) % nt)];
            }
        }
    }
    SpectralField3::physical(g, out)
}

/// The expanded mode `f^k` together with its quarter-turn rotation.
pub fn rotated_eigenfunction(
    pair: &ThetaProfilePair,
    k: u32,
    grid: SpectralGrid,
) -> Result<(SpectralField3, SpectralField3)> {
    let f = pair.expand(grid, k)?;
    let r = rotate_quarter(&f)?;
    Ok((f, r))
}

/// The four seeds: `w = (1,0)`, `w = (0,1)` and their rotations.
pub fn orthogonal_seeds(
    rp: &ReducedParams,
    coupling: Coupling,
    mu: f64,
    n_modes: usize,
    grid: SpectralGrid,
) -> Result<[SpectralField3; 4]> {
    let p1 = viscous_eigenfunction(rp, coupling, mu, [1.0, 0.0], n_modes, grid.n_theta)?;
    let p2 = viscous_eigenfunction(rp, coupling, mu, [0.0, 1.0], n_modes, grid.n_theta)?;
    let (f1, r1) = rotated_eigenfunction(&p1, rp.k, grid)?;
    let (f2, r2) = rotated_eigenfunction(&p2, rp.k, grid)?;
    Ok([f1, f2, r1, r2])
}

/// Gram matrix of phase-space inner products.
pub fn gram_matrix(fields: &[SpectralField3]) -> Result<Vec<Vec<f64>>> {
    fields
        .iter()
        .map(|u| fields.iter().map(|v| u.inner(v)).collect())
        .collect()
}

/// Largest `|G_ij|/√(G_ii G_jj)` over `i ≠ j`.
pub fn gram_off_diagonal(g: &[Vec<f64>]) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..g.len() {
        for j in 0..g.len() {
            if i != j {
                worst = worst.max(g[i][j].abs() / (g[i][i] * g[j][j]).sqrt());
            }
        }
    }
    worst
}
