use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::params::{dispersion_gain, Coupling, ReducedParams};

/// Closed form of `ℐ(τ̆, λ̆, μ) = ∫ (−τ̆μ cos2θ + λ̆cos²θ)/(μ² + λ̆²cos²θ) dθ`.
///
/// Evaluated as `(2π/s)(τ̆ + (λ̆ − 2τ̆μ)/(s + μ))` with `s = √(μ² + λ̆²)` on
/// the principal branch, which is algebraically the usual closed form
/// without the cancellation in `s − μ`. At `μ = 0` this is the right limit
/// `2π(τ̆ + 1)/λ̆`.
pub fn dispersion_closed_form(
    tau_breve: f64,
    lambda_breve: f64,
    mu: Complex64,
) -> Result<Complex64> {
    if !(lambda_breve > 0.0) || !lambda_breve.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "dispersion integral needs lambda_breve > 0, got {lambda_breve}"
        )));
    }
    if !(mu.re >= 0.0) || !mu.im.is_finite() || !mu.re.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "dispersion integral needs Re mu >= 0, got {mu}"
        )));
    }
    let s = (mu * mu + lambda_breve * lambda_breve).sqrt();
    Ok(2.0 * PI / s * (tau_breve + (lambda_breve - 2.0 * tau_breve * mu) / (s + mu)))
}

/// Positive real root of the dispersion relation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DispersionResult {
    pub mu0: f64,
    /// `|gain(μ₀) − 1|`.
    pub residual: f64,
    pub bracket: (f64, f64),
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum RootOutcome {
    Root(DispersionResult),
    /// `gain(0) ≤ 1`: no growing mode.
    NoRoot,
}

impl RootOutcome {
    pub fn root(&self) -> Option<&DispersionResult> {
        match self {
            RootOutcome::Root(r) => Some(r),
            RootOutcome::NoRoot => None,
        }
    }

    pub fn mu0(&self) -> Option<f64> {
        self.root().map(|r| r.mu0)
    }
}

const MAX_ITER: usize = 200;

/// Solve `gain(μ) = 1` for real `μ > 0`. The gain is strictly decreasing on
/// the positive axis, so a doubling search followed by bisection finds the
/// unique root when `gain(0) > 1`.
pub fn find_unstable_root(rp: &ReducedParams, coupling: Coupling) -> Result<RootOutcome> {
    let mut evaluations = 0usize;
    let mut gain = |mu: f64| -> Result<f64> {
        evaluations += 1;
        Ok(dispersion_gain(rp, coupling, Complex64::new(mu, 0.0))?.re)
    };
    if gain(0.0)? <= 1.0 {
        return Ok(RootOutcome::NoRoot);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    let mut iter = 0;
    while gain(hi)? >= 1.0 {
        lo = hi;
        hi *= 2.0;
        iter += 1;
        if iter > MAX_ITER {
            return Err(Error::NoConvergence { iterations: iter });
        }
    }
    let bracket = (lo, hi);
    let mut iter = 0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if gain(mid)? > 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iter += 1;
        if iter > MAX_ITER {
            return Err(Error::NoConvergence { iterations: iter });
        }
    }
    let (glo, ghi) = (gain(lo)?, gain(hi)?);
    let (mu0, g) = if (glo - 1.0).abs() <= (ghi - 1.0).abs() {
        (lo, glo)
    } else {
        (hi, ghi)
    };
    Ok(RootOutcome::Root(DispersionResult {
        mu0,
        residual: (g - 1.0).abs(),
        bracket,
        evaluations,
    }))
}
