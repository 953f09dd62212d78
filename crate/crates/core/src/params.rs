//! Model constants, their per-wavenumber reductions and the inviscid
//! instability predicates.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::config::KeyValues;
use crate::error::{Error, Result};
use crate::linstab::dispersion_closed_form;

/// How the chemical field follows the density.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    /// `∂_t c = σ_c Δc − γc + ρ`
    Parabolic,
    /// `γc − σ_c Δc = ρ`
    Elliptic,
}

impl fmt::Display for Coupling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coupling::Parabolic => f.write_str("parabolic"),
            Coupling::Elliptic => f.write_str("elliptic"),
        }
    }
}

impl FromStr for Coupling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "parabolic" | "1" => Ok(Coupling::Parabolic),
            "elliptic" | "0" => Ok(Coupling::Elliptic),
            other => Err(Error::InvalidParameter(format!(
                "coupling must be parabolic or elliptic, got {other:?}"
            ))),
        }
    }
}

/// Physical constants of the kinetic model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    /// Translational diffusion.
    pub sigma_x: f64,
    /// Rotational diffusion.
    pub sigma_theta: f64,
    /// Chemical diffusion.
    pub sigma_c: f64,
    /// Chemical decay rate.
    pub gamma: f64,
    /// Self-propulsion speed.
    pub lambda: f64,
    /// Interaction strength.
    pub chi: f64,
    /// Look-ahead length.
    pub tau: f64,
    pub coupling: Coupling,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            sigma_x: 1e-3,
            sigma_theta: 1e-3,
            sigma_c: 0.01,
            gamma: 1.0,
            lambda: 0.2,
            chi: 1.4,
            tau: 0.0,
            coupling: Coupling::Elliptic,
        }
    }
}

/// Keys recognised by [`ModelParams::from_key_values`].
pub const PARAM_KEYS: [&str; 8] = [
    "sigma_x",
    "sigma_theta",
    "sigma_c",
    "gamma",
    "lambda",
    "chi",
    "tau",
    "coupling",
];

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("sigma_x", self.sigma_x),
            ("sigma_theta", self.sigma_theta),
            ("sigma_c", self.sigma_c),
            ("gamma", self.gamma),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and > 0, got {v}"
                )));
            }
        }
        for (name, v) in [
            ("lambda", self.lambda),
            ("chi", self.chi),
            ("tau", self.tau),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be finite and >= 0, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Start from `base` and override every key present in `kv`.
    pub fn from_key_values(kv: &KeyValues, base: ModelParams) -> Result<Self> {
        let mut p = base;
        p.sigma_x = kv.get_f64("sigma_x")?.unwrap_or(p.sigma_x);
        p.sigma_theta = kv.get_f64("sigma_theta")?.unwrap_or(p.sigma_theta);
        p.sigma_c = kv.get_f64("sigma_c")?.unwrap_or(p.sigma_c);
        p.gamma = kv.get_f64("gamma")?.unwrap_or(p.gamma);
        p.lambda = kv.get_f64("lambda")?.unwrap_or(p.lambda);
        p.chi = kv.get_f64("chi")?.unwrap_or(p.chi);
        p.tau = kv.get_f64("tau")?.unwrap_or(p.tau);
        if let Some(c) = kv.get("coupling") {
            p.coupling = c.parse()?;
        }
        p.validate()?;
        Ok(p)
    }

    /// Set one named constant; used by parameter sweeps.
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        match key {
            "sigma_x" => self.sigma_x = value,
            "sigma_theta" => self.sigma_theta = value,
            "sigma_c" => self.sigma_c = value,
            "gamma" => self.gamma = value,
            "lambda" => self.lambda = value,
            "chi" => self.chi = value,
            "tau" => self.tau = value,
            other => {
                return Err(Error::InvalidParameter(format!(
                    "{other:?} is not a numeric model parameter"
                )))
            }
        }
        Ok(())
    }

    /// Chemical relaxation rate of spatial wavenumber `k`: `γ + 4π²σ_c k²`.
    pub fn nu(&self, k: u32) -> f64 {
        self.gamma + 4.0 * PI * PI * self.sigma_c * f64::from(k) * f64::from(k)
    }

    /// The interaction strength at which the inviscid margin at `k` vanishes,
    /// `λ(γ + 4π²σ_c k²) / (2πkτ + 1)`.
    pub fn chi_threshold(&self, k: u32) -> f64 {
        self.lambda * self.nu(k) / (2.0 * PI * f64::from(k) * self.tau + 1.0)
    }

    /// Both sides of `χ(2πkτ + 1) > λ(γ + 4π²σ_c k²)`.
    pub fn headline_condition(&self, k: u32) -> (f64, f64) {
        let kf = f64::from(k);
        (
            self.chi * (2.0 * PI * kf * self.tau + 1.0),
            self.lambda * self.nu(k),
        )
    }

    /// The same inequality with the `4πσ_c k²` constant. Reported for
    /// comparison only; nothing in the crate decides stability with it.
    pub fn headline_condition_4pi(&self, k: u32) -> (f64, f64) {
        let kf = f64::from(k);
        (
            self.chi * (2.0 * PI * kf * self.tau + 1.0),
            self.lambda * (self.gamma + 4.0 * PI * self.sigma_c * kf * kf),
        )
    }
}

/// Per-wavenumber rescaled constants of the linearised problem.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReducedParams {
    pub k: u32,
    pub chi_breve: f64,
    pub tau_breve: f64,
    pub lambda_breve: f64,
    pub sigma_x_breve: f64,
    pub nu_breve: f64,
    /// Rotational diffusion, unchanged by the reduction.
    pub sigma: f64,
}

impl ReducedParams {
    /// Reduced constants written down directly, for working at the level of
    /// the θ-only operator. `nu_breve` is only used by the parabolic coupling.
    pub fn direct(chi_breve: f64, tau_breve: f64, lambda_breve: f64) -> Self {
        Self {
            k: 1,
            chi_breve,
            tau_breve,
            lambda_breve,
            sigma_x_breve: 0.0,
            nu_breve: 1.0,
            sigma: 0.0,
        }
    }

    pub fn with_sigma(mut self, sigma: f64) -> Self {
        self.sigma = sigma;
        self
    }
}

/// Rescale `params` onto wavenumber `k`.
pub fn reduce(params: &ModelParams, k: u32, coupling: Coupling) -> Result<ReducedParams> {
    if k == 0 {
        return Err(Error::InvalidParameter("wavenumber k must be >= 1".into()));
    }
    let kf = f64::from(k);
    let nu_breve = params.nu(k);
    let chi_breve = match coupling {
        Coupling::Elliptic => params.chi * kf / nu_breve,
        // f* = 1/2π multiplies the interaction in the linearisation, which
        // cancels the 2π of the gradient.
        Coupling::Parabolic => kf * params.chi,
    };
    Ok(ReducedParams {
        k,
        chi_breve,
        tau_breve: 2.0 * PI * kf * params.tau,
        lambda_breve: 2.0 * PI * kf * params.lambda,
        sigma_x_breve: 4.0 * PI * PI * kf * kf * params.sigma_x,
        nu_breve,
        sigma: params.sigma_theta,
    })
}

/// Loop gain of the dispersion relation at real or complex `mu`:
/// `χ̆ ℐ(τ̆, λ̆, μ + σ̆ₓ)` (elliptic) or the same divided by `μ + ν̆` (parabolic).
pub fn dispersion_gain(rp: &ReducedParams, coupling: Coupling, mu: Complex64) -> Result<Complex64> {
    let shifted = mu + rp.sigma_x_breve;
    let i = dispersion_closed_form(rp.tau_breve, rp.lambda_breve, shifted)?;
    Ok(match coupling {
        Coupling::Elliptic => rp.chi_breve * i,
        Coupling::Parabolic => rp.chi_breve * i / (mu + rp.nu_breve),
    })
}

/// `χ̆ ℐ(τ̆, λ̆, 0) − 1` with both diffusions switched off. Positive means the
/// homogeneous state is linearly unstable at `k` in the inviscid limit.
pub fn instability_margin(params: &ModelParams, k: u32) -> Result<f64> {
    let mut rp = reduce(params, k, params.coupling)?;
    rp.sigma_x_breve = 0.0;
    reduced_margin(&rp, params.coupling)
}

/// `gain(0) − 1` for already reduced constants, keeping `σ̆ₓ`.
pub fn reduced_margin(rp: &ReducedParams, coupling: Coupling) -> Result<f64> {
    Ok(dispersion_gain(rp, coupling, Complex64::new(0.0, 0.0))?.re - 1.0)
}

pub fn is_unstable(params: &ModelParams, k: u32) -> Result<bool> {
    Ok(instability_margin(params, k)? > 0.0)
}
