//! Exponential time differencing for the kinetic equation.
//!
//! The diffusions (and, for the parabolic coupling, the chemical decay) are
//! diagonal in Fourier space and integrated exactly. Transport and the
//! interaction term are explicit. Transport is a Galerkin product in the
//! angular modes; the product `B·f` is formed on the collocation grid and
//! dealiased.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::chemical::chemical_rate;
use super::phi::{phi1, phi2};
use super::state::{min_max, PhaseState};
use crate::config::KeyValues;
use crate::error::{Error, Result};
use crate::params::{Coupling, ModelParams};
use crate::spectral::ops::{ddtheta, ddx, dealias_in_place, velocity_products, AngleTable};
use crate::spectral::{
    signed_mode, InteractionField, SpatialField2, SpectralContext, SpectralField3, SpectralGrid,
};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Scheme {
    /// Exponential Euler, first order.
    #[serde(rename = "IMEX_Euler")]
    ImexEuler,
    /// Cox–Matthews exponential Runge–Kutta, second order.
    #[serde(rename = "ETDRK2")]
    Etdrk2,
}

impl Scheme {
    pub fn order(&self) -> u32 {
        match self {
            Scheme::ImexEuler => 1,
            Scheme::Etdrk2 => 2,
        }
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::ImexEuler => "IMEX_Euler",
            Scheme::Etdrk2 => "ETDRK2",
        })
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "imex_euler" | "euler" => Ok(Scheme::ImexEuler),
            "etdrk2" => Ok(Scheme::Etdrk2),
            other => Err(Error::InvalidParameter(format!(
                "scheme must be IMEX_Euler or ETDRK2, got {other:?}"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepperConfig {
    pub dt: f64,
    pub scheme: Scheme,
    /// Apply the 2/3 rule to `B·f`.
    pub dealias: bool,
    /// Relative positivity tolerance: excursions below `−tol·max f` are
    /// flagged.
    pub positivity_tol: f64,
    pub cfl_safety: f64,
}

impl Default for StepperConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            scheme: Scheme::Etdrk2,
            dealias: true,
            positivity_tol: 1e-8,
            cfl_safety: 0.5,
        }
    }
}

pub const STEPPER_KEYS: [&str; 5] = ["dt", "scheme", "dealias", "positivity_tol", "cfl_safety"];

impl StepperConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "cfl_safety must lie in (0, 1], got {}",
                self.cfl_safety
            )));
        }
        if !(self.positivity_tol >= 0.0) {
            return Err(Error::InvalidParameter(
                "positivity_tol must be >= 0".into(),
            ));
        }
        Ok(())
    }

    pub fn from_key_values(kv: &KeyValues, base: StepperConfig) -> Result<Self> {
        let cfg = Self {
            dt: kv.get_f64("dt")?.unwrap_or(base.dt),
            scheme: kv
                .get("scheme")
                .map(str::parse)
                .transpose()?
                .unwrap_or(base.scheme),
            dealias: kv.get_bool("dealias")?.unwrap_or(base.dealias),
            positivity_tol: kv.get_f64("positivity_tol")?.unwrap_or(base.positivity_tol),
            cfl_safety: kv.get_f64("cfl_safety")?.unwrap_or(base.cfl_safety),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Advisory bound `cfl_safety·min(Δx/λ, Δθ/(χ max|B|))`; infinite when
/// neither transport nor interaction is active.
pub fn cfl_limit(grid: &SpectralGrid, params: &ModelParams, max_b: f64, safety: f64) -> f64 {
    let a = if params.lambda > 0.0 {
        grid.dx() / params.lambda
    } else {
        f64::INFINITY
    };
    let b = if params.chi * max_b > 0.0 {
        grid.dtheta() / (params.chi * max_b)
    } else {
        f64::INFINITY
    };
    safety * a.min(b)
}

/// What happened during one step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StepReport {
    pub dt: f64,
    pub cfl_limit: f64,
    pub cfl_violated: bool,
    /// Extremes of `f` at the start of the step, when the collocation values
    /// were needed anyway.
    pub min_f: Option<f64>,
    pub max_f: Option<f64>,
    pub positivity_violated: bool,
}

/// Per-mode exponential factors for one step size.
#[derive(Clone, Debug)]
struct Factors {
    dt: f64,
    e: Vec<f64>,
    p1: Vec<f64>,
    p2: Vec<f64>,
    ec: Vec<f64>,
    pc1: Vec<f64>,
    pc2: Vec<f64>,
}

impl Factors {
    fn new(g: &SpectralGrid, params: &ModelParams, dt: f64) -> Self {
        let nh = g.theta_half();
        let mut e = Vec::with_capacity(g.fourier_len());
        let mut p1 = Vec::with_capacity(g.fourier_len());
        let mut p2 = Vec::with_capacity(g.fourier_len());
        for i1 in 0..g.n_x1 {
            let m1 = signed_mode(i1, g.n_x1) as f64;
            for i2 in 0..g.n_x2 {
                let m2 = signed_mode(i2, g.n_x2) as f64;
                let lx = params.sigma_x * 4.0 * PI * PI * (m1 * m1 + m2 * m2);
                for j in 0..nh {
                    let z = -(lx + params.sigma_theta * (j * j) as f64) * dt;
                    e.push(z.exp());
                    p1.push(dt * phi1(z));
                    p2.push(dt * phi2(z));
                }
            }
        }
        let mut ec = Vec::with_capacity(g.spatial_fourier_len());
        let mut pc1 = Vec::with_capacity(g.spatial_fourier_len());
        let mut pc2 = Vec::with_capacity(g.spatial_fourier_len());
        for i1 in 0..g.n_x1 {
            for i2 in 0..g.x2_half() {
                let z = -chemical_rate(g, params, i1, i2) * dt;
                ec.push(z.exp());
                pc1.push(dt * phi1(z));
                pc2.push(dt * phi2(z));
            }
        }
        Self {
            dt,
            e,
            p1,
            p2,
            ec,
            pc1,
            pc2,
        }
    }
}

/// Explicit part of the right-hand side at one state.
struct Evaluation {
    nf: Vec<Complex64>,
    rho: Vec<Complex64>,
    extremes: Option<(f64, f64)>,
    max_b: f64,
}

/// Advances [`PhaseState`]s with a fixed configuration.
#[derive(Clone, Debug)]
pub struct Stepper {
    ctx: SpectralContext,
    params: ModelParams,
    cfg: StepperConfig,
    angles: AngleTable,
    factors: Factors,
    short: Option<Factors>,
}

fn check_finite(v: &[Complex64], term: &'static str, t: f64) -> Result<()> {
    if v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite { term, t })
    }
}

impl Stepper {
    pub fn new(grid: SpectralGrid, params: ModelParams, cfg: StepperConfig) -> Result<Self> {
        params.validate()?;
        cfg.validate()?;
        Ok(Self {
            ctx: SpectralContext::new(grid),
            angles: AngleTable::new(&grid),
            factors: Factors::new(&grid, &params, cfg.dt),
            short: None,
            params,
            cfg,
        })
    }

    pub fn context(&self) -> &SpectralContext {
        &self.ctx
    }

    pub fn grid(&self) -> &SpectralGrid {
        self.ctx.grid()
    }

    pub fn params(&self) -> &ModelParams {
        &self.params
    }

    pub fn config(&self) -> &StepperConfig {
        &self.cfg
    }

    fn density(&self, f: &[Complex64]) -> Vec<Complex64> {
        let g = self.grid();
        let nh = g.theta_half();
        let mut rho = vec![ZERO; g.spatial_fourier_len()];
        for i1 in 0..g.n_x1 {
            for i2 in 0..g.x2_half() {
                rho[g.spatial_fourier_index(i1, i2)] = f[(i1 * g.n_x2 + i2) * nh] * g.dtheta();
            }
        }
        rho
    }

    fn elliptic(&self, rho: &[Complex64]) -> Vec<Complex64> {
        let g = self.grid();
        let mut c = rho.to_vec();
        for i1 in 0..g.n_x1 {
            for i2 in 0..g.x2_half() {
                c[g.spatial_fourier_index(i1, i2)] /= chemical_rate(g, &self.params, i1, i2);
            }
        }
        c
    }

    /// `−λ∇ₓ·(v f) − χ∂_θ(B f)` in Fourier space.
    fn evaluate(&self, f: &[Complex64], c: Option<&[Complex64]>, t: f64) -> Result<Evaluation> {
        let g = *self.grid();
        let p = &self.params;
        let rho = self.density(f);
        let c_owned;
        let c = match (p.coupling, c) {
            (Coupling::Parabolic, Some(c)) => c,
            _ => {
                c_owned = self.elliptic(&rho);
                &c_owned
            }
        };
        check_finite(c, "chemical", t)?;

        let nh = g.theta_half();
        let mut nf = vec![ZERO; f.len()];
        if p.lambda != 0.0 {
            let (cu, su) = velocity_products(&g, f);
            for i1 in 0..g.n_x1 {
                let d1 = ddx(i1, g.n_x1);
                for i2 in 0..g.n_x2 {
                    let d2 = ddx(i2, g.n_x2);
                    let base = (i1 * g.n_x2 + i2) * nh;
                    for j in 0..nh {
                        nf[base + j] = -p.lambda * (d1 * cu[base + j] + d2 * su[base + j]);
                    }
                }
            }
            check_finite(&nf, "transport", t)?;
        }

        let mut extremes = None;
        let mut max_b = 0.0f64;
        if p.chi != 0.0 {
            let cf = SpatialField2::fourier(g, c.to_vec())?;
            let b = InteractionField::from_chemical(&cf, p.tau, &self.ctx);
            let mut prod = self.ctx.inverse3(f);
            extremes = Some(min_max(&prod));
            let nt = g.n_theta;
            for (s, line) in prod.chunks_exact_mut(nt).enumerate() {
                for (j, v) in line.iter_mut().enumerate() {
                    let bv = b.value(s, j, &self.angles);
                    max_b = max_b.max(bv.abs());
                    *v *= bv;
                }
            }
            let mut bf = self.ctx.forward3(&prod);
            if self.cfg.dealias {
                dealias_in_place(&g, &mut bf);
            }
            let mut inter = vec![ZERO; f.len()];
            for (idx, z) in bf.iter().enumerate() {
                inter[idx] = -p.chi * ddtheta(idx % nh, nt) * z;
            }
            check_finite(&inter, "interaction", t)?;
            nf.iter_mut().zip(&inter).for_each(|(a, b)| *a += b);
        }
        Ok(Evaluation {
            nf,
            rho,
            extremes,
            max_b,
        })
    }

    /// Full right-hand side `∂_t f̂` (linear plus explicit part).
    pub fn rhs(&self, state: &PhaseState) -> Result<Vec<Complex64>> {
        let g = *self.grid();
        let f = state.f.coeffs()?;
        let c = state.c.coeffs()?;
        let mut out = self.evaluate(f, Some(c), state.t)?.nf;
        let nh = g.theta_half();
        for i1 in 0..g.n_x1 {
            let m1 = signed_mode(i1, g.n_x1) as f64;
            for i2 in 0..g.n_x2 {
                let m2 = signed_mode(i2, g.n_x2) as f64;
                let lx = self.params.sigma_x * 4.0 * PI * PI * (m1 * m1 + m2 * m2);
                for j in 0..nh {
                    let idx = (i1 * g.n_x2 + i2) * nh + j;
                    out[idx] -= (lx + self.params.sigma_theta * (j * j) as f64) * f[idx];
                }
            }
        }
        Ok(out)
    }

    pub fn step(&mut self, state: &PhaseState) -> Result<(PhaseState, StepReport)> {
        let dt = self.cfg.dt;
        self.step_by(state, dt)
    }

    /// One step of size `h`; factors for sizes other than the configured
    /// `dt` are cached separately.
    pub fn step_by(&mut self, state: &PhaseState, h: f64) -> Result<(PhaseState, StepReport)> {
        if !(h > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "step size must be positive, got {h}"
            )));
        }
        if h != self.factors.dt && self.short.as_ref().map(|s| s.dt) != Some(h) {
            self.short = Some(Factors::new(self.grid(), &self.params, h));
        }
        let fac = if h == self.factors.dt {
            &self.factors
        } else {
            self.short.as_ref().expect("cached above")
        };
        let g = *self.grid();
        let parabolic = self.params.coupling == Coupling::Parabolic;
        let f0 = state.f.coeffs()?;
        let c0 = state.c.coeffs()?;
        let e0 = self.evaluate(f0, Some(c0), state.t)?;

        let mut f1: Vec<Complex64> = (0..f0.len())
            .map(|i| fac.e[i] * f0[i] + fac.p1[i] * e0.nf[i])
            .collect();
        let mut c1: Vec<Complex64> = if parabolic {
            (0..c0.len())
                .map(|i| fac.ec[i] * c0[i] + fac.pc1[i] * e0.rho[i])
                .collect()
        } else {
            Vec::new()
        };

        if self.cfg.scheme == Scheme::Etdrk2 {
            let ea = self.evaluate(&f1, parabolic.then_some(&c1[..]), state.t + h)?;
            for (i, v) in f1.iter_mut().enumerate() {
                *v += fac.p2[i] * (ea.nf[i] - e0.nf[i]);
            }
            if parabolic {
                for (i, v) in c1.iter_mut().enumerate() {
                    *v += fac.pc2[i] * (ea.rho[i] - e0.rho[i]);
                }
            }
        }
        if !parabolic {
            c1 = self.elliptic(&self.density(&f1));
        }
        check_finite(&f1, "diffusion", state.t + h)?;

        let cfl = cfl_limit(&g, &self.params, e0.max_b, self.cfg.cfl_safety);
        let cfl_violated = h > cfl;
        if cfl_violated {
            log::warn!(
                "t = {}: dt = {h} exceeds the advisory CFL bound {cfl}",
                state.t
            );
        }
        let positivity_violated = e0
            .extremes
            .is_some_and(|(lo, hi)| lo < -self.cfg.positivity_tol * hi);
        if positivity_violated {
            log::warn!(
                "t = {}: min f below -{} max f",
                state.t,
                self.cfg.positivity_tol
            );
        }
        let next = PhaseState {
            f: SpectralField3::fourier(g, f1)?,
            c: SpatialField2::fourier(g, c1)?,
            t: state.t + h,
        };
        Ok((
            next,
            StepReport {
                dt: h,
                cfl_limit: cfl,
                cfl_violated,
                min_f: e0.extremes.map(|e| e.0),
                max_f: e0.extremes.map(|e| e.1),
                positivity_violated,
            },
        ))
    }
}

/// Convenience wrapper: one step with a freshly built [`Stepper`].
pub fn fokker_planck_step(
    state: &PhaseState,
    cfg: &StepperConfig,
    params: &ModelParams,
) -> Result<(PhaseState, StepReport)> {
    Stepper::new(*state.grid(), *params, *cfg)?.step(state)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::F_STAR;

    fn params(chi: f64, lambda: f64, sx: f64, st: f64) -> ModelParams {
        ModelParams {
            sigma_x: sx,
            sigma_theta: st,
            sigma_c: 0.01,
            gamma: 1.0,
            lambda,
            chi,
            tau: 0.3,
            coupling: Coupling::Elliptic,
        }
    }

    #[test]
    fn steady_state_is_fixed_point() {
        let g = SpectralGrid::cube(8).unwrap();
        for coupling in [Coupling::Elliptic, Coupling::Parabolic] {
            for scheme in [Scheme::ImexEuler, Scheme::Etdrk2] {
                let p = ModelParams {
                    coupling,
                    ..params(3.0, 1.0, 0.01, 0.02)
                };
                let cfg = StepperConfig {
                    dt: 0.37,
                    scheme,
                    ..StepperConfig::default()
                };
                let mut st = Stepper::new(g, p, cfg).unwrap();
                let s0 = PhaseState::homogeneous(g, &p, st.context());
                let (s1, rep) = st.step(&s0).unwrap();
                assert_eq!(s1.f, s0.f);
                let (a, b) = (s0.c.coeffs().unwrap(), s1.c.coeffs().unwrap());
                assert!(a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-13));
                assert!(!rep.positivity_violated);
            }
        }
    }

    #[test]
    fn heat_flow_mode_decay() {
        let g = SpectralGrid::cube(16).unwrap();
        let p = params(0.0, 0.0, 0.05, 0.1);
        let dt = 0.2;
        for scheme in [Scheme::ImexEuler, Scheme::Etdrk2] {
            let cfg = StepperConfig {
                dt,
                scheme,
                ..StepperConfig::default()
            };
            let mut st = Stepper::new(g, p, cfg).unwrap();
            let eps = 1e-3;
            let f = SpectralField3::from_fn(g, |x1, _, _| F_STAR + eps * (2.0 * PI * x1).cos());
            let s0 = PhaseState::with_elliptic_chemical(f, &p, st.context());
            let (s1, _) = st.step(&s0).unwrap();
            let idx = g.fourier_index(1, 0, 0);
            let ratio = s1.f.coeffs().unwrap()[idx] / s0.f.coeffs().unwrap()[idx];
            let want = (-0.05 * 4.0 * PI * PI * dt).exp();
            assert!((ratio.re - want).abs() < 1e-14 && ratio.im.abs() < 1e-14);
            assert_eq!(s1.mass(), s0.mass());
        }
    }

    #[test]
    fn rhs_matches_pointwise_formula() {
        // f = f*(1 + a cos(2πx₁)(1 + cosθ) + b sin(2πx₂) sinθ) keeps ρ on one
        // mode, so c and B are known in closed form.
        let g = SpectralGrid::cube(16).unwrap();
        let p = ModelParams {
            tau: 0.4,
            ..params(1.3, 0.7, 0.02, 0.05)
        };
        let st = Stepper::new(g, p, StepperConfig::default()).unwrap();
        let (a, b) = (0.3, 0.2);
        let k = 2.0 * PI;
        let f = |x1: f64, x2: f64, th: f64| {
            F_STAR * (1.0 + a * (k * x1).cos() * (1.0 + th.cos()) + b * (k * x2).sin() * th.sin())
        };
        let s = PhaseState::with_elliptic_chemical(SpectralField3::from_fn(g, f), &p, st.context());
        let amp = a / (p.gamma + k * k * p.sigma_c);
        let want = SpectralField3::from_fn(g, |x1, x2, th| {
            let (s1, c1) = (k * x1).sin_cos();
            let (s2, c2) = (k * x2).sin_cos();
            let (st_, ct) = th.sin_cos();
            let fv = f(x1, x2, th);
            let f1 = F_STAR * (-a * k * s1 * (1.0 + ct));
            let f2 = F_STAR * (b * k * c2 * st_);
            let f_th = F_STAR * (-a * c1 * st_ + b * s2 * ct);
            let f_thth = F_STAR * (-a * c1 * ct - b * s2 * st_);
            let lap = F_STAR * (-k * k * a * c1 * (1.0 + ct) - k * k * b * s2 * st_);
            // ∂₁c = −kA sin, c₁₁ = −k²A cos, c₂₂ = c₁₂ = 0.
            let bb = k * amp * s1 * st_ + p.tau * 0.5 * k * k * amp * c1 * (2.0 * th).sin();
            let bb_th = k * amp * s1 * ct + p.tau * k * k * amp * c1 * (2.0 * th).cos();
            -p.lambda * (ct * f1 + st_ * f2) + p.sigma_x * lap + p.sigma_theta * f_thth
                - p.chi * (bb_th * fv + bb * f_th)
        });
        let got = SpectralField3::fourier(g, st.rhs(&s).unwrap())
            .unwrap()
            .physical_values(st.context());
        let err = got
            .iter()
            .zip(want.values().unwrap())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-14, "{err}");
    }

    #[test]
    fn euler_transport_matches_symbolic_step() {
        let g = SpectralGrid::cube(16).unwrap();
        let (lambda, eps, dt) = (0.8, 1e-2, 1e-3);
        let p = params(0.0, lambda, 1e-300, 1e-300);
        let cfg = StepperConfig {
            dt,
            scheme: Scheme::ImexEuler,
            ..StepperConfig::default()
        };
        let mut st = Stepper::new(g, p, cfg).unwrap();
        let f = SpectralField3::from_fn(g, |x1, _, _| F_STAR + eps * (2.0 * PI * x1).cos());
        let s0 = PhaseState::with_elliptic_chemical(f, &p, st.context());
        let (s1, _) = st.step(&s0).unwrap();
        // −λ∂₁(cosθ f₀) = 2πλε cosθ sin(2πx₁)
        let want = SpectralField3::from_fn(g, |x1, _, th| {
            F_STAR
                + eps * (2.0 * PI * x1).cos()
                + dt * 2.0 * PI * lambda * eps * th.cos() * (2.0 * PI * x1).sin()
        });
        let got = s1.f.physical_values(st.context());
        let err = got
            .iter()
            .zip(want.values().unwrap())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-15, "{err}");
    }

    #[test]
    fn mass_conserved_in_nonlinear_step() {
        let g = SpectralGrid::cube(16).unwrap();
        let p = params(5.0, 1.0, 1e-3, 1e-3);
        let cfg = StepperConfig {
            dt: 1e-2,
            ..StepperConfig::default()
        };
        let mut st = Stepper::new(g, p, cfg).unwrap();
        let f = SpectralField3::from_fn(g, |x1, x2, th| {
            F_STAR
                * (1.0
                    + 0.3 * (2.0 * PI * x1).cos() * th.sin()
                    + 0.2 * (2.0 * PI * (x1 + 2.0 * x2)).sin())
        });
        let mut s = PhaseState::with_elliptic_chemical(f, &p, st.context());
        let m0 = s.mass();
        for _ in 0..20 {
            s = st.step(&s).unwrap().0;
        }
        assert!((s.mass() - m0).abs() < 1e-14);
    }

    #[test]
    fn cfl_violation_is_flagged_not_fatal() {
        let g = SpectralGrid::cube(8).unwrap();
        let p = params(0.0, 10.0, 1e-3, 1e-3);
        let cfg = StepperConfig {
            dt: 0.5,
            ..StepperConfig::default()
        };
        let mut st = Stepper::new(g, p, cfg).unwrap();
        let f = SpectralField3::from_fn(g, |x1, _, _| F_STAR * (1.0 + 0.1 * (2.0 * PI * x1).cos()));
        let s = PhaseState::with_elliptic_chemical(f, &p, st.context());
        let (_, rep) = st.step(&s).unwrap();
        assert!(rep.cfl_violated);
    }

    #[test]
    fn blow_up_names_the_term() {
        let g = SpectralGrid::cube(8).unwrap();
        let p = params(1e300, 0.0, 1e-3, 1e-3);
        let mut st = Stepper::new(g, p, StepperConfig::default()).unwrap();
        let f = SpectralField3::from_fn(g, |x1, _, _| F_STAR * (1.0 + 0.5 * (2.0 * PI * x1).cos()));
        let mut s = PhaseState::with_elliptic_chemical(f, &p, st.context());
        let mut err = None;
        for _ in 0..50 {
            match st.step(&s) {
                Ok((n, _)) => s = n,
                Err(e) => {
                    err = Some(e);
                    break;
                }
            }
        }
        assert!(
            matches!(
                err,
                Some(Error::NonFinite {
                    term: "interaction",
                    ..
                })
            ),
            "{err:?}"
        );
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in [Scheme::ImexEuler, Scheme::Etdrk2] {
            assert_eq!(s.to_string().parse::<Scheme>().unwrap(), s);
        }
        assert!("rk4".parse::<Scheme>().is_err());
    }
}
