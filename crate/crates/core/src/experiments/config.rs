use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::{parse_f64_list, KeyValues};
use crate::dynamics::{StepperConfig, STEPPER_KEYS};
use crate::error::{Error, Result};
use crate::linstab::DEFAULT_MODES;
use crate::params::{ModelParams, PARAM_KEYS};
use crate::spectral::SpectralGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ExperimentKind {
    InstabilityScan,
    GrowthMatch,
    StabilitySweep,
    DispersionMap,
    Simulate,
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::InstabilityScan => "scan",
            Self::GrowthMatch => "growth-match",
            Self::StabilitySweep => "stability-sweep",
            Self::DispersionMap => "dispersion",
            Self::Simulate => "simulate",
        })
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "scan" | "instability-scan" | "instabilityscan" => Ok(Self::InstabilityScan),
            "growth-match" | "growthmatch" => Ok(Self::GrowthMatch),
            "stability-sweep" | "stabilitysweep" => Ok(Self::StabilitySweep),
            "dispersion" | "dispersion-map" | "dispersionmap" => Ok(Self::DispersionMap),
            "simulate" => Ok(Self::Simulate),
            other => Err(Error::InvalidParameter(format!(
                "unknown experiment kind {other:?}"
            ))),
        }
    }
}

/// Initial data for trajectories.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub enum SeedSpec {
    Homogeneous,
    /// Growing mode at wavenumber `k` with `‖f₀ − f*‖ = amplitude·‖f*‖`.
    Eigenfunction {
        k: u32,
        w: [f64; 2],
        amplitude: f64,
        rotate: bool,
    },
    /// Band-limited random perturbation; the generator seed is the
    /// experiment's `rng_seed`.
    Random {
        max_mode: i64,
        amplitude: f64,
    },
    /// Bump with prescribed `‖ρ₀‖_{L⁶}`.
    Concentrated {
        l6: f64,
    },
    /// A phase-space field file; the chemical field is slaved to it.
    File(PathBuf),
}

/// Everything an experiment needs. Built from a flat `key = value` file.
#[derive(Clone, Debug, Serialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub params: ModelParams,
    pub grid: SpectralGrid,
    /// `dt` is `None` when it should come from the CFL advisory.
    pub stepper: StepperConfig,
    pub dt_from_cfl: bool,
    pub sweep: Vec<(String, Vec<f64>)>,
    pub seed: SeedSpec,
    pub output_dir: Option<PathBuf>,
    pub t_end: f64,
    pub observe_every: usize,
    pub checkpoint_every: usize,
    pub k_max: u32,
    pub n_modes: usize,
    pub rng_seed: u64,
    /// The linear window ends once the deviation has grown by this factor.
    pub growth_factor: f64,
    /// Fraction of the run after which decay rates are fitted.
    pub fit_from: f64,
    pub csv: bool,
}

/// Keys understood besides the model, grid and stepper keys.
pub const EXPERIMENT_KEYS: [&str; 20] = [
    "kind",
    "n",
    "n_x1",
    "n_x2",
    "n_theta",
    "seed",
    "seed_k",
    "seed_w",
    "seed_amplitude",
    "seed_rotate",
    "seed_max_mode",
    "seed_l6",
    "output_dir",
    "t_end",
    "observe_every",
    "checkpoint_every",
    "k_max",
    "n_modes",
    "rng_seed",
    "growth_factor",
];

const NON_TRAJECTORY_KEYS: [&str; 8] = [
    "kind",
    "t_end",
    "observe_every",
    "checkpoint_every",
    "k_max",
    "growth_factor",
    "fit_from",
    "csv",
];

const MORE_KEYS: [&str; 2] = ["fit_from", "csv"];

fn known_key(k: &str) -> bool {
    PARAM_KEYS.contains(&k)
        || STEPPER_KEYS.contains(&k)
        || EXPERIMENT_KEYS.contains(&k)
        || MORE_KEYS.contains(&k)
}

impl ExperimentConfig {
    pub fn defaults(kind: ExperimentKind) -> Self {
        Self {
            kind,
            params: ModelParams::default(),
            grid: SpectralGrid::cube(64).expect("valid default grid"),
            stepper: StepperConfig::default(),
            dt_from_cfl: true,
            sweep: Vec::new(),
            seed: match kind {
                ExperimentKind::StabilitySweep => SeedSpec::Random {
                    max_mode: 4,
                    amplitude: 0.1,
                },
                _ => SeedSpec::Eigenfunction {
                    k: 1,
                    w: [1.0, 0.0],
                    amplitude: 1e-6,
                    rotate: false,
                },
            },
            output_dir: None,
            t_end: 10.0,
            observe_every: 10,
            checkpoint_every: 0,
            k_max: 8,
            n_modes: DEFAULT_MODES,
            rng_seed: 0,
            growth_factor: 1e3,
            fit_from: 0.5,
            csv: false,
        }
    }

    /// Read `kind` (unless `kind` is given) and every other key from `kv`.
    /// Keys of the form `sweep.<key>` define sweep axes.
    pub fn from_key_values(kv: &KeyValues, kind: Option<ExperimentKind>) -> Result<Self> {
        let kind = match (kind, kv.get("kind")) {
            (Some(k), _) => k,
            (None, Some(s)) => s.parse()?,
            (None, None) => return Err(Error::InvalidParameter("config has no `kind`".into())),
        };
        let mut cfg = Self::defaults(kind);
        for key in kv.keys() {
            let base = key.strip_prefix("sweep.").unwrap_or(key);
            if !known_key(base) {
                return Err(Error::InvalidParameter(format!(
                    "unknown config key {key:?}"
                )));
            }
        }
        cfg.params = ModelParams::from_key_values(kv, cfg.params)?;
        let n = kv.get_usize("n")?;
        let base_grid = match n {
            Some(n) => SpectralGrid::cube(n)?,
            None => cfg.grid,
        };
        cfg.grid = SpectralGrid::from_key_values(kv, base_grid)?;
        cfg.dt_from_cfl = kv.get("dt").is_none();
        cfg.stepper = StepperConfig::from_key_values(kv, cfg.stepper)?;

        for (key, value) in kv.iter() {
            if let Some(axis) = key.strip_prefix("sweep.") {
                if !(PARAM_KEYS.contains(&axis) && axis != "coupling") {
                    return Err(Error::InvalidParameter(format!(
                        "sweep axis {axis:?} is not a numeric model parameter"
                    )));
                }
                let values = parse_f64_list(key, value)?;
                if values.is_empty() {
                    return Err(Error::InvalidParameter(format!(
                        "sweep axis {axis:?} is empty"
                    )));
                }
                cfg.sweep.push((axis.to_string(), values));
            }
        }

        if let Some(s) = kv.get("seed") {
            cfg.seed = parse_seed(s, kv, &cfg.seed)?;
        } else if let SeedSpec::Eigenfunction { .. } = cfg.seed {
            cfg.seed = parse_seed("eigenfunction", kv, &cfg.seed)?;
        }
        cfg.output_dir = kv.get("output_dir").map(PathBuf::from);
        cfg.t_end = kv.get_f64("t_end")?.unwrap_or(cfg.t_end);
        cfg.observe_every = kv.get_usize("observe_every")?.unwrap_or(cfg.observe_every);
        cfg.checkpoint_every = kv
            .get_usize("checkpoint_every")?
            .unwrap_or(cfg.checkpoint_every);
        cfg.k_max = kv.get_usize("k_max")?.map_or(cfg.k_max, |k| k as u32);
        cfg.n_modes = kv.get_usize("n_modes")?.unwrap_or(cfg.n_modes);
        cfg.rng_seed = kv.get_usize("rng_seed")?.map_or(cfg.rng_seed, |s| s as u64);
        cfg.growth_factor = kv.get_f64("growth_factor")?.unwrap_or(cfg.growth_factor);
        cfg.fit_from = kv.get_f64("fit_from")?.unwrap_or(cfg.fit_from);
        cfg.csv = kv.get_bool("csv")?.unwrap_or(cfg.csv);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, kind: Option<ExperimentKind>) -> Result<Self> {
        Self::from_key_values(&KeyValues::load(path)?, kind)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.stepper.validate()?;
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "t_end must be >= 0, got {}",
                self.t_end
            )));
        }
        if self.observe_every == 0 {
            return Err(Error::InvalidParameter("observe_every must be >= 1".into()));
        }
        if self.k_max == 0 {
            return Err(Error::InvalidParameter("k_max must be >= 1".into()));
        }
        if !(self.growth_factor > 1.0) {
            return Err(Error::InvalidParameter(
                "growth_factor must exceed 1".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.fit_from) {
            return Err(Error::InvalidParameter(
                "fit_from must lie in [0, 1)".into(),
            ));
        }
        match &self.seed {
            SeedSpec::Eigenfunction { amplitude, k, .. } if !(*amplitude > 0.0) || *k == 0 => Err(
                Error::InvalidParameter("eigenfunction seed needs amplitude > 0 and k >= 1".into()),
            ),
            SeedSpec::Random { amplitude, .. } if !(*amplitude > 0.0 && *amplitude < 1.0) => Err(
                Error::InvalidParameter("random seed amplitude must lie in (0, 1)".into()),
            ),
            _ => Ok(()),
        }
    }

    /// Fully resolved configuration as `key = value` pairs.
    pub fn to_key_values(&self) -> KeyValues {
        let mut kv = KeyValues::new();
        kv.set("kind", self.kind);
        let p = &self.params;
        kv.set("sigma_x", format!("{:?}", p.sigma_x));
        kv.set("sigma_theta", format!("{:?}", p.sigma_theta));
        kv.set("sigma_c", format!("{:?}", p.sigma_c));
        kv.set("gamma", format!("{:?}", p.gamma));
        kv.set("lambda", format!("{:?}", p.lambda));
        kv.set("chi", format!("{:?}", p.chi));
        kv.set("tau", format!("{:?}", p.tau));
        kv.set("coupling", p.coupling);
        kv.set("n_x1", self.grid.n_x1);
        kv.set("n_x2", self.grid.n_x2);
        kv.set("n_theta", self.grid.n_theta);
        let s = &self.stepper;
        if !self.dt_from_cfl {
            kv.set("dt", format!("{:?}", s.dt));
        }
        kv.set("scheme", s.scheme);
        kv.set("dealias", s.dealias);
        kv.set("positivity_tol", format!("{:?}", s.positivity_tol));
        kv.set("cfl_safety", format!("{:?}", s.cfl_safety));
        for (axis, values) in &self.sweep {
            let v: Vec<String> = values.iter().map(|x| format!("{x:?}")).collect();
            kv.set(format!("sweep.{axis}"), v.join(", "));
        }
        match &self.seed {
            SeedSpec::Homogeneous => kv.set("seed", "homogeneous"),
            SeedSpec::Eigenfunction {
                k,
                w,
                amplitude,
                rotate,
            } => {
                kv.set("seed", "eigenfunction");
                kv.set("seed_k", k);
                kv.set("seed_w", format!("{:?}, {:?}", w[0], w[1]));
                kv.set("seed_amplitude", format!("{amplitude:?}"));
                kv.set("seed_rotate", rotate);
            }
            SeedSpec::Random {
                max_mode,
                amplitude,
            } => {
                kv.set("seed", "random");
                kv.set("seed_max_mode", max_mode);
                kv.set("seed_amplitude", format!("{amplitude:?}"));
            }
            SeedSpec::Concentrated { l6 } => {
                kv.set("seed", "concentrated");
                kv.set("seed_l6", format!("{l6:?}"));
            }
            SeedSpec::File(p) => kv.set("seed", format!("file:{}", p.display())),
        }
        kv.set("t_end", format!("{:?}", self.t_end));
        kv.set("observe_every", self.observe_every);
        kv.set("checkpoint_every", self.checkpoint_every);
        kv.set("k_max", self.k_max);
        kv.set("n_modes", self.n_modes);
        kv.set("rng_seed", self.rng_seed);
        kv.set("growth_factor", format!("{:?}", self.growth_factor));
        kv.set("fit_from", format!("{:?}", self.fit_from));
        kv.set("csv", self.csv);
        kv
    }

    /// SHA-256 of the canonical resolved configuration. The output
    /// directory is not part of it.
    pub fn hash(&self) -> String {
        let digest = Sha256::digest(self.to_key_values().canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Hash of the keys that determine a trajectory: model, grid, stepper
    /// and initial data. Checkpoints carry it, so a run can be resumed with
    /// a longer horizon or different output settings.
    pub fn trajectory_hash(&self) -> String {
        let mut kv = KeyValues::new();
        for (k, v) in self.to_key_values().iter() {
            if !NON_TRAJECTORY_KEYS.contains(&k) {
                kv.set(k, v);
            }
        }
        let digest = Sha256::digest(kv.canonical().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Copy with one model parameter replaced.
    pub fn with_param(&self, key: &str, value: f64) -> Result<Self> {
        let mut c = self.clone();
        c.params.set(key, value)?;
        c.params.validate()?;
        Ok(c)
    }
}

fn parse_seed(s: &str, kv: &KeyValues, current: &SeedSpec) -> Result<SeedSpec> {
    let amp = kv.get_f64("seed_amplitude")?;
    Ok(match s.trim() {
        "homogeneous" => SeedSpec::Homogeneous,
        "eigenfunction" => {
            let (k0, w0, a0, r0) = match current {
                SeedSpec::Eigenfunction {
                    k,
                    w,
                    amplitude,
                    rotate,
                } => (*k, *w, *amplitude, *rotate),
                _ => (1, [1.0, 0.0], 1e-6, false),
            };
            let w = match kv.get_f64_list("seed_w")? {
                Some(v) if v.len() == 2 => [v[0], v[1]],
                Some(v) => {
                    return Err(Error::InvalidParameter(format!(
                        "seed_w needs two numbers, got {}",
                        v.len()
                    )))
                }
                None => w0,
            };
            SeedSpec::Eigenfunction {
                k: kv.get_usize("seed_k")?.map_or(k0, |k| k as u32),
                w,
                amplitude: amp.unwrap_or(a0),
                rotate: kv.get_bool("seed_rotate")?.unwrap_or(r0),
            }
        }
        "random" => SeedSpec::Random {
            max_mode: kv.get_usize("seed_max_mode")?.unwrap_or(4) as i64,
            amplitude: amp.unwrap_or(0.1),
        },
        "concentrated" => SeedSpec::Concentrated {
            l6: kv.get_f64("seed_l6")?.unwrap_or(1.0),
        },
        other => match other.strip_prefix("file:") {
            Some(p) => SeedSpec::File(PathBuf::from(p.trim())),
            None => return Err(Error::InvalidParameter(format!("unknown seed {other:?}"))),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_full_config() {
        let kv = KeyValues::parse(
            "kind = stability-sweep\nn = 16\nchi = 0.5\nsweep.chi = 0, 0.1, 0.2\nseed = random\nrng_seed = 9\nt_end = 3\n",
        )
        .unwrap();
        let cfg = ExperimentConfig::from_key_values(&kv, None).unwrap();
        assert_eq!(cfg.kind, ExperimentKind::StabilitySweep);
        assert_eq!(cfg.grid, SpectralGrid::cube(16).unwrap());
        assert_eq!(cfg.sweep, vec![("chi".to_string(), vec![0.0, 0.1, 0.2])]);
        assert_eq!(cfg.rng_seed, 9);
        assert!(cfg.dt_from_cfl);
        assert_eq!(
            cfg.seed,
            SeedSpec::Random {
                max_mode: 4,
                amplitude: 0.1
            }
        );
    }

    #[test]
    fn rejects_bad_keys_and_axes() {
        let bad = [
            "kind = scan\nfoo = 1\n",
            "kind = scan\nsweep.n = 1, 2\n",
            "kind = scan\nsweep.coupling = 1\n",
        ];
        for text in bad {
            let kv = KeyValues::parse(text).unwrap();
            assert!(
                ExperimentConfig::from_key_values(&kv, None).is_err(),
                "{text}"
            );
        }
        let kv = KeyValues::parse("seed = eigenfunction\nseed_amplitude = 0\n").unwrap();
        assert!(ExperimentConfig::from_key_values(&kv, Some(ExperimentKind::GrowthMatch)).is_err());
    }

    #[test]
    fn resolved_config_round_trips_and_hash_is_stable() {
        let kv = KeyValues::parse(
            "kind = growth-match\nn = 32\ndt = 0.01\nseed_w = 0, 1\nseed_rotate = true\n",
        )
        .unwrap();
        let cfg = ExperimentConfig::from_key_values(&kv, None).unwrap();
        let again = ExperimentConfig::from_key_values(&cfg.to_key_values(), None).unwrap();
        assert_eq!(cfg.hash(), again.hash());
        assert_eq!(cfg.hash().len(), 64);
        let other = cfg.with_param("chi", 2.0).unwrap();
        assert_ne!(cfg.hash(), other.hash());
        let longer = ExperimentConfig {
            t_end: 99.0,
            ..cfg.clone()
        };
        assert_ne!(cfg.hash(), longer.hash());
        assert_eq!(cfg.trajectory_hash(), longer.trajectory_hash());
        assert_ne!(cfg.trajectory_hash(), other.trajectory_hash());
        assert!(
            matches!(again.seed, SeedSpec::Eigenfunction { w, rotate: true, .. } if w == [0.0, 1.0])
        );
    }
}
