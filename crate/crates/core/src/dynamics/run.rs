//! Fixed-step trajectories with observers and resumable checkpoints.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use super::state::PhaseState;
use super::stepper::Stepper;
use crate::diagnostics::{compute_observables, energy_rate, half_l2_squared, ObservableRecord};
use crate::error::{Error, Result};
use crate::spectral::io::{read_field2, read_field3, write_field2, write_field3};

/// Receives every observation of a trajectory.
pub trait Observer {
    fn observe(&mut self, record: &ObservableRecord, state: &PhaseState) -> Result<()>;
}

impl<F> Observer for F
where
    F: FnMut(&ObservableRecord, &PhaseState) -> Result<()>,
{
    fn observe(&mut self, record: &ObservableRecord, state: &PhaseState) -> Result<()> {
        self(record, state)
    }
}

/// Collects records in memory.
#[derive(Clone, Debug, Default)]
pub struct RecordLog {
    pub records: Vec<ObservableRecord>,
}

impl Observer for RecordLog {
    fn observe(&mut self, record: &ObservableRecord, _: &PhaseState) -> Result<()> {
        self.records.push(record.clone());
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub t_end: f64,
    /// Observe every this many steps (and at the start and end).
    pub observe_every: usize,
    /// Write a checkpoint every this many steps; 0 writes only the final one.
    pub checkpoint_every: usize,
    pub checkpoint_dir: Option<PathBuf>,
    pub config_hash: String,
    /// Global index of the first step, non-zero when resuming.
    pub start_step: u64,
    /// Fill in `dissipation_residual`. It needs the energy balance at every
    /// observation, which costs a refined transform.
    pub track_energy: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            t_end: 0.0,
            observe_every: 10,
            checkpoint_every: 0,
            checkpoint_dir: None,
            config_hash: String::new(),
            start_step: 0,
            track_energy: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunSummary {
    pub final_state: PhaseState,
    /// Global step count at the end.
    pub steps: u64,
    pub observations: usize,
    pub cfl_violations: u64,
    pub positivity_violations: u64,
    /// `max |mass − mass₀|` over all steps.
    pub max_mass_drift: f64,
    /// Smallest `min f / max f` seen at step starts.
    pub min_ratio: f64,
    pub checkpoints: Vec<PathBuf>,
}

/// Observation whose dissipation residual still waits for the next state.
struct Pending {
    record: ObservableRecord,
    state: PhaseState,
    energy_prev: Option<(f64, f64)>,
    energy: f64,
    rate: f64,
}

fn emit(observers: &mut [&mut dyn Observer], p: Pending, next: Option<(f64, f64)>) -> Result<()> {
    let mut rec = p.record;
    if let (Some((e_prev, h_prev)), Some((e_next, h_next))) = (p.energy_prev, next) {
        if (h_prev - h_next).abs() <= 1e-12 * h_prev {
            let centred = (e_next - e_prev) / (h_prev + h_next);
            rec.dissipation_residual = Some((centred - p.rate) / (2.0 * p.energy));
        }
    }
    for o in observers.iter_mut() {
        o.observe(&rec, &p.state)?;
    }
    Ok(())
}

/// Advance `state0` to `opts.t_end` with the stepper's fixed `dt`. The last
/// step is shortened when `t_end` is not a whole number of steps away.
pub fn run(
    stepper: &mut Stepper,
    state0: PhaseState,
    opts: &RunOptions,
    observers: &mut [&mut dyn Observer],
) -> Result<RunSummary> {
    if opts.observe_every == 0 {
        return Err(Error::InvalidParameter("observe_every must be >= 1".into()));
    }
    let dt = stepper.config().dt;
    let ctx = stepper.context().clone();
    let params = *stepper.params();
    let mass0 = state0.mass();
    let mut state = state0;
    let mut step = opts.start_step;
    let mut summary = RunSummary {
        final_state: state.clone(),
        steps: step,
        observations: 0,
        cfl_violations: 0,
        positivity_violations: 0,
        max_mass_drift: 0.0,
        min_ratio: f64::INFINITY,
        checkpoints: Vec::new(),
    };

    let observe = |state: &PhaseState, last: Option<(f64, f64)>| -> Result<Pending> {
        let record = compute_observables(state, &params, &ctx)?;
        if !opts.track_energy {
            return Ok(Pending {
                record,
                state: state.clone(),
                energy_prev: None,
                energy: 0.0,
                rate: 0.0,
            });
        }
        Ok(Pending {
            record,
            state: state.clone(),
            energy_prev: last,
            energy: half_l2_squared(&state.f)?,
            rate: energy_rate(state, &params, &ctx)?,
        })
    };

    let mut pending = Some(observe(&state, None)?);
    summary.observations += 1;
    let tol = 1e-9 * dt;
    while opts.t_end - state.t > tol {
        let remaining = opts.t_end - state.t;
        let h = if remaining < dt - tol { remaining } else { dt };
        let e_before = half_l2_squared(&state.f)?;
        let (mut next, rep) = stepper.step_by(&state, h)?;
        if (opts.t_end - next.t).abs() <= tol {
            next.t = opts.t_end;
        }
        step += 1;
        summary.cfl_violations += rep.cfl_violated as u64;
        summary.positivity_violations += rep.positivity_violated as u64;
        if let (Some(lo), Some(hi)) = (rep.min_f, rep.max_f) {
            summary.min_ratio = summary.min_ratio.min(lo / hi);
        }
        summary.max_mass_drift = summary.max_mass_drift.max((next.mass() - mass0).abs());

        let e_after = half_l2_squared(&next.f)?;
        if let Some(p) = pending.take() {
            emit(observers, p, Some((e_after, h)))?;
        }
        state = next;

        let at_end = opts.t_end - state.t <= tol;
        if step.is_multiple_of(opts.observe_every as u64) || at_end {
            pending = Some(observe(&state, Some((e_before, h)))?);
            summary.observations += 1;
        }
        if let Some(dir) = &opts.checkpoint_dir {
            let due =
                opts.checkpoint_every > 0 && step.is_multiple_of(opts.checkpoint_every as u64);
            if due || at_end {
                summary
                    .checkpoints
                    .push(write_checkpoint(dir, &state, step, &opts.config_hash)?);
            }
        }
    }
    if let Some(p) = pending.take() {
        emit(observers, p, None)?;
    }
    summary.final_state = state;
    summary.steps = step;
    Ok(summary)
}

/// A state restored from disk.
#[derive(Clone, Debug)]
pub struct Checkpoint {
    pub state: PhaseState,
    pub steps: u64,
    pub config_hash: String,
}

pub fn checkpoint_path(dir: &Path, step: u64) -> PathBuf {
    dir.join(format!("ckpt_{step:010}"))
}

/// Writes `f.bin`, `c.bin` and `manifest.txt` into `dir/ckpt_<step>`.
pub fn write_checkpoint(
    dir: &Path,
    state: &PhaseState,
    step: u64,
    config_hash: &str,
) -> Result<PathBuf> {
    let path = checkpoint_path(dir, step);
    fs::create_dir_all(&path)?;
    write_field3(&path.join("f.bin"), &state.f)?;
    write_field2(&path.join("c.bin"), &state.c)?;
    let mut m = String::new();
    let _ = writeln!(m, "time = {:?}", state.t);
    let _ = writeln!(m, "steps = {step}");
    let _ = writeln!(m, "config_hash = {config_hash}");
    fs::write(path.join("manifest.txt"), m)?;
    Ok(path)
}

pub fn load_checkpoint(path: &Path) -> Result<Checkpoint> {
    let kv = crate::config::KeyValues::load(&path.join("manifest.txt"))?;
    let missing = |k: &str| Error::Format {
        path: path.join("manifest.txt"),
        message: format!("missing {k}"),
    };
    let t = kv.get_f64("time")?.ok_or_else(|| missing("time"))?;
    let steps = kv
        .get("steps")
        .and_then(|s| s.parse::<u64>().ok())
        .ok_or_else(|| missing("steps"))?;
    let config_hash = kv.get("config_hash").unwrap_or("").to_string();
    let f = read_field3(&path.join("f.bin"))?;
    let c = read_field2(&path.join("c.bin"), f.grid().n_theta)?;
    Ok(Checkpoint {
        state: PhaseState { f, c, t },
        steps,
        config_hash,
    })
}

/// The most recent checkpoint directory under `dir`, if any.
pub fn latest_checkpoint(dir: &Path) -> Result<Option<PathBuf>> {
    let mut best: Option<PathBuf> = None;
    for entry in fs::read_dir(dir)? {
        let p = entry?.path();
        let is_ckpt = p
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.starts_with("ckpt_"));
        if is_ckpt && best.as_ref().is_none_or(|b| p > *b) {
            best = Some(p);
        }
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{StepperConfig, F_STAR};
    use crate::params::{Coupling, ModelParams};
    use crate::spectral::{SpectralField3, SpectralGrid};
    use std::f64::consts::PI;

    fn setup(coupling: Coupling) -> (Stepper, PhaseState) {
        let g = SpectralGrid::cube(8).unwrap();
        let p = ModelParams {
            chi: 2.0,
            lambda: 0.5,
            tau: 0.2,
            sigma_x: 1e-2,
            sigma_theta: 1e-2,
            coupling,
            ..ModelParams::default()
        };
        let st = Stepper::new(
            g,
            p,
            StepperConfig {
                dt: 0.01,
                ..Default::default()
            },
        )
        .unwrap();
        let f = SpectralField3::from_fn(g, |x1, x2, th| {
            F_STAR
                * (1.0
                    + 0.2 * (2.0 * PI * x1).cos() * (1.0 + th.sin())
                    + 0.1 * (2.0 * PI * x2).sin())
        });
        let s = PhaseState::with_elliptic_chemical(f, &p, st.context());
        (st, s)
    }

    #[test]
    fn zero_horizon_returns_initial_state() {
        let (mut st, s) = setup(Coupling::Elliptic);
        let mut log = RecordLog::default();
        let opts = RunOptions::default();
        let out = run(&mut st, s.clone(), &opts, &mut [&mut log]).unwrap();
        assert_eq!(out.final_state, s);
        assert_eq!(out.steps, 0);
        assert_eq!(log.records.len(), 1);
        assert!(log.records[0].dissipation_residual.is_none());
    }

    #[test]
    fn steady_state_mass_drift() {
        let g = SpectralGrid::cube(8).unwrap();
        let p = ModelParams {
            chi: 3.0,
            ..ModelParams::default()
        };
        let mut st = Stepper::new(
            g,
            p,
            StepperConfig {
                dt: 0.01,
                ..Default::default()
            },
        )
        .unwrap();
        let s = PhaseState::homogeneous(g, &p, st.context());
        let opts = RunOptions {
            t_end: 10.0,
            observe_every: 100,
            ..Default::default()
        };
        let out = run(&mut st, s, &opts, &mut []).unwrap();
        assert_eq!(out.steps, 1000);
        assert!(out.max_mass_drift < 1e-10);
        assert_eq!(out.final_state.t, 10.0);
    }

    #[test]
    fn shortened_last_step_and_observation_stride() {
        let (mut st, s) = setup(Coupling::Elliptic);
        let mut log = RecordLog::default();
        let opts = RunOptions {
            t_end: 0.105,
            observe_every: 4,
            ..Default::default()
        };
        let out = run(&mut st, s, &opts, &mut [&mut log]).unwrap();
        assert_eq!(out.steps, 11);
        assert_eq!(out.final_state.t, 0.105);
        let times: Vec<f64> = log.records.iter().map(|r| r.t).collect();
        assert_eq!(times.len(), 4);
        assert!((times[1] - 0.04).abs() < 1e-12 && (times[2] - 0.08).abs() < 1e-12);
        assert!(log.records[1].dissipation_residual.is_some());
        assert!(log.records[3].dissipation_residual.is_none());
    }

    #[test]
    fn resumed_run_is_bit_identical() {
        for coupling in [Coupling::Elliptic, Coupling::Parabolic] {
            let dir = tempfile::tempdir().unwrap();
            let (mut st, s) = setup(coupling);
            let whole = run(
                &mut st,
                s.clone(),
                &RunOptions {
                    t_end: 0.3,
                    ..Default::default()
                },
                &mut [],
            )
            .unwrap();

            let first = run(
                &mut st,
                s,
                &RunOptions {
                    t_end: 0.13,
                    checkpoint_dir: Some(dir.path().to_path_buf()),
                    config_hash: "abc".into(),
                    ..Default::default()
                },
                &mut [],
            )
            .unwrap();
            let ck = load_checkpoint(first.checkpoints.last().unwrap()).unwrap();
            assert_eq!(ck.steps, 13);
            assert_eq!(ck.config_hash, "abc");
            assert_eq!(ck.state, first.final_state);
            let second = run(
                &mut st,
                ck.state,
                &RunOptions {
                    t_end: 0.3,
                    start_step: ck.steps,
                    ..Default::default()
                },
                &mut [],
            )
            .unwrap();
            assert_eq!(second.steps, whole.steps);
            assert_eq!(second.final_state, whole.final_state);
            assert_eq!(
                latest_checkpoint(dir.path()).unwrap().unwrap(),
                checkpoint_path(dir.path(), 13)
            );
        }
    }
}
