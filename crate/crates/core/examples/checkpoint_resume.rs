//! Stop a run, restart it from its checkpoint, and land on the same state.

use antkinetics::dynamics::{
    load_checkpoint, random_smooth_seed, run, PhaseState, RunOptions, Stepper, StepperConfig,
};
use antkinetics::spectral::SpectralGrid;
use antkinetics::ModelParams;

fn main() -> antkinetics::Result<()> {
    let g = SpectralGrid::cube(16)?;
    let p = ModelParams {
        chi: 2.0,
        ..ModelParams::default()
    };
    let mut st = Stepper::new(
        g,
        p,
        StepperConfig {
            dt: 0.02,
            ..Default::default()
        },
    )?;
    let s0 =
        PhaseState::with_elliptic_chemical(random_smooth_seed(g, 3, 0.2, 1)?, &p, st.context());
    let dir = std::env::temp_dir().join("antkinetics_resume_example");
    let _ = std::fs::remove_dir_all(&dir);

    let whole = run(
        &mut st,
        s0.clone(),
        &RunOptions {
            t_end: 2.0,
            ..Default::default()
        },
        &mut [],
    )?;
    let half = RunOptions {
        t_end: 1.0,
        checkpoint_dir: Some(dir.clone()),
        ..Default::default()
    };
    let first = run(&mut st, s0, &half, &mut [])?;
    let ck = load_checkpoint(first.checkpoints.last().expect("final checkpoint"))?;
    let rest = RunOptions {
        t_end: 2.0,
        start_step: ck.steps,
        ..Default::default()
    };
    let second = run(&mut st, ck.state, &rest, &mut [])?;
    println!(
        "resumed after {} steps; identical: {}",
        ck.steps,
        second.final_state == whole.final_state
    );
    Ok(())
}
