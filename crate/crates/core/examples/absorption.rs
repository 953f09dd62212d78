//! `‖ρ‖_{L⁶}` along runs from concentrated data.

use antkinetics::dynamics::{
    concentrated_seed, run, PhaseState, RecordLog, RunOptions, Stepper, StepperConfig,
};
use antkinetics::spectral::SpectralGrid;
use antkinetics::ModelParams;

fn main() -> antkinetics::Result<()> {
    let g = SpectralGrid::cube(32)?;
    let p = ModelParams {
        chi: 1.0,
        sigma_x: 0.05,
        sigma_theta: 0.05,
        ..ModelParams::default()
    };
    for target in [1.0, 5.0, 10.0] {
        let mut st = Stepper::new(
            g,
            p,
            StepperConfig {
                dt: 0.002,
                ..Default::default()
            },
        )?;
        let s0 =
            PhaseState::with_elliptic_chemical(concentrated_seed(g, target)?, &p, st.context());
        let mut log = RecordLog::default();
        let opts = RunOptions {
            t_end: 10.0,
            observe_every: 500,
            track_energy: false,
            ..Default::default()
        };
        run(&mut st, s0, &opts, &mut [&mut log])?;
        let series: Vec<String> = log
            .records
            .iter()
            .map(|r| format!("{:.3}", r.lp_rho[&6]))
            .collect();
        println!("L6 start {target:4}: {}", series.join(" "));
    }
    Ok(())
}
