//! A k = 2 seed run into the nonlinear regime, streaming observables.

use std::io::stdout;

use antkinetics::diagnostics::NdjsonWriter;
use antkinetics::dynamics::{eigenfunction_seed, run, RunOptions, Stepper, StepperConfig};
use antkinetics::spectral::{SpectralContext, SpectralGrid};
use antkinetics::ModelParams;

fn main() -> antkinetics::Result<()> {
    let g = SpectralGrid::cube(32)?;
    let p = ModelParams {
        chi: 2.0,
        sigma_x: 0.01,
        sigma_theta: 0.05,
        ..ModelParams::default()
    };
    let ctx = SpectralContext::new(g);
    let seed = eigenfunction_seed(g, &p, &ctx, 2, [1.0, 0.0], false, 1e-3, 48)?;
    println!("# predicted rate {:.5}", seed.mu);
    let mut stepper = Stepper::new(
        g,
        p,
        StepperConfig {
            dt: 0.02,
            ..Default::default()
        },
    )?;
    let mut out = NdjsonWriter::new(stdout().lock());
    let opts = RunOptions {
        t_end: 20.0,
        observe_every: 100,
        ..Default::default()
    };
    let s = run(&mut stepper, seed.state, &opts, &mut [&mut out])?;
    eprintln!("{} steps, mass drift {:.1e}", s.steps, s.max_mass_drift);
    Ok(())
}
