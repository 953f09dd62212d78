//! The energy identity holds to the order of the scheme.

use std::f64::consts::PI;

use antkinetics::diagnostics::dissipation_residual;
use antkinetics::dynamics::{PhaseState, Stepper, StepperConfig, F_STAR};
use antkinetics::spectral::{SpectralField3, SpectralGrid};
use antkinetics::ModelParams;

fn main() -> antkinetics::Result<()> {
    let g = SpectralGrid::cube(16)?;
    let p = ModelParams {
        chi: 1.0,
        tau: 0.2,
        sigma_x: 0.01,
        sigma_theta: 0.05,
        ..ModelParams::default()
    };
    let f0 = SpectralField3::from_fn(g, |x1, x2, th| {
        F_STAR
            * (1.0
                + 0.3 * (2.0 * PI * x1).cos() * (1.0 + th.cos())
                + 0.2 * (2.0 * PI * x2).sin() * th.sin())
    });
    let mut prev: Option<f64> = None;
    for dt in [0.04, 0.02, 0.01, 0.005] {
        let mut st = Stepper::new(
            g,
            p,
            StepperConfig {
                dt,
                ..Default::default()
            },
        )?;
        let s0 = PhaseState::with_elliptic_chemical(f0.clone(), &p, st.context());
        let (s1, _) = st.step(&s0)?;
        let (s2, _) = st.step(&s1)?;
        let r = dissipation_residual([&s0, &s1, &s2], &p, st.context())?.abs();
        let order = prev.map(|q| (q / r).log2());
        println!("dt {dt:6}  residual {r:.3e}  order {order:?}");
        prev = Some(r);
    }
    Ok(())
}
