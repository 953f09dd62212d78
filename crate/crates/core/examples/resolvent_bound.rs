//! The transport resolvent never exceeds `1/Re μ`.

use antkinetics::linstab::resolvent_norm_check;
use antkinetics::ReducedParams;
use num_complex::Complex64;

fn main() -> antkinetics::Result<()> {
    let rp = ReducedParams::direct(1.0, 0.5, 2.0);
    for (sigma, mu) in [
        (0.0, Complex64::new(0.1, 0.0)),
        (0.05, Complex64::new(0.5, 3.0)),
        (1.0, Complex64::new(2.0, -1.0)),
    ] {
        let c = resolvent_norm_check(&rp, sigma, mu, 64)?;
        println!(
            "sigma {sigma:4}  mu {mu:>10}  |R| = {:.6}  1/Re mu = {:.6}  ok {}",
            c.norm_estimate, c.bound, c.bound_ok
        );
    }
    Ok(())
}
