//! Rightmost eigenvalues of the truncated angular operator as rotational
//! diffusion is switched on.

use antkinetics::linstab::{find_unstable_root, sigma_sweep};
use antkinetics::params::reduce;
use antkinetics::ModelParams;

fn main() -> antkinetics::Result<()> {
    let p = ModelParams {
        chi: 3.0,
        ..ModelParams::default()
    };
    let rp = reduce(&p, 1, p.coupling)?;
    let mu0 = find_unstable_root(&rp, p.coupling)?.mu0();
    println!("dispersion root: {mu0:?}");
    for s in sigma_sweep(&rp, &[0.0, 1e-4, 1e-3, 1e-2, 1e-1], 64, p.coupling)? {
        println!(
            "sigma = {:7.0e}  rightmost = {:.8} {:+.2e}i  multiplicity {}",
            s.sigma, s.rightmost.re, s.rightmost.im, s.rightmost_multiplicity
        );
    }
    Ok(())
}
