//! Inviscid growth rate from the dispersion relation, and the interaction
//! strength where it vanishes.

use antkinetics::linstab::find_unstable_root;
use antkinetics::params::{instability_margin, reduce};
use antkinetics::ModelParams;

fn main() -> antkinetics::Result<()> {
    let p = ModelParams {
        chi: 1.4,
        tau: 0.1,
        ..ModelParams::default()
    };
    println!("k  threshold  margin     mu0");
    for k in 1..=6 {
        let rp = reduce(&p, k, p.coupling)?;
        let root = find_unstable_root(&rp, p.coupling)?;
        let mu0 = root.mu0().map_or("none".to_string(), |m| format!("{m:.6}"));
        println!(
            "{k}  {:.6}   {:+.5}  {mu0}",
            p.chi_threshold(k),
            instability_margin(&p, k)?
        );
    }
    Ok(())
}
