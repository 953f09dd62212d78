//! Which wavenumbers grow, by three routes.

use antkinetics::experiments::{run_instability_scan, ExperimentConfig, ExperimentKind};

fn main() -> antkinetics::Result<()> {
    let mut cfg = ExperimentConfig::defaults(ExperimentKind::InstabilityScan);
    cfg.params.chi = 1.5;
    cfg.params.sigma_c = 0.05;
    cfg.k_max = 6;
    cfg.n_modes = 48;
    let r = run_instability_scan(&cfg)?;
    println!("k  margin    mu0       rightmost");
    for row in &r.rows {
        println!(
            "{}  {:+.4}   {:<9} {:+.6}",
            row.k,
            row.margin.unwrap_or(f64::NAN),
            row.mu0.map_or("-".into(), |m| format!("{m:.5}")),
            row.rightmost_re.unwrap_or(f64::NAN)
        );
    }
    println!("unstable: {:?}", r.unstable);
    Ok(())
}
