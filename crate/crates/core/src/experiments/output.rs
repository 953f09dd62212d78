use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use serde::Serialize;

use super::config::{ExperimentConfig, ExperimentKind};
use super::manifest::{write_manifest, Manifest};
use super::{
    run_dispersion_map, run_eigen, run_growth_match, run_instability_scan, run_simulate,
    run_stability_sweep, Check,
};
use crate::diagnostics::NdjsonWriter;
use crate::error::Result;

/// What an experiment produced: a JSON summary and its self-checks.
#[derive(Clone, Debug, Serialize)]
pub struct Outcome {
    pub kind: String,
    pub config_hash: String,
    pub summary: serde_json::Value,
    pub checks: Vec<Check>,
}

pub fn write_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(std::io::Error::other)?;
    for r in rows {
        w.serialize(r).map_err(std::io::Error::other)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(BufWriter::new(File::create(path)?), value)?;
    Ok(())
}

#[derive(Serialize)]
struct SeedCsvRow<'a> {
    label: &'a str,
    w1: f64,
    w2: f64,
    rotate: bool,
    rate: Option<f64>,
    r_squared: Option<f64>,
    relative_error: Option<f64>,
    window_end: f64,
    samples: usize,
    max_mass_drift: f64,
    min_ratio: f64,
}

/// Run the experiment `cfg.kind`. Tables and a manifest go to
/// `cfg.output_dir` when it is set.
pub fn execute(cfg: &ExperimentConfig, resume: bool) -> Result<Outcome> {
    let dir = cfg.output_dir.as_deref();
    if let Some(d) = dir {
        std::fs::create_dir_all(d)?;
    }
    let mut outputs: Vec<String> = Vec::new();
    let mut dt = None;
    let mut emit = |name: &str, write: &dyn Fn(&Path) -> Result<()>| -> Result<()> {
        if let Some(d) = dir {
            write(&d.join(name))?;
            outputs.push(name.to_string());
        }
        Ok(())
    };
    let (summary, checks) = match cfg.kind {
        ExperimentKind::InstabilityScan => {
            let r = run_instability_scan(cfg)?;
            emit("scan.csv", &|p| write_csv(p, &r.rows))?;
            emit("scan.json", &|p| write_json(p, &r))?;
            (serde_json::to_value(&r)?, r.checks)
        }
        ExperimentKind::DispersionMap => {
            let rows = run_dispersion_map(cfg)?;
            emit("dispersion.csv", &|p| write_csv(p, &rows))?;
            (serde_json::to_value(&rows)?, Vec::new())
        }
        ExperimentKind::GrowthMatch => {
            let r = run_growth_match(cfg)?;
            dt = Some(r.dt);
            let rows: Vec<SeedCsvRow> = r
                .seeds
                .iter()
                .map(|s| SeedCsvRow {
                    label: &s.label,
                    w1: s.w[0],
                    w2: s.w[1],
                    rotate: s.rotate,
                    rate: s.rate,
                    r_squared: s.r_squared,
                    relative_error: s.relative_error,
                    window_end: s.window_end,
                    samples: s.samples,
                    max_mass_drift: s.max_mass_drift,
                    min_ratio: s.min_ratio,
                })
                .collect();
            emit("growth_seeds.csv", &|p| write_csv(p, &rows))?;
            emit("growth_match.json", &|p| write_json(p, &r))?;
            for s in &r.seeds {
                emit(&format!("seed_{}.ndjson", s.label), &|p| {
                    let mut w = NdjsonWriter::new(BufWriter::new(File::create(p)?));
                    s.records.iter().try_for_each(|rec| w.write(rec))
                })?;
            }
            (serde_json::to_value(&r)?, r.checks)
        }
        ExperimentKind::StabilitySweep => {
            let r = run_stability_sweep(cfg)?;
            dt = Some(r.dt);
            emit("stability_sweep.csv", &|p| write_csv(p, &r.rows))?;
            emit("stability_sweep.json", &|p| write_json(p, &r))?;
            (serde_json::to_value(&r)?, r.checks)
        }
        ExperimentKind::Simulate => {
            // The simulation writes its own streams and manifest.
            let r = run_simulate(cfg, resume)?;
            return Ok(Outcome {
                kind: cfg.kind.to_string(),
                config_hash: cfg.hash(),
                summary: serde_json::to_value(&r)?,
                checks: r.checks,
            });
        }
    };
    if let Some(d) = dir {
        let mut m = Manifest::new(cfg, dt);
        m.outputs = outputs;
        write_manifest(d, cfg, &m)?;
    }
    Ok(Outcome {
        kind: cfg.kind.to_string(),
        config_hash: cfg.hash(),
        summary,
        checks,
    })
}

/// Leading eigenvalues per wavenumber, written to `eigen.json`.
pub fn execute_eigen(cfg: &ExperimentConfig) -> Result<Outcome> {
    let rows = run_eigen(cfg)?;
    if let Some(d) = cfg.output_dir.as_deref() {
        std::fs::create_dir_all(d)?;
        write_json(&d.join("eigen.json"), &rows)?;
        let mut m = Manifest::new(cfg, None);
        m.kind = "eigen".into();
        m.outputs = vec!["eigen.json".into()];
        write_manifest(d, cfg, &m)?;
    }
    Ok(Outcome {
        kind: "eigen".into(),
        config_hash: cfg.hash(),
        summary: serde_json::to_value(&rows)?,
        checks: Vec::new(),
    })
}
