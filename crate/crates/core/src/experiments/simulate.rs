use std::fs::{File, OpenOptions};
use std::io::BufWriter;
use std::path::PathBuf;

use serde::Serialize;

use super::config::ExperimentConfig;
use super::manifest::{write_manifest, Manifest};
use super::{prepare, Check};
use crate::diagnostics::{CsvObservableWriter, NdjsonWriter, ObservableRecord};
use crate::dynamics::{latest_checkpoint, load_checkpoint, run, Observer, RecordLog, RunOptions};
use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize)]
pub struct SimulateReport {
    pub dt: f64,
    pub t_end: f64,
    pub steps: u64,
    /// Step count of the checkpoint the run continued from.
    pub resumed_from: Option<u64>,
    pub final_record: Option<ObservableRecord>,
    pub max_mass_drift: f64,
    pub min_ratio: f64,
    pub cfl_violations: u64,
    pub positivity_violations: u64,
    pub checkpoints: Vec<PathBuf>,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub records: Vec<ObservableRecord>,
}

pub const OBSERVABLES_NDJSON: &str = "observables.ndjson";
pub const OBSERVABLES_CSV: &str = "observables.csv";
pub const CHECKPOINT_DIR: &str = "checkpoints";

/// Integrate one trajectory. With an output directory, observables stream
/// to `observables.ndjson` (and `observables.csv` if enabled), checkpoints
/// go to `checkpoints/` and a manifest is written. With `resume`, the run
/// continues from the newest checkpoint with the same trajectory hash; the
/// horizon and output settings may differ.
pub fn run_simulate(cfg: &ExperimentConfig, resume: bool) -> Result<SimulateReport> {
    let (mut stepper, mut state) = prepare(cfg)?;
    let hash = cfg.trajectory_hash();
    let ckpt_dir = cfg.output_dir.as_ref().map(|d| d.join(CHECKPOINT_DIR));

    let mut resumed_from = None;
    if resume {
        let dir = ckpt_dir
            .as_ref()
            .ok_or_else(|| Error::InvalidParameter("resuming needs an output directory".into()))?;
        if let Some(path) = dir
            .exists()
            .then(|| latest_checkpoint(dir))
            .transpose()?
            .flatten()
        {
            let ck = load_checkpoint(&path)?;
            if ck.config_hash != hash {
                return Err(Error::InvalidParameter(format!(
                    "checkpoint {} belongs to trajectory {}, not {hash}",
                    path.display(),
                    ck.config_hash
                )));
            }
            if *ck.state.grid() != cfg.grid {
                return Err(Error::InvalidGrid(
                    "checkpoint grid differs from the config".into(),
                ));
            }
            state = ck.state;
            resumed_from = Some(ck.steps);
        }
    }

    let opts = RunOptions {
        t_end: cfg.t_end,
        observe_every: cfg.observe_every,
        checkpoint_every: cfg.checkpoint_every,
        checkpoint_dir: ckpt_dir,
        config_hash: hash,
        start_step: resumed_from.unwrap_or(0),
        track_energy: true,
    };

    let mut log = RecordLog::default();
    let mut writers: Vec<Box<dyn Observer>> = Vec::new();
    let mut outputs = Vec::new();
    if let Some(dir) = &cfg.output_dir {
        std::fs::create_dir_all(dir)?;
        let open = |name: &str| -> Result<File> {
            let path = dir.join(name);
            Ok(if resumed_from.is_some() {
                OpenOptions::new().create(true).append(true).open(path)?
            } else {
                File::create(path)?
            })
        };
        writers.push(Box::new(NdjsonWriter::new(BufWriter::new(open(
            OBSERVABLES_NDJSON,
        )?))));
        outputs.push(OBSERVABLES_NDJSON.to_string());
        if cfg.csv {
            // A resumed CSV keeps its header and only gains rows.
            let fresh = resumed_from.is_none() || !dir.join(OBSERVABLES_CSV).exists();
            let file = BufWriter::new(open(OBSERVABLES_CSV)?);
            writers.push(Box::new(if fresh {
                CsvObservableWriter::new(file)?
            } else {
                CsvObservableWriter::without_header(file)
            }));
            outputs.push(OBSERVABLES_CSV.to_string());
        }
        outputs.push(format!("{CHECKPOINT_DIR}/"));
    }

    // A resumed run starts by observing the checkpointed state, which the
    // streams already hold.
    let mut skip = resumed_from.is_some();
    let mut stream = |rec: &ObservableRecord, st: &crate::dynamics::PhaseState| -> Result<()> {
        if std::mem::take(&mut skip) {
            return Ok(());
        }
        writers.iter_mut().try_for_each(|w| w.observe(rec, st))
    };
    let summary = run(&mut stepper, state, &opts, &mut [&mut log, &mut stream])?;
    drop(writers);

    if let Some(dir) = &cfg.output_dir {
        let mut m = Manifest::new(cfg, Some(stepper.config().dt));
        m.outputs = outputs;
        write_manifest(dir, cfg, &m)?;
    }
    let checks = vec![Check::new(
        "mass conserved",
        summary.max_mass_drift <= 1e-10,
        format!("max drift {:.3e}", summary.max_mass_drift),
    )];
    Ok(SimulateReport {
        dt: stepper.config().dt,
        t_end: cfg.t_end,
        steps: summary.steps,
        resumed_from,
        final_record: log.records.last().cloned(),
        max_mass_drift: summary.max_mass_drift,
        min_ratio: summary.min_ratio,
        cfl_violations: summary.cfl_violations,
        positivity_violations: summary.positivity_violations,
        checkpoints: summary.checkpoints,
        checks,
        records: log.records,
    })
}
