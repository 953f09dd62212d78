use std::io::Write;

use super::observables::{ObservableRecord, LP_EXPONENTS};
use crate::dynamics::{Observer, PhaseState};
use crate::error::Result;

/// One JSON object per line.
pub struct NdjsonWriter<W: Write> {
    out: W,
}

impl<W: Write> NdjsonWriter<W> {
    pub fn new(out: W) -> Self {
        Self { out }
    }

    pub fn write(&mut self, rec: &ObservableRecord) -> Result<()> {
        serde_json::to_writer(&mut self.out, rec)?;
        self.out.write_all(b"\n")?;
        Ok(())
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}

impl<W: Write> Observer for NdjsonWriter<W> {
    fn observe(&mut self, rec: &ObservableRecord, _: &PhaseState) -> Result<()> {
        self.write(rec)
    }
}

pub fn csv_header() -> Vec<String> {
    let mut h: Vec<String> = ["t", "mass", "min_f", "l2_f_dev"]
        .map(String::from)
        .to_vec();
    h.extend(LP_EXPONENTS.iter().map(|p| format!("lp_rho_{p}")));
    h.extend(
        [
            "h1_f",
            "grad_c_l2",
            "hess_c_l2",
            "dissipation_residual",
            "dominant_k",
            "trail_count",
        ]
        .map(String::from),
    );
    h
}

fn csv_row(r: &ObservableRecord) -> Vec<String> {
    let mut row = vec![
        r.t.to_string(),
        r.mass.to_string(),
        r.min_f.to_string(),
        r.l2_f_dev.to_string(),
    ];
    row.extend(
        LP_EXPONENTS
            .iter()
            .map(|p| r.lp_rho.get(p).map_or(String::new(), |v| v.to_string())),
    );
    row.extend([
        r.h1_f.to_string(),
        r.grad_c_l2.to_string(),
        r.hess_c_l2.to_string(),
        r.dissipation_residual
            .map_or(String::new(), |v| v.to_string()),
        r.dominant_k.to_string(),
        r.trail_count.to_string(),
    ]);
    row
}

/// CSV with a header row; `lp_rho` is spread over one column per exponent.
pub struct CsvObservableWriter<W: Write> {
    out: csv::Writer<W>,
}

impl<W: Write> CsvObservableWriter<W> {
    pub fn new(out: W) -> Result<Self> {
        let mut out = csv::Writer::from_writer(out);
        out.write_record(csv_header())
            .map_err(std::io::Error::other)?;
        Ok(Self { out })
    }

    /// For appending to a file that already has its header.
    pub fn without_header(out: W) -> Self {
        Self {
            out: csv::Writer::from_writer(out),
        }
    }

    pub fn write(&mut self, rec: &ObservableRecord) -> Result<()> {
        self.out
            .write_record(csv_row(rec))
            .map_err(std::io::Error::other)?;
        Ok(())
    }

    pub fn flush(&mut self) -> Result<()> {
        self.out.flush()?;
        Ok(())
    }
}

impl<W: Write> Observer for CsvObservableWriter<W> {
    fn observe(&mut self, rec: &ObservableRecord, _: &PhaseState) -> Result<()> {
        self.write(rec)
    }
}
