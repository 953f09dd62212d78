use serde::Serialize;

use crate::error::{Error, Result};

pub const MIN_FIT_SAMPLES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentialFit {
    pub rate: f64,
    /// `log` of the fitted prefactor.
    pub log_prefactor: f64,
    pub r_squared: f64,
    pub samples: usize,
}

/// Least-squares slope of `log(value)` against `t` over the samples with
/// `t` in `window` (inclusive), or all samples when `window` is `None`.
pub fn fit_exponential_rate(
    series: &[(f64, f64)],
    window: Option<(f64, f64)>,
) -> Result<ExponentialFit> {
    let pts: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|&(t, _)| window.is_none_or(|(a, b)| t >= a && t <= b))
        .collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::Fit(format!(
            "{} samples in window, need at least {MIN_FIT_SAMPLES}",
            pts.len()
        )));
    }
    if let Some(&(t, v)) = pts.iter().find(|&&(_, v)| !(v > 0.0)) {
        return Err(Error::Fit(format!("nonpositive value {v} at t = {t}")));
    }
    let n = pts.len() as f64;
    let tm = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let ym = pts.iter().map(|p| p.1.ln()).sum::<f64>() / n;
    let (mut stt, mut sty, mut syy) = (0.0, 0.0, 0.0);
    for &(t, v) in &pts {
        let (dt, dy) = (t - tm, v.ln() - ym);
        stt += dt * dt;
        sty += dt * dy;
        syy += dy * dy;
    }
    if stt == 0.0 {
        return Err(Error::Fit("all samples share one time".into()));
    }
    let rate = sty / stt;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        sty * sty / (stt * syy)
    };
    Ok(ExponentialFit {
        rate,
        log_prefactor: ym - rate * tm,
        r_squared,
        samples: pts.len(),
    })
}
