//! Assumption audits over a temperature range for the water pairs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::saturation::{SaturationError, SaturationTable};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LiquidFamily {
    LinearTait,
    NonlinearTait { nu: f64 },
}

impl LiquidFamily {
    pub fn nu(self) -> Option<f64> {
        match self {
            Self::LinearTait => None,
            Self::NonlinearTait { nu } => Some(nu),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    pub t_start: f64,
    pub t_end: f64,
    #[serde(default = "default_step")]
    pub t_step: f64,
    pub liquid: LiquidFamily,
}

fn default_step() -> f64 {
    1.0
}

impl SweepConfig {
    pub fn new(t_start: f64, t_end: f64, t_step: f64, liquid: LiquidFamily) -> Self {
        Self { t_start, t_end, t_step, liquid }
    }

    /// `t_start, t_start + step, ...`, always ending exactly at `t_end`.
    pub fn temperatures(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = 0usize;
        loop {
            let t = self.t_start + k as f64 * self.t_step;
            if t >= self.t_end - 1e-9 * self.t_step {
                break;
            }
            out.push(t);
            k += 1;
        }
        out.push(self.t_end);
        out
    }
}

#[derive(Debug, Error)]
pub enum SweepError {
    #[error("invalid sweep: {0}")]
    Invalid(String),
    #[error("at T = {t} K: {source}")]
    Point { t: f64, source: SaturationError },
    #[error(transparent)]
    Saturation(#[from] SaturationError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "T_K")]
    pub t_k: f64,
    pub alpha: f64,
    pub alpha_beta: f64,
    pub ptilde_over_p0: f64,
    #[serde(rename = "gamma_L")]
    pub gamma_l: f64,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    /// Column-wise maxima.
    pub max: SweepRow,
    /// Column-wise minima.
    pub min: SweepRow,
    /// Temperatures whose full assumption audit did not pass.
    pub failed: Vec<f64>,
}

pub fn run_sweep(table: &SaturationTable, config: &SweepConfig) -> Result<SweepResult, SweepError> {
    let c = config;
    if !(c.t_step > 0.0 && c.t_start <= c.t_end && c.t_start.is_finite() && c.t_end.is_finite()) {
        return Err(SweepError::Invalid(format!(
            "need t_start <= t_end and t_step > 0, got {} .. {} step {}",
            c.t_start, c.t_end, c.t_step
        )));
    }
    if !table.covers(c.t_start, c.t_end) {
        let (lo, hi) = table.range();
        return Err(SweepError::Saturation(SaturationError::OutOfRange {
            t: if c.t_start < lo { c.t_start } else { c.t_end },
            lo,
            hi,
        }));
    }
    let nu = c.liquid.nu();
    let points = c
        .temperatures()
        .into_par_iter()
        .map(|t| {
            let pair = table.water_pair(t, nu).map_err(|source| SweepError::Point { t, source })?;
            let r = &pair.report;
            let row = SweepRow {
                t_k: t,
                alpha: r.alpha,
                alpha_beta: r.alpha_beta,
                ptilde_over_p0: r.p_tilde_over_p0,
                gamma_l: r.gamma_l_at_p0,
                margin: r.margin,
            };
            Ok((row, r.passed()))
        })
        .collect::<Result<Vec<_>, SweepError>>()?;

    let failed = points.iter().filter(|p| !p.1).map(|p| p.0.t_k).collect();
    let rows: Vec<SweepRow> = points.into_iter().map(|p| p.0).collect();
    let fold = |pick: fn(f64, f64) -> f64| {
        rows.iter().copied().reduce(|a, b| SweepRow {
            t_k: pick(a.t_k, b.t_k),
            alpha: pick(a.alpha, b.alpha),
            alpha_beta: pick(a.alpha_beta, b.alpha_beta),
            ptilde_over_p0: pick(a.ptilde_over_p0, b.ptilde_over_p0),
            gamma_l: pick(a.gamma_l, b.gamma_l),
            margin: pick(a.margin, b.margin),
        })
    };
    let max = fold(f64::max).expect("at least one temperature");
    let min = fold(f64::min).expect("at least one temperature");
    Ok(SweepResult { rows, max, min, failed })
}
