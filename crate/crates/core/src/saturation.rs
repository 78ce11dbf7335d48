//! Saturation data `T ↦ (p₀, v₀, K₀)` for building liquid-vapor pairs.
//!
//! The bundled table covers water from 273.15 K to 640 K: saturation
//! pressure, saturated liquid volume, and the liquid compression modulus
//! `K₀ = 1/κ_T` of the saturated liquid, from the IAPWS-95 formulation.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eos::{EosError, FluidPair};

const BUNDLED_WATER: &str = include_str!("../data/water_saturation.csv");

#[derive(Debug, Error)]
pub enum SaturationError {
    #[error("reading saturation table: {0}")]
    Csv(#[from] csv::Error),
    #[error("reading saturation table: {0}")]
    Io(#[from] std::io::Error),
    #[error("saturation table is empty")]
    Empty,
    #[error("saturation table temperatures must be strictly increasing (row {row})")]
    Unsorted { row: usize },
    #[error("saturation table row {row} has non-positive or non-finite values")]
    BadRow { row: usize },
    #[error("temperature {t} K outside the table range [{lo}, {hi}] K")]
    OutOfRange { t: f64, lo: f64, hi: f64 },
    #[error(transparent)]
    Eos(#[from] EosError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SaturationRow {
    #[serde(rename = "T_K")]
    pub t_k: f64,
    #[serde(rename = "p0_Pa")]
    pub p0: f64,
    #[serde(rename = "v0_m3kg")]
    pub v0: f64,
    #[serde(rename = "K0_Pa")]
    pub k0: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SaturationTable {
    rows: Vec<SaturationRow>,
}

impl SaturationTable {
    pub fn from_reader<R: Read>(reader: R) -> Result<Self, SaturationError> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let rows = rdr.deserialize().collect::<Result<Vec<SaturationRow>, _>>()?;
        Self::from_rows(rows)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self, SaturationError> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn bundled_water() -> Self {
        Self::from_reader(BUNDLED_WATER.as_bytes()).expect("bundled table is valid")
    }

    pub fn from_rows(rows: Vec<SaturationRow>) -> Result<Self, SaturationError> {
        if rows.is_empty() {
            return Err(SaturationError::Empty);
        }
        for (i, r) in rows.iter().enumerate() {
            if ![r.t_k, r.p0, r.v0, r.k0].iter().all(|x| x.is_finite() && *x > 0.0) {
                return Err(SaturationError::BadRow { row: i + 1 });
            }
            if i > 0 && r.t_k <= rows[i - 1].t_k {
                return Err(SaturationError::Unsorted { row: i + 1 });
            }
        }
        Ok(Self { rows })
    }

    pub fn rows(&self) -> &[SaturationRow] {
        &self.rows
    }

    pub fn range(&self) -> (f64, f64) {
        (self.rows[0].t_k, self.rows[self.rows.len() - 1].t_k)
    }

    pub fn covers(&self, lo: f64, hi: f64) -> bool {
        let (a, b) = self.range();
        lo >= a && hi <= b
    }

    /// Row at temperature `t`, linear in `T` between table rows.
    pub fn at(&self, t: f64) -> Result<SaturationRow, SaturationError> {
        let (lo, hi) = self.range();
        if !(t >= lo && t <= hi) {
            return Err(SaturationError::OutOfRange { t, lo, hi });
        }
        let i = self.rows.partition_point(|r| r.t_k < t);
        if self.rows[i.min(self.rows.len() - 1)].t_k == t {
            return Ok(self.rows[i]);
        }
        let (a, b) = (&self.rows[i - 1], &self.rows[i]);
        let w = (t - a.t_k) / (b.t_k - a.t_k);
        let mix = |x: f64, y: f64| x + w * (y - x);
        Ok(SaturationRow { t_k: t, p0: mix(a.p0, b.p0), v0: mix(a.v0, b.v0), k0: mix(a.k0, b.k0) })
    }

    /// Ideal-gas vapor and Tait liquid (`nu = None` for the linear law) at `t`.
    pub fn water_pair(&self, t: f64, nu: Option<f64>) -> Result<FluidPair, SaturationError> {
        let r = self.at(t)?;
        Ok(FluidPair::water_like(t, r.p0, r.v0, r.k0, nu)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_range_and_rows() {
        let t = SaturationTable::bundled_water();
        assert_eq!(t.range(), (273.15, 640.0));
        let r = t.at(636.165).unwrap();
        assert_eq!(r.t_k, 636.165);
        let b = t.at(373.15).unwrap();
        assert!((b.p0 - 101_418.0).abs() < 50.0);
        assert!((b.v0 - 1.0435e-3).abs() < 1e-6);
    }

    #[test]
    fn interpolates_linearly() {
        let t = SaturationTable::bundled_water();
        let (a, b) = (t.at(300.0).unwrap(), t.at(301.0).unwrap());
        let m = t.at(300.5).unwrap();
        assert!((m.p0 - 0.5 * (a.p0 + b.p0)).abs() <= 1e-9 * m.p0);
    }

    #[test]
    fn out_of_range() {
        let t = SaturationTable::bundled_water();
        assert!(matches!(t.at(700.0), Err(SaturationError::OutOfRange { .. })));
        assert!(!t.covers(200.0, 300.0));
    }

    #[test]
    fn rejects_unsorted() {
        let csv = "T_K,p0_Pa,v0_m3kg,K0_Pa\n300,1,1,1\n299,1,1,1\n";
        assert!(matches!(
            SaturationTable::from_reader(csv.as_bytes()),
            Err(SaturationError::Unsorted { row: 2 })
        ));
    }
}
