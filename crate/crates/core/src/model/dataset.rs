//! Measured shear forces used as calibration targets.
//!
//! The fixture ships as `data/shear_forces.csv` with columns
//! `target,case,pressure_kpa,fa_n,fp_n,fa_over_f0`. Each row is the mean of
//! six pull tests; `fa_n` is the steady sliding average, `fp_n` the peak.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::actuation::CaseKind;
use super::material::Target;
use crate::error::{Error, Result};

const FIXTURE: &str = include_str!("../../data/shear_forces.csv");

/// Tolerance on the tabulated Fa/F0 column against recomputation from Fa.
pub const RATIO_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetRow {
    pub target: Target,
    pub case: CaseKind,
    pub pressure_kpa: f64,
    pub fa_n: f64,
    pub fp_n: f64,
    pub fa_over_f0: f64,
}

/// Closed interval on a force difference between two cases, N.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub lo: f64,
    pub hi: f64,
}

impl Band {
    pub fn contains(&self, v: f64) -> bool {
        v >= self.lo && v <= self.hi
    }

    /// Distance outside the band, zero inside.
    pub fn violation(&self, v: f64) -> f64 {
        (self.lo - v).max(v - self.hi).max(0.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaperDataset {
    pub rows: Vec<DatasetRow>,
    /// Allowed DL−DP difference across the deflated pressure sweep.
    pub deflated_band: Band,
    /// Allowed IL−IP difference across the inflated pressure sweep.
    pub inflated_band: Band,
}

pub fn load_paper_dataset() -> Result<PaperDataset> {
    let ds = PaperDataset::from_csv(FIXTURE.as_bytes())?;
    ds.check_integrity()?;
    Ok(ds)
}

impl PaperDataset {
    pub fn new(rows: Vec<DatasetRow>) -> Self {
        PaperDataset { rows, deflated_band: Band { lo: -0.2, hi: 1.2 }, inflated_band: Band { lo: 0.5, hi: 3.2 } }
    }

    pub fn row(&self, target: Target, case: CaseKind) -> Option<&DatasetRow> {
        self.rows.iter().find(|r| r.target == target && r.case == case)
    }

    /// The neutral-case average force F0 for a target.
    pub fn f0(&self, target: Target) -> Option<f64> {
        self.row(target, CaseKind::N).map(|r| r.fa_n)
    }

    pub fn check_integrity(&self) -> Result<()> {
        if self.rows.len() != 10 {
            return Err(Error::Dataset(format!("expected 10 rows, found {}", self.rows.len())));
        }
        for target in Target::ALL {
            for case in CaseKind::ALL {
                let n = self.rows.iter().filter(|r| r.target == target && r.case == case).count();
                if n != 1 {
                    return Err(Error::Dataset(format!("{target}/{case}: {n} rows")));
                }
            }
        }
        for r in &self.rows {
            let sign_ok = match r.case {
                CaseKind::N => r.pressure_kpa == 0.0,
                CaseKind::DL | CaseKind::DP => r.pressure_kpa < 0.0,
                CaseKind::IL | CaseKind::IP => r.pressure_kpa > 0.0,
            };
            if !sign_ok {
                return Err(Error::Dataset(format!(
                    "{}/{}: pressure {} has the wrong sign",
                    r.target, r.case, r.pressure_kpa
                )));
            }
            if !(r.fa_n > 0.0 && r.fp_n >= r.fa_n) {
                return Err(Error::Dataset(format!("{}/{}: need 0 < Fa <= Fp", r.target, r.case)));
            }
            let f0 = self.f0(r.target).expect("checked above");
            let ratio = r.fa_n / f0;
            if (ratio - r.fa_over_f0).abs() > RATIO_TOLERANCE {
                return Err(Error::Dataset(format!(
                    "{}/{}: Fa/F0 column {} but {:.3} recomputed",
                    r.target, r.case, r.fa_over_f0, ratio
                )));
            }
        }
        Ok(())
    }

    pub fn from_csv<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let rows = rdr.deserialize().collect::<std::result::Result<Vec<DatasetRow>, _>>()?;
        Ok(PaperDataset::new(rows))
    }

    pub fn to_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        for r in &self.rows {
            w.serialize(r)?;
        }
        w.flush()?;
        Ok(())
    }
}
