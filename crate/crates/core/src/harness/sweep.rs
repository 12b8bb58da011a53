//! Average sliding force against set pressure for live and prior actuation.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::Config;
use super::scenario::run_pull_test;
use crate::error::{Error, Result};
use crate::model::{ActuationCase, CaseKind, Target, Timing};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub pressure_kpa: f64,
    pub case: CaseKind,
    pub fa_n: f64,
}

/// `DL−DP` for negative pressures, `IL−IP` for positive ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepDifference {
    pub pressure_kpa: f64,
    pub label: &'static str,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub target: Target,
    pub rows: Vec<SweepRow>,
}

/// One pull test per (pressure, timing). Rows come back ordered by pressure,
/// live before prior.
pub fn run_pressure_sweep(cfg: &Config, pressures: &[f64], timings: &[Timing], target: Target) -> Result<SweepTable> {
    if let Some(p) = pressures.iter().find(|p| !(p.abs() <= 100.0)) {
        return Err(Error::OutOfRange { what: "sweep pressure (kPa)", value: *p, range: "[-100, 100]" });
    }
    let jobs: Vec<(f64, Timing)> = pressures.iter().flat_map(|&p| timings.iter().map(move |&t| (p, t))).collect();
    let rows = jobs
        .par_iter()
        .map(|&(p, timing)| {
            let case = ActuationCase::from_pressure(p, timing)?;
            let run = run_pull_test(cfg, target, &case)?;
            Ok(SweepRow { pressure_kpa: p, case: case.kind(), fa_n: run.summary.fa })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable { target, rows })
}

impl SweepTable {
    pub fn fa(&self, pressure: f64, case: CaseKind) -> Option<f64> {
        self.rows.iter().find(|r| r.pressure_kpa == pressure && r.case == case).map(|r| r.fa_n)
    }

    pub fn differences(&self) -> Vec<SweepDifference> {
        let mut pressures: Vec<f64> = self.rows.iter().map(|r| r.pressure_kpa).collect();
        pressures.sort_by(f64::total_cmp);
        pressures.dedup();
        pressures
            .into_iter()
            .filter_map(|p| {
                let (label, live, prior) = if p < 0.0 {
                    ("DL-DP", CaseKind::DL, CaseKind::DP)
                } else if p > 0.0 {
                    ("IL-IP", CaseKind::IL, CaseKind::IP)
                } else {
                    return None;
                };
                Some(SweepDifference { pressure_kpa: p, label, value: self.fa(p, live)? - self.fa(p, prior)? })
            })
            .collect()
    }

    /// `sweep.csv`: one row per pull test followed by the difference rows,
    /// whose `case` column holds `DL-DP` or `IL-IP`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["pressure_kpa", "case", "fa_n"])?;
        for r in &self.rows {
            w.write_record([format!("{:.1}", r.pressure_kpa), r.case.label().to_string(), format!("{:.6}", r.fa_n)])?;
        }
        for d in self.differences() {
            w.write_record([format!("{:.1}", d.pressure_kpa), d.label.to_string(), format!("{:.6}", d.value)])?;
        }
        w.flush()?;
        Ok(())
    }
}
