//! Fit friction, pad stiffness, deflation relief and membrane modulus to the
//! measured average and peak shear forces.
//!
//! The objective is the RMS error over the 20 Fa/Fp targets plus hinge
//! penalties: per-row relative windows, the deflated and inflated sweep bands, a rising inflated
//! difference, the IL/IP and IL/N ratios, and the case ordering.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::Config;
use super::nelder_mead::{minimize, NmOptions};
use super::scenario::{run_pull_test, table_case};
use crate::error::{Error, Result};
use crate::model::{ActuationCase, Band, CaseKind, DatasetRow, PaperDataset, Target};

/// Relative windows on each Fa and Fp row, inside the acceptance tolerances.
pub const FA_WINDOW: f64 = 0.095;
pub const FP_WINDOW: f64 = 0.145;

pub const RATIO_WINDOW: f64 = 0.9;
/// Strict ordering IL > N > IP is enforced with this gap, N.
pub const ORDER_MARGIN: f64 = 0.02;
/// Largest allowed max/min among the N, DL and DP averages.
pub const GROUP_SPREAD: f64 = 1.24;

/// The sweep bands are enforced this far inside their edges, N.
pub const BAND_MARGIN: f64 = 0.05;

/// Pressures at which the sweep bands are enforced during fitting.
pub const BAND_PRESSURES: [f64; 4] = [10.0, 20.0, 30.0, 40.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Param {
    MuKinetic(Target),
    /// `mu_static − mu_kinetic`, kept non-negative by its bounds.
    MuExcess(Target),
    Tau(Target),
    FingerStiffness,
    DlRelief,
    Modulus,
}

pub const PARAMS: [Param; 9] = [
    Param::MuKinetic(Target::Plywood),
    Param::MuExcess(Target::Plywood),
    Param::Tau(Target::Plywood),
    Param::MuKinetic(Target::Ptfe),
    Param::MuExcess(Target::Ptfe),
    Param::Tau(Target::Ptfe),
    Param::FingerStiffness,
    Param::DlRelief,
    Param::Modulus,
];

impl Param {
    pub fn name(self) -> String {
        match self {
            Param::MuKinetic(t) => format!("{t}.mu_kinetic"),
            Param::MuExcess(t) => format!("{t}.mu_static_excess"),
            Param::Tau(t) => format!("{t}.tau_adhesion"),
            Param::FingerStiffness => "gripper.finger_stiffness".into(),
            Param::DlRelief => "contact.dl_relief".into(),
            Param::Modulus => "membrane.e_mpa".into(),
        }
    }

    pub fn bounds(self) -> (f64, f64) {
        match self {
            Param::MuKinetic(_) => (0.01, 1.0),
            Param::MuExcess(_) => (0.0, 0.5),
            Param::Tau(_) => (0.0, 5.0),
            Param::FingerStiffness => (10.0, 150.0),
            Param::DlRelief => (0.0, 0.5),
            Param::Modulus => (5.0, 150.0),
        }
    }

    pub fn get(self, cfg: &Config) -> f64 {
        match self {
            Param::MuKinetic(t) => cfg.materials.get(t).mu_kinetic,
            Param::MuExcess(t) => cfg.materials.get(t).mu_static - cfg.materials.get(t).mu_kinetic,
            Param::Tau(t) => cfg.materials.get(t).tau_adhesion,
            Param::FingerStiffness => cfg.gripper.finger_stiffness,
            Param::DlRelief => cfg.contact.dl_relief,
            Param::Modulus => cfg.membrane.e_mpa,
        }
    }

    /// Write `v` into the config. Set all kinetic values before the excesses.
    pub fn set(self, cfg: &mut Config, v: f64) {
        match self {
            Param::MuKinetic(t) => {
                let m = cfg.materials.get_mut(t);
                let excess = m.mu_static - m.mu_kinetic;
                m.mu_kinetic = v;
                m.mu_static = v + excess;
            }
            Param::MuExcess(t) => {
                let m = cfg.materials.get_mut(t);
                m.mu_static = m.mu_kinetic + v;
            }
            Param::Tau(t) => cfg.materials.get_mut(t).tau_adhesion = v,
            Param::FingerStiffness => cfg.gripper.finger_stiffness = v,
            Param::DlRelief => cfg.contact.dl_relief = v,
            Param::Modulus => cfg.membrane.e_mpa = v,
        }
    }
}

pub fn param_vector(cfg: &Config) -> Vec<f64> {
    PARAMS.iter().map(|p| p.get(cfg)).collect()
}

pub fn apply_params(cfg: &Config, x: &[f64]) -> Config {
    let mut out = cfg.clone();
    for (p, &v) in PARAMS.iter().zip(x) {
        p.set(&mut out, v);
    }
    out
}

/// Simulated Fa/Fp for the ten table cases and Fa on the PTFE band sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    /// (target, case, Fa, Fp) in dataset order.
    pub table: Vec<(Target, CaseKind, f64, f64)>,
    /// (pressure, DL−DP or IL−IP) on the sweep target, by pressure.
    pub deflated_diffs: Vec<(f64, f64)>,
    pub inflated_diffs: Vec<(f64, f64)>,
}

impl Evaluation {
    pub fn fa(&self, target: Target, case: CaseKind) -> f64 {
        self.table.iter().find(|r| r.0 == target && r.1 == case).map_or(f64::NAN, |r| r.2)
    }

    pub fn fp(&self, target: Target, case: CaseKind) -> f64 {
        self.table.iter().find(|r| r.0 == target && r.1 == case).map_or(f64::NAN, |r| r.3)
    }
}

pub fn evaluate(cfg: &Config, dataset: &PaperDataset) -> Result<Evaluation> {
    enum Job {
        Row(Target, CaseKind),
        Sweep(f64, CaseKind),
    }
    let sweep_target = cfg.sweep.target;
    let mut jobs: Vec<Job> = dataset.rows.iter().map(|r| Job::Row(r.target, r.case)).collect();
    for &p in &BAND_PRESSURES {
        for kind in [CaseKind::DL, CaseKind::DP] {
            jobs.push(Job::Sweep(-p, kind));
        }
        for kind in [CaseKind::IL, CaseKind::IP] {
            jobs.push(Job::Sweep(p, kind));
        }
    }
    let out = jobs
        .par_iter()
        .map(|job| match *job {
            Job::Row(t, k) => run_pull_test(cfg, t, &table_case(k)).map(|r| (r.summary.fa, r.summary.fp)),
            Job::Sweep(p, k) => {
                run_pull_test(cfg, sweep_target, &ActuationCase::new(k, p)?).map(|r| (r.summary.fa, r.summary.fp))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let n = dataset.rows.len();
    let table = dataset.rows.iter().zip(&out[..n]).map(|(r, &(fa, fp))| (r.target, r.case, fa, fp)).collect();
    let mut deflated_diffs = Vec::new();
    let mut inflated_diffs = Vec::new();
    for (i, &p) in BAND_PRESSURES.iter().enumerate() {
        let base = n + 4 * i;
        deflated_diffs.push((-p, out[base].0 - out[base + 1].0));
        inflated_diffs.push((p, out[base + 2].0 - out[base + 3].0));
    }
    deflated_diffs.reverse();
    Ok(Evaluation { table, deflated_diffs, inflated_diffs })
}

/// RMS error over the Fa and Fp targets, N.
pub fn rms_residual(eval: &Evaluation, dataset: &PaperDataset) -> f64 {
    let mut sq = 0.0;
    let mut n = 0;
    for r in &dataset.rows {
        sq += (eval.fa(r.target, r.case) - r.fa_n).powi(2) + (eval.fp(r.target, r.case) - r.fp_n).powi(2);
        n += 2;
    }
    (sq / n as f64).sqrt()
}

/// Ratio windows used as hinges: centred on the dataset ratio, a fraction
/// `RATIO_WINDOW` of the acceptance tolerance wide.
fn ratio_windows(dataset: &PaperDataset) -> Vec<(Target, CaseKind, f64, f64)> {
    let mut out = Vec::new();
    for (target, tol_ip, tol_n) in [(Target::Plywood, 0.2, 0.15), (Target::Ptfe, 0.3, 0.15)] {
        let fa = |k| dataset.row(target, k).map_or(f64::NAN, |r| r.fa_n);
        out.push((target, CaseKind::IP, fa(CaseKind::IL) / fa(CaseKind::IP), RATIO_WINDOW * tol_ip));
        out.push((target, CaseKind::N, fa(CaseKind::IL) / fa(CaseKind::N), RATIO_WINDOW * tol_n));
    }
    out
}

/// Sweep-band and rising-difference violations, N.
pub fn band_violation(eval: &Evaluation, dataset: &PaperDataset) -> f64 {
    let narrow = |b: Band| Band { lo: b.lo + BAND_MARGIN, hi: b.hi - BAND_MARGIN };
    let mut v = 0.0;
    for &(_, d) in &eval.deflated_diffs {
        v += narrow(dataset.deflated_band).violation(d);
    }
    for &(_, d) in &eval.inflated_diffs {
        v += narrow(dataset.inflated_band).violation(d);
    }
    for w in eval.inflated_diffs.windows(2) {
        v += (w[0].1 - w[1].1).max(0.0);
    }
    v
}

/// Per-row window, ratio and case-ordering violations, N.
pub fn fidelity_violation(eval: &Evaluation, dataset: &PaperDataset) -> f64 {
    let mut v = 0.0;
    for r in &dataset.rows {
        let fa = eval.fa(r.target, r.case);
        let fp = eval.fp(r.target, r.case);
        v += ((fa - r.fa_n).abs() - FA_WINDOW * r.fa_n).max(0.0);
        v += ((fp - r.fp_n).abs() - FP_WINDOW * r.fp_n).max(0.0);
    }
    for (target, denom, centre, tol) in ratio_windows(dataset) {
        let il = eval.fa(target, CaseKind::IL);
        let d = eval.fa(target, denom);
        let ratio = il / d;
        v += d * ((centre - tol - ratio).max(0.0) + (ratio - centre - tol).max(0.0));
    }
    for target in Target::ALL {
        let fa = |k| eval.fa(target, k);
        v += (fa(CaseKind::N) - fa(CaseKind::IL) + ORDER_MARGIN).max(0.0);
        v += (fa(CaseKind::IP) - fa(CaseKind::N) + ORDER_MARGIN).max(0.0);
        let group = [fa(CaseKind::N), fa(CaseKind::DL), fa(CaseKind::DP)];
        let hi = group.iter().cloned().fold(f64::MIN, f64::max);
        let lo = group.iter().cloned().fold(f64::MAX, f64::min);
        v += (hi - GROUP_SPREAD * lo).max(0.0);
    }
    v
}

pub fn objective(cfg: &Config, dataset: &PaperDataset) -> Result<f64> {
    let e = evaluate(cfg, dataset)?;
    let c = &cfg.calibration;
    Ok(rms_residual(&e, dataset)
        + c.hinge_weight * band_violation(&e, dataset)
        + c.fidelity_weight * fidelity_violation(&e, dataset))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedParam {
    pub name: String,
    pub value: f64,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub params: Vec<FittedParam>,
    /// RMS over the Fa/Fp targets at the returned point, N.
    pub residual: f64,
    pub objective: f64,
    pub initial_objective: f64,
    pub iterations: usize,
    pub config: Config,
}

/// Fit the free parameters of `start` to `dataset`. Deterministic for a given
/// seed: restarts draw their perturbations from a seeded ChaCha stream and the
/// parallel scenario runs are collected in order.
pub fn calibrate(start: &Config, dataset: &PaperDataset, seed: u64) -> Result<CalibrationResult> {
    dataset.check_integrity()?;
    start.validate()?;
    let bounds: Vec<(f64, f64)> = PARAMS.iter().map(|p| p.bounds()).collect();
    let x0: Vec<f64> = param_vector(start).into_iter().zip(&bounds).map(|(v, &(lo, hi))| v.clamp(lo, hi)).collect();
    let f = |x: &[f64]| objective(&apply_params(start, x), dataset);
    let initial_objective = f(&x0)?;
    let opts = NmOptions { max_evals: start.calibration.max_evals, f_tol: start.calibration.f_tol, initial_step: 0.1 };
    let mut best = minimize(f, &x0, &bounds, &opts)?;
    let mut iterations = best.evals;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..start.calibration.restarts {
        let trial: Vec<f64> = best
            .x
            .iter()
            .zip(&bounds)
            .map(|(&v, &(lo, hi))| (v + rng.gen_range(-0.01..0.01) * (hi - lo)).clamp(lo, hi))
            .collect();
        let opts = NmOptions { initial_step: 0.05, ..opts };
        let r = minimize(f, &trial, &bounds, &opts)?;
        iterations += r.evals;
        if r.f < best.f {
            best = r;
        }
    }
    if best.f > initial_objective {
        best.x = x0;
        best.f = initial_objective;
    }
    let config = apply_params(start, &best.x);
    let eval = evaluate(&config, dataset)?;
    let params = PARAMS
        .iter()
        .zip(&best.x)
        .map(|(p, &value)| {
            let (lo, hi) = p.bounds();
            FittedParam { name: p.name(), value, lo, hi }
        })
        .collect();
    Ok(CalibrationResult {
        params,
        residual: rms_residual(&eval, dataset),
        objective: best.f,
        initial_objective,
        iterations,
        config,
    })
}

/// Table built from the model itself, for checking that a fit recovers
/// known parameters.
pub fn synthetic_dataset(cfg: &Config, template: &PaperDataset) -> Result<PaperDataset> {
    let e = evaluate(cfg, template)?;
    let f0 = |t| e.fa(t, CaseKind::N);
    let rows = e
        .table
        .iter()
        .zip(&template.rows)
        .map(|(&(target, case, fa, fp), r)| DatasetRow {
            target,
            case,
            pressure_kpa: r.pressure_kpa,
            fa_n: fa,
            fp_n: fp,
            fa_over_f0: fa / f0(target),
        })
        .collect();
    let mut ds = PaperDataset::new(rows);
    let spread = |d: &[(f64, f64)]| {
        let lo = d.iter().map(|x| x.1).fold(f64::MAX, f64::min);
        let hi = d.iter().map(|x| x.1).fold(f64::MIN, f64::max);
        Band { lo: lo - 0.1, hi: hi + 0.1 }
    };
    ds.deflated_band = spread(&e.deflated_diffs);
    ds.inflated_band = spread(&e.inflated_diffs);
    ds.check_integrity()?;
    Ok(ds)
}

impl CalibrationResult {
    /// `calib.csv`: fitted values with their bounds, then the derived static
    /// coefficients.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["param", "value", "lo", "hi"])?;
        for p in &self.params {
            w.write_record([p.name.clone(), format!("{:.6}", p.value), format!("{}", p.lo), format!("{}", p.hi)])?;
        }
        for t in Target::ALL {
            let (klo, khi) = Param::MuKinetic(t).bounds();
            let (elo, ehi) = Param::MuExcess(t).bounds();
            w.write_record([
                format!("{t}.mu_static"),
                format!("{:.6}", self.config.materials.get(t).mu_static),
                format!("{}", klo + elo),
                format!("{}", khi + ehi),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|p| p.name == name).map(|p| p.value)
    }
}

impl From<&CalibrationResult> for Vec<f64> {
    fn from(r: &CalibrationResult) -> Self {
        r.params.iter().map(|p| p.value).collect()
    }
}

pub fn check_bounds(x: &[f64]) -> Result<()> {
    for (p, &v) in PARAMS.iter().zip(x) {
        let (lo, hi) = p.bounds();
        if !(v >= lo && v <= hi) {
            return Err(Error::OutOfRange { what: "calibration parameter", value: v, range: "declared bounds" });
        }
    }
    Ok(())
}
