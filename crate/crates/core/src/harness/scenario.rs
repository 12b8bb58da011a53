//! One gripped-block shear test: prepare the pads for the actuation case,
//! close the gripper, actuate live cases, then pull.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::Config;
use super::pull::{pull_trace, summarize, ForceTrace, TraceSummary};
use crate::contact::{build_partition, shear_capacity, ContactPartition};
use crate::error::{Error, Result};
use crate::grasp::{close_gripper, GraspOutcome};
use crate::membrane::{loaded_volume, MembraneLaw};
use crate::model::{ActuationCase, CaseKind, PadGeometry, Target, TargetObject, Timing};
use crate::pneumatics::{regulate, seal, ChamberState};

const GRAVITY: f64 = 9.81e-3; // N per gram

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseRun {
    pub target: Target,
    pub case: ActuationCase,
    pub grasp: GraspOutcome,
    pub partition: ContactPartition,
    pub static_capacity: f64,
    pub kinetic_capacity: f64,
    pub trace: ForceTrace,
    pub summary: TraceSummary,
}

/// Chamber state of a pad before the gripper starts closing. Prior cases are
/// regulated to their set pressure, allowed to settle and sealed.
pub fn prepare_pad(case: &ActuationCase, geom: &PadGeometry, law: &MembraneLaw, tau_reg: f64) -> Result<ChamberState> {
    let rest = ChamberState::regulated(0.0, geom.dead_volume)?;
    if case.kind().timing() != Some(Timing::Prior) {
        return Ok(rest);
    }
    let sp = case.set_pressure();
    let settled = regulate(&rest, sp, 40.0 * tau_reg, tau_reg)?;
    let free = vec![None; geom.n_active];
    let v = loaded_volume(geom, law, settled.p_gauge, &free)?;
    Ok(seal(&settled.with_volume(v)?))
}

/// Grasp `object` with both pads prepared for `case`.
pub fn grasp_for_case(cfg: &Config, case: &ActuationCase, object: &TargetObject) -> Result<GraspOutcome> {
    let law = cfg.law()?;
    let pad = prepare_pad(case, &cfg.geometry, &law, cfg.pneumatics.tau_reg_s)?;
    close_gripper(&cfg.gripper, [pad, pad], Some(object), &cfg.geometry, &law, &cfg.pneumatics)
}

pub fn partition_for_case(
    cfg: &Config,
    target: Target,
    case: &ActuationCase,
) -> Result<(GraspOutcome, ContactPartition)> {
    let object = cfg.block_object(target);
    let grasp = grasp_for_case(cfg, case, &object)?;
    let partition = build_partition(case, &grasp, &cfg.geometry, &cfg.law()?, &object, &cfg.contact)?;
    Ok((grasp, partition))
}

pub fn run_pull_test(cfg: &Config, target: Target, case: &ActuationCase) -> Result<CaseRun> {
    let (grasp, partition) = partition_for_case(cfg, target, case)?;
    let mat = cfg.materials.get(target);
    let static_capacity = shear_capacity(&partition, mat, true);
    let kinetic_capacity = shear_capacity(&partition, mat, false);
    let weight = cfg.block.mass * GRAVITY;
    if static_capacity < weight {
        return Err(Error::Unphysical(format!(
            "{target}/{}: grip holds {static_capacity:.3} N, less than the block weight {weight:.3} N",
            case.kind()
        )));
    }
    let trace = pull_trace(static_capacity, kinetic_capacity, &cfg.pull)?;
    let summary = summarize(&trace, &cfg.pull)?;
    Ok(CaseRun { target, case: *case, grasp, partition, static_capacity, kinetic_capacity, trace, summary })
}

/// All ten target/case pull tests at the table pressures, in target then
/// case order.
pub fn run_table(cfg: &Config) -> Result<Vec<CaseRun>> {
    let jobs: Vec<(Target, CaseKind)> =
        Target::ALL.iter().flat_map(|&t| CaseKind::ALL.iter().map(move |&k| (t, k))).collect();
    jobs.par_iter().map(|&(t, k)| run_pull_test(cfg, t, &table_case(k))).collect()
}

/// The actuation case for a Table-style row: neutral at zero, ±40 kPa otherwise.
pub fn table_case(kind: CaseKind) -> ActuationCase {
    let p = match kind {
        CaseKind::N => 0.0,
        CaseKind::DL | CaseKind::DP => -40.0,
        CaseKind::IL | CaseKind::IP => 40.0,
    };
    ActuationCase::new(kind, p).expect("table cases are sign-consistent")
}
