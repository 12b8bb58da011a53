//! Ridged block held by deflated pads: friction alone against friction plus
//! the side-wall reaction of the recessed regions.

use serde::{Deserialize, Serialize};

use super::config::Config;
use super::scenario::partition_for_case;
use crate::contact::{interlock_resistance, shear_capacity, ForceDecomposition, Ridge};
use crate::error::Result;
use crate::membrane::deflect;
use crate::model::{ActuationCase, CaseKind, Target};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterlockDemo {
    /// Depth of each recessed region at the demo pressure, mm.
    pub recess_depth: f64,
    pub flat: ForceDecomposition,
    pub ridged: ForceDecomposition,
}

pub fn run_interlock_demo(cfg: &Config, target: Target) -> Result<InterlockDemo> {
    cfg.validate()?;
    let ic = &cfg.interlock;
    let case = ActuationCase::new(CaseKind::DP, ic.pressure)?;
    let (_, partition) = partition_for_case(cfg, target, &case)?;
    let recess_depth = -deflect(&cfg.law()?, ic.pressure)?.w0;
    let mat = cfg.materials.get(target);
    let friction = shear_capacity(&partition, mat, true);
    let flat = ForceDecomposition { applied: friction, normal_component: 0.0, friction_component: friction };
    let ridge = Ridge { width: ic.ridge_width, height: ic.ridge_height };
    let ridged = interlock_resistance(&partition, recess_depth, &ridge, mat, &cfg.geometry, &cfg.contact);
    Ok(InterlockDemo { recess_depth, flat, ridged })
}
