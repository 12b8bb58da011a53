//! Which parts of each pad touch the object, with what normal force, and the
//! shear force that contact can resist.
//!
//! Friction follows `F = μ·N + τ·A`: a Coulomb term on the total grip force
//! plus an adhesive term on the real contact area.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grasp::GraspOutcome;
use crate::membrane::{deflect, press_against_flat, MembraneLaw};
use crate::model::{ActuationCase, CaseKind, FaceProfile, MaterialPair, PadGeometry, TargetObject, Timing};

/// Contact on one pad. Areas in mm², forces in N.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct PadContact {
    pub inactive_area: f64,
    pub active_area: f64,
    pub inactive_normal: f64,
    pub active_normal: f64,
}

impl PadContact {
    pub fn area(&self) -> f64 {
        self.inactive_area + self.active_area
    }

    pub fn normal(&self) -> f64 {
        self.inactive_normal + self.active_normal
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ContactPartition {
    pub pads: [PadContact; 2],
}

impl ContactPartition {
    pub fn total_area(&self) -> f64 {
        self.pads.iter().map(PadContact::area).sum()
    }

    pub fn total_normal(&self) -> f64 {
        self.pads.iter().map(PadContact::normal).sum()
    }

    pub fn validate(&self) -> Result<()> {
        for p in &self.pads {
            let fields = [p.inactive_area, p.active_area, p.inactive_normal, p.active_normal];
            if fields.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                return Err(Error::Unphysical(format!("negative or non-finite contact field in {p:?}")));
            }
        }
        Ok(())
    }
}

/// Case-dependent model parameters that are not part of the pad or object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ContactConfig {
    /// Fraction of grip force lost per 40 kPa of deflation after gripping.
    pub dl_relief: f64,
    /// Bearing pressure of an active-region side wall against a ridge, kPa.
    pub wall_bearing_kpa: f64,
    /// Largest force one engaged side wall can carry, N.
    pub wall_cap_n: f64,
}

impl Default for ContactConfig {
    fn default() -> Self {
        ContactConfig { dl_relief: 0.158677, wall_bearing_kpa: 150.0, wall_cap_n: 10.0 }
    }
}

impl ContactConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..1.0).contains(&self.dl_relief) {
            return Err(Error::invalid(format!("dl_relief must be in [0, 1), got {}", self.dl_relief)));
        }
        if !(self.wall_bearing_kpa >= 0.0 && self.wall_cap_n >= 0.0) {
            return Err(Error::invalid("side-wall parameters must be >= 0"));
        }
        Ok(())
    }
}

/// Area of the pad's inactive surface touched by the object face.
fn inactive_contact_area(geom: &PadGeometry, object: &TargetObject, gap: f64) -> f64 {
    if gap >= 0.0 {
        return 0.0;
    }
    match object.profile {
        FaceProfile::Flat | FaceProfile::Ridged { .. } => geom.inactive_area(),
        // Cylinder pressed into the pad: strip of width 2·sqrt(2Rδ) across the pad.
        FaceProfile::Cylindrical { radius } => {
            let strip = (2.0 * (2.0 * radius * -gap).sqrt()).min(geom.total_length);
            strip * geom.total_width
        }
    }
}

/// Split a pad force between inactive and active surfaces in proportion to area.
fn split_by_area(normal: f64, inactive_area: f64, active_area: f64) -> PadContact {
    let area = inactive_area + active_area;
    let share = if area > 0.0 { inactive_area / area } else { 1.0 };
    PadContact { inactive_area, active_area, inactive_normal: normal * share, active_normal: normal * (1.0 - share) }
}

/// Contact partition after the grasp for the given actuation case.
///
/// For live cases the grasp must have been made with neutral pads and the
/// actuation is applied with the fingers held in place; for prior cases the
/// grasp already reflects the actuated pads.
pub fn build_partition(
    case: &ActuationCase,
    grasp: &GraspOutcome,
    geom: &PadGeometry,
    law: &MembraneLaw,
    object: &TargetObject,
    cfg: &ContactConfig,
) -> Result<ContactPartition> {
    cfg.validate()?;
    let grip_p = grasp.pads[0].chamber.p_gauge;
    let expected = case.grip_pressure();
    let consistent = match case.kind().timing() {
        Some(Timing::Prior) => grip_p.signum() == expected.signum() && grip_p != 0.0,
        _ => grip_p.abs() < 1e-9,
    };
    if !consistent {
        return Err(Error::invalid(format!(
            "case {} at {} kPa does not match a grasp made at {grip_p:.2} kPa",
            case.kind(),
            case.set_pressure()
        )));
    }

    let mut pads = [PadContact::default(); 2];
    for (out, pad) in pads.iter_mut().zip(&grasp.pads) {
        let inactive_area = inactive_contact_area(geom, object, pad.gap);
        let touching = inactive_area > 0.0;
        *out = match case.kind() {
            CaseKind::N => {
                let active = if touching { geom.cutout_area() } else { 0.0 };
                split_by_area(pad.normal(), inactive_area, active)
            }
            CaseKind::DP => {
                PadContact { inactive_area, active_area: 0.0, inactive_normal: pad.normal(), active_normal: 0.0 }
            }
            CaseKind::DL => {
                let relief = 1.0 - cfg.dl_relief * case.set_pressure().abs() / 40.0;
                PadContact {
                    inactive_area,
                    active_area: 0.0,
                    inactive_normal: pad.normal() * relief.max(0.0),
                    active_normal: 0.0,
                }
            }
            CaseKind::IL => {
                let base = if touching {
                    split_by_area(pad.normal(), inactive_area, geom.cutout_area())
                } else {
                    split_by_area(pad.normal(), inactive_area, 0.0)
                };
                let p = case.set_pressure();
                let d = deflect(law, p)?;
                let mut area = 0.0;
                let mut force = 0.0;
                for &x in &geom.region_centers() {
                    if let Some(g) = object.surface_gap(pad.gap.max(0.0), x) {
                        let c = press_against_flat(&d, g.max(0.0), p)?;
                        area += c.contact_width * geom.active_len;
                        force += c.normal_force;
                    }
                }
                PadContact {
                    active_area: base.active_area.max(area),
                    active_normal: base.active_normal + force,
                    ..base
                }
            }
            // The bumps hold the inactive face off the object; if the fingers
            // still press it home, its force counts but its area does not.
            CaseKind::IP => PadContact {
                inactive_area: 0.0,
                active_area: pad.patches.iter().map(|c| c.contact_width * geom.active_len).sum(),
                inactive_normal: pad.inactive_force,
                active_normal: pad.patches.iter().map(|c| c.normal_force).sum(),
            },
        };
    }
    let p = ContactPartition { pads };
    p.validate()?;
    Ok(p)
}

/// Largest shear force the contact resists, N.
pub fn shear_capacity(p: &ContactPartition, mat: &MaterialPair, static_friction: bool) -> f64 {
    let mu = if static_friction { mat.mu_static } else { mat.mu_kinetic };
    mu * p.total_normal() + mat.tau_adhesion * p.total_area() * 1e-3
}

/// A ridge on the object face that can sit in a recessed active region.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Ridge {
    pub width: f64,
    pub height: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForceDecomposition {
    /// Pull force at which the grip lets go, N.
    pub applied: f64,
    /// Side-wall reaction resisting the pull, N.
    pub normal_component: f64,
    pub friction_component: f64,
}

/// Depth a ridge of width `ridge.width` reaches inside a parabolic recess of
/// depth `recess_depth` and span `span`. Zero when the ridge is too wide.
pub fn insertion_depth(recess_depth: f64, span: f64, ridge: &Ridge) -> f64 {
    if recess_depth <= 0.0 || ridge.width >= span {
        return 0.0;
    }
    let fit = recess_depth * (1.0 - (ridge.width / span).powi(2));
    ridge.height.min(fit).max(0.0)
}

/// Pull-out resistance of a grip whose recessed regions hold one ridge per
/// gripping pad. Without engagement this is plain static friction.
pub fn interlock_resistance(
    partition: &ContactPartition,
    recess_depth: f64,
    ridge: &Ridge,
    mat: &MaterialPair,
    geom: &PadGeometry,
    cfg: &ContactConfig,
) -> ForceDecomposition {
    let friction = shear_capacity(partition, mat, true);
    let z = insertion_depth(recess_depth, geom.active_width, ridge);
    let per_edge = (cfg.wall_bearing_kpa * z * geom.active_len * 1e-3).min(cfg.wall_cap_n);
    let engaged = partition.pads.iter().filter(|p| p.normal() > 0.0).count() as f64;
    let normal = per_edge * engaged;
    ForceDecomposition { applied: friction + normal, normal_component: normal, friction_component: friction }
}
