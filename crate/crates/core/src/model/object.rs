use serde::{Deserialize, Serialize};

use super::material::MaterialPair;
use crate::error::{Error, Result};

/// Shape of the object face presented to each pad.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FaceProfile {
    Flat,
    /// Flat face with protruding ridges running parallel to the active regions.
    Ridged {
        ridge_width: f64,
        ridge_height: f64,
    },
    /// Cylinder with its axis parallel to the active regions.
    Cylindrical {
        radius: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetObject {
    /// Extent between the two gripped faces, mm.
    pub width: f64,
    /// Mass in grams.
    pub mass: f64,
    pub profile: FaceProfile,
    pub material: MaterialPair,
}

impl TargetObject {
    pub fn new(width: f64, mass: f64, profile: FaceProfile, material: MaterialPair) -> Result<Self> {
        let o = TargetObject { width, mass, profile, material };
        o.validate()?;
        Ok(o)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(Error::invalid(format!("object width must be > 0, got {}", self.width)));
        }
        if !(self.mass.is_finite() && self.mass >= 0.0) {
            return Err(Error::invalid("object mass must be >= 0"));
        }
        match self.profile {
            FaceProfile::Flat => {}
            FaceProfile::Ridged { ridge_width, ridge_height } => {
                if !(ridge_width > 0.0 && ridge_height > 0.0) {
                    return Err(Error::invalid("ridge dimensions must be > 0"));
                }
            }
            FaceProfile::Cylindrical { radius } => {
                if !(radius > 0.0) {
                    return Err(Error::invalid("cylinder radius must be > 0"));
                }
                if (2.0 * radius - self.width).abs() > 1e-9 {
                    return Err(Error::invalid("cylinder width must equal its diameter"));
                }
            }
        }
        self.material.validate()
    }

    /// Flat block whose faces cover the whole pad.
    pub fn block(width: f64, mass: f64, material: MaterialPair) -> Self {
        TargetObject { width, mass, profile: FaceProfile::Flat, material }
    }

    pub fn tube(radius: f64, mass: f64, material: MaterialPair) -> Self {
        TargetObject { width: 2.0 * radius, mass, profile: FaceProfile::Cylindrical { radius }, material }
    }

    /// Gap between the object surface and the undeformed pad plane at lateral
    /// offset `x` from the closest point, given the gap at that point.
    /// `None` where the face does not reach.
    pub fn surface_gap(&self, center_gap: f64, x: f64) -> Option<f64> {
        match self.profile {
            FaceProfile::Flat | FaceProfile::Ridged { .. } => Some(center_gap),
            FaceProfile::Cylindrical { radius } => {
                if x.abs() >= radius {
                    None
                } else {
                    Some(center_gap + radius - (radius * radius - x * x).sqrt())
                }
            }
        }
    }
}
