//! Scenario configuration, read from TOML. Every section and key is optional;
//! missing values take the defaults below and unknown keys are rejected.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::contact::ContactConfig;
use crate::error::{Error, Result};
use crate::grasp::GripperConfig;
use crate::membrane::{MembraneConfig, MembraneLaw};
use crate::model::{MaterialPair, PadGeometry, Target, TargetObject};
use crate::pneumatics::PneumaticsConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PullConfig {
    /// Connecting-wire stiffness, N/mm.
    pub wire_stiffness: f64,
    /// Stage speed, mm/s.
    pub stage_speed: f64,
    /// Integration step, s.
    pub time_step: f64,
    /// Sliding time simulated after the first slip, s.
    pub sliding_time: f64,
    /// Delay between first slip and the averaging window, s.
    pub settle_margin: f64,
    /// Length of the averaging window, s.
    pub average_window: f64,
}

impl Default for PullConfig {
    fn default() -> Self {
        PullConfig {
            wire_stiffness: 10.0,
            stage_speed: 10.0,
            time_step: 1e-3,
            sliding_time: 4.0,
            settle_margin: 0.25,
            average_window: 2.0,
        }
    }
}

impl PullConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("wire_stiffness", self.wire_stiffness),
            ("stage_speed", self.stage_speed),
            ("time_step", self.time_step),
            ("sliding_time", self.sliding_time),
            ("average_window", self.average_window),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("pull {name} must be > 0, got {v}")));
            }
        }
        if !(self.settle_margin >= 0.0) {
            return Err(Error::invalid("pull settle_margin must be >= 0"));
        }
        if self.settle_margin + self.average_window > self.sliding_time {
            return Err(Error::invalid("averaging window does not fit in the simulated sliding time"));
        }
        Ok(())
    }
}

/// The gripped test block. Its size and mass were not reported, so both are
/// estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BlockConfig {
    pub width: f64,
    pub mass: f64,
}

impl Default for BlockConfig {
    fn default() -> Self {
        BlockConfig { width: 30.0, mass: 20.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Materials {
    pub plywood: MaterialPair,
    pub ptfe: MaterialPair,
}

impl Default for Materials {
    fn default() -> Self {
        Materials { plywood: MaterialPair::plywood(), ptfe: MaterialPair::ptfe() }
    }
}

impl Materials {
    pub fn get(&self, target: Target) -> &MaterialPair {
        match target {
            Target::Plywood => &self.plywood,
            Target::Ptfe => &self.ptfe,
        }
    }

    pub fn get_mut(&mut self, target: Target) -> &mut MaterialPair {
        match target {
            Target::Plywood => &mut self.plywood,
            Target::Ptfe => &mut self.ptfe,
        }
    }
}

/// Inflated pads closing on a centrifuge tube.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct DetectionConfig {
    pub tube_radius: f64,
    pub tube_mass: f64,
    pub pressure: f64,
    /// Commanded separation beyond the tube diameter plus both pads, mm.
    pub separation_margin: f64,
}

impl Default for DetectionConfig {
    fn default() -> Self {
        DetectionConfig { tube_radius: 8.5, tube_mass: 12.0, pressure: 40.0, separation_margin: -1.0 }
    }
}

/// Deflated pads gripping an object with one ridge per face.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InterlockConfig {
    pub ridge_width: f64,
    pub ridge_height: f64,
    pub pressure: f64,
}

impl Default for InterlockConfig {
    fn default() -> Self {
        InterlockConfig { ridge_width: 1.5, ridge_height: 0.4, pressure: -40.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SweepConfig {
    pub pressures: Vec<f64>,
    pub target: Target,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig { pressures: vec![-40.0, -30.0, -20.0, -10.0, 0.0, 10.0, 20.0, 30.0, 40.0], target: Target::Ptfe }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CalibrationConfig {
    pub seed: u64,
    /// Nelder–Mead runs after the first one, each from a perturbed simplex.
    pub restarts: usize,
    pub max_evals: usize,
    /// Stop a run when the simplex's objective spread falls below this, N.
    pub f_tol: f64,
    /// Weight per newton of sweep-band violation.
    pub hinge_weight: f64,
    /// Weight per newton of row-window, ratio or ordering violation.
    pub fidelity_weight: f64,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        CalibrationConfig {
            seed: 7,
            restarts: 6,
            max_evals: 1500,
            f_tol: 1e-6,
            hinge_weight: 1.0,
            fidelity_weight: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub geometry: PadGeometry,
    pub membrane: MembraneConfig,
    pub pneumatics: PneumaticsConfig,
    pub gripper: GripperConfig,
    pub contact: ContactConfig,
    pub pull: PullConfig,
    pub block: BlockConfig,
    pub materials: Materials,
    pub sweep: SweepConfig,
    pub detection: DetectionConfig,
    pub interlock: InterlockConfig,
    pub calibration: CalibrationConfig,
}

impl Config {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.law()?;
        self.pneumatics.validate()?;
        self.gripper.validate()?;
        self.contact.validate()?;
        self.pull.validate()?;
        self.materials.plywood.validate()?;
        self.materials.ptfe.validate()?;
        self.block_object(Target::Plywood).validate()?;
        if self.sweep.pressures.iter().any(|p| !(p.abs() <= 100.0)) {
            return Err(Error::invalid("sweep pressures must lie within ±100 kPa"));
        }
        if !(self.detection.tube_radius > 0.0 && self.detection.tube_mass >= 0.0) {
            return Err(Error::invalid("detection tube radius must be > 0"));
        }
        if !(self.interlock.pressure < 0.0) {
            return Err(Error::invalid("interlock demo needs a negative (deflating) pressure"));
        }
        let c = &self.calibration;
        if c.max_evals == 0 {
            return Err(Error::invalid("calibration max_evals must be > 0"));
        }
        if !(c.f_tol > 0.0 && c.hinge_weight >= 0.0 && c.fidelity_weight >= 0.0) {
            return Err(Error::invalid("calibration f_tol must be > 0 and weights >= 0"));
        }
        Ok(())
    }

    pub fn law(&self) -> Result<MembraneLaw> {
        self.membrane.law(&self.geometry)
    }

    pub fn block_object(&self, target: Target) -> TargetObject {
        TargetObject::block(self.block.width, self.block.mass, self.materials.get(target).clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_is_all_defaults() {
        assert_eq!(Config::from_toml_str("").unwrap(), Config::default());
    }

    #[test]
    fn round_trips_through_toml() {
        let cfg = Config::default();
        let text = cfg.to_toml_string().unwrap();
        assert_eq!(Config::from_toml_str(&text).unwrap(), cfg);
    }

    #[test]
    fn unknown_keys_rejected() {
        let e = Config::from_toml_str("[gripper]\nclosing_sped = 3.0\n").unwrap_err();
        assert!(e.is_config_error());
        assert!(Config::from_toml_str("[nonsense]\n").is_err());
    }

    #[test]
    fn partial_sections_override() {
        let cfg = Config::from_toml_str("[pull]\nwire_stiffness = 20.0\n[materials.ptfe]\nname = \"ptfe\"\nmu_static = 0.2\nmu_kinetic = 0.1\ntau_adhesion = 0.0\n").unwrap();
        assert_eq!(cfg.pull.wire_stiffness, 20.0);
        assert_eq!(cfg.pull.stage_speed, 10.0);
        assert_eq!(cfg.materials.ptfe.mu_kinetic, 0.1);
    }

    #[test]
    fn invalid_values_rejected() {
        assert!(Config::from_toml_str("[geometry]\nn_active = 0\n").is_err());
        assert!(Config::from_toml_str("[membrane]\nnu = 0.6\n").is_err());
        assert!(Config::from_toml_str("[interlock]\npressure = 10.0\n").is_err());
    }
}
