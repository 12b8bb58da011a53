use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Friction parameters of the pad surface against one target material.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialPair {
    pub name: String,
    pub mu_static: f64,
    pub mu_kinetic: f64,
    /// Shear strength per unit real contact area, kPa.
    pub tau_adhesion: f64,
}

impl MaterialPair {
    pub fn new(name: impl Into<String>, mu_static: f64, mu_kinetic: f64, tau_adhesion: f64) -> Result<Self> {
        let m = MaterialPair { name: name.into(), mu_static, mu_kinetic, tau_adhesion };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu_kinetic.is_finite() && self.mu_kinetic > 0.0) {
            return Err(Error::invalid(format!("{}: mu_kinetic must be > 0", self.name)));
        }
        if !(self.mu_static.is_finite() && self.mu_static >= self.mu_kinetic) {
            return Err(Error::invalid(format!(
                "{}: mu_static ({}) must be >= mu_kinetic ({})",
                self.name, self.mu_static, self.mu_kinetic
            )));
        }
        if !(self.tau_adhesion.is_finite() && self.tau_adhesion >= 0.0) {
            return Err(Error::invalid(format!("{}: tau_adhesion must be >= 0", self.name)));
        }
        Ok(())
    }

    /// Pad surface on bare plywood, fitted values.
    pub fn plywood() -> Self {
        MaterialPair { name: "plywood".into(), mu_static: 0.199670, mu_kinetic: 0.156237, tau_adhesion: 0.0350756 }
    }

    /// Pad surface on PTFE-wrapped plywood, fitted values.
    pub fn ptfe() -> Self {
        MaterialPair { name: "ptfe".into(), mu_static: 0.0989860, mu_kinetic: 0.0613426, tau_adhesion: 1.03708 }
    }
}

/// The two target blocks used in the shear tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Plywood,
    Ptfe,
}

impl Target {
    pub const ALL: [Target; 2] = [Target::Plywood, Target::Ptfe];

    pub fn label(self) -> &'static str {
        match self {
            Target::Plywood => "plywood",
            Target::Ptfe => "ptfe",
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plywood" => Ok(Target::Plywood),
            "ptfe" => Ok(Target::Ptfe),
            other => Err(Error::invalid(format!("unknown target '{other}'"))),
        }
    }
}
