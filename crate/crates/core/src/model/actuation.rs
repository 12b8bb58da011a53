use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The five pressure/timing combinations the pads are tested in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CaseKind {
    /// Not actuated.
    N,
    /// Deflated after gripping.
    DL,
    /// Deflated before gripping.
    DP,
    /// Inflated after gripping.
    IL,
    /// Inflated before gripping.
    IP,
}

/// When the actuation happens relative to the grip.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Timing {
    Live,
    Prior,
}

impl CaseKind {
    pub const ALL: [CaseKind; 5] = [CaseKind::N, CaseKind::DL, CaseKind::DP, CaseKind::IL, CaseKind::IP];

    pub fn label(self) -> &'static str {
        match self {
            CaseKind::N => "N",
            CaseKind::DL => "DL",
            CaseKind::DP => "DP",
            CaseKind::IL => "IL",
            CaseKind::IP => "IP",
        }
    }

    pub fn timing(self) -> Option<Timing> {
        match self {
            CaseKind::N => None,
            CaseKind::DL | CaseKind::IL => Some(Timing::Live),
            CaseKind::DP | CaseKind::IP => Some(Timing::Prior),
        }
    }

    /// The case reached by actuating to `pressure_kpa` with the given timing.
    /// Zero pressure is always the neutral case.
    pub fn from_pressure(pressure_kpa: f64, timing: Timing) -> CaseKind {
        match (pressure_kpa.partial_cmp(&0.0), timing) {
            (Some(std::cmp::Ordering::Less), Timing::Live) => CaseKind::DL,
            (Some(std::cmp::Ordering::Less), Timing::Prior) => CaseKind::DP,
            (Some(std::cmp::Ordering::Greater), Timing::Live) => CaseKind::IL,
            (Some(std::cmp::Ordering::Greater), Timing::Prior) => CaseKind::IP,
            _ => CaseKind::N,
        }
    }
}

impl fmt::Display for CaseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for CaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "N" => Ok(CaseKind::N),
            "DL" => Ok(CaseKind::DL),
            "DP" => Ok(CaseKind::DP),
            "IL" => Ok(CaseKind::IL),
            "IP" => Ok(CaseKind::IP),
            other => Err(Error::invalid(format!("unknown actuation case '{other}'"))),
        }
    }
}

/// An actuation case together with its gauge set pressure in kPa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ActuationCase {
    kind: CaseKind,
    set_pressure: f64,
}

impl ActuationCase {
    pub fn new(kind: CaseKind, set_pressure: f64) -> Result<Self> {
        if !set_pressure.is_finite() {
            return Err(Error::invalid("set pressure must be finite"));
        }
        let ok = match kind {
            CaseKind::N => set_pressure == 0.0,
            CaseKind::DL | CaseKind::DP => set_pressure < 0.0,
            CaseKind::IL | CaseKind::IP => set_pressure > 0.0,
        };
        if !ok {
            return Err(Error::invalid(format!("case {kind} is inconsistent with set pressure {set_pressure} kPa")));
        }
        Ok(ActuationCase { kind, set_pressure })
    }

    pub fn neutral() -> Self {
        ActuationCase { kind: CaseKind::N, set_pressure: 0.0 }
    }

    /// Build from a pressure and timing; zero pressure yields the neutral case.
    pub fn from_pressure(pressure: f64, timing: Timing) -> Result<Self> {
        Self::new(CaseKind::from_pressure(pressure, timing), pressure)
    }

    pub fn kind(&self) -> CaseKind {
        self.kind
    }

    pub fn set_pressure(&self) -> f64 {
        self.set_pressure
    }

    /// Pressure the pads hold while the gripper closes.
    pub fn grip_pressure(&self) -> f64 {
        match self.kind.timing() {
            Some(Timing::Prior) => self.set_pressure,
            _ => 0.0,
        }
    }
}
