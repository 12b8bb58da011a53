//! Object detection during closing: chamber pressure rise against the
//! gripper's motor-current flag, on a tube held by pre-inflated pads.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::Config;
use super::scenario::prepare_pad;
use crate::error::Result;
use crate::grasp::{close_gripper, motor_current_trace, CurrentSample, GripperConfig};
use crate::model::{ActuationCase, CaseKind, Target, TargetObject};
use crate::pneumatics::PressureTrace;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectionDemo {
    pub pressure_trace: PressureTrace,
    pub current_trace: Vec<CurrentSample>,
    pub pressure_detect_time: Option<f64>,
    pub current_detect_time: Option<f64>,
}

impl DetectionDemo {
    /// How long the pressure signal leads the current flag, s.
    pub fn lead(&self) -> Option<f64> {
        Some(self.current_detect_time? - self.pressure_detect_time?)
    }

    /// Both signals on the sensor grid: `t_s,p_kpa,current_a,current_flag`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t_s", "p_kpa", "current_a", "current_flag"])?;
        for (&(t, p), c) in self.pressure_trace.samples().iter().zip(&self.current_trace) {
            w.write_record([
                format!("{t:.3}"),
                format!("{p:.6}"),
                format!("{:.6}", c.current),
                u8::from(c.detected).to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Close on the configured tube with pads sealed at the detection pressure.
/// The commanded separation sits `separation_margin` beyond the tube
/// diameter plus both pads.
pub fn run_detection_demo(cfg: &Config) -> Result<DetectionDemo> {
    cfg.validate()?;
    let d = &cfg.detection;
    let law = cfg.law()?;
    let case = ActuationCase::new(CaseKind::IP, d.pressure)?;
    let pad = prepare_pad(&case, &cfg.geometry, &law, cfg.pneumatics.tau_reg_s)?;
    let tube = TargetObject::tube(d.tube_radius, d.tube_mass, cfg.materials.get(Target::Ptfe).clone());
    let gripper = GripperConfig {
        target_separation: 2.0 * d.tube_radius + 2.0 * cfg.geometry.total_thickness + d.separation_margin,
        ..cfg.gripper
    };
    let out = close_gripper(&gripper, [pad, pad], Some(&tube), &cfg.geometry, &law, &cfg.pneumatics)?;
    let current_trace = motor_current_trace(&out, &gripper);
    let current_detect_time = current_trace.iter().find(|c| c.detected).map(|c| c.t);
    Ok(DetectionDemo {
        pressure_detect_time: out.pressure_detect_time,
        current_detect_time,
        pressure_trace: out.pressure_trace,
        current_trace,
    })
}
