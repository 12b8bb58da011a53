//! Two-finger parallel gripper closing on an object.
//!
//! Both fingers move symmetrically. The gripper closes until either the
//! target separation is reached or the motor current has been over its
//! threshold for the detection latency, then holds position.
//!
//! Every state is a function of finger separation alone (the sealed gas
//! amount is fixed and the contact is quasi-static), so the threshold
//! crossing is located by bisection instead of by time stepping.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::membrane::{deflect, press_against_flat, sealed_pressure, FlatContact, MembraneLaw};
use crate::model::{PadGeometry, TargetObject};
use crate::pneumatics::{detect_contact, ChamberState, PneumaticsConfig, PressureTrace, Valve};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GripperConfig {
    /// Commanded finger separation, mm.
    pub target_separation: f64,
    /// Rate at which the separation shrinks, mm/s.
    pub closing_speed: f64,
    /// Lumped pad stiffness for inactive-surface contact, N/mm.
    pub finger_stiffness: f64,
    pub current_per_newton: f64,
    pub no_load_current: f64,
    pub current_threshold: f64,
    pub detection_latency: f64,
    /// Free travel per finger before the pad faces could touch, mm.
    pub approach_margin: f64,
    /// How long the fingers are held after stopping, s.
    pub hold_time: f64,
}

impl Default for GripperConfig {
    fn default() -> Self {
        GripperConfig {
            target_separation: 43.0,
            closing_speed: 2.4,
            finger_stiffness: 51.6443,
            current_per_newton: 0.02,
            no_load_current: 0.1,
            current_threshold: 0.22,
            detection_latency: 0.25,
            approach_margin: 2.0,
            hold_time: 1.0,
        }
    }
}

impl GripperConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("target_separation", self.target_separation),
            ("closing_speed", self.closing_speed),
            ("finger_stiffness", self.finger_stiffness),
            ("current_per_newton", self.current_per_newton),
            ("current_threshold", self.current_threshold),
            ("detection_latency", self.detection_latency),
            ("hold_time", self.hold_time),
        ];
        for (name, v) in positive {
            // An infinite threshold is allowed: it disables detection.
            if v.is_nan() || v <= 0.0 {
                return Err(Error::invalid(format!("gripper {name} must be > 0, got {v}")));
            }
        }
        if !(self.no_load_current >= 0.0 && self.approach_margin >= 0.0) {
            return Err(Error::invalid("no_load_current and approach_margin must be >= 0"));
        }
        Ok(())
    }

    /// Finger force at which the current reaches its threshold.
    pub fn threshold_force(&self) -> f64 {
        (self.current_threshold - self.no_load_current) / self.current_per_newton
    }

    pub fn current(&self, finger_force: f64) -> f64 {
        self.no_load_current + self.current_per_newton * finger_force
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum StopReason {
    Position,
    ObjectDetected,
}

/// Contact state of one pad at a given separation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PadState {
    pub chamber: ChamberState,
    /// Gap between the undeformed pad face and the object; negative means
    /// the inactive surface is compressed.
    pub gap: f64,
    pub inactive_force: f64,
    /// Flattened membrane patch per active region.
    pub patches: Vec<FlatContact>,
}

impl PadState {
    pub fn normal(&self) -> f64 {
        self.inactive_force + self.patches.iter().map(|p| p.normal_force).sum::<f64>()
    }

    pub fn inactive_touching(&self) -> bool {
        self.gap < 0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraspOutcome {
    pub final_separation: f64,
    pub pads: [PadState; 2],
    pub stop_reason: StopReason,
    pub stop_time: f64,
    /// Time the motor-current flag rises, if it does before the hold ends.
    pub current_detect_time: Option<f64>,
    pub pressure_detect_time: Option<f64>,
    /// Pad 0 chamber pressure sampled at the sensor rate.
    pub pressure_trace: PressureTrace,
    /// (t, mean finger force) on the same time grid.
    pub force_trace: Vec<(f64, f64)>,
}

impl GraspOutcome {
    pub fn normal_forces(&self) -> [f64; 2] {
        [self.pads[0].normal(), self.pads[1].normal()]
    }

    pub fn finger_force(&self) -> f64 {
        0.5 * (self.pads[0].normal() + self.pads[1].normal())
    }
}

/// Everything the closing simulation needs that stays fixed during a grasp.
struct Closing<'a> {
    cfg: &'a GripperConfig,
    geom: &'a PadGeometry,
    law: &'a MembraneLaw,
    object: Option<&'a TargetObject>,
    pads: [ChamberState; 2],
    start: f64,
}

impl Closing<'_> {
    fn separation(&self, t: f64) -> f64 {
        self.start - self.cfg.closing_speed * t
    }

    fn gap(&self, s: f64) -> f64 {
        match self.object {
            Some(o) => 0.5 * (s - o.width) - self.geom.total_thickness,
            None => f64::INFINITY,
        }
    }

    fn pad(&self, i: usize, s: f64, guess: f64) -> Result<PadState> {
        pad_response(self.geom, self.law, self.cfg.finger_stiffness, &self.pads[i], self.object, self.gap(s), guess)
    }

    fn finger_force(&self, s: f64) -> Result<f64> {
        let a = self.pad(0, s, self.pads[0].p_gauge)?;
        let b = self.pad(1, s, self.pads[1].p_gauge)?;
        Ok(0.5 * (a.normal() + b.normal()))
    }
}

/// Response of one pad whose undeformed face sits `gap` from the object.
/// `initial` is the chamber before contact; a sealed chamber keeps its gas.
pub fn pad_response(
    geom: &PadGeometry,
    law: &MembraneLaw,
    finger_stiffness: f64,
    initial: &ChamberState,
    object: Option<&TargetObject>,
    gap: f64,
    guess: f64,
) -> Result<PadState> {
    let centers = geom.region_centers();
    let region_gaps: Vec<Option<f64>> = centers
        .iter()
        .map(|&x| match object {
            Some(o) if gap.is_finite() => o.surface_gap(gap.max(0.0), x).map(|g| g.max(0.0)),
            _ => None,
        })
        .collect();
    let p = match initial.valve {
        Valve::Regulated { set_point } => set_point,
        Valve::Sealed => {
            if region_gaps.iter().all(Option::is_none) {
                initial.p_gauge
            } else {
                sealed_pressure(geom, law, initial.gas_amount, &region_gaps, guess)?
            }
        }
    };
    let d = deflect(law, p)?;
    let patches = region_gaps
        .iter()
        .map(|g| match g {
            Some(g) => press_against_flat(&d, *g, p),
            None => Ok(FlatContact::NONE),
        })
        .collect::<Result<Vec<_>>>()?;
    let volume = geom.dead_volume
        + region_gaps.iter().map(|g| g.map_or(d.displaced_volume, |g| d.clipped_volume(g))).sum::<f64>();
    let chamber = match initial.valve {
        Valve::Sealed => ChamberState { p_gauge: p, volume, ..*initial },
        Valve::Regulated { .. } => ChamberState {
            p_gauge: p,
            gas_amount: (p + crate::pneumatics::ATMOSPHERE_KPA) * volume,
            volume,
            valve: initial.valve,
        },
    };
    Ok(PadState {
        chamber,
        gap,
        inactive_force: if gap.is_finite() { finger_stiffness * (-gap).max(0.0) } else { 0.0 },
        patches,
    })
}

/// Close the gripper on `object` (or on nothing) and hold.
pub fn close_gripper(
    cfg: &GripperConfig,
    pads: [ChamberState; 2],
    object: Option<&TargetObject>,
    geom: &PadGeometry,
    law: &MembraneLaw,
    pneumatics: &PneumaticsConfig,
) -> Result<GraspOutcome> {
    cfg.validate()?;
    pneumatics.validate()?;
    if let Some(o) = object {
        o.validate()?;
        if cfg.target_separation <= o.width {
            return Err(Error::invalid(format!(
                "target separation {} mm would crush the pads flat on a {} mm object",
                cfg.target_separation, o.width
            )));
        }
    }
    let free = match object {
        Some(o) => o.width + 2.0 * geom.total_thickness + 2.0 * cfg.approach_margin,
        None => cfg.target_separation + 2.0 * cfg.approach_margin,
    };
    let sim = Closing { cfg, geom, law, object, pads, start: free.max(cfg.target_separation) };
    let t_pos = (sim.start - cfg.target_separation) / cfg.closing_speed;
    let f_thr = cfg.threshold_force();

    let t_cross = if sim.finger_force(sim.separation(t_pos))? < f_thr {
        None
    } else if sim.finger_force(sim.start)? >= f_thr {
        Some(0.0)
    } else {
        let (mut lo, mut hi) = (0.0, t_pos);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if sim.finger_force(sim.separation(mid))? >= f_thr {
                hi = mid;
            } else {
                lo = mid;
            }
            if hi - lo < 1e-12 {
                break;
            }
        }
        Some(hi)
    };
    let t_flag = t_cross.map(|t| t + cfg.detection_latency);
    let (stop_time, stop_reason) = match t_flag {
        Some(tf) if tf < t_pos => (tf, StopReason::ObjectDetected),
        _ => (t_pos, StopReason::Position),
    };
    let final_separation = sim.separation(stop_time);
    let end = stop_time + cfg.hold_time;

    let dt = 1.0 / pneumatics.sample_rate_hz;
    let n = (end / dt).floor() as usize + 1;
    let mut pressures = Vec::with_capacity(n);
    let mut force_trace = Vec::with_capacity(n);
    let mut guesses = [pads[0].p_gauge, pads[1].p_gauge];
    for k in 0..n {
        let t = k as f64 * dt;
        let s = sim.separation(t.min(stop_time));
        let a = sim.pad(0, s, guesses[0])?;
        let b = sim.pad(1, s, guesses[1])?;
        guesses = [a.chamber.p_gauge, b.chamber.p_gauge];
        pressures.push(a.chamber.p_gauge);
        force_trace.push((t, 0.5 * (a.normal() + b.normal())));
    }
    let pressure_trace = PressureTrace::uniform(0.0, dt, &pressures)?;
    let pressure_detect_time = if pressure_trace.duration() >= pneumatics.baseline_window_s {
        detect_contact(&pressure_trace, pneumatics.baseline_window_s, pneumatics.detect_threshold_kpa)?
    } else {
        None
    };

    let final_pads = [sim.pad(0, final_separation, guesses[0])?, sim.pad(1, final_separation, guesses[1])?];
    Ok(GraspOutcome {
        final_separation,
        pads: final_pads,
        stop_reason,
        stop_time,
        current_detect_time: t_flag.filter(|&t| t <= end),
        pressure_detect_time,
        pressure_trace,
        force_trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurrentSample {
    pub t: f64,
    pub current: f64,
    pub detected: bool,
}

/// Motor current proxy over the grasp. The flag rises `detection_latency`
/// after the first sample at or above the threshold.
pub fn motor_current_trace(outcome: &GraspOutcome, cfg: &GripperConfig) -> Vec<CurrentSample> {
    let crossing = outcome.force_trace.iter().find(|&&(_, f)| cfg.current(f) >= cfg.current_threshold).map(|&(t, _)| t);
    outcome
        .force_trace
        .iter()
        .map(|&(t, f)| CurrentSample {
            t,
            current: cfg.current(f),
            detected: crossing.is_some_and(|tc| t >= tc + cfg.detection_latency - 1e-12),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membrane::MembraneConfig;
    use crate::model::{default_geometry, MaterialPair};
    use crate::pneumatics::seal;

    fn setup() -> (PadGeometry, MembraneLaw) {
        let g = default_geometry();
        let l = MembraneConfig::default().law(&g).unwrap();
        (g, l)
    }

    fn neutral() -> [ChamberState; 2] {
        let c = ChamberState::regulated(0.0, 300.0).unwrap();
        [c, c]
    }

    fn inflated(g: &PadGeometry, l: &MembraneLaw, p: f64) -> [ChamberState; 2] {
        let v = crate::membrane::loaded_volume(g, l, p, &vec![None; g.n_active]).unwrap();
        let c = seal(&ChamberState::regulated(p, v).unwrap());
        [c, c]
    }

    #[test]
    fn no_object_stops_on_position() {
        let (g, l) = setup();
        let cfg = GripperConfig::default();
        let out = close_gripper(&cfg, neutral(), None, &g, &l, &PneumaticsConfig::default()).unwrap();
        assert_eq!(out.stop_reason, StopReason::Position);
        assert!((out.final_separation - cfg.target_separation).abs() < 1e-9);
        assert_eq!(out.normal_forces(), [0.0, 0.0]);
        assert_eq!(out.current_detect_time, None);
    }

    #[test]
    fn loose_target_gives_zero_force() {
        let (g, l) = setup();
        let block = TargetObject::block(30.0, 20.0, MaterialPair::plywood());
        let cfg = GripperConfig { target_separation: 30.0 + 2.0 * g.total_thickness + 0.5, ..GripperConfig::default() };
        let out = close_gripper(&cfg, neutral(), Some(&block), &g, &l, &PneumaticsConfig::default()).unwrap();
        assert_eq!(out.stop_reason, StopReason::Position);
        assert_eq!(out.normal_forces(), [0.0, 0.0]);
    }

    #[test]
    fn infinite_threshold_always_position() {
        let (g, l) = setup();
        let block = TargetObject::block(30.0, 20.0, MaterialPair::plywood());
        let cfg = GripperConfig { current_threshold: f64::INFINITY, ..GripperConfig::default() };
        for pads in [neutral(), inflated(&g, &l, 40.0)] {
            let out = close_gripper(&cfg, pads, Some(&block), &g, &l, &PneumaticsConfig::default()).unwrap();
            assert_eq!(out.stop_reason, StopReason::Position);
            assert_eq!(out.current_detect_time, None);
        }
    }

    #[test]
    fn inflated_pads_stop_on_detection() {
        let (g, l) = setup();
        let block = TargetObject::block(30.0, 20.0, MaterialPair::plywood());
        let cfg = GripperConfig::default();
        let out =
            close_gripper(&cfg, inflated(&g, &l, 40.0), Some(&block), &g, &l, &PneumaticsConfig::default()).unwrap();
        assert_eq!(out.stop_reason, StopReason::ObjectDetected);
        assert!(out.final_separation > cfg.target_separation);
        assert!(out.pads[0].chamber.p_gauge > 40.0);
        let tp = out.pressure_detect_time.unwrap();
        assert!(out.current_detect_time.unwrap() - tp > 0.2);
    }

    #[test]
    fn sealed_gas_is_conserved_through_grasp() {
        let (g, l) = setup();
        let block = TargetObject::block(30.0, 20.0, MaterialPair::plywood());
        let pads = inflated(&g, &l, 40.0);
        let out =
            close_gripper(&GripperConfig::default(), pads, Some(&block), &g, &l, &PneumaticsConfig::default()).unwrap();
        let c = out.pads[0].chamber;
        assert!((c.p_abs() * c.volume - pads[0].gas_amount).abs() < 1e-9 * pads[0].gas_amount);
    }

    #[test]
    fn grasp_is_deterministic() {
        let (g, l) = setup();
        let tube = TargetObject::tube(8.5, 10.0, MaterialPair::ptfe());
        let run = || {
            close_gripper(
                &GripperConfig { target_separation: 17.0 + 13.0, ..GripperConfig::default() },
                inflated(&g, &l, 40.0),
                Some(&tube),
                &g,
                &l,
                &PneumaticsConfig::default(),
            )
            .unwrap()
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn crushing_target_is_rejected() {
        let (g, l) = setup();
        let block = TargetObject::block(30.0, 20.0, MaterialPair::plywood());
        let cfg = GripperConfig { target_separation: 29.0, ..GripperConfig::default() };
        assert!(close_gripper(&cfg, neutral(), Some(&block), &g, &l, &PneumaticsConfig::default()).is_err());
    }

    #[test]
    fn current_flag_follows_step_after_latency() {
        let (g, l) = setup();
        let cfg = GripperConfig::default();
        let mut out = close_gripper(&cfg, neutral(), None, &g, &l, &PneumaticsConfig::default()).unwrap();
        out.force_trace = (0..300).map(|k| (k as f64 * 0.01, if k >= 100 { 10.0 } else { 0.0 })).collect();
        let trace = motor_current_trace(&out, &cfg);
        let first = trace.iter().find(|s| s.detected).unwrap();
        assert!((first.t - 1.25).abs() < 1e-9);
        out.force_trace.iter_mut().for_each(|s| s.1 = 0.0);
        assert!(motor_current_trace(&out, &cfg).iter().all(|s| !s.detected));
    }
}
