//! Constant-velocity shear pull through an elastic wire.
//!
//! The block has no inertia. It sticks until the wire force reaches the
//! static capacity, then slips at once; a mass released from the static
//! limit against kinetic friction rebounds to `2·Ck − Cs`, so that is where
//! the force drops to. Equal capacities give steady sliding.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::PullConfig;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockState {
    Stuck,
    Sliding,
}

impl BlockState {
    pub fn label(self) -> &'static str {
        match self {
            BlockState::Stuck => "stuck",
            BlockState::Sliding => "sliding",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PullSample {
    pub t: f64,
    /// Gauge (stage) displacement, mm.
    pub disp: f64,
    pub force: f64,
    pub state: BlockState,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForceTrace {
    pub samples: Vec<PullSample>,
    pub wire_stiffness: f64,
    /// Time of the first slip, if the block ever moved.
    pub slip_onset: Option<f64>,
    /// Largest wire force reached between samples, N.
    pub peak: f64,
    /// Work done by the stage over the whole pull, N·mm.
    pub stage_work: f64,
    /// Stage work up to each sample, N·mm.
    pub cumulative_work: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary {
    pub fp: f64,
    pub fa: f64,
    pub window: (f64, f64),
}

/// Simulate the pull for given static and kinetic capacities (N).
pub fn pull_trace(static_cap: f64, kinetic_cap: f64, cfg: &PullConfig) -> Result<ForceTrace> {
    cfg.validate()?;
    if !(kinetic_cap >= 0.0 && static_cap >= kinetic_cap && static_cap.is_finite()) {
        return Err(Error::invalid(format!("capacities need 0 <= kinetic ({kinetic_cap}) <= static ({static_cap})")));
    }
    let floor = (2.0 * kinetic_cap - static_cap).max(0.0);
    let steady = static_cap - floor <= 1e-12 * static_cap.max(1.0);
    let load_rate = cfg.wire_stiffness * cfg.stage_speed;
    let onset = static_cap / load_rate;
    let end = onset + cfg.sliding_time;
    let n = (end / cfg.time_step).ceil() as usize + 1;

    let mut samples = Vec::with_capacity(n);
    let mut cumulative_work = Vec::with_capacity(n);
    let mut force: f64 = 0.0;
    let mut work = 0.0;
    let mut slip_onset = None;
    let dx = cfg.stage_speed * cfg.time_step;
    for k in 0..n {
        let t = k as f64 * cfg.time_step;
        let mut state = BlockState::Stuck;
        if k > 0 {
            let rise = load_rate * cfg.time_step;
            if steady && force + rise >= static_cap {
                // Load up to the plateau, then slide at constant force.
                let frac = ((static_cap - force) / rise).clamp(0.0, 1.0);
                work += 0.5 * (force + static_cap) * frac * dx + static_cap * (1.0 - frac) * dx;
                force = static_cap;
                state = BlockState::Sliding;
            } else {
                // Slip at each crossing within the step and keep loading after it.
                let mut left = rise;
                while force + left >= static_cap && !steady {
                    let used = static_cap - force;
                    work += 0.5 * (force + static_cap) * used / cfg.wire_stiffness;
                    left -= used;
                    force = floor;
                    state = BlockState::Sliding;
                }
                work += (force + 0.5 * left) * left / cfg.wire_stiffness;
                force += left;
            }
        }
        if state == BlockState::Sliding && slip_onset.is_none() {
            slip_onset = Some(t);
        }
        samples.push(PullSample { t, disp: cfg.stage_speed * t, force, state });
        cumulative_work.push(work);
    }
    Ok(ForceTrace {
        samples,
        wire_stiffness: cfg.wire_stiffness,
        slip_onset,
        peak: if slip_onset.is_some() { static_cap } else { force },
        stage_work: work,
        cumulative_work,
    })
}

/// Peak over the whole trace and mean over the steady window. The mean is
/// the exact time average, taken from the stage work across the window, so
/// it does not alias with the stick-slip period.
pub fn summarize(trace: &ForceTrace, cfg: &PullConfig) -> Result<TraceSummary> {
    let onset = trace.slip_onset.ok_or_else(|| Error::invalid("block never slid, no steady window"))?;
    let start = onset + cfg.settle_margin;
    let stop = start + cfg.average_window;
    let last = trace.samples.last().map_or(0.0, |s| s.t);
    if last + 1e-9 < stop {
        return Err(Error::invalid(format!(
            "trace ends at {last:.3} s, before the averaging window closes at {stop:.3} s"
        )));
    }
    let dt = cfg.time_step;
    let i0 = (start / dt).round() as usize;
    let i1 = (stop / dt).round() as usize;
    let (t0, t1) = (trace.samples[i0].t, trace.samples[i1].t);
    let fa = (trace.cumulative_work[i1] - trace.cumulative_work[i0]) / (cfg.stage_speed * (t1 - t0));
    let fp = trace.samples.iter().map(|s| s.force).fold(trace.peak, f64::max);
    Ok(TraceSummary { fp, fa, window: (start, stop) })
}

impl ForceTrace {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t_s", "disp_mm", "force_n", "state"])?;
        for s in &self.samples {
            w.write_record([
                format!("{:.4}", s.t),
                format!("{:.4}", s.disp),
                format!("{:.6}", s.force),
                s.state.label().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Distance slid by the block, from its position `disp − F/k`.
    pub fn slide_distance(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.disp - s.force / self.wire_stiffness)
    }

    /// Mean time between slips, if at least two occurred.
    pub fn slip_period(&self) -> Option<f64> {
        let slips: Vec<f64> = self.samples.iter().filter(|s| s.state == BlockState::Sliding).map(|s| s.t).collect();
        if slips.len() < 2 {
            return None;
        }
        Some((slips[slips.len() - 1] - slips[0]) / (slips.len() - 1) as f64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn cfg() -> PullConfig {
        PullConfig::default()
    }

    #[test]
    fn zero_capacity_stays_at_zero() {
        let tr = pull_trace(0.0, 0.0, &cfg()).unwrap();
        assert!(tr.samples.iter().all(|s| s.force.abs() < 1e-12));
        let s = summarize(&tr, &cfg()).unwrap();
        assert_eq!((s.fa, s.fp), (0.0, 0.0));
    }

    #[test]
    fn equal_capacities_plateau() {
        let tr = pull_trace(5.0, 5.0, &cfg()).unwrap();
        let s = summarize(&tr, &cfg()).unwrap();
        assert_relative_eq!(s.fp, 5.0, epsilon = 1e-12);
        assert_relative_eq!(s.fa, 5.0, epsilon = 1e-12);
        assert!(tr.samples.iter().all(|x| x.force <= 5.0 + 1e-12));
    }

    #[test]
    fn symmetric_sawtooth_averages_to_middle() {
        let tr = pull_trace(6.0, 5.0, &cfg()).unwrap();
        let s = summarize(&tr, &cfg()).unwrap();
        assert_relative_eq!(s.fp, 6.0, epsilon = 1e-12);
        // One sawtooth period is 0.02 s, so a 2 s window holds whole periods.
        assert!((s.fa - 5.0).abs() < 1e-9, "fa {}", s.fa);
        let sliding_min =
            tr.samples.iter().filter(|x| x.t > tr.slip_onset.unwrap()).map(|x| x.force).fold(f64::INFINITY, f64::min);
        assert!((4.0 - 1e-9..4.1).contains(&sliding_min));
    }

    #[test]
    fn displacement_follows_stage() {
        let tr = pull_trace(3.0, 2.0, &cfg()).unwrap();
        for s in &tr.samples {
            assert_relative_eq!(s.disp, 10.0 * s.t, epsilon = 1e-9);
            assert!(s.force >= 0.0);
        }
        let onset = tr.slip_onset.unwrap();
        assert!(tr.samples.last().unwrap().t - onset >= 4.0 - 1e-9);
    }

    #[test]
    fn short_trace_is_rejected() {
        let tr = pull_trace(3.0, 2.0, &cfg()).unwrap();
        let longer = PullConfig { average_window: 3.7, ..cfg() };
        assert!(summarize(&tr, &longer).is_ok());
        let mut cut = tr.clone();
        cut.samples.truncate(cut.samples.len() / 2);
        assert!(summarize(&cut, &cfg()).is_err());
    }

    #[test]
    fn period_scales_inversely_with_wire_stiffness() {
        let p10 = pull_trace(6.0, 5.0, &cfg()).unwrap().slip_period().unwrap();
        let p20 = pull_trace(6.0, 5.0, &PullConfig { wire_stiffness: 20.0, ..cfg() }).unwrap().slip_period().unwrap();
        assert_relative_eq!(p10, 2.0 * (6.0 - 5.0) / (10.0 * 10.0), epsilon = 2e-3);
        assert_relative_eq!(p10 / p20, 2.0, epsilon = 0.05);
    }

    #[test]
    fn csv_layout() {
        let tr = pull_trace(0.05, 0.05, &cfg()).unwrap();
        let mut buf = Vec::new();
        tr.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t_s,disp_mm,force_n,state"));
        assert_eq!(lines.next(), Some("0.0000,0.0000,0.000000,stuck"));
    }

    proptest! {
        #[test]
        fn stage_work_covers_friction(ck in 0.5f64..10.0, extra in 0.0f64..3.0) {
            let tr = pull_trace(ck + extra, ck, &cfg()).unwrap();
            let slide = tr.slide_distance();
            prop_assert!(tr.stage_work + 1e-9 * tr.stage_work >= ck * slide);
            // What is not dissipated stays in the wire.
            let last = tr.samples.last().unwrap().force;
            if 2.0 * ck >= ck + extra {
                let stored = last * last / (2.0 * tr.wire_stiffness);
                prop_assert!((tr.stage_work - ck * slide - stored).abs() < 1e-6 * tr.stage_work.max(1.0));
            }
            let s = summarize(&tr, &cfg()).unwrap();
            prop_assert!(s.fp >= s.fa);
        }
    }
}
