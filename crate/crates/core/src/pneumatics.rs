//! Chamber pressure: the set-point regulator, sealing, isothermal (Boyle)
//! compression and pressure-rise contact detection.
//!
//! All interfaces take gauge pressure in kPa. Absolute pressure only appears
//! in the conserved gas amount `P_abs · V` (kPa·mm³).

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Atmospheric pressure, kPa.
pub const ATMOSPHERE_KPA: f64 = 101.325;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Valve {
    Sealed,
    Regulated { set_point: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChamberState {
    pub p_gauge: f64,
    /// `P_abs · V` at the reference temperature, kPa·mm³.
    pub gas_amount: f64,
    pub volume: f64,
    pub valve: Valve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PneumaticsConfig {
    /// First-order regulator time constant, s.
    pub tau_reg_s: f64,
    /// Pressure rise above baseline that counts as contact, kPa.
    pub detect_threshold_kpa: f64,
    /// Length of the trailing baseline window, s.
    pub baseline_window_s: f64,
    /// Pressure sensor sample rate, Hz.
    pub sample_rate_hz: f64,
}

impl Default for PneumaticsConfig {
    fn default() -> Self {
        PneumaticsConfig { tau_reg_s: 0.05, detect_threshold_kpa: 1.0, baseline_window_s: 0.2, sample_rate_hz: 100.0 }
    }
}

impl PneumaticsConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("tau_reg_s", self.tau_reg_s),
            ("detect_threshold_kpa", self.detect_threshold_kpa),
            ("baseline_window_s", self.baseline_window_s),
            ("sample_rate_hz", self.sample_rate_hz),
        ] {
            if !(v > 0.0) {
                return Err(Error::invalid(format!("pneumatics {name} must be > 0, got {v}")));
            }
        }
        Ok(())
    }
}

impl ChamberState {
    /// A chamber held at `p_gauge` by the regulator.
    pub fn regulated(p_gauge: f64, volume: f64) -> Result<Self> {
        check_volume(volume)?;
        check_absolute(p_gauge)?;
        Ok(ChamberState {
            p_gauge,
            gas_amount: (p_gauge + ATMOSPHERE_KPA) * volume,
            volume,
            valve: Valve::Regulated { set_point: p_gauge },
        })
    }

    pub fn p_abs(&self) -> f64 {
        self.p_gauge + ATMOSPHERE_KPA
    }

    pub fn is_sealed(&self) -> bool {
        matches!(self.valve, Valve::Sealed)
    }

    /// Change the chamber volume. A regulated chamber keeps its pressure and
    /// exchanges gas with the supply; a sealed one follows Boyle's law.
    pub fn with_volume(&self, volume: f64) -> Result<Self> {
        match self.valve {
            Valve::Sealed => compress_sealed(self, volume),
            Valve::Regulated { .. } => {
                check_volume(volume)?;
                Ok(ChamberState { gas_amount: self.p_abs() * volume, volume, ..*self })
            }
        }
    }
}

fn check_volume(volume: f64) -> Result<()> {
    if !(volume.is_finite() && volume > 0.0) {
        return Err(Error::Unphysical(format!("chamber volume must be > 0, got {volume}")));
    }
    Ok(())
}

fn check_absolute(p_gauge: f64) -> Result<()> {
    if !(p_gauge.is_finite() && p_gauge + ATMOSPHERE_KPA > 0.0) {
        return Err(Error::Unphysical(format!("absolute pressure must be > 0 (gauge {p_gauge})")));
    }
    Ok(())
}

/// First-order lag toward `set_point` over `dt` seconds:
/// `p' = sp + (p − sp)·exp(−dt/τ)`.
pub fn regulate(state: &ChamberState, set_point: f64, dt: f64, tau: f64) -> Result<ChamberState> {
    if !(dt > 0.0) {
        return Err(Error::invalid(format!("regulator step must be > 0, got {dt}")));
    }
    if !(tau > 0.0) {
        return Err(Error::invalid("regulator time constant must be > 0"));
    }
    check_absolute(set_point)?;
    let p = set_point + (state.p_gauge - set_point) * (-dt / tau).exp();
    Ok(ChamberState {
        p_gauge: p,
        gas_amount: (p + ATMOSPHERE_KPA) * state.volume,
        volume: state.volume,
        valve: Valve::Regulated { set_point },
    })
}

/// Close the valve, freezing the gas amount at the current `P_abs · V`.
pub fn seal(state: &ChamberState) -> ChamberState {
    ChamberState { gas_amount: state.p_abs() * state.volume, valve: Valve::Sealed, ..*state }
}

/// Isothermal volume change of a sealed chamber.
pub fn compress_sealed(state: &ChamberState, new_volume: f64) -> Result<ChamberState> {
    if !state.is_sealed() {
        return Err(Error::invalid("compress_sealed needs a sealed chamber"));
    }
    check_volume(new_volume)?;
    let p_abs = state.gas_amount / new_volume;
    Ok(ChamberState {
        p_gauge: p_abs - ATMOSPHERE_KPA,
        gas_amount: state.gas_amount,
        volume: new_volume,
        valve: Valve::Sealed,
    })
}

/// Uniformly sampled gauge pressure history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PressureTrace {
    samples: Vec<(f64, f64)>,
    period: f64,
}

impl PressureTrace {
    pub fn new(samples: Vec<(f64, f64)>) -> Result<Self> {
        let period = match samples.as_slice() {
            [] | [_] => 0.0,
            [a, b, ..] => b.0 - a.0,
        };
        if samples.len() > 1 {
            if !(period > 0.0) {
                return Err(Error::invalid("pressure trace times must increase"));
            }
            for w in samples.windows(2) {
                let dt = w[1].0 - w[0].0;
                if !(dt > 0.0) || (dt - period).abs() > 1e-6 * period {
                    return Err(Error::invalid("pressure trace must be uniformly sampled"));
                }
            }
        }
        Ok(PressureTrace { samples, period })
    }

    pub fn uniform(t0: f64, period: f64, values: &[f64]) -> Result<Self> {
        if !(period > 0.0) {
            return Err(Error::invalid("sample period must be > 0"));
        }
        let samples = values.iter().enumerate().map(|(i, &p)| (t0 + i as f64 * period, p)).collect();
        Ok(PressureTrace { samples, period })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn period(&self) -> f64 {
        self.period
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration(&self) -> f64 {
        match (self.samples.first(), self.samples.last()) {
            (Some(a), Some(b)) => b.0 - a.0,
            _ => 0.0,
        }
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["t_s", "p_kpa"])?;
        for &(t, p) in &self.samples {
            w.write_record([format!("{t:.6}"), format!("{p:.6}")])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// First time the pressure sits at least `threshold` kPa above the median of
/// the preceding `baseline_window` seconds. `None` if that never happens.
pub fn detect_contact(trace: &PressureTrace, baseline_window: f64, threshold: f64) -> Result<Option<f64>> {
    if trace.is_empty() {
        return Err(Error::invalid("pressure trace is empty"));
    }
    if !(threshold > 0.0) {
        return Err(Error::invalid(format!("detection threshold must be > 0, got {threshold}")));
    }
    if !(baseline_window > 0.0) || baseline_window > trace.duration() + 1e-12 {
        return Err(Error::invalid(format!(
            "baseline window {baseline_window} s does not fit in a {} s trace",
            trace.duration()
        )));
    }
    let n_base = ((baseline_window / trace.period()).round() as usize).max(1);
    let values: Vec<f64> = trace.samples.iter().map(|s| s.1).collect();
    let mut window = Vec::with_capacity(n_base);
    for i in n_base..values.len() {
        window.clear();
        window.extend_from_slice(&values[i - n_base..i]);
        if values[i] - median(&mut window) >= threshold {
            return Ok(Some(trace.samples[i].0));
        }
    }
    Ok(None)
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}
