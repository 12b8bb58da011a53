use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensions of one structured fingerpad. Lengths in mm, volumes in mm³.
///
/// Active regions are cutouts in the middle layer. Each is `active_len` long
/// (running across the pad width) and `active_width` wide, and they are laid
/// out at `active_pitch` along the pad length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PadGeometry {
    pub total_length: f64,
    pub total_width: f64,
    pub total_thickness: f64,
    pub active_len: f64,
    pub active_width: f64,
    pub n_active: usize,
    pub active_pitch: f64,
    pub surface_thickness: f64,
    /// Channel and fitting air volume that is not under a membrane.
    pub dead_volume: f64,
}

impl Default for PadGeometry {
    fn default() -> Self {
        default_geometry()
    }
}

/// Design values of the fabricated pad. `n_active`, `active_pitch` and
/// `dead_volume` were never measured and are estimates.
pub fn default_geometry() -> PadGeometry {
    PadGeometry {
        total_length: 38.0,
        total_width: 22.0,
        total_thickness: 6.9,
        active_len: 16.0,
        active_width: 3.25,
        n_active: 4,
        active_pitch: 5.0,
        surface_thickness: 0.16,
        dead_volume: 300.0,
    }
}

impl PadGeometry {
    pub fn validate(&self) -> Result<()> {
        let dims = [
            ("total_length", self.total_length),
            ("total_width", self.total_width),
            ("total_thickness", self.total_thickness),
            ("active_len", self.active_len),
            ("active_width", self.active_width),
            ("active_pitch", self.active_pitch),
            ("surface_thickness", self.surface_thickness),
            ("dead_volume", self.dead_volume),
        ];
        for (name, v) in dims {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("pad {name} must be > 0, got {v}")));
            }
        }
        if self.n_active == 0 {
            return Err(Error::invalid("pad needs at least one active region"));
        }
        if self.web() <= 0.0 {
            return Err(Error::invalid(format!(
                "active pitch {} leaves no web between regions of width {}",
                self.active_pitch, self.active_width
            )));
        }
        if self.active_span() > self.total_length + 1e-9 {
            return Err(Error::invalid(format!(
                "{} active regions span {:.3} mm, longer than the pad ({} mm)",
                self.n_active,
                self.active_span(),
                self.total_length
            )));
        }
        if self.active_len >= self.total_width {
            return Err(Error::invalid(format!(
                "active region length {} must be shorter than pad width {}",
                self.active_len, self.total_width
            )));
        }
        Ok(())
    }

    /// Solid strip between neighbouring active regions.
    pub fn web(&self) -> f64 {
        self.active_pitch - self.active_width
    }

    /// Length occupied by the active-region array, from first to last edge.
    pub fn active_span(&self) -> f64 {
        let n = self.n_active as f64;
        n * self.active_width + (n - 1.0) * self.web()
    }

    pub fn pad_area(&self) -> f64 {
        self.total_length * self.total_width
    }

    pub fn region_area(&self) -> f64 {
        self.active_len * self.active_width
    }

    pub fn cutout_area(&self) -> f64 {
        self.n_active as f64 * self.region_area()
    }

    pub fn inactive_area(&self) -> f64 {
        self.pad_area() - self.cutout_area()
    }

    /// Region centre positions along the pad length, measured from the pad centre.
    pub fn region_centers(&self) -> Vec<f64> {
        let n = self.n_active as f64;
        (0..self.n_active).map(|i| (i as f64 - (n - 1.0) / 2.0) * self.active_pitch).collect()
    }
}
