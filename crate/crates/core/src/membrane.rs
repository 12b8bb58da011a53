//! Active-region membrane mechanics.
//!
//! Each active region is a long strip of the top layer clamped along its two
//! long edges. Under a pressure difference it bends into a parabolic cylinder
//! whose centre deflection follows a combined plate/membrane law
//! `dp = c1·D·w0/b⁴ + c3·(E·t/b⁴)·w0³`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::PadGeometry;
use crate::pneumatics::ATMOSPHERE_KPA;

/// Largest pressure difference the strip law is used for, kPa.
pub const MAX_DP_KPA: f64 = 100.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembraneLaw {
    /// Top-layer modulus, MPa.
    pub e_mpa: f64,
    pub nu: f64,
    /// Layer thickness, mm.
    pub t: f64,
    /// Short (clamped) span, mm.
    pub b: f64,
    /// Long dimension of the region, mm. Only used for volumes and forces.
    pub length: f64,
    pub c1: f64,
    pub c3: f64,
}

/// Material and coefficient values of the strip law; the dimensions come
/// from [`PadGeometry`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MembraneConfig {
    pub e_mpa: f64,
    pub nu: f64,
    pub c1: f64,
    pub c3: f64,
}

impl Default for MembraneConfig {
    fn default() -> Self {
        MembraneConfig { e_mpa: 16.1144, nu: 0.4, c1: 32.0, c3: 8.0 }
    }
}

impl MembraneConfig {
    pub fn law(&self, geom: &PadGeometry) -> Result<MembraneLaw> {
        MembraneLaw::new(
            self.e_mpa,
            self.nu,
            geom.surface_thickness,
            geom.active_width,
            geom.active_len,
            self.c1,
            self.c3,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegionDeflection {
    /// Centre deflection, mm. Positive protrudes out of the pad.
    pub w0: f64,
    pub span: f64,
    pub length: f64,
    /// Signed volume swept by the membrane, mm³.
    pub displaced_volume: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlatContact {
    pub contact_width: f64,
    pub normal_force: f64,
}

impl FlatContact {
    pub const NONE: FlatContact = FlatContact { contact_width: 0.0, normal_force: 0.0 };
}

impl MembraneLaw {
    pub fn new(e_mpa: f64, nu: f64, t: f64, b: f64, length: f64, c1: f64, c3: f64) -> Result<Self> {
        let law = MembraneLaw { e_mpa, nu, t, b, length, c1, c3 };
        law.validate()?;
        Ok(law)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("E", self.e_mpa),
            ("t", self.t),
            ("b", self.b),
            ("length", self.length),
            ("c1", self.c1),
            ("c3", self.c3),
        ];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(format!("membrane {name} must be > 0, got {v}")));
            }
        }
        if !(0.0..0.5).contains(&self.nu) {
            return Err(Error::invalid(format!("Poisson ratio must be in [0, 0.5), got {}", self.nu)));
        }
        Ok(())
    }

    /// Flexural rigidity, N·mm.
    pub fn rigidity(&self) -> f64 {
        self.e_mpa * self.t.powi(3) / (12.0 * (1.0 - self.nu * self.nu))
    }

    /// Linear and cubic coefficients of the law, with pressure in MPa.
    pub fn coefficients(&self) -> (f64, f64) {
        let b4 = self.b.powi(4);
        (self.c1 * self.rigidity() / b4, self.c3 * self.e_mpa * self.t / b4)
    }

    /// Pressure (kPa) that holds the centre at deflection `w0`.
    pub fn pressure_for(&self, w0: f64) -> f64 {
        let (a, c) = self.coefficients();
        1000.0 * (a * w0 + c * w0.powi(3))
    }
}

/// Centre deflection under gauge pressure difference `dp` (kPa).
pub fn deflect(law: &MembraneLaw, dp: f64) -> Result<RegionDeflection> {
    if !(dp.abs() <= MAX_DP_KPA) {
        return Err(Error::OutOfRange { what: "membrane dp (kPa)", value: dp, range: "[-100, 100]" });
    }
    let w0 = solve_center(law, dp);
    if w0.abs() >= law.b {
        return Err(Error::Unphysical(format!("deflection {w0:.3} mm exceeds the region span {} mm", law.b)));
    }
    Ok(region(law, w0))
}

fn region(law: &MembraneLaw, w0: f64) -> RegionDeflection {
    RegionDeflection { w0, span: law.b, length: law.length, displaced_volume: 2.0 / 3.0 * w0 * law.b * law.length }
}

/// Real root of `c·w³ + a·w = q` via the hyperbolic form of Cardano's
/// formula, then two Newton steps.
fn solve_center(law: &MembraneLaw, dp: f64) -> f64 {
    if dp == 0.0 {
        return 0.0;
    }
    let (a, c) = law.coefficients();
    let q = dp / 1000.0;
    let p = a / c;
    let r = q / c;
    let m = 2.0 * (p / 3.0).sqrt();
    let mut w = m * ((1.5 * r / p * (3.0 / p).sqrt()).asinh() / 3.0).sinh();
    for _ in 0..2 {
        let f = c * w * w * w + a * w - q;
        w -= f / (3.0 * c * w * w + a);
    }
    w
}

impl RegionDeflection {
    /// Free membrane height at lateral offset `x` from the region centreline.
    pub fn profile(&self, x: f64) -> f64 {
        let u = 2.0 * x / self.span;
        if u.abs() > 1.0 {
            0.0
        } else {
            self.w0 * (1.0 - u * u)
        }
    }

    /// Width of the flattened patch against a flat face `gap` above the
    /// undeformed surface.
    pub fn chord(&self, gap: f64) -> f64 {
        if self.w0 <= gap || self.w0 <= 0.0 {
            0.0
        } else {
            self.span * (1.0 - gap.max(0.0) / self.w0).sqrt()
        }
    }

    /// Displaced volume once the part of the bump above `gap` is pressed flat.
    pub fn clipped_volume(&self, gap: f64) -> f64 {
        let c = self.chord(gap);
        if c == 0.0 {
            return self.displaced_volume;
        }
        self.displaced_volume - 2.0 / 3.0 * c * (self.w0 - gap) * self.length
    }
}

pub fn chamber_volume(geom: &PadGeometry, deflections: &[RegionDeflection]) -> Result<f64> {
    if deflections.len() != geom.n_active {
        return Err(Error::invalid(format!(
            "{} deflections given for {} active regions",
            deflections.len(),
            geom.n_active
        )));
    }
    let v = geom.dead_volume + deflections.iter().map(|d| d.displaced_volume).sum::<f64>();
    if !(v > 0.0) {
        return Err(Error::Unphysical(format!("chamber volume {v:.3} mm³ is not positive")));
    }
    Ok(v)
}

/// Flattening of a protruding region against a flat face. Regions that do not
/// protrude, or a non-positive `dp`, transmit nothing.
pub fn press_against_flat(defl: &RegionDeflection, gap: f64, dp: f64) -> Result<FlatContact> {
    if gap.is_nan() || gap < 0.0 {
        return Err(Error::invalid(format!("contact gap must be >= 0, got {gap}")));
    }
    if dp <= 0.0 {
        return Ok(FlatContact::NONE);
    }
    let contact_width = defl.chord(gap);
    Ok(FlatContact { contact_width, normal_force: dp * contact_width * defl.length * 1e-3 })
}

/// Chamber volume with each region pressed against a face at the given gap
/// (`None` for a free region).
pub fn loaded_volume(geom: &PadGeometry, law: &MembraneLaw, dp: f64, gaps: &[Option<f64>]) -> Result<f64> {
    let d = deflect(law, dp)?;
    let v = geom.dead_volume + gaps.iter().map(|g| g.map_or(d.displaced_volume, |g| d.clipped_volume(g))).sum::<f64>();
    if !(v > 0.0) {
        return Err(Error::Unphysical(format!("chamber volume {v:.3} mm³ is not positive")));
    }
    Ok(v)
}

/// Gauge pressure of a sealed pad holding `gas_amount` (kPa·mm³) with its
/// regions pressed against faces at `gaps`. `guess` warm-starts the solve.
///
/// `(p + P_atm)·V(p)` is increasing in `p`, so the root is unique; Newton
/// steps are kept inside a shrinking bracket.
pub fn sealed_pressure(
    geom: &PadGeometry,
    law: &MembraneLaw,
    gas_amount: f64,
    gaps: &[Option<f64>],
    guess: f64,
) -> Result<f64> {
    if gaps.len() != geom.n_active {
        return Err(Error::invalid("one gap entry per active region is required"));
    }
    let f = |p: f64| -> Result<f64> { Ok((p + ATMOSPHERE_KPA) * loaded_volume(geom, law, p, gaps)? - gas_amount) };
    let (mut lo, mut hi) = (-MAX_DP_KPA, MAX_DP_KPA);
    let (flo, fhi) = (f(lo)?, f(hi)?);
    if flo > 0.0 || fhi < 0.0 {
        return Err(Error::Unphysical(format!(
            "sealed gas amount {gas_amount:.1} kPa·mm³ needs a pressure outside ±{MAX_DP_KPA} kPa"
        )));
    }
    let mut p = guess.clamp(lo, hi);
    let tol = 1e-10 * gas_amount.abs().max(1.0);
    for _ in 0..100 {
        let fp = f(p)?;
        if fp.abs() <= tol {
            return Ok(p);
        }
        if fp < 0.0 {
            lo = p;
        } else {
            hi = p;
        }
        let h = 1e-6 * (1.0 + p.abs());
        let slope = (f(p + h)? - fp) / h;
        let next = p - fp / slope;
        p = if slope > 0.0 && next > lo && next < hi { next } else { 0.5 * (lo + hi) };
        if hi - lo < 1e-12 {
            return Ok(p);
        }
    }
    Err(Error::Convergence("sealed pad pressure".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::default_geometry;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn law() -> MembraneLaw {
        MembraneConfig::default().law(&default_geometry()).unwrap()
    }

    fn bisect_root(law: &MembraneLaw, dp: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, law.b);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if law.pressure_for(mid) < dp {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn zero_pressure_is_flat() {
        let d = deflect(&law(), 0.0).unwrap();
        assert_eq!(d.w0, 0.0);
        assert_eq!(d.displaced_volume, 0.0);
    }

    #[test]
    fn odd_in_pressure() {
        let l = law();
        for dp in [10.0, 20.0, 30.0, 40.0] {
            let up = deflect(&l, dp).unwrap();
            let down = deflect(&l, -dp).unwrap();
            assert_eq!(down.w0, -up.w0);
            assert!(up.w0 > 0.0);
        }
    }

    #[test]
    fn root_matches_bisection_at_40() {
        let l = MembraneConfig { e_mpa: 30.0, ..MembraneConfig::default() }.law(&default_geometry()).unwrap();
        let w = deflect(&l, 40.0).unwrap().w0;
        assert!((w - bisect_root(&l, 40.0)).abs() < 1e-9);
        assert!((w - 0.4811).abs() < 1e-3);
    }

    #[test]
    fn out_of_range_pressure() {
        assert!(matches!(deflect(&law(), 150.0), Err(Error::OutOfRange { .. })));
        assert!(deflect(&law(), f64::NAN).is_err());
    }

    #[test]
    fn chamber_volume_cases() {
        let g = default_geometry();
        let l = law();
        let flat = vec![region(&l, 0.0); 4];
        assert_eq!(chamber_volume(&g, &flat).unwrap(), g.dead_volume);
        let out = vec![region(&l, 0.5); 4];
        let v = chamber_volume(&g, &out).unwrap();
        assert_relative_eq!(v - g.dead_volume, 4.0 * 2.0 / 3.0 * 0.5 * 3.25 * 16.0, epsilon = 1e-9);
        assert_relative_eq!(v - g.dead_volume, 69.333, epsilon = 1e-3);
        let mut mixed = flat.clone();
        mixed[0] = region(&l, -0.3);
        let mut mirrored = flat.clone();
        mirrored[0] = region(&l, 0.3);
        let (vm, vp) = (chamber_volume(&g, &mixed).unwrap(), chamber_volume(&g, &mirrored).unwrap());
        assert_relative_eq!(g.dead_volume - vm, vp - g.dead_volume, epsilon = 1e-12);
        assert!(chamber_volume(&g, &flat[..3]).is_err());
        let mut tiny = g.clone();
        tiny.dead_volume = 1.0;
        assert!(chamber_volume(&tiny, &[region(&l, -0.5); 4]).is_err());
    }

    #[test]
    fn press_examples() {
        let l = law();
        let d = deflect(&l, 40.0).unwrap();
        let none = press_against_flat(&d, d.w0 + 0.01, 40.0).unwrap();
        assert_eq!(none, FlatContact::NONE);
        let full = press_against_flat(&d, 0.0, 40.0).unwrap();
        assert_relative_eq!(full.contact_width, 3.25, epsilon = 1e-12);
        assert_relative_eq!(full.normal_force, 2.08, epsilon = 1e-12);
        let half = press_against_flat(&d, d.w0 / 2.0, 40.0).unwrap();
        assert_relative_eq!(half.contact_width, 3.25 / 2f64.sqrt(), epsilon = 1e-12);
        assert!(press_against_flat(&d, -0.1, 40.0).is_err());
        assert_eq!(press_against_flat(&deflect(&l, -40.0).unwrap(), 0.0, -40.0).unwrap(), FlatContact::NONE);
    }

    #[test]
    fn chord_matches_sampled_profile() {
        let d = deflect(&law(), 40.0).unwrap();
        let gap = d.w0 / 2.0;
        let n = 1000;
        let dx = d.span / n as f64;
        let above = (0..n).filter(|&i| d.profile(-d.span / 2.0 + (i as f64 + 0.5) * dx) > gap).count();
        let sampled = above as f64 * dx;
        assert!((sampled - d.chord(gap)).abs() / d.chord(gap) < 0.01);
    }

    #[test]
    fn clipped_volume_matches_quadrature() {
        let d = deflect(&law(), 30.0).unwrap();
        for gap in [0.0, 0.1, 0.2, d.w0 * 0.9, d.w0 * 2.0] {
            let n = 20000;
            let dx = d.span / n as f64;
            let area: f64 = (0..n).map(|i| d.profile(-d.span / 2.0 + (i as f64 + 0.5) * dx).min(gap) * dx).sum();
            assert_relative_eq!(d.clipped_volume(gap), area * d.length, max_relative = 1e-6, epsilon = 1e-9);
        }
    }

    #[test]
    fn sealed_pressure_free_matches_seal_point() {
        let g = default_geometry();
        let l = law();
        let v = loaded_volume(&g, &l, 40.0, &[None; 4]).unwrap();
        let gas = (40.0 + ATMOSPHERE_KPA) * v;
        let p = sealed_pressure(&g, &l, gas, &[None; 4], 0.0).unwrap();
        assert_relative_eq!(p, 40.0, epsilon = 1e-8);
    }

    #[test]
    fn flattening_raises_sealed_pressure() {
        let g = default_geometry();
        let l = law();
        let v = loaded_volume(&g, &l, 40.0, &[None; 4]).unwrap();
        let gas = (40.0 + ATMOSPHERE_KPA) * v;
        let mut last = 40.0;
        for gap in [0.4, 0.3, 0.2, 0.1, 0.0] {
            let p = sealed_pressure(&g, &l, gas, &[Some(gap); 4], last).unwrap();
            assert!(p > last, "gap {gap}: {p} <= {last}");
            let v = loaded_volume(&g, &l, p, &[Some(gap); 4]).unwrap();
            assert_relative_eq!((p + ATMOSPHERE_KPA) * v, gas, max_relative = 1e-9);
            last = p;
        }
    }

    proptest! {
        #[test]
        fn deflection_monotone(a in -100.0f64..100.0, b in -100.0f64..100.0) {
            prop_assume!(a < b);
            let l = law();
            prop_assert!(deflect(&l, a).unwrap().w0 < deflect(&l, b).unwrap().w0);
        }

        #[test]
        fn root_satisfies_law(dp in 0.0f64..100.0, e in 1.0f64..200.0, c1 in 5.0f64..80.0, c3 in 1.0f64..30.0) {
            let l = MembraneLaw::new(e, 0.4, 0.16, 3.25, 16.0, c1, c3).unwrap();
            if let Ok(d) = deflect(&l, dp) {
                prop_assert!((d.w0 - bisect_root(&l, dp)).abs() < 1e-9);
            }
        }

        #[test]
        fn press_force_monotone(g1 in 0.0f64..0.6, g2 in 0.0f64..0.6, p1 in 1.0f64..60.0, p2 in 1.0f64..60.0) {
            let l = law();
            let (glo, ghi) = (g1.min(g2), g1.max(g2));
            let (plo, phi) = (p1.min(p2), p1.max(p2));
            let d = deflect(&l, plo).unwrap();
            prop_assert!(press_against_flat(&d, ghi, plo).unwrap().normal_force
                <= press_against_flat(&d, glo, plo).unwrap().normal_force);
            let dh = deflect(&l, phi).unwrap();
            prop_assert!(press_against_flat(&dh, glo, phi).unwrap().normal_force
                >= press_against_flat(&d, glo, plo).unwrap().normal_force);
        }
    }
}
