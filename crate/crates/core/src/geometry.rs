//! Refraction and path-length geometry of the PSDP crystal cube.
//!
//! The extraordinary ray enters the trapezoid at interface angle `beta`, bends
//! by `delta`, is totally internally reflected on the top face and rejoins the
//! ordinary ray. Angles are radians; lengths are millimetres.

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniaxial crystal cube: indices, square cross-section `d`, interface angle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Crystal<T> {
    pub n_o: T,
    pub n_e: T,
    /// Cross-section side, mm.
    pub d: T,
    /// Cuboid length, mm. Informational only.
    pub length: T,
    /// Interface angle, radians.
    pub beta: T,
    /// Design wavelength, nm.
    pub wavelength_nm: T,
}

impl<T: Real> Crystal<T> {
    /// Requires positive indices, `d > 0` and `0 < beta < pi/2`. Length
    /// defaults to `3 d` and wavelength to 589.3 nm.
    // Negated comparisons also reject NaN.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(n_o: T, n_e: T, d: T, beta: T) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidCrystal(msg));
        if !(n_o > T::zero() && n_e > T::zero()) {
            return bad(format!(
                "indices must be positive (n_o = {n_o}, n_e = {n_e})"
            ));
        }
        if !(d > T::zero()) {
            return bad(format!("cross-section d must be positive, got {d}"));
        }
        if !(beta > T::zero() && beta < T::FRAC_PI_2()) {
            return bad(format!("beta must lie in (0, pi/2), got {beta} rad"));
        }
        Ok(Crystal {
            n_o,
            n_e,
            d,
            length: d * T::lit(3.0),
            beta,
            wavelength_nm: T::lit(589.3),
        })
    }

    pub fn with_length(mut self, length: T) -> Self {
        self.length = length;
        self
    }

    pub fn with_wavelength(mut self, nm: T) -> Self {
        self.wavelength_nm = nm;
        self
    }

    pub fn is_negative_uniaxial(&self) -> bool {
        self.n_e < self.n_o
    }
}

/// Snap band around the grazing limit `(n_o/n_e) sin beta = 1`, where
/// `arcsin` loses half the significant digits.
fn grazing_band<T: Real>() -> T {
    T::epsilon() * T::lit(8.0)
}

/// Refraction angle from `n_o sin(beta) = n_e sin(beta + delta)`.
///
/// At the grazing limit the refracted ray makes a right angle with the
/// interface normal and `delta = pi/2 - beta` exactly; arguments within a few
/// ulps of 1 are treated as grazing.
pub fn delta_from_beta<T: Real>(spec: &Crystal<T>) -> Result<T> {
    let arg = spec.n_o / spec.n_e * spec.beta.sin();
    let band = grazing_band::<T>();
    if arg > T::one() + band {
        return Err(Error::NoPropagation(arg.to_f64().unwrap_or(f64::NAN)));
    }
    if arg >= T::one() - band {
        return Ok(T::FRAC_PI_2() - spec.beta);
    }
    Ok(arg.asin() - spec.beta)
}

/// `|n_o sin(beta) - n_e sin(beta + delta)|`.
pub fn snell_residual<T: Real>(spec: &Crystal<T>, delta: T) -> T {
    (spec.n_o * spec.beta.sin() - spec.n_e * (spec.beta + delta).sin()).abs()
}

/// `sin(delta) / ((n_o/n_e) - cos(delta))`, which equals `tan(beta)`.
pub fn tan_beta_from_delta<T: Real>(n_o: T, n_e: T, delta: T) -> T {
    delta.sin() / (n_o / n_e - delta.cos())
}

fn require_refraction<T: Real>(delta: T) -> Result<()> {
    if delta.abs() <= T::epsilon() {
        Err(Error::DegenerateGeometry)
    } else {
        Ok(())
    }
}

/// `d (n_e - n_o cos delta) / sin delta`.
pub fn opd_at<T: Real>(n_o: T, n_e: T, d: T, delta: T) -> Result<T> {
    require_refraction(delta)?;
    Ok(d * (n_e - n_o * delta.cos()) / delta.sin())
}

/// Optical path difference between the extraordinary and ordinary rays, mm.
/// Negative when the ordinary ray has the longer optical path.
pub fn opd<T: Real>(spec: &Crystal<T>) -> Result<T> {
    opd_at(spec.n_o, spec.n_e, spec.d, delta_from_beta(spec)?)
}

/// `d / (2 sin delta)`.
pub fn path_length_at<T: Real>(d: T, delta: T) -> Result<T> {
    require_refraction(delta)?;
    Ok(d / (T::lit(2.0) * delta.sin()))
}

/// Length of the extraordinary leg from the entry interface to the top face.
pub fn path_length_p2p3<T: Real>(spec: &Crystal<T>) -> Result<T> {
    path_length_at(spec.d, delta_from_beta(spec)?)
}

fn require_negative<T: Real>(n_o: T, n_e: T) -> Result<()> {
    if n_e < n_o {
        Ok(())
    } else {
        Err(Error::NotNegativeUniaxial {
            n_o: n_o.to_f64().unwrap_or(f64::NAN),
            n_e: n_e.to_f64().unwrap_or(f64::NAN),
        })
    }
}

/// Refraction angle that cancels the path difference: `arccos(n_e / n_o)`.
pub fn delta_zero_opd<T: Real>(n_o: T, n_e: T) -> Result<T> {
    require_negative(n_o, n_e)?;
    Ok((n_e / n_o).acos())
}

/// Interface angle matching [`delta_zero_opd`]:
/// `arctan(n_e / sqrt(n_o^2 - n_e^2))`.
pub fn beta_zero_opd<T: Real>(n_o: T, n_e: T) -> Result<T> {
    require_negative(n_o, n_e)?;
    Ok((n_e / (n_o * n_o - n_e * n_e).sqrt()).atan())
}

pub fn tir_margin_at<T: Real>(n_e: T, delta: T) -> T {
    n_e * delta.cos() - T::one()
}

/// `n_e cos(delta) - 1`: positive iff the extraordinary ray is totally
/// internally reflected at the top face (incidence `pi/2 - delta`, air above,
/// constant index `n_e`).
pub fn tir_margin<T: Real>(spec: &Crystal<T>) -> Result<T> {
    Ok(tir_margin_at(spec.n_e, delta_from_beta(spec)?))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AssemblyReport<T> {
    pub delta: T,
    pub opd_mm: T,
    /// `|opd| <= 1e-9 d`.
    pub zero_opd: bool,
    pub tir_margin: T,
    pub tir_ok: bool,
    /// `|opd|` exceeds one wavelength.
    pub compensator_needed: bool,
    pub beta_recommended: T,
    pub delta_recommended: T,
}

pub fn validate_assembly<T: Real>(spec: &Crystal<T>) -> Result<AssemblyReport<T>> {
    let beta_recommended = beta_zero_opd(spec.n_o, spec.n_e)?;
    let delta_recommended = delta_zero_opd(spec.n_o, spec.n_e)?;
    let delta = delta_from_beta(spec)?;
    let opd_mm = opd_at(spec.n_o, spec.n_e, spec.d, delta)?;
    let margin = tir_margin_at(spec.n_e, delta);
    let wavelength_mm = spec.wavelength_nm * T::lit(1e-6);
    Ok(AssemblyReport {
        delta,
        opd_mm,
        zero_opd: opd_mm.abs() <= T::lit(1e-9) * spec.d,
        tir_margin: margin,
        tir_ok: margin > T::zero(),
        compensator_needed: opd_mm.abs() > wavelength_mm,
        beta_recommended,
        delta_recommended,
    })
}

/// Named crystal with its indices at a wavelength.
#[derive(Clone, Debug, PartialEq)]
pub struct Material {
    pub name: String,
    pub n_o: f64,
    pub n_e: f64,
    pub wavelength_nm: f64,
}

impl Material {
    pub fn calcite() -> Self {
        Material {
            name: "calcite".into(),
            n_o: 1.658,
            n_e: 1.486,
            wavelength_nm: 589.3,
        }
    }
}

pub fn builtin_materials() -> Vec<Material> {
    vec![Material::calcite()]
}

#[cfg(test)]
mod tests {
    use super::*;

    const N_O: f64 = 1.658;
    const N_E: f64 = 1.486;

    fn calcite(beta: f64) -> Crystal<f64> {
        Crystal::new(N_O, N_E, 10.0, beta).unwrap()
    }

    #[test]
    fn design_angles() {
        let b = beta_zero_opd(N_O, N_E).unwrap().to_degrees();
        let d = delta_zero_opd(N_O, N_E).unwrap().to_degrees();
        assert!((b - 63.671).abs() < 1e-3);
        assert!((d - 26.329).abs() < 1e-3);
        assert!((b + d - 90.0).abs() < 1e-10);
    }

    #[test]
    fn delta_at_design_point() {
        let spec = calcite(beta_zero_opd(N_O, N_E).unwrap());
        let delta = delta_from_beta(&spec).unwrap();
        assert!((delta.to_degrees() - 26.329).abs() < 1e-3);
        assert!(snell_residual(&spec, delta) <= 1e-12);
        assert!(opd(&spec).unwrap().abs() <= 1e-12 * spec.d);
    }

    #[test]
    fn rounded_design_angle_is_past_grazing() {
        // 63.671 deg rounds the design angle up; the refracted ray no longer
        // exists there.
        let spec = calcite(63.671f64.to_radians());
        assert!(matches!(
            delta_from_beta(&spec),
            Err(Error::NoPropagation(_))
        ));
    }

    #[test]
    fn isotropic_crystal_does_not_bend() {
        for beta in [0.2, 0.7, 1.3] {
            let spec = Crystal::new(1.5f64, 1.5, 5.0, beta).unwrap();
            assert!(delta_from_beta(&spec).unwrap().abs() < 1e-15);
            assert!(matches!(opd(&spec), Err(Error::DegenerateGeometry)));
        }
    }

    #[test]
    fn both_snell_forms_agree_at_45_degrees() {
        let spec = calcite(45f64.to_radians());
        let delta = delta_from_beta(&spec).unwrap();
        assert!(snell_residual(&spec, delta) <= 1e-12);
        assert!((tan_beta_from_delta(N_O, N_E, delta) - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn opd_vanishes_at_zero_opd_delta() {
        let delta = delta_zero_opd(N_O, N_E).unwrap();
        assert!(opd_at(N_O, N_E, 10.0, delta).unwrap().abs() <= 1e-12 * 10.0);
    }

    #[test]
    fn path_length_examples() {
        assert!((path_length_at(10.0, 30f64.to_radians()).unwrap() - 10.0).abs() < 1e-12);
        assert!(matches!(
            path_length_at(10.0, 0.0),
            Err(Error::DegenerateGeometry)
        ));
        let delta = delta_zero_opd(N_O, N_E).unwrap();
        let p = path_length_at(10.0, delta).unwrap();
        assert!((p - 10.0 / (2.0 * 26.329194056847f64.to_radians().sin())).abs() < 1e-9);
    }

    #[test]
    fn opd_two_forms_at_45_degrees() {
        let spec = calcite(45f64.to_radians());
        let delta = delta_from_beta(&spec).unwrap();
        let leg = path_length_p2p3(&spec).unwrap();
        let two_leg = 2.0 * leg * (N_E - N_O * delta.cos());
        let closed = opd(&spec).unwrap();
        assert!((closed - two_leg).abs() <= 1e-12 * closed.abs());
    }

    #[test]
    fn tir_examples() {
        let delta = delta_zero_opd(N_O, N_E).unwrap();
        let m = tir_margin_at(N_E, delta);
        assert!((m - 0.3318431845597105).abs() < 1e-12);
        assert!(tir_margin_at(2.0, std::f64::consts::FRAC_PI_3).abs() < 1e-15);
        for delta in [0.01, 0.4, 1.2] {
            assert!(tir_margin_at(1.0, delta) < 0.0);
        }
    }

    #[test]
    fn zero_opd_requires_negative_uniaxial() {
        assert!(matches!(
            beta_zero_opd(1.5, 1.5),
            Err(Error::NotNegativeUniaxial { .. })
        ));
        assert!(delta_zero_opd(1.5, 1.6).is_err());
    }

    #[test]
    fn beta_tends_to_right_angle_as_birefringence_vanishes() {
        let b = beta_zero_opd(1.5 + 1e-9, 1.5).unwrap();
        assert!(std::f64::consts::FRAC_PI_2 - b < 1e-3);
    }

    #[test]
    fn assembly_reports() {
        let design = validate_assembly(&calcite(beta_zero_opd(N_O, N_E).unwrap())).unwrap();
        assert!(design.zero_opd && design.tir_ok && !design.compensator_needed);
        let tilted = validate_assembly(&calcite(45f64.to_radians())).unwrap();
        assert!(tilted.compensator_needed && !tilted.zero_opd);
        let iso = Crystal::new(1.5, 1.5, 10.0, 0.5).unwrap();
        assert!(validate_assembly(&iso).is_err());
    }

    #[test]
    fn crystal_validation() {
        assert!(Crystal::new(1.6, 1.5, 0.0, 0.5).is_err());
        assert!(Crystal::new(1.6, 1.5, 1.0, 0.0).is_err());
        assert!(Crystal::new(1.6, 1.5, 1.0, 1.6).is_err());
        assert!(Crystal::new(-1.0, 1.5, 1.0, 0.5).is_err());
    }

    #[test]
    fn single_precision_design_point() {
        let b = beta_zero_opd(1.658f32, 1.486f32).unwrap();
        assert!((b.to_degrees() - 63.671).abs() < 1e-3);
    }
}
