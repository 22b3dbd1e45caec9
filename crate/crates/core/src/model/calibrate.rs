use alloc::format;

use num_complex::Complex64;

use super::steady::drive_amplitude;
use crate::math::sqrt;
use crate::{Error, Result};

/// A published operating point: enhanced couplings quoted with the power that
/// produced them.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CalibrationReference {
    pub power: f64,
    /// `|G_omega|` at the reference point, rad/s.
    pub coupling_dispersive: f64,
    /// `|G_kappa|` at the reference point, rad/s.
    pub coupling_dissipative: f64,
    pub kappa_s: f64,
    /// Effective detuning at the reference point (usually zero).
    pub delta_s: f64,
    pub omega_l: f64,
    pub omega_m: f64,
}

/// Bare couplings and the bare decay rate implied by a reference point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Calibration {
    pub g_omega: f64,
    pub g_kappa: f64,
    /// `kappa = kappa_s + g_kappa Q_s` at the reference point.
    pub kappa: f64,
}

/// Inverts `G = sqrt(2) a_s g` at the reference point.
pub fn calibrate_bare_couplings(r: &CalibrationReference) -> Result<Calibration> {
    if !(r.power > 0.0) {
        return Err(Error::domain(format!("calibration needs a positive reference power, got {}", r.power)));
    }
    if !(r.kappa_s > 0.0) {
        return Err(Error::domain(format!("reference kappa_s must be positive, got {}", r.kappa_s)));
    }
    if !(r.omega_m > 0.0) {
        return Err(Error::domain("omega_m must be positive"));
    }
    let e_l = drive_amplitude(r.power, r.omega_l)?;
    let den = Complex64::new(r.kappa_s, r.delta_s);
    let a_s = Complex64::new(sqrt(2.0 * r.kappa_s) * e_l, 0.0) / den;
    let scale = core::f64::consts::SQRT_2 * a_s.norm();
    let g_omega = r.coupling_dispersive / scale;
    let g_kappa = r.coupling_dissipative / scale;
    let q_s = (g_omega / r.omega_m - r.delta_s * g_kappa / (r.kappa_s * r.omega_m)) * a_s.norm_sqr();
    Ok(Calibration {
        g_omega,
        g_kappa,
        kappa: r.kappa_s + g_kappa * q_s,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{hz, laser_angular_frequency, DEFAULT_WAVELENGTH};

    fn reference() -> CalibrationReference {
        CalibrationReference {
            power: 40e-3,
            coupling_dispersive: hz(75e3),
            coupling_dissipative: hz(15e3),
            kappa_s: hz(1.5e6),
            delta_s: 0.0,
            omega_l: laser_angular_frequency(DEFAULT_WAVELENGTH),
            omega_m: hz(136e3),
        }
    }

    #[test]
    fn linear_in_reference_coupling() {
        let c1 = calibrate_bare_couplings(&reference()).unwrap();
        let mut r = reference();
        r.coupling_dispersive *= 2.0;
        let c2 = calibrate_bare_couplings(&r).unwrap();
        approx::assert_relative_eq!(c2.g_omega, 2.0 * c1.g_omega, max_relative = 1e-15);
        assert_eq!(c2.g_kappa, c1.g_kappa);
    }

    #[test]
    fn zero_power_is_rejected() {
        let mut r = reference();
        r.power = 0.0;
        assert!(matches!(calibrate_bare_couplings(&r), Err(Error::Domain(_))));
    }

    #[test]
    fn bare_kappa_exceeds_effective_for_positive_couplings() {
        let c = calibrate_bare_couplings(&reference()).unwrap();
        assert!(c.kappa > hz(1.5e6));
        assert!((c.kappa - hz(1.5e6)) / hz(1.5e6) < 1e-2);
    }
}
