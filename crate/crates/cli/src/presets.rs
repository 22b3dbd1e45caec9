//! Parameters of the membrane-in-interferometer device used throughout the
//! examples and acceptance checks.

use ponderomotive_core::constants::{hz, laser_angular_frequency, DEFAULT_WAVELENGTH};
use ponderomotive_core::model::{
    calibrate_bare_couplings, CalibrationReference, DriveMode, DriveSpec, LinearizedSystem, OperatingPoint,
    PhysicalParams,
};

pub const KAPPA_S_HZ: f64 = 1.5e6;
pub const OMEGA_M_HZ: f64 = 136e3;
pub const GAMMA_M_HZ: f64 = 0.23;
/// Reference drive: 40 mW produces `G_omega = 2 pi 75 kHz` and `G_kappa = 2 pi 15 kHz`.
pub const REFERENCE_POWER_W: f64 = 40e-3;
pub const REFERENCE_G_OMEGA_HZ: f64 = 75e3;
pub const REFERENCE_G_KAPPA_HZ: f64 = 15e3;
/// Pure dissipative coupling reached at 3.5 W.
pub const STRONG_G_KAPPA_HZ: f64 = 150e3;

/// Resonant or detuned point given by enhanced couplings (Hz) at `kappa_s = 2 pi 1.5 MHz`.
pub fn enhanced_system(g_omega_hz: f64, g_kappa_hz: f64, delta_hz: f64) -> LinearizedSystem {
    let op = OperatingPoint::from_enhanced_detuned(hz(KAPPA_S_HZ), hz(delta_hz), hz(g_omega_hz), hz(g_kappa_hz))
        .expect("preset operating point is valid");
    LinearizedSystem::new(op, hz(OMEGA_M_HZ), hz(GAMMA_M_HZ)).expect("preset mechanics are valid")
}

pub fn calibration_reference() -> CalibrationReference {
    CalibrationReference {
        power: REFERENCE_POWER_W,
        coupling_dispersive: hz(REFERENCE_G_OMEGA_HZ),
        coupling_dissipative: hz(REFERENCE_G_KAPPA_HZ),
        kappa_s: hz(KAPPA_S_HZ),
        delta_s: 0.0,
        omega_l: laser_angular_frequency(DEFAULT_WAVELENGTH),
        omega_m: hz(OMEGA_M_HZ),
    }
}

/// Bare parameters calibrated on the reference drive.
pub fn calibrated_params(power: f64, mode: DriveMode) -> PhysicalParams {
    let r = calibration_reference();
    let c = calibrate_bare_couplings(&r).expect("reference calibration is valid");
    PhysicalParams {
        kappa: c.kappa,
        omega_m: r.omega_m,
        gamma_m: hz(GAMMA_M_HZ),
        g_omega: c.g_omega,
        g_kappa: c.g_kappa,
        omega_l: r.omega_l,
        drive: DriveSpec { power, mode },
    }
}
