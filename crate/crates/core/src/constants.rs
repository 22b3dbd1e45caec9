//! Physical constants (CODATA 2018 exact values) and unit helpers.

use core::f64::consts::TAU;

/// Reduced Planck constant, J s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Speed of light in vacuum, m/s.
pub const C: f64 = 299_792_458.0;
/// Default drive wavelength, m.
pub const DEFAULT_WAVELENGTH: f64 = 1064e-9;

/// Ordinary frequency (Hz) to angular frequency (rad/s).
#[inline]
pub fn hz(f: f64) -> f64 {
    TAU * f
}

/// Angular frequency (rad/s) to ordinary frequency (Hz).
#[inline]
pub fn to_hz(omega: f64) -> f64 {
    omega / TAU
}

/// Angular frequency of light with the given vacuum wavelength.
#[inline]
pub fn laser_angular_frequency(wavelength: f64) -> f64 {
    TAU * C / wavelength
}
