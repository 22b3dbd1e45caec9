use alloc::format;

use crate::constants::{HBAR, K_B};
use crate::math::{expm1, log1p};
use crate::{Error, Result};

/// Bose-Einstein occupancy `1 / (exp(hbar omega_m / k_B T) - 1)`; zero at `T <= 0`.
pub fn thermal_occupancy(temperature: f64, omega_m: f64) -> f64 {
    if !(temperature > 0.0) {
        return 0.0;
    }
    let x = HBAR * omega_m / (K_B * temperature);
    1.0 / expm1(x)
}

/// Temperature with mean occupancy `n_th` at `omega_m`:
/// `T = hbar omega_m / (k_B ln(1 + 1/n_th))`.
pub fn occupancy_temperature(n_th: f64, omega_m: f64) -> Result<f64> {
    if !(n_th >= 0.0) || !n_th.is_finite() {
        return Err(Error::domain(format!("occupancy must be finite and >= 0, got {n_th}")));
    }
    if !(omega_m > 0.0) {
        return Err(Error::domain(format!("omega_m must be positive, got {omega_m}")));
    }
    if n_th == 0.0 {
        return Ok(0.0);
    }
    Ok(HBAR * omega_m / (K_B * log1p(1.0 / n_th)))
}

/// Mechanical bath: mean phonon number, and the temperature it came from when known.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThermalEnvironment {
    pub n_th: f64,
    pub temperature: Option<f64>,
}

impl ThermalEnvironment {
    pub const ZERO: Self = Self {
        n_th: 0.0,
        temperature: None,
    };

    pub fn from_occupancy(n_th: f64) -> Result<Self> {
        if !(n_th >= 0.0) || !n_th.is_finite() {
            return Err(Error::domain(format!("occupancy must be finite and >= 0, got {n_th}")));
        }
        Ok(Self {
            n_th,
            temperature: None,
        })
    }

    pub fn from_temperature(temperature: f64, omega_m: f64) -> Result<Self> {
        if !(temperature >= 0.0) || !temperature.is_finite() {
            return Err(Error::domain(format!("temperature must be finite and >= 0, got {temperature}")));
        }
        Ok(Self {
            n_th: thermal_occupancy(temperature, omega_m),
            temperature: Some(temperature),
        })
    }

    /// Symmetrized Brownian force spectrum `gamma_m (2 n_th + 1)`.
    pub fn brownian_psd(&self, gamma_m: f64) -> f64 {
        gamma_m * (2.0 * self.n_th + 1.0)
    }

    /// Checks that `n_th` and `temperature` agree to 1e-12 relative.
    pub fn is_consistent(&self, omega_m: f64) -> bool {
        match self.temperature {
            None => self.n_th >= 0.0,
            Some(t) => {
                let n = thermal_occupancy(t, omega_m);
                if n == 0.0 {
                    self.n_th == 0.0
                } else {
                    (n - self.n_th).abs() <= 1e-12 * n
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::hz;

    #[test]
    fn occupancy_at_one_kelvin() {
        // 30-digit reference: 153209.93482476868...
        let n = thermal_occupancy(1.0, hz(136e3));
        approx::assert_relative_eq!(n, 153_209.934_824_768_7, max_relative = 1e-12);
        assert!((n - 1.5e5).abs() / 1.5e5 < 0.03);
    }

    #[test]
    fn temperature_for_thousand_phonons() {
        let t = occupancy_temperature(1000.0, hz(136e3)).unwrap();
        approx::assert_relative_eq!(t, 6.530_233_517_424_32e-3, max_relative = 1e-12);
    }

    #[test]
    fn ground_state_limits() {
        assert_eq!(thermal_occupancy(0.0, 1e6), 0.0);
        assert!(thermal_occupancy(1e-9, hz(136e3)) < 1e-300);
        assert_eq!(occupancy_temperature(0.0, 1e6).unwrap(), 0.0);
        assert!(occupancy_temperature(-1.0, 1e6).is_err());
    }

    #[test]
    fn environment_consistency() {
        let env = ThermalEnvironment::from_temperature(0.25, hz(136e3)).unwrap();
        assert!(env.is_consistent(hz(136e3)));
        let off = ThermalEnvironment {
            n_th: env.n_th * (1.0 + 1e-9),
            ..env
        };
        assert!(!off.is_consistent(hz(136e3)));
        assert_eq!(ThermalEnvironment::ZERO.brownian_psd(2.0), 2.0);
    }
}
