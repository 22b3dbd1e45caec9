use alloc::format;
use alloc::vec::Vec;

use crate::{Error, Result};

/// How the drive laser frequency relates to the cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum DriveMode {
    /// The laser is retuned to follow the displaced cavity, so `Delta_s = 0`.
    ResonantLocked,
    /// The laser sits at a fixed offset `omega_c - omega_l` (rad/s) from the
    /// bare cavity; zero means driving the undisplaced resonance. The effective
    /// detuning is then `Delta_s = bare_detuning - g_omega Q_s`.
    FixedFrequency { bare_detuning: f64 },
    /// The effective detuning `Delta_s` (rad/s) is imposed directly.
    ExplicitDetuning { delta_s: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DriveSpec {
    /// Laser power, W.
    pub power: f64,
    pub mode: DriveMode,
}

/// Bare system constants. All rates in rad/s; couplings in rad/s per unit of
/// dimensionless displacement `Q`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PhysicalParams {
    /// Bare cavity amplitude decay rate.
    pub kappa: f64,
    pub omega_m: f64,
    pub gamma_m: f64,
    /// Bare dispersive coupling `d omega_c / dQ`.
    pub g_omega: f64,
    /// Bare dissipative coupling `d kappa / dQ`.
    pub g_kappa: f64,
    /// Drive laser angular frequency.
    pub omega_l: f64,
    pub drive: DriveSpec,
}

/// Soft violations of the unresolved-sideband ordering `gamma_m < omega_m < kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeWarning {
    ResolvedSideband,
    OverdampedMechanics,
}

impl PhysicalParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("kappa", self.kappa),
            ("omega_m", self.omega_m),
            ("gamma_m", self.gamma_m),
            ("omega_l", self.omega_l),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::domain(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if !(self.g_omega.is_finite() && self.g_kappa.is_finite()) {
            return Err(Error::domain("couplings must be finite"));
        }
        if self.g_omega < 0.0 && self.g_kappa < 0.0 {
            return Err(Error::domain(
                "g_omega and g_kappa may not both be negative; flip the sign of Q instead",
            ));
        }
        if !(self.drive.power >= 0.0 && self.drive.power.is_finite()) {
            return Err(Error::domain(format!("power must be >= 0, got {}", self.drive.power)));
        }
        match self.drive.mode {
            DriveMode::ExplicitDetuning { delta_s } if !delta_s.is_finite() => {
                Err(Error::domain("explicit detuning must be finite"))
            }
            DriveMode::FixedFrequency { bare_detuning } if !bare_detuning.is_finite() => {
                Err(Error::domain("bare detuning must be finite"))
            }
            _ => Ok(()),
        }
    }

    pub fn regime_warnings(&self) -> Vec<RegimeWarning> {
        let mut out = Vec::new();
        if self.omega_m >= self.kappa {
            out.push(RegimeWarning::ResolvedSideband);
        }
        if self.gamma_m >= self.omega_m {
            out.push(RegimeWarning::OverdampedMechanics);
        }
        out
    }

    pub fn with_power(mut self, power: f64) -> Self {
        self.drive.power = power;
        self
    }

    pub fn with_mode(mut self, mode: DriveMode) -> Self {
        self.drive.mode = mode;
        self
    }

    pub fn with_couplings(mut self, g_omega: f64, g_kappa: f64) -> Self {
        self.g_omega = g_omega;
        self.g_kappa = g_kappa;
        self
    }
}
