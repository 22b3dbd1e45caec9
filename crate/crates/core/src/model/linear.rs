use alloc::format;

use super::params::PhysicalParams;
use super::steady::{solve_steady_state, OperatingPoint};
use crate::{Error, Result};

/// An operating point together with the mechanical constants: everything the
/// linearized fluctuation dynamics need.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LinearizedSystem {
    pub point: OperatingPoint,
    pub omega_m: f64,
    pub gamma_m: f64,
}

impl LinearizedSystem {
    pub fn new(point: OperatingPoint, omega_m: f64, gamma_m: f64) -> Result<Self> {
        if !(omega_m > 0.0 && gamma_m > 0.0) {
            return Err(Error::domain(format!(
                "omega_m and gamma_m must be positive, got {omega_m}, {gamma_m}"
            )));
        }
        Ok(Self {
            point,
            omega_m,
            gamma_m,
        })
    }

    /// Solves the steady state of `params` and linearizes around it.
    pub fn from_params(params: &PhysicalParams) -> Result<Self> {
        let point = solve_steady_state(params)?;
        Self::new(point, params.omega_m, params.gamma_m)
    }
}
