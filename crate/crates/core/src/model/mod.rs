//! Physical parameters and the classical operating point of the driven cavity.
//!
//! The cavity resonance and linewidth are displaced by the static mechanical
//! displacement `Q_s`: `omega_c(Q) = omega_c - g_omega Q` and
//! `kappa(Q) = kappa - g_kappa Q`. The operating point is the self-consistent
//! solution of
//!
//! ```text
//! a_s = sqrt(2 kappa_s) E_l / (kappa_s + i Delta_s)
//! Q_s = (g_omega / omega_m - Delta_s g_kappa / (kappa_s omega_m)) |a_s|^2
//! ```
//!
//! and the enhanced couplings are `G = sqrt(2) a_s g`.

mod calibrate;
mod linear;
mod params;
mod steady;
mod thermal;

pub use calibrate::{calibrate_bare_couplings, Calibration, CalibrationReference};
pub use linear::LinearizedSystem;
pub use params::{DriveMode, DriveSpec, PhysicalParams, RegimeWarning};
pub use steady::{
    drive_amplitude, solve_steady_state, solve_steady_state_detuned,
    solve_steady_state_fixed_frequency, solve_steady_state_resonant, steady_state_residual,
    BranchSolution, MeanField, OperatingPoint,
};
pub use thermal::{occupancy_temperature, thermal_occupancy, ThermalEnvironment};
