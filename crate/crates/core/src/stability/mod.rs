//! Linear stability of the operating point.
//!
//! The drift matrix of `(X, Y, Q_1, P_1)` is tested two ways: the
//! Routh-Hurwitz conditions on closed-form characteristic coefficients, and the
//! sign of the largest eigenvalue real part. [`quartic`] provides a third,
//! independent route to the eigenvalues for cross-checks.

mod critical;
mod drift;
mod hurwitz;
mod map;
pub mod quartic;

pub use critical::{critical_power, CriticalPower, OnsetKind};
pub use drift::{build_drift_matrix, DriftForm, DriftMatrix};
pub use hurwitz::{
    hurwitz_coefficients, hurwitz_determinants, rh_criterion, routh_hurwitz, routh_hurwitz_with,
    StabilityOptions, StabilityReport, Verdict,
};
pub use map::{stability_cell, stability_map, Cell, CellSummary, StabilityMap};
