//! Homodyne output noise spectra.
//!
//! [`exact_spectrum`] solves the full linearized Langevin system in the
//! frequency domain and works at any detuning. The closed forms
//! ([`closed_form_diss`], [`closed_form_disp`], [`closed_form_comb`]) are the
//! unresolved-sideband approximants at `Delta_s = 0`. Every method can be
//! written as a quadratic form in the homodyne angle ([`QuadratureSpectrum`]),
//! so angle optimization is closed form.

mod closed;
mod equal;
mod exact;
mod map;
mod method;
mod optimum;
mod quadrature;
mod susceptibility;

pub use closed::{
    closed_form_comb, closed_form_comb_quadratures, closed_form_diss, closed_form_diss_quadratures,
    closed_form_disp, closed_form_disp_quadratures, combined_rates,
};
pub use equal::{equal_magnitude_condition, EqualMagnitudeReport};
pub use exact::{exact_quadratures, exact_spectrum, transfer_set, TransferSet};
pub use map::{default_omega_grid, densified_offsets, spectrum_column, spectrum_map, SpectrumResult};
pub use method::Method;
pub use optimum::{
    combined_optimum, depth_db, optimal_analytic, optimal_numeric, single_coupling_optimum, OptimalSqueezing,
    Regime,
};
pub use quadrature::QuadratureSpectrum;
pub use susceptibility::{mech_susceptibility, Susceptibility};

#[cfg(test)]
mod tests;
