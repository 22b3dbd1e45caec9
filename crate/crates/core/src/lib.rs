//! Linearized theory of ponderomotive squeezing in optomechanical cavities with
//! combined dispersive and dissipative coupling.
//!
//! The crate is `no_std` (it needs `alloc`). Everything here is a pure function
//! of its inputs: steady states ([`model`]), homodyne output spectra computed
//! both exactly and from closed-form approximants ([`spectra`]), and linear
//! stability through Routh-Hurwitz with an eigenvalue cross-check
//! ([`stability`]).
//!
//! All rates and frequencies are angular (rad/s). Conversion to ordinary
//! frequency happens at the IO boundary.

#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod constants;
mod error;
pub(crate) mod math;
pub mod model;
pub mod spectra;
pub mod stability;

pub use error::{Error, Result};
pub use num_complex::Complex64;
