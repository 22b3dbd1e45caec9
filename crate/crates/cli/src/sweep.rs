//! Data-parallel drivers. Results are collected in grid order, so output does
//! not depend on scheduling.

use ponderomotive_core::model::{LinearizedSystem, PhysicalParams, ThermalEnvironment};
use ponderomotive_core::spectra::{spectrum_column, Method, SpectrumResult};
use ponderomotive_core::stability::{stability_cell, StabilityMap, StabilityOptions};
use rayon::prelude::*;

use crate::error::Result;

pub fn spectrum_map(
    sys: &LinearizedSystem,
    env: &ThermalEnvironment,
    method: Method,
    omega_grid: &[f64],
    theta_grid: &[f64],
) -> Result<SpectrumResult> {
    let columns = omega_grid
        .par_iter()
        .map(|&w| spectrum_column(sys, env, method, w, theta_grid))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SpectrumResult::from_columns(
        sys,
        env,
        method,
        omega_grid.to_vec(),
        theta_grid.to_vec(),
        &columns,
    )?)
}

pub fn stability_map(params: &PhysicalParams, powers: &[f64], deltas: &[f64]) -> Result<StabilityMap> {
    let opts = StabilityOptions::default();
    let nd = deltas.len();
    let cells = (0..powers.len() * nd)
        .into_par_iter()
        .map(|idx| stability_cell(params, powers[idx / nd], deltas[idx % nd], &opts))
        .collect();
    Ok(StabilityMap::from_cells(powers.to_vec(), deltas.to_vec(), cells)?)
}
