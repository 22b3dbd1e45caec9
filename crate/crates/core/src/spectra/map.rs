use alloc::vec::Vec;

use super::method::Method;
use super::optimum::depth_db;
use crate::constants::hz;
use crate::math::powf;
use crate::model::{LinearizedSystem, OperatingPoint, ThermalEnvironment};
use crate::{Error, Result};

/// Offsets from resonance, log-spaced over `[min_offset, max_offset]` on each
/// side plus zero, ascending.
pub fn densified_offsets(min_offset: f64, max_offset: f64, per_side: usize) -> Result<Vec<f64>> {
    if !(min_offset > 0.0 && max_offset > min_offset && max_offset.is_finite()) || per_side < 2 {
        return Err(Error::domain("densified grid needs 0 < min < max and at least 2 points per side"));
    }
    let ratio = max_offset / min_offset;
    let side: Vec<f64> = (0..per_side)
        .map(|i| min_offset * powf(ratio, i as f64 / (per_side - 1) as f64))
        .collect();
    let mut out = Vec::with_capacity(2 * per_side + 1);
    out.extend(side.iter().rev().map(|x| -x));
    out.push(0.0);
    out.extend(side.iter().copied());
    Ok(out)
}

/// `omega_m + 2 pi x [-10 kHz .. -0.01 Hz, 0, 0.01 Hz .. 10 kHz]`, 2001 points.
pub fn default_omega_grid(omega_m: f64) -> Vec<f64> {
    densified_offsets(hz(0.01), hz(1e4), 1000)
        .expect("static grid parameters are valid")
        .into_iter()
        .map(|d| omega_m + d)
        .collect()
}

/// `S_theta(omega)` on a grid, stored theta-major (`s[i_theta * n_omega + i_omega]`).
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpectrumResult {
    pub omega_grid: Vec<f64>,
    pub theta_grid: Vec<f64>,
    pub s: Vec<f64>,
    pub depth_db: Vec<f64>,
    pub method: Method,
    pub point: OperatingPoint,
    pub omega_m: f64,
    pub n_th: f64,
}

impl SpectrumResult {
    /// Assembles a result from per-frequency columns (one value per angle).
    pub fn from_columns(
        sys: &LinearizedSystem,
        env: &ThermalEnvironment,
        method: Method,
        omega_grid: Vec<f64>,
        theta_grid: Vec<f64>,
        columns: &[Vec<f64>],
    ) -> Result<Self> {
        let (nw, nt) = (omega_grid.len(), theta_grid.len());
        if columns.len() != nw || columns.iter().any(|c| c.len() != nt) {
            return Err(Error::domain("spectrum columns do not match grid shape"));
        }
        let mut s = Vec::with_capacity(nw * nt);
        for it in 0..nt {
            s.extend(columns.iter().map(|c| c[it]));
        }
        let depth_db = s.iter().map(|&x| depth_db(x)).collect();
        Ok(Self {
            omega_grid,
            theta_grid,
            s,
            depth_db,
            method,
            point: sys.point,
            omega_m: sys.omega_m,
            n_th: env.n_th,
        })
    }

    pub fn index(&self, i_theta: usize, i_omega: usize) -> usize {
        i_theta * self.omega_grid.len() + i_omega
    }

    pub fn max_depth_db(&self) -> f64 {
        self.depth_db.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `S` for every angle of `theta_grid` at one frequency.
pub fn spectrum_column(
    sys: &LinearizedSystem,
    env: &ThermalEnvironment,
    method: Method,
    omega: f64,
    theta_grid: &[f64],
) -> Result<Vec<f64>> {
    let q = method.quadratures(sys, env, omega)?;
    Ok(theta_grid.iter().map(|&t| q.at(t)).collect())
}

/// Sequential map over `theta_grid x omega_grid`; the std crate has a parallel driver.
pub fn spectrum_map(
    sys: &LinearizedSystem,
    env: &ThermalEnvironment,
    method: Method,
    omega_grid: &[f64],
    theta_grid: &[f64],
) -> Result<SpectrumResult> {
    if omega_grid.iter().chain(theta_grid).any(|x| !x.is_finite()) {
        return Err(Error::domain("spectrum grids must be finite"));
    }
    let columns = omega_grid
        .iter()
        .map(|&w| spectrum_column(sys, env, method, w, theta_grid))
        .collect::<Result<Vec<_>>>()?;
    SpectrumResult::from_columns(sys, env, method, omega_grid.to_vec(), theta_grid.to_vec(), &columns)
}
