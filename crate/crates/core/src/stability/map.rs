use alloc::vec;
use alloc::vec::Vec;

use super::hurwitz::{routh_hurwitz_with, StabilityOptions, Verdict};
use crate::model::{DriveMode, LinearizedSystem, PhysicalParams};
use crate::{Error, Result};

/// Per-cell summary of a [`StabilityReport`](super::StabilityReport).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CellSummary {
    pub margin: f64,
    pub verdict: Verdict,
    pub rh_stable: bool,
    pub eig_stable: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "status", rename_all = "snake_case"))]
pub enum Cell {
    Linearized(CellSummary),
    /// No physical steady state at this drive.
    Unphysical,
}

impl Cell {
    pub fn is_unstable(&self) -> bool {
        matches!(self, Cell::Linearized(c) if c.verdict == Verdict::Unstable)
    }

    pub fn margin(&self) -> f64 {
        match self {
            Cell::Linearized(c) => c.margin,
            Cell::Unphysical => f64::NAN,
        }
    }
}

/// Stability over a (power, effective detuning) grid, stored power-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StabilityMap {
    pub powers: Vec<f64>,
    pub deltas: Vec<f64>,
    pub cells: Vec<Cell>,
}

impl StabilityMap {
    pub fn from_cells(powers: Vec<f64>, deltas: Vec<f64>, cells: Vec<Cell>) -> Result<Self> {
        if cells.len() != powers.len() * deltas.len() {
            return Err(Error::domain("cell count does not match grid shape"));
        }
        Ok(Self { powers, deltas, cells })
    }

    pub fn cell(&self, i_power: usize, i_delta: usize) -> &Cell {
        &self.cells[i_power * self.deltas.len() + i_delta]
    }

    /// Cells where the Routh-Hurwitz and eigenvalue verdicts disagree outside
    /// the marginal band.
    pub fn mismatches(&self) -> usize {
        self.cells
            .iter()
            .filter(|c| match c {
                Cell::Linearized(s) => s.verdict != Verdict::Marginal && s.rh_stable != s.eig_stable,
                Cell::Unphysical => false,
            })
            .count()
    }

    /// 4-connected components of unstable cells, each as `(i_power, i_delta)`
    /// indices in scan order.
    pub fn unstable_regions(&self) -> Vec<Vec<(usize, usize)>> {
        let (np, nd) = (self.powers.len(), self.deltas.len());
        let mut seen = vec![false; np * nd];
        let mut regions = Vec::new();
        for start in 0..np * nd {
            if seen[start] || !self.cells[start].is_unstable() {
                continue;
            }
            let mut region = Vec::new();
            let mut stack = vec![start];
            seen[start] = true;
            while let Some(idx) = stack.pop() {
                let (i, j) = (idx / nd, idx % nd);
                region.push((i, j));
                let mut visit = |ii: usize, jj: usize| {
                    let n = ii * nd + jj;
                    if !seen[n] && self.cells[n].is_unstable() {
                        seen[n] = true;
                        stack.push(n);
                    }
                };
                if i > 0 {
                    visit(i - 1, j);
                }
                if i + 1 < np {
                    visit(i + 1, j);
                }
                if j > 0 {
                    visit(i, j - 1);
                }
                if j + 1 < nd {
                    visit(i, j + 1);
                }
            }
            region.sort_unstable();
            regions.push(region);
        }
        regions
    }
}

/// Linearizes `params` at the given power and effective detuning and
/// summarizes its stability.
pub fn stability_cell(params: &PhysicalParams, power: f64, delta_s: f64, opts: &StabilityOptions) -> Cell {
    let p = params
        .with_power(power)
        .with_mode(DriveMode::ExplicitDetuning { delta_s });
    match LinearizedSystem::from_params(&p) {
        Ok(sys) => {
            let r = routh_hurwitz_with(&sys, opts);
            Cell::Linearized(CellSummary {
                margin: r.margin,
                verdict: r.verdict,
                rh_stable: r.rh_stable,
                eig_stable: r.eig_stable,
            })
        }
        Err(_) => Cell::Unphysical,
    }
}

/// Sequential map over `powers x deltas`; see the std crate for a parallel driver.
pub fn stability_map(params: &PhysicalParams, powers: &[f64], deltas: &[f64]) -> Result<StabilityMap> {
    if powers.iter().chain(deltas).any(|x| !x.is_finite()) {
        return Err(Error::domain("stability grids must be finite"));
    }
    let opts = StabilityOptions::default();
    let mut cells = Vec::with_capacity(powers.len() * deltas.len());
    for &p in powers {
        for &d in deltas {
            cells.push(stability_cell(params, p, d, &opts));
        }
    }
    StabilityMap::from_cells(powers.to_vec(), deltas.to_vec(), cells)
}
