use super::hurwitz::{routh_hurwitz_with, StabilityOptions, StabilityReport};
use crate::model::{LinearizedSystem, OperatingPoint, PhysicalParams};
use crate::{Error, Result};

const SCAN_POINTS: usize = 400;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum OnsetKind {
    /// The Routh-Hurwitz test fails.
    Dynamical,
    /// The steady state stops existing (e.g. `kappa_s` would turn negative).
    NoSteadyState,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CriticalPower {
    Onset {
        /// Smallest unstable power, bracketed to `rel_tol`.
        power: f64,
        /// Largest power known stable.
        last_stable: f64,
        kind: OnsetKind,
        /// Operating point just below onset.
        point: OperatingPoint,
    },
    StableUpToCap {
        cap: f64,
    },
}

impl CriticalPower {
    pub fn power(&self) -> Option<f64> {
        match self {
            CriticalPower::Onset { power, .. } => Some(*power),
            CriticalPower::StableUpToCap { .. } => None,
        }
    }
}

enum Probe {
    Stable(OperatingPoint),
    Unstable(OnsetKind),
}

fn probe(params: &PhysicalParams, power: f64, opts: &StabilityOptions) -> Result<Probe> {
    let p = params.with_power(power);
    match LinearizedSystem::from_params(&p) {
        Ok(sys) => {
            let r: StabilityReport = routh_hurwitz_with(&sys, opts);
            Ok(if r.rh_stable {
                Probe::Stable(sys.point)
            } else {
                Probe::Unstable(OnsetKind::Dynamical)
            })
        }
        Err(Error::Unphysical { .. }) => Ok(Probe::Unstable(OnsetKind::NoSteadyState)),
        Err(e) => Err(e),
    }
}

/// Smallest power at which `params` (with its own drive mode and laser
/// setting) loses stability, searched on `[0, cap]`.
///
/// A uniform scan locates the first unstable sample; bisection then narrows
/// the bracket to relative width `rel_tol`.
pub fn critical_power(params: &PhysicalParams, cap: f64, rel_tol: f64) -> Result<CriticalPower> {
    if !(cap > 0.0 && cap.is_finite()) {
        return Err(Error::domain("power cap must be positive and finite"));
    }
    let opts = StabilityOptions::default();
    let Probe::Stable(mut below_point) = probe(params, 0.0, &opts)? else {
        return Err(Error::precondition("system is not stable at zero power"));
    };
    let mut lo = 0.0;
    let mut hit = None;
    for i in 1..=SCAN_POINTS {
        let p = cap * i as f64 / SCAN_POINTS as f64;
        match probe(params, p, &opts)? {
            Probe::Stable(pt) => {
                lo = p;
                below_point = pt;
            }
            Probe::Unstable(kind) => {
                hit = Some((p, kind));
                break;
            }
        }
    }
    let Some((mut hi, mut kind)) = hit else {
        return Ok(CriticalPower::StableUpToCap { cap });
    };
    while (hi - lo) > rel_tol * hi {
        let mid = 0.5 * (lo + hi);
        match probe(params, mid, &opts)? {
            Probe::Stable(pt) => {
                lo = mid;
                below_point = pt;
            }
            Probe::Unstable(k) => {
                hi = mid;
                kind = k;
            }
        }
    }
    Ok(CriticalPower::Onset {
        power: hi,
        last_stable: lo,
        kind,
        point: below_point,
    })
}
