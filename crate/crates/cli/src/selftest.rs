//! Oracle suites: closed-form spectra against the exact solver, and the
//! Routh-Hurwitz test against two independent eigenvalue routes.

use std::f64::consts::PI;

use ponderomotive_core::constants::hz;
use ponderomotive_core::model::{LinearizedSystem, OperatingPoint, ThermalEnvironment};
use ponderomotive_core::spectra::{exact_quadratures, Method};
use ponderomotive_core::stability::{
    build_drift_matrix, hurwitz_coefficients, quartic::quartic_roots, routh_hurwitz, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::config::linspace;
use crate::error::Result;
use crate::presets::{enhanced_system, OMEGA_M_HZ, REFERENCE_G_KAPPA_HZ, REFERENCE_G_OMEGA_HZ, STRONG_G_KAPPA_HZ};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    pub fn line(&self) -> String {
        format!("{} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

/// Random linearized system, log-uniform over sideband ratios, couplings and
/// detunings on both sides of resonance.
pub fn random_system(rng: &mut ChaCha8Rng, dissipative: bool) -> LinearizedSystem {
    let kappa = log_uniform(rng, hz(1e4), hz(1e7));
    let omega_m = log_uniform(rng, hz(1e3), hz(1e6));
    let gamma_m = log_uniform(rng, hz(1e-2), hz(1e2)).min(0.1 * omega_m);
    let gw = log_uniform(rng, hz(1e2), hz(1e6));
    let gk = if dissipative { log_uniform(rng, hz(1e2), hz(1e6)) } else { 0.0 };
    let delta = rng.random_range(-3.0..3.0) * omega_m * log_uniform(rng, 1e-2, 10.0);
    let op = OperatingPoint::from_enhanced_detuned(kappa, delta, gw, gk).expect("finite draw");
    LinearizedSystem::new(op, omega_m, gamma_m).expect("positive mechanics")
}

/// Draws `n` systems from a seeded stream, splitting it per index so the
/// result does not depend on thread count.
pub fn random_systems(seed: u64, n: usize, dissipative: bool) -> Vec<LinearizedSystem> {
    (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            random_system(&mut rng, dissipative)
        })
        .collect()
}

/// Largest `|S_exact - S_closed| / S_exact` over `omega_m +- half_width_hz`
/// and `theta in [0, pi]`.
pub fn closed_form_deviation(
    sys: &LinearizedSystem,
    env: &ThermalEnvironment,
    half_width_hz: f64,
    n_omega: usize,
    n_theta: usize,
) -> Result<f64> {
    let closed = Method::closed_for(sys)?;
    let thetas = linspace(0.0, PI, n_theta);
    let devs = linspace(-half_width_hz, half_width_hz, n_omega)
        .into_par_iter()
        .map(|off| -> Result<f64> {
            let w = sys.omega_m + hz(off);
            let e = exact_quadratures(sys, env, w)?;
            let c = closed.quadratures(sys, env, w)?;
            Ok(thetas.iter().map(|&t| ((e.at(t) - c.at(t)) / e.at(t)).abs()).fold(0.0, f64::max))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(devs.into_iter().fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleTally {
    pub draws: usize,
    pub compared: usize,
    pub mismatched: usize,
    pub unstable: usize,
}

/// Routh-Hurwitz verdict against the sign of the largest eigenvalue real part.
pub fn rh_versus_eigenvalues(seed: u64, draws: usize, dissipative: bool) -> OracleTally {
    let reports: Vec<_> = random_systems(seed, draws, dissipative).par_iter().map(routh_hurwitz).collect();
    let live: Vec<_> = reports.iter().filter(|r| r.verdict != Verdict::Marginal).collect();
    OracleTally {
        draws,
        compared: live.len(),
        mismatched: live.iter().filter(|r| r.rh_stable != r.eig_stable).count(),
        unstable: live.iter().filter(|r| !r.eig_stable).count(),
    }
}

/// Largest relative difference between the closed-form coefficients and the
/// numerically expanded characteristic polynomial.
pub fn coefficient_deviation(seed: u64, draws: usize) -> f64 {
    random_systems(seed, draws, true)
        .par_iter()
        .map(|sys| {
            let h = hurwitz_coefficients(sys);
            let c = build_drift_matrix(sys).characteristic_coefficients();
            (0..4)
                .map(|i| (h[i] - c[i]).abs() / h[i].abs().max(c[i].abs()))
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

/// Largest distance from a dense-solver eigenvalue to the nearest quartic root,
/// relative to the spectral radius.
pub fn quartic_deviation(seed: u64, draws: usize) -> f64 {
    random_systems(seed, draws, true)
        .par_iter()
        .map(|sys| {
            let dm = build_drift_matrix(sys);
            let dense = dm.eigenvalues();
            let poly = quartic_roots(&dm.characteristic_coefficients());
            let radius = dense.iter().map(|z| z.norm()).fold(0.0, f64::max);
            dense
                .iter()
                .map(|z| poly.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min) / radius)
                .fold(0.0, f64::max)
        })
        .reduce(|| 0.0, f64::max)
}

pub fn run(seed: u64, draws: usize) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let env = ThermalEnvironment::ZERO;

    let floor = enhanced_system(0.0, 0.0, 0.0);
    let q = exact_quadratures(&floor, &env, hz(OMEGA_M_HZ))?;
    let dev = [q.xx - 0.5, q.yy - 0.5, q.xy].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    checks.push(Check {
        name: "shot-noise floor".into(),
        passed: dev <= 4.0 * f64::EPSILON,
        detail: format!("max |S - 1/2| = {dev:e}"),
    });

    for (name, gw, gk) in [
        ("closed vs exact, dispersive", REFERENCE_G_OMEGA_HZ, 0.0),
        ("closed vs exact, dissipative", 0.0, STRONG_G_KAPPA_HZ),
        ("closed vs exact, combined", REFERENCE_G_OMEGA_HZ, REFERENCE_G_KAPPA_HZ),
    ] {
        let d = closed_form_deviation(&enhanced_system(gw, gk, 0.0), &env, 100.0, 401, 181)?;
        checks.push(Check {
            name: name.into(),
            passed: d <= 0.1,
            detail: format!("max relative deviation {d:.4} over +-100 Hz (limit 0.1)"),
        });
    }

    let t = rh_versus_eigenvalues(seed, draws, true);
    checks.push(Check {
        name: "routh-hurwitz vs eigenvalues".into(),
        passed: t.mismatched == 0 && t.compared > 0,
        detail: format!(
            "{} mismatches in {} non-marginal draws ({} unstable)",
            t.mismatched, t.compared, t.unstable
        ),
    });
    let t = rh_versus_eigenvalues(seed.wrapping_add(1), draws, false);
    checks.push(Check {
        name: "routh-hurwitz vs eigenvalues, dispersive only".into(),
        passed: t.mismatched == 0 && t.compared > 0,
        detail: format!("{} mismatches in {} non-marginal draws", t.mismatched, t.compared),
    });
    let d = coefficient_deviation(seed.wrapping_add(2), draws);
    checks.push(Check {
        name: "closed-form coefficients vs expansion".into(),
        passed: d <= 1e-8,
        detail: format!("max relative deviation {d:e} (limit 1e-8)"),
    });
    let d = quartic_deviation(seed.wrapping_add(3), draws);
    checks.push(Check {
        name: "quartic roots vs dense eigensolver".into(),
        passed: d <= 1e-8,
        detail: format!("max relative distance {d:e} (limit 1e-8)"),
    });
    Ok(checks)
}
