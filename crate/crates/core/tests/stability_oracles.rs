use std::f64::consts::PI;

use ponderomotive_core::model::{LinearizedSystem, OperatingPoint};
use ponderomotive_core::stability::{
    build_drift_matrix, hurwitz_coefficients, quartic::quartic_roots, routh_hurwitz, Verdict,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const DRAWS: usize = 10_000;

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.random_range(lo.ln()..hi.ln())).exp()
}

/// Random operating point over a physically sane box: unresolved and
/// resolved sideband, couplings from negligible to strong, detuning on both
/// sides of resonance.
fn draw(rng: &mut ChaCha8Rng, dissipative: bool) -> LinearizedSystem {
    let tp = 2.0 * PI;
    let kappa = log_uniform(rng, tp * 1e4, tp * 1e7);
    let omega_m = log_uniform(rng, tp * 1e3, tp * 1e6);
    let gamma_m = log_uniform(rng, tp * 1e-2, tp * 1e2).min(0.1 * omega_m);
    let gw = log_uniform(rng, tp * 1e2, tp * 1e6);
    let gk = if dissipative { log_uniform(rng, tp * 1e2, tp * 1e6) } else { 0.0 };
    let delta = rng.random_range(-3.0..3.0) * omega_m * log_uniform(rng, 1e-2, 10.0);
    let op = OperatingPoint::from_enhanced_detuned(kappa, delta, gw, gk).unwrap();
    LinearizedSystem::new(op, omega_m, gamma_m).unwrap()
}

#[test]
fn routh_hurwitz_matches_eigenvalues_on_random_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut compared, mut mismatched, mut unstable) = (0, 0, 0);
    for _ in 0..DRAWS {
        let sys = draw(&mut rng, true);
        let r = routh_hurwitz(&sys);
        if r.verdict == Verdict::Marginal {
            continue;
        }
        compared += 1;
        unstable += usize::from(!r.eig_stable);
        mismatched += usize::from(r.rh_stable != r.eig_stable);
    }
    assert!(compared > DRAWS * 9 / 10);
    assert!(unstable > 100 && unstable < compared - 100, "draws should straddle the boundary");
    assert_eq!(mismatched, 0);
}

#[test]
fn closed_form_coefficients_match_characteristic_polynomial() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..DRAWS {
        let sys = draw(&mut rng, true);
        let h = hurwitz_coefficients(&sys);
        let c = build_drift_matrix(&sys).characteristic_coefficients();
        for i in 0..4 {
            let rel = (h[i] - c[i]).abs() / h[i].abs().max(c[i].abs());
            assert!(rel < 1e-8, "h{} {} vs {} (rel {rel:e})", i + 1, h[i], c[i]);
        }
    }
}

#[test]
fn quartic_oracle_matches_dense_eigensolver() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..DRAWS {
        let sys = draw(&mut rng, true);
        let dm = build_drift_matrix(&sys);
        let dense = dm.eigenvalues();
        let poly = quartic_roots(&dm.characteristic_coefficients());
        let scale = dense.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for z in dense {
            let nearest = poly.iter().map(|p| (p - z).norm()).fold(f64::INFINITY, f64::min);
            assert!(nearest <= 1e-8 * scale, "{z} missing from {poly:?}");
        }
    }
}

/// Dispersive-only stability conditions written out independently of the
/// drift-matrix coefficients.
fn dispersive_stable(sys: &LinearizedSystem) -> bool {
    let (k, d, w, g) = (sys.point.kappa_s, sys.point.delta_s, sys.omega_m, sys.gamma_m);
    let gg = sys.point.coupling_dispersive.norm_sqr();
    let s1 = 2.0 * g * k
        * ((k * k + (w - d) * (w - d)) * (k * k + (w + d) * (w + d))
            + g * ((g + 2.0 * k) * (k * k + d * d) + 2.0 * k * w * w))
        + d * w * gg * (g + 2.0 * k) * (g + 2.0 * k);
    let s2 = w * (k * k + d * d) - gg * d;
    s1 > 0.0 && s2 > 0.0
}

#[test]
fn dissipative_coupling_off_reduces_to_dispersive_conditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut unstable = 0;
    for _ in 0..DRAWS {
        let sys = draw(&mut rng, false);
        let r = routh_hurwitz(&sys);
        if r.verdict == Verdict::Marginal {
            continue;
        }
        unstable += usize::from(!r.rh_stable);
        assert_eq!(r.rh_stable, dispersive_stable(&sys), "{sys:?}");
        assert_eq!(r.eig_stable, dispersive_stable(&sys));
    }
    assert!(unstable > 100);
}

#[test]
fn margin_sign_changes_coincide_with_verdict_flips() {
    let tp = 2.0 * PI;
    let (k, wm, g) = (tp * 1.5e6, tp * 136e3, tp * 0.23);
    let mut last: Option<(f64, bool)> = None;
    for i in 0..=2000 {
        let delta = -2.0 * wm + 4.0 * wm * i as f64 / 2000.0;
        let op = OperatingPoint::from_enhanced_detuned(k, delta, tp * 200e3, tp * 40e3).unwrap();
        let r = routh_hurwitz(&LinearizedSystem::new(op, wm, g).unwrap());
        if let Some((m, s)) = last {
            if (m < 0.0) != (r.margin < 0.0) {
                assert_ne!(s, r.rh_stable);
            }
            // Continuity: adjacent samples differ by far less than kappa_s.
            assert!((r.margin - m).abs() < 1e-2 * k);
        }
        last = Some((r.margin, r.rh_stable));
    }
}
