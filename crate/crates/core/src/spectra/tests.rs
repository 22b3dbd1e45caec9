use super::*;
use crate::constants::hz;
use crate::model::{LinearizedSystem, OperatingPoint, ThermalEnvironment};
use core::f64::consts::PI;

const KAPPA_S: f64 = 2.0 * PI * 1.5e6;
const OMEGA_M: f64 = 2.0 * PI * 136e3;
const GAMMA_M: f64 = 2.0 * PI * 0.23;

fn system(gw: f64, gk: f64, delta: f64) -> LinearizedSystem {
    let op = OperatingPoint::from_enhanced_detuned(KAPPA_S, delta, gw, gk).unwrap();
    LinearizedSystem::new(op, OMEGA_M, GAMMA_M).unwrap()
}

fn vacuum() -> ThermalEnvironment {
    ThermalEnvironment::ZERO
}

fn grid() -> alloc::vec::Vec<f64> {
    default_omega_grid(OMEGA_M)
}

#[test]
fn exact_shot_noise_floor() {
    let sys = system(0.0, 0.0, hz(3e4));
    for &w in &[0.0, OMEGA_M, 3.0 * OMEGA_M] {
        let q = exact_quadratures(&sys, &vacuum(), w).unwrap();
        assert!((q.xx - 0.5).abs() < 1e-15 && (q.yy - 0.5).abs() < 1e-15 && q.xy.abs() < 1e-15);
    }
}

#[test]
fn dissipative_output_phase_quadrature_is_nearly_vacuum() {
    let sys = system(0.0, hz(150e3), 0.0);
    for off in [-100.0, -2.0, 0.0, 2.0, 100.0] {
        let s = exact_spectrum(&sys, &vacuum(), PI / 2.0, OMEGA_M + hz(off)).unwrap();
        assert!((s - 0.5).abs() < 0.5 * 0.1, "{s}");
    }
}

#[test]
fn closed_diss_examples() {
    let sys = system(0.0, hz(150e3), 0.0);
    let env = vacuum();
    assert!((closed_form_diss(&sys, &env, PI / 2.0, OMEGA_M + 3.0).unwrap() - 0.5).abs() < 1e-12);
    let a = hz(150e3).powi(2) * OMEGA_M.powi(2) / (4.0 * KAPPA_S.powi(3));
    let expected = 0.5 + a * (a + GAMMA_M) / (GAMMA_M * GAMMA_M);
    let s = closed_form_diss(&sys, &env, PI / 4.0, OMEGA_M).unwrap();
    approx::assert_relative_eq!(s, expected, max_relative = 1e-12);
    assert!(s > 0.5);
}

#[test]
fn closed_disp_vanishes_at_zero_angle() {
    let sys = system(hz(75e3), 0.0, 0.0);
    assert!((closed_form_disp(&sys, &vacuum(), 0.0, OMEGA_M + 25.0).unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn closed_forms_refuse_wrong_regime() {
    let env = vacuum();
    let comb = system(hz(75e3), hz(15e3), 0.0);
    assert!(matches!(closed_form_diss(&comb, &env, 0.1, OMEGA_M), Err(crate::Error::Precondition(_))));
    assert!(matches!(closed_form_disp(&comb, &env, 0.1, OMEGA_M), Err(crate::Error::Precondition(_))));
    let detuned = system(hz(75e3), hz(15e3), -hz(20e3));
    assert!(closed_form_comb(&detuned, &env, 0.1, OMEGA_M).is_err());
    assert!(Method::closed_for(&detuned).is_err());
    assert_eq!(Method::closed_for(&comb).unwrap(), Method::ClosedFormComb);
}

#[test]
fn combined_reduces_to_dispersive() {
    let sys = system(hz(75e3), 0.0, 0.0);
    let env = ThermalEnvironment::from_occupancy(10.0).unwrap();
    for off in [-300.0, -20.0, 0.5, 20.0, 300.0] {
        let w = OMEGA_M + hz(off);
        for th in [0.0, 0.003, 0.4, 1.3, 2.9] {
            let a = closed_form_comb(&sys, &env, th, w).unwrap();
            let b = closed_form_disp(&sys, &env, th, w).unwrap();
            approx::assert_relative_eq!(a, b, max_relative = 1e-12);
        }
    }
}

#[test]
fn combined_reduces_to_dissipative_at_resonance() {
    let sys = system(0.0, hz(150e3), 0.0);
    let env = vacuum();
    for th in [0.0, 0.3, 1.5, 2.2] {
        let a = closed_form_comb(&sys, &env, th, OMEGA_M).unwrap();
        let b = closed_form_diss(&sys, &env, th, OMEGA_M).unwrap();
        approx::assert_relative_eq!(a, b, max_relative = 1e-12);
    }
}

#[test]
fn analytic_dissipative_optimum() {
    let sys = system(0.0, hz(150e3), 0.0);
    let o = optimal_analytic(&sys, &vacuum(), Regime::Dissipative).unwrap();
    assert!((o.s_opt - 7.3e-3).abs() < 0.1e-3, "{}", o.s_opt);
    assert!((o.depth_db - 18.3).abs() < 0.1);
    assert!(o.omega_opt < OMEGA_M);
}

#[test]
fn analytic_dispersive_optimum() {
    let sys = system(hz(75e3), 0.0, 0.0);
    let o = optimal_analytic(&sys, &vacuum(), Regime::Dispersive).unwrap();
    assert!((o.s_opt - 6.1e-5).abs() < 0.1e-5, "{}", o.s_opt);
    assert!((o.depth_db - 39.1).abs() < 0.1);
    let b = hz(75e3).powi(2) / KAPPA_S;
    let target = (b + GAMMA_M) * GAMMA_M / 2.0 + GAMMA_M * GAMMA_M / 4.0;
    approx::assert_relative_eq!((o.omega_opt - OMEGA_M).powi(2), target, max_relative = 1e-9);
}

#[test]
fn analytic_angles_approach_limits() {
    let env = vacuum();
    let disp = optimal_analytic(&system(hz(2e6), 0.0, 0.0), &env, Regime::Dispersive).unwrap();
    assert!(disp.theta_opt < 1e-3);
    let diss = optimal_analytic(&system(0.0, hz(5e6), 0.0), &env, Regime::Dissipative).unwrap();
    assert!(PI / 2.0 - diss.theta_opt < 5e-3);
}

#[test]
fn numeric_optimum_is_below_every_grid_sample() {
    let sys = system(hz(75e3), hz(15e3), 0.0);
    let env = vacuum();
    let g = grid();
    let thetas: alloc::vec::Vec<f64> = (0..180).map(|i| i as f64 * PI / 180.0).collect();
    let o = optimal_numeric(&sys, &env, Method::Exact, (0.0, PI), &g).unwrap();
    let map = spectrum_map(&sys, &env, Method::Exact, &g, &thetas).unwrap();
    assert!(map.s.iter().all(|&s| s >= o.s_opt));
}

#[test]
fn numeric_flat_without_coupling() {
    let sys = system(0.0, 0.0, 0.0);
    let o = optimal_numeric(&sys, &vacuum(), Method::Exact, (0.0, PI), &grid()).unwrap();
    assert!((o.s_opt - 0.5).abs() < 1e-15);
}

#[test]
fn numeric_rejects_empty_ranges() {
    let sys = system(0.0, 0.0, 0.0);
    assert!(matches!(
        optimal_numeric(&sys, &vacuum(), Method::Exact, (0.0, PI), &[]),
        Err(crate::Error::Domain(_))
    ));
    assert!(optimal_numeric(&sys, &vacuum(), Method::Exact, (1.0, 0.0), &grid()).is_err());
}

#[test]
fn exact_dissipative_dip_near_two_hertz_off_resonance() {
    let sys = system(0.0, hz(150e3), 0.0);
    let first = optimal_numeric(&sys, &vacuum(), Method::Exact, (0.0, PI / 2.0), &grid()).unwrap();
    let off = (first.omega_opt - OMEGA_M) / (2.0 * PI);
    assert!(first.depth_db > 17.0 && first.depth_db < 21.0, "{}", first.depth_db);
    assert!(off < 0.0 && off > -4.0, "{off}");
    // The mirror branch above resonance is degenerate to a few 1e-4 dB.
    let mirror = optimal_numeric(&sys, &vacuum(), Method::Exact, (PI / 2.0, PI), &grid()).unwrap();
    assert!((mirror.depth_db - first.depth_db).abs() < 1e-2);
    assert!(mirror.omega_opt > OMEGA_M);
}

#[test]
fn equal_magnitude_factor_two() {
    let sys = system(hz(75e3), 0.0, 0.0);
    for n in [0.0, 1000.0] {
        let r = equal_magnitude_condition(&sys, &ThermalEnvironment::from_occupancy(n).unwrap());
        assert!(r.residual_derived < 1e-10);
        assert!(r.residual_stated > 1e-3);
    }
    let r = equal_magnitude_condition(&system(0.0, 0.0, 0.0), &vacuum());
    assert_eq!((r.s_disp, r.s_diss_derived), (0.5, 0.5));
}

#[test]
fn densified_grid_shape() {
    let g = grid();
    assert_eq!(g.len(), 2001);
    assert!(g.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(g[1000], OMEGA_M);
    approx::assert_relative_eq!(g[2000] - OMEGA_M, hz(1e4), max_relative = 1e-12);
}

