use std::f64::consts::PI;

use ponderomotive_core::constants::{laser_angular_frequency, DEFAULT_WAVELENGTH};
use ponderomotive_core::model::{
    calibrate_bare_couplings, occupancy_temperature, solve_steady_state, solve_steady_state_fixed_frequency,
    steady_state_residual, thermal_occupancy, CalibrationReference, DriveMode, DriveSpec, PhysicalParams,
};
use proptest::prelude::*;

const TP: f64 = 2.0 * PI;

fn calibrated(gw_hz: f64, gk_hz: f64) -> PhysicalParams {
    let omega_l = laser_angular_frequency(DEFAULT_WAVELENGTH);
    let c = calibrate_bare_couplings(&CalibrationReference {
        power: 40e-3,
        coupling_dispersive: TP * gw_hz,
        coupling_dissipative: TP * gk_hz,
        kappa_s: TP * 1.5e6,
        delta_s: 0.0,
        omega_l,
        omega_m: TP * 136e3,
    })
    .unwrap();
    PhysicalParams {
        kappa: c.kappa,
        omega_m: TP * 136e3,
        gamma_m: TP * 0.23,
        g_omega: c.g_omega,
        g_kappa: c.g_kappa,
        omega_l,
        drive: DriveSpec {
            power: 40e-3,
            mode: DriveMode::ResonantLocked,
        },
    }
}

proptest! {
    #[test]
    fn occupancy_and_temperature_are_inverse(t in -4.0f64..3.0, fm in 3.0f64..7.0) {
        let (t, w) = (10f64.powf(t), TP * 10f64.powf(fm));
        let n = thermal_occupancy(t, w);
        prop_assume!(n > 1e-200);
        let back = occupancy_temperature(n, w).unwrap();
        prop_assert!((back - t).abs() <= 1e-12 * t, "{} -> {} -> {}", t, n, back);
    }

    #[test]
    fn resonant_points_are_real_and_consistent(p in 0.0f64..0.5, gw in 0.0f64..150e3, gk in 0.0f64..60e3) {
        let params = calibrated(75e3, 15e3).with_couplings(0.0, 0.0);
        let base = calibrated(gw.max(1.0), gk.max(1.0));
        let params = params.with_couplings(base.g_omega, base.g_kappa).with_power(p);
        let op = solve_steady_state(&params).unwrap();
        let mf = op.mean_field.unwrap();
        prop_assert_eq!(op.delta_s, 0.0);
        prop_assert_eq!(mf.a_s.im, 0.0);
        prop_assert_eq!(op.coupling_dispersive.im, 0.0);
        prop_assert_eq!(op.coupling_dissipative.im, 0.0);
        prop_assert_eq!(op.coupling_dispersive, mf.a_s * (std::f64::consts::SQRT_2 * params.g_omega));
        prop_assert_eq!(op.coupling_dissipative, mf.a_s * (std::f64::consts::SQRT_2 * params.g_kappa));
        prop_assert!(steady_state_residual(&params, &op) < 1e-10);
    }

    #[test]
    fn detuned_points_satisfy_steady_state(p in 0.0f64..0.25, d in -1.5f64..1.5) {
        let params = calibrated(75e3, 15e3)
            .with_power(p)
            .with_mode(DriveMode::ExplicitDetuning { delta_s: d * TP * 136e3 });
        if let Ok(op) = solve_steady_state(&params) {
            prop_assert!(op.kappa_s > 0.0);
            prop_assert!(steady_state_residual(&params, &op) < 1e-10);
            let a = op.mean_field.unwrap().a_s;
            let g = op.coupling_dispersive - a * (std::f64::consts::SQRT_2 * params.g_omega);
            prop_assert!(g.norm() <= 1e-12 * op.coupling_dispersive.norm().max(1e-300));
        }
    }
}

#[test]
fn fixed_frequency_branch_is_continuous() {
    let params = calibrated(75e3, 15e3).with_mode(DriveMode::FixedFrequency { bare_detuning: 0.0 });
    let steps = 400;
    let dp = 0.2 / steps as f64;
    let mut prev: Vec<(f64, f64, f64)> = Vec::new();
    for i in 0..=steps {
        let op = solve_steady_state_fixed_frequency(&params.with_power(i as f64 * dp)).unwrap().point;
        let q = op.mean_field.unwrap().q_s;
        let cur = (q, op.kappa_s, op.delta_s);
        if prev.len() >= 2 {
            let (a, b) = (prev[prev.len() - 2], prev[prev.len() - 1]);
            for (x0, x1, x2) in [(a.0, b.0, cur.0), (a.1, b.1, cur.1), (a.2, b.2, cur.2)] {
                let secant = (x1 - x0).abs();
                assert!((x2 - x1).abs() <= 10.0 * secant + 1e-9 * x1.abs(), "jump at step {i}");
            }
        }
        prev.push(cur);
    }
}

#[test]
fn dispersive_spring_without_dissipative_coupling() {
    let base = calibrated(75e3, 15e3).with_mode(DriveMode::FixedFrequency { bare_detuning: 0.0 });
    let spring = solve_steady_state(&base.with_couplings(base.g_omega, 0.0)).unwrap();
    assert!(spring.delta_s < 0.0);
    let none = solve_steady_state(&base.with_couplings(0.0, base.g_kappa)).unwrap();
    assert_eq!(none.delta_s, 0.0);
}

#[test]
fn calibration_round_trips() {
    for (gw, gk) in [(75e3, 15e3), (75e3, 0.0), (0.0, 150e3)] {
        let params = calibrated(gw, gk);
        let op = solve_steady_state(&params).unwrap();
        for (got, want) in [(op.coupling_dispersive.re, TP * gw), (op.coupling_dissipative.re, TP * gk)] {
            assert!((got - want).abs() <= 1e-6 * want, "{got} vs {want}");
        }
    }
}

#[test]
fn enhanced_couplings_scale_as_root_power() {
    // The 3.5 W regime is purely dissipative, so the dispersive coupling is
    // switched off there.
    let params = calibrated(75e3, 15e3);
    let a = solve_steady_state(&params.with_power(40e-3)).unwrap();
    let b = solve_steady_state(&params.with_couplings(0.0, params.g_kappa).with_power(3.5)).unwrap();
    let ratio = b.coupling_dissipative.re / a.coupling_dissipative.re;
    assert!((ratio / (3.5f64 / 0.04).sqrt() - 1.0).abs() < 0.1);
    let gk_35 = b.coupling_dissipative.re / TP;
    assert!((gk_35 / 150e3 - 1.0).abs() < 0.1, "{gk_35}");
}
