use std::f64::consts::PI;

use ponderomotive_core::model::{LinearizedSystem, OperatingPoint, ThermalEnvironment};
use ponderomotive_core::spectra::{
    closed_form_diss, default_omega_grid, exact_quadratures, exact_spectrum, optimal_analytic, optimal_numeric,
    Method, Regime,
};
use ponderomotive_core::stability::{routh_hurwitz, Verdict};
use proptest::prelude::*;

const TP: f64 = 2.0 * PI;
const KAPPA_S: f64 = TP * 1.5e6;
const OMEGA_M: f64 = TP * 136e3;
const GAMMA_M: f64 = TP * 0.23;

fn system(gw: f64, gk: f64, delta: f64) -> LinearizedSystem {
    let op = OperatingPoint::from_enhanced_detuned(KAPPA_S, delta, gw, gk).unwrap();
    LinearizedSystem::new(op, OMEGA_M, GAMMA_M).unwrap()
}

fn env(n: f64) -> ThermalEnvironment {
    ThermalEnvironment::from_occupancy(n).unwrap()
}

/// Frequency near resonance, from sub-linewidth to tens of kHz away.
fn omega() -> impl Strategy<Value = f64> {
    (prop::bool::ANY, -2.0f64..4.5).prop_map(|(neg, e)| {
        let off = TP * 10f64.powf(e);
        if neg {
            OMEGA_M - off.min(0.9 * OMEGA_M)
        } else {
            OMEGA_M + off
        }
    })
}

fn coupling() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), (3.0f64..5.7).prop_map(|e| TP * 10f64.powf(e))]
}

/// Stable linearized system with arbitrary couplings and detuning.
fn stable_system() -> impl Strategy<Value = LinearizedSystem> {
    (coupling(), coupling(), -0.5f64..2.0)
        .prop_map(|(gw, gk, d)| system(gw, gk, d * OMEGA_M))
        .prop_filter("stable", |s| routh_hurwitz(s).verdict == Verdict::Stable)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn shot_noise_floor_without_coupling(d in -3.0f64..3.0, w in omega(), th in 0.0f64..PI, n in 0.0f64..1e5) {
        let s = exact_spectrum(&system(0.0, 0.0, d * OMEGA_M), &env(n), th, w).unwrap();
        prop_assert!((s - 0.5).abs() <= 8.0 * f64::EPSILON, "{}", s);
    }

    #[test]
    fn periodic_in_angle(sys in stable_system(), w in omega(), th in -PI..PI, n in 0.0f64..1e3) {
        let a = exact_spectrum(&sys, &env(n), th, w).unwrap();
        let b = exact_spectrum(&sys, &env(n), th + PI, w).unwrap();
        prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(b.abs()));
    }

    #[test]
    fn positive_and_above_uncertainty_bound(sys in stable_system(), w in omega(), th in 0.0f64..PI, n in 0.0f64..1e3) {
        let q = exact_quadratures(&sys, &env(n), w).unwrap();
        let (a, b) = (q.at(th), q.at(th + PI / 2.0));
        prop_assert!(a > 0.0 && b > 0.0);
        prop_assert!(a * b >= 0.25 * (1.0 - 1e-6), "{} x {} = {}", a, b, a * b);
    }

    #[test]
    fn dissipative_anti_squeezing_at_resonance(gk in 3.0f64..6.0, th in 0.01f64..(PI - 0.01), n in 0.0f64..1e3) {
        let sys = system(0.0, TP * 10f64.powf(gk), 0.0);
        prop_assert!(closed_form_diss(&sys, &env(n), th, OMEGA_M).unwrap() > 0.5);
        prop_assert!(exact_spectrum(&sys, &env(n), th, OMEGA_M).unwrap() > 0.5);
    }

    #[test]
    fn fano_asymmetry_with_combined_coupling(gw in 4.0f64..5.3, gk in 4.0f64..5.3, x in 0.05f64..10.0, th in 0.05f64..(PI - 0.05)) {
        let sys = system(TP * 10f64.powf(gw), TP * 10f64.powf(gk), 0.0);
        prop_assume!(routh_hurwitz(&sys).verdict == Verdict::Stable);
        let delta = x * GAMMA_M;
        let lo = exact_spectrum(&sys, &env(0.0), th, OMEGA_M - delta).unwrap();
        let hi = exact_spectrum(&sys, &env(0.0), th, OMEGA_M + delta).unwrap();
        prop_assert!((lo - hi).abs() > 1e-9 * lo.max(hi), "{} vs {}", lo, hi);
    }

    #[test]
    fn analytic_optima_monotone_in_occupancy(p in 1e-3f64..0.3, n in 0.0f64..1e5, dn in 1.0f64..1e5) {
        let scale = (p / 0.04).sqrt();
        let cases = [
            (system(TP * 75e3 * scale, 0.0, 0.0), Regime::Dispersive),
            (system(0.0, TP * 150e3 * scale, 0.0), Regime::Dissipative),
            (system(TP * 75e3 * scale, TP * 15e3 * scale, 0.0), Regime::Combined),
        ];
        for (sys, regime) in cases {
            let a = optimal_analytic(&sys, &env(n), regime).unwrap().s_opt;
            let b = optimal_analytic(&sys, &env(n + dn), regime).unwrap().s_opt;
            prop_assert!(b >= a, "{:?}: {} then {}", regime, a, b);
        }
    }

    #[test]
    fn analytic_optima_monotone_in_power(p in 1e-3f64..0.3, f in 1.0f64..3.0, n in 0.0f64..1e5) {
        for (gw, gk, regime) in [(TP * 75e3, 0.0, Regime::Dispersive), (0.0, TP * 150e3, Regime::Dissipative), (TP * 75e3, TP * 15e3, Regime::Combined)] {
            let depth = |pw: f64| {
                let s = (pw / 0.04).sqrt();
                optimal_analytic(&system(gw * s, gk * s, 0.0), &env(n), regime).unwrap().depth_db
            };
            prop_assert!(depth(p * f) >= depth(p), "{:?}", regime);
        }
    }
}

#[test]
fn numeric_optima_monotone_in_occupancy() {
    let grid = default_omega_grid(OMEGA_M);
    for (gw, gk) in [(TP * 75e3, 0.0), (0.0, TP * 150e3), (TP * 75e3, TP * 15e3)] {
        let sys = system(gw, gk, 0.0);
        let mut last = 0.0;
        for n in [0.0, 1.0, 10.0, 100.0, 1e3, 1e4, 1e5] {
            let s = optimal_numeric(&sys, &env(n), Method::Exact, (0.0, PI), &grid).unwrap().s_opt;
            assert!(s >= last, "n = {n}: {s} < {last}");
            last = s;
        }
    }
}
