//! Roots of the monic quartic `z^4 + h1 z^3 + h2 z^2 + h3 z + h4`.
//!
//! Independent of the Schur route in [`DriftMatrix::eigenvalues`](super::DriftMatrix::eigenvalues):
//! simultaneous Aberth-Ehrlich iteration on the coefficient-scaled polynomial,
//! then Newton polishing at the original scale.

use num_complex::Complex64;

use super::drift::sort_roots;
use crate::math::{cos, powf, sin};

const MAX_ITERS: usize = 500;

pub fn quartic_roots(h: &[f64; 4]) -> [Complex64; 4] {
    let scale = h
        .iter()
        .enumerate()
        .map(|(i, c)| powf(c.abs(), 1.0 / (i as f64 + 1.0)))
        .fold(0.0_f64, f64::max);
    if scale == 0.0 {
        return [Complex64::new(0.0, 0.0); 4];
    }
    let mut c = [0.0; 4];
    let mut s = 1.0;
    for i in 0..4 {
        s *= scale;
        c[i] = h[i] / s;
    }

    let mut z = [Complex64::new(0.0, 0.0); 4];
    for (k, zk) in z.iter_mut().enumerate() {
        let phase = core::f64::consts::FRAC_PI_2 * k as f64 + 0.4;
        *zk = Complex64::new(cos(phase), sin(phase)) * 1.1;
    }
    for _ in 0..MAX_ITERS {
        let mut worst = 0.0_f64;
        for i in 0..4 {
            let (p, dp) = eval(&c, z[i]);
            if p == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = p / dp;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..4 {
                if j != i {
                    repulsion += (z[i] - z[j]).inv();
                }
            }
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[i] -= step;
                worst = worst.max(step.norm() / z[i].norm().max(1e-300));
            }
        }
        if worst < 1e-16 {
            break;
        }
    }

    let mut roots = z.map(|w| w * scale);
    for r in roots.iter_mut() {
        for _ in 0..3 {
            let (p, dp) = eval(h, *r);
            let next = *r - p / dp;
            if !next.is_finite() || eval(h, next).0.norm() >= p.norm() {
                break;
            }
            *r = next;
        }
    }
    sort_roots(&mut roots);
    roots
}

fn eval(c: &[f64; 4], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(1.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &ci in c {
        dp = dp * z + p;
        p = p * z + ci;
    }
    (p, dp)
}

/// Largest distance between matched roots of two sets, pairing greedily by
/// nearest neighbour.
pub fn root_set_distance(a: &[Complex64; 4], b: &[Complex64; 4]) -> f64 {
    let mut used = [false; 4];
    let mut worst = 0.0_f64;
    for x in a {
        let mut best = (f64::INFINITY, 0);
        for (j, y) in b.iter().enumerate() {
            if !used[j] {
                let d = (x - y).norm();
                if d < best.0 {
                    best = (d, j);
                }
            }
        }
        used[best.1] = true;
        worst = worst.max(best.0);
    }
    worst
}
