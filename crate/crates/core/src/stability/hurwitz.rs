use num_complex::Complex64;

use super::drift::build_drift_matrix;
use crate::model::LinearizedSystem;

/// Eigenvalue real parts within `marginal_rel_tol * kappa_s` of zero are
/// reported as marginal instead of forcing a boolean.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StabilityOptions {
    pub marginal_rel_tol: f64,
}

impl Default for StabilityOptions {
    fn default() -> Self {
        // gamma_m / kappa_s is ~1e-7 for membrane-in-cavity devices, so the
        // tolerance has to sit well below that.
        Self { marginal_rel_tol: 1e-9 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Verdict {
    Stable,
    Unstable,
    Marginal,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityReport {
    /// Closed-form Routh-Hurwitz coefficients `h1..h4`.
    pub h: [f64; 4],
    /// `h1 h2 - h3` and `h1 h2 h3 - h1^2 h4 - h3^2`.
    pub hurwitz_dets: [f64; 2],
    pub eigenvalues: [Complex64; 4],
    pub rh_stable: bool,
    pub eig_stable: bool,
    /// Largest eigenvalue real part, rad/s.
    pub margin: f64,
    pub verdict: Verdict,
}

impl StabilityReport {
    /// The two tests agree, or the point is too close to the boundary to tell.
    pub fn consistent(&self) -> bool {
        self.verdict == Verdict::Marginal || self.rh_stable == self.eig_stable
    }
}

/// Routh-Hurwitz coefficients in closed form, written in terms of the products
/// `g_omega E_l` and `g_kappa E_l` carried by the operating point.
pub fn hurwitz_coefficients(sys: &LinearizedSystem) -> [f64; 4] {
    let op = &sys.point;
    let k = op.kappa_s;
    let d = op.delta_s;
    let wm = sys.omega_m;
    let g = sys.gamma_m;
    let ak = op.dissipative_drive();
    let aw = op.dispersive_drive();
    let s = d * d + k * k;
    let r2 = core::f64::consts::SQRT_2;

    let h1 = 2.0 * k + g;
    let h2 = 2.0 * g * k + s + wm * wm;
    let h3 = g * s + 2.0 * k * wm * wm + wm * (r2 * ak * ak * d - 4.0 * ak * aw * k) / s;
    let h4 = wm * wm * s - d * ak * ak * wm / (2.0 * k)
        + 2.0 * r2 * wm / s * (ak * k + d * aw) * (ak * d - r2 * aw * k);
    [h1, h2, h3, h4]
}

pub fn hurwitz_determinants(h: &[f64; 4]) -> [f64; 2] {
    let [h1, h2, h3, h4] = *h;
    [h1 * h2 - h3, h1 * h2 * h3 - h1 * h1 * h4 - h3 * h3]
}

/// Strict Routh-Hurwitz test: every `h_i > 0` and both Hurwitz determinants positive.
pub fn rh_criterion(h: &[f64; 4]) -> bool {
    let dets = hurwitz_determinants(h);
    h.iter().all(|&x| x > 0.0) && dets.iter().all(|&x| x > 0.0)
}

pub fn routh_hurwitz(sys: &LinearizedSystem) -> StabilityReport {
    routh_hurwitz_with(sys, &StabilityOptions::default())
}

pub fn routh_hurwitz_with(sys: &LinearizedSystem, opts: &StabilityOptions) -> StabilityReport {
    let h = hurwitz_coefficients(sys);
    let hurwitz_dets = hurwitz_determinants(&h);
    let rh_stable = rh_criterion(&h);
    let eigenvalues = build_drift_matrix(sys).eigenvalues();
    let margin = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let eig_stable = margin < 0.0;
    let verdict = if margin.abs() <= opts.marginal_rel_tol * sys.point.kappa_s {
        Verdict::Marginal
    } else if eig_stable {
        Verdict::Stable
    } else {
        Verdict::Unstable
    };
    StabilityReport {
        h,
        hurwitz_dets,
        eigenvalues,
        rh_stable,
        eig_stable,
        margin,
        verdict,
    }
}
