use super::closed::{combined_rates, dispersive_rate, dissipative_rate};
use super::method::Method;
use crate::math::{atan, log10, sqrt};
use crate::model::{LinearizedSystem, ThermalEnvironment};
use crate::{Error, Result};

const GOLDEN: f64 = 0.618_033_988_749_894_8;
const MAX_GOLDEN_ITERS: usize = 400;

/// `-10 log10(2 S)`; positive values are below shot noise.
pub fn depth_db(s: f64) -> f64 {
    -10.0 * log10(2.0 * s)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Regime {
    Dissipative,
    Dispersive,
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OptimalSqueezing {
    pub theta_opt: f64,
    pub omega_opt: f64,
    pub s_opt: f64,
    pub depth_db: f64,
    /// The value comes from an approximate closed form that does not
    /// necessarily bound the spectrum it summarizes.
    pub rough: bool,
}

impl OptimalSqueezing {
    fn new(theta_opt: f64, omega_opt: f64, s_opt: f64, rough: bool) -> Self {
        Self {
            theta_opt,
            omega_opt,
            s_opt,
            depth_db: depth_db(s_opt),
            rough,
        }
    }
}

/// `gamma_m (n + 1) / (rate + 2 gamma_m (n + 1))`, the pure-coupling optimum.
pub fn single_coupling_optimum(rate: f64, gamma_m: f64, n_th: f64) -> f64 {
    let t = gamma_m * (n_th + 1.0);
    t / (rate + 2.0 * t)
}

/// Combined optimum `1/2 - (Gamma'^2 / 2) / (Gamma_omega + Gamma_kappa + 2 sqrt(Gamma_omega Gamma_kappa + Gamma'^2 gamma_m^2))`.
pub fn combined_optimum(gamma_w: f64, gamma_k: f64, gamma_p: f64, gamma_m: f64) -> f64 {
    let den = gamma_w + gamma_k + 2.0 * sqrt(gamma_w * gamma_k + gamma_p * gamma_p * gamma_m * gamma_m);
    if den == 0.0 {
        return 0.5;
    }
    0.5 - 0.5 * gamma_p * gamma_p / den
}

/// Closed-form optimum for a resonant point.
///
/// The pure-coupling regimes return the exact optimum of their closed-form
/// spectra, the matching angle and the optimal-frequency relation
/// `(omega - omega_m)^2 = Gamma gamma_m / 2 + gamma_m^2 / 4` (below `omega_m`
/// for dissipative, above for dispersive coupling).
///
/// The combined regime evaluates its rates at `omega_m` for the magnitude and
/// is flagged `rough`. Its angle and frequency locate the minimum of the
/// combined closed-form spectrum, whose angle condition is
/// `tan 2theta = 2 Gamma' Re B / (Gamma_kappa - Gamma_omega)`.
pub fn optimal_analytic(sys: &LinearizedSystem, env: &ThermalEnvironment, regime: Regime) -> Result<OptimalSqueezing> {
    let op = &sys.point;
    if !op.is_resonant() {
        return Err(Error::precondition("analytic optima need Delta_s = 0"));
    }
    let (gw, gk) = (op.coupling_dispersive.re, op.coupling_dissipative.re);
    let (k, wm, g) = (op.kappa_s, sys.omega_m, sys.gamma_m);
    let psd = env.brownian_psd(g);
    match regime {
        Regime::Dissipative => {
            if gw != 0.0 {
                return Err(Error::precondition("dissipative optimum needs G_omega = 0"));
            }
            let a = dissipative_rate(gk, k, wm);
            let delta = sqrt((a + psd) * g / 2.0 + g * g / 4.0);
            let theta = atan(sqrt(2.0 * a / g));
            Ok(OptimalSqueezing::new(theta, wm - delta, single_coupling_optimum(a, g, env.n_th), false))
        }
        Regime::Dispersive => {
            if gk != 0.0 {
                return Err(Error::precondition("dispersive optimum needs G_kappa = 0"));
            }
            let b = dispersive_rate(gw, k);
            let delta = sqrt((b + psd) * g / 2.0 + g * g / 4.0);
            let theta = atan(sqrt(g / (2.0 * b)));
            Ok(OptimalSqueezing::new(theta, wm + delta, single_coupling_optimum(b, g, env.n_th), false))
        }
        Regime::Combined => {
            let grid = super::map::default_omega_grid(wm);
            let located = optimal_numeric(sys, env, Method::ClosedFormComb, (0.0, core::f64::consts::PI), &grid)?;
            let (gamma_w, gamma_k, gamma_p) = combined_rates(gw, gk, k, psd, wm);
            let s = combined_optimum(gamma_w, gamma_k, gamma_p, g);
            Ok(OptimalSqueezing::new(located.theta_opt, located.omega_opt, s, true))
        }
    }
}

/// Minimum of `S_theta(omega)` for `method` over `theta_range x omega_grid`.
///
/// The angle is minimized in closed form at every frequency, so the scan is
/// one-dimensional in `omega`. The best grid sample is refined by
/// golden-section search between its neighbours; the result never exceeds
/// any grid sample.
pub fn optimal_numeric(
    sys: &LinearizedSystem,
    env: &ThermalEnvironment,
    method: Method,
    theta_range: (f64, f64),
    omega_grid: &[f64],
) -> Result<OptimalSqueezing> {
    let (lo, hi) = theta_range;
    if omega_grid.is_empty() || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::domain("optimal_numeric needs a nonempty frequency grid and theta range"));
    }
    if omega_grid.iter().any(|w| !w.is_finite()) {
        return Err(Error::domain("frequency grid must be finite"));
    }
    let profile = |w: f64| -> Result<(f64, f64)> { Ok(method.quadratures(sys, env, w)?.min_over(lo, hi)) };

    let mut best = (0usize, f64::NAN, f64::INFINITY);
    for (i, &w) in omega_grid.iter().enumerate() {
        let (t, s) = profile(w)?;
        if s < best.2 {
            best = (i, t, s);
        }
    }
    let (i, mut theta, mut s_best) = best;
    let mut omega = omega_grid[i];
    if !s_best.is_finite() {
        return Err(Error::domain("spectrum is not finite on the frequency grid"));
    }

    let mut a = omega_grid[i.saturating_sub(1)];
    let mut b = omega_grid[(i + 1).min(omega_grid.len() - 1)];
    if a > b {
        core::mem::swap(&mut a, &mut b);
    }
    if b > a {
        let mut c = b - GOLDEN * (b - a);
        let mut d = a + GOLDEN * (b - a);
        let mut fc = profile(c)?;
        let mut fd = profile(d)?;
        for _ in 0..MAX_GOLDEN_ITERS {
            if fc.1 < fd.1 {
                b = d;
                d = c;
                fd = fc;
                c = b - GOLDEN * (b - a);
                fc = profile(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + GOLDEN * (b - a);
                fd = profile(d)?;
            }
            if (b - a) <= 1e-14 * b.abs().max(1.0) {
                break;
            }
        }
        for (w, (t, s)) in [(c, fc), (d, fd)] {
            if s < s_best {
                s_best = s;
                theta = t;
                omega = w;
            }
        }
    }
    Ok(OptimalSqueezing::new(theta, omega, s_best, false))
}
