use num_complex::Complex64;

use super::quadrature::QuadratureSpectrum;
use super::susceptibility::{mech_susceptibility, Susceptibility};
use crate::model::{LinearizedSystem, ThermalEnvironment};
use crate::{Error, Result};

/// Real couplings `(G_omega, G_kappa)` of a resonant point; the closed forms
/// refuse anything else.
fn resonant_couplings(sys: &LinearizedSystem) -> Result<(f64, f64)> {
    let op = &sys.point;
    if !op.is_resonant() {
        return Err(Error::precondition("closed-form spectra need Delta_s = 0"));
    }
    Ok((op.coupling_dispersive.re, op.coupling_dissipative.re))
}

/// Effective dissipative rate `G_kappa^2 omega_m^2 / (4 kappa_s^3)`.
pub(crate) fn dissipative_rate(g_kappa: f64, kappa_s: f64, omega_m: f64) -> f64 {
    g_kappa * g_kappa * omega_m * omega_m / (4.0 * kappa_s * kappa_s * kappa_s)
}

/// Effective dispersive rate `G_omega^2 / kappa_s`.
pub(crate) fn dispersive_rate(g_omega: f64, kappa_s: f64) -> f64 {
    g_omega * g_omega / kappa_s
}

/// Pure dissipative coupling:
/// `S = 1/2 + A (2 |chi|^2 Gamma_diss cos^2 - Re chi sin 2 theta)`.
pub fn closed_form_diss_quadratures(
    sys: &LinearizedSystem,
    env: &ThermalEnvironment,
    omega: f64,
) -> Result<QuadratureSpectrum> {
    let (gw, gk) = resonant_couplings(sys)?;
    if gw != 0.0 {
        return Err(Error::precondition("dissipative closed form needs G_omega = 0"));
    }
    let a = dissipative_rate(gk, sys.point.kappa_s, sys.omega_m);
    let gamma = a + env.brownian_psd(sys.gamma_m);
    let chi = mech_susceptibility(omega, sys.omega_m, sys.gamma_m).chi;
    Ok(QuadratureSpectrum {
        xx: 0.5 + 2.0 * a * chi.norm_sqr() * gamma,
        yy: 0.5,
        xy: -a * chi.re,
    })
}

/// Pure dispersive coupling:
/// `S = 1/2 + B (2 |chi|^2 Gamma_disp sin^2 + Re chi sin 2 theta)`.
pub fn closed_form_disp_quadratures(
    sys: &LinearizedSystem,
    env: &ThermalEnvironment,
    omega: f64,
) -> Result<QuadratureSpectrum> {
    let (gw, gk) = resonant_couplings(sys)?;
    if gk != 0.0 {
        return Err(Error::precondition("dispersive closed form needs G_kappa = 0"));
    }
    let b = dispersive_rate(gw, sys.point.kappa_s);
    let gamma = b + env.brownian_psd(sys.gamma_m);
    let chi = mech_susceptibility(omega, sys.omega_m, sys.gamma_m).chi;
    Ok(QuadratureSpectrum {
        xx: 0.5,
        yy: 0.5 + 2.0 * b * chi.norm_sqr() * gamma,
        xy: b * chi.re,
    })
}

/// Rates `(Gamma_omega, Gamma_kappa, Gamma')` of the combined spectrum at `omega`.
pub fn combined_rates(g_omega: f64, g_kappa: f64, kappa_s: f64, psd: f64, omega: f64) -> (f64, f64, f64) {
    let k = kappa_s;
    let gw2 = g_omega * g_omega;
    let gk2w2 = g_kappa * g_kappa * omega * omega;
    let gamma_w = 4.0 * gw2 * gw2 / (k * k) + 4.0 * gw2 / k * psd;
    let gamma_k = gk2w2 * gk2w2 / (4.0 * k * k * k * k * k * k) + gk2w2 / (k * k * k) * psd;
    let gamma_p = 2.0 * gw2 / k - gk2w2 / (2.0 * k * k * k);
    (gamma_w, gamma_k, gamma_p)
}

/// Combined coupling:
/// `S = [|B|^2 + Gamma_omega sin^2 + Gamma_kappa cos^2 + Gamma' Re B sin 2 theta] / (2 |D|^2)`
/// with `B = 1/chi - G_kappa G_omega / kappa_s` and
/// `D = 1/chi - G_omega G_kappa / (kappa_s - i omega)`.
pub fn closed_form_comb_quadratures(
    sys: &LinearizedSystem,
    env: &ThermalEnvironment,
    omega: f64,
) -> Result<QuadratureSpectrum> {
    let (gw, gk) = resonant_couplings(sys)?;
    let k = sys.point.kappa_s;
    let psd = env.brownian_psd(sys.gamma_m);
    let (gamma_w, gamma_k, gamma_p) = combined_rates(gw, gk, k, psd, omega);
    let inv_chi = Susceptibility::inverse(omega, sys.omega_m, sys.gamma_m);
    let b = inv_chi - gk * gw / k;
    let d = inv_chi - gw * gk / Complex64::new(k, -omega);
    let den = 2.0 * d.norm_sqr();
    let bb = b.norm_sqr();
    Ok(QuadratureSpectrum {
        xx: (bb + gamma_k) / den,
        yy: (bb + gamma_w) / den,
        xy: gamma_p * b.re / den,
    })
}

pub fn closed_form_diss(sys: &LinearizedSystem, env: &ThermalEnvironment, theta: f64, omega: f64) -> Result<f64> {
    Ok(closed_form_diss_quadratures(sys, env, omega)?.at(theta))
}

pub fn closed_form_disp(sys: &LinearizedSystem, env: &ThermalEnvironment, theta: f64, omega: f64) -> Result<f64> {
    Ok(closed_form_disp_quadratures(sys, env, omega)?.at(theta))
}

pub fn closed_form_comb(sys: &LinearizedSystem, env: &ThermalEnvironment, theta: f64, omega: f64) -> Result<f64> {
    Ok(closed_form_comb_quadratures(sys, env, omega)?.at(theta))
}
