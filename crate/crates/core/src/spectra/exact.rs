use nalgebra::{Matrix4, Matrix4x3};
use num_complex::Complex64;

use super::quadrature::QuadratureSpectrum;
use crate::math::{cos, sin, sqrt};
use crate::model::{LinearizedSystem, ThermalEnvironment};
use crate::stability::{DriftForm, DriftMatrix};
use crate::{Error, Result};

/// Noise inputs in the order `(X_in, Y_in, xi)`.
pub const INPUTS: usize = 3;

/// Transfer coefficients from `(X_in, Y_in, xi)` to the output quadratures at
/// one frequency.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferSet {
    pub x_out: [Complex64; INPUTS],
    pub y_out: [Complex64; INPUTS],
}

impl TransferSet {
    /// Coefficients of `Z_theta = X_out cos(theta) + Y_out sin(theta)`.
    pub fn quadrature(&self, theta: f64) -> [Complex64; INPUTS] {
        let (s, c) = (sin(theta), cos(theta));
        core::array::from_fn(|i| self.x_out[i] * c + self.y_out[i] * s)
    }

    /// Combines the transfers with the input spectra `1/2, 1/2, gamma_m (2 n + 1)`.
    pub fn spectrum(&self, xi_psd: f64) -> QuadratureSpectrum {
        let w = [0.5, 0.5, xi_psd];
        let mut q = QuadratureSpectrum {
            xx: 0.0,
            yy: 0.0,
            xy: 0.0,
        };
        for i in 0..INPUTS {
            q.xx += w[i] * self.x_out[i].norm_sqr();
            q.yy += w[i] * self.y_out[i].norm_sqr();
            q.xy += w[i] * (self.x_out[i] * self.y_out[i].conj()).re;
        }
        q
    }
}

/// Solves `(-i omega I - M) v = F n` for the linearized Langevin system and
/// applies the input-output relations.
pub fn transfer_set(sys: &LinearizedSystem, omega: f64) -> Result<TransferSet> {
    let op = &sys.point;
    let r = sqrt(2.0 * op.kappa_s);
    let gk = op.coupling_dissipative;
    let m = DriftMatrix::new(sys, DriftForm::Langevin).m.map(|x| Complex64::new(x, 0.0));
    let a = Matrix4::from_diagonal_element(Complex64::new(0.0, -omega)) - m;
    let c = |x: f64| Complex64::new(x, 0.0);
    let z = c(0.0);
    #[rustfmt::skip]
    let f = Matrix4x3::new(
        c(r),          z,              z,
        z,             c(r),           z,
        z,             z,              z,
        c(gk.im / r),  c(-gk.re / r),  c(1.0),
    );
    let v = a.lu().solve(&f).ok_or(Error::Singular { omega })?;
    if v.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
        return Err(Error::Singular { omega });
    }
    let unit = |i: usize, j: usize| if i == j { 1.0 } else { 0.0 };
    let x_out = core::array::from_fn(|j| v[(0, j)] * r - v[(2, j)] * (gk.re / r) - unit(0, j));
    let y_out = core::array::from_fn(|j| v[(1, j)] * r - v[(2, j)] * (gk.im / r) - unit(1, j));
    Ok(TransferSet { x_out, y_out })
}

/// Output spectrum of the exact linearized model as a quadrature form.
pub fn exact_quadratures(sys: &LinearizedSystem, env: &ThermalEnvironment, omega: f64) -> Result<QuadratureSpectrum> {
    Ok(transfer_set(sys, omega)?.spectrum(env.brownian_psd(sys.gamma_m)))
}

pub fn exact_spectrum(sys: &LinearizedSystem, env: &ThermalEnvironment, theta: f64, omega: f64) -> Result<f64> {
    Ok(exact_quadratures(sys, env, omega)?.at(theta))
}
