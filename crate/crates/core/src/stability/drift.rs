use nalgebra::Matrix4;
use num_complex::Complex64;

use crate::math::sqrt;
use crate::model::LinearizedSystem;

/// Which value the `g_kappa E_l` entries of the drift matrix take.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum DriftForm {
    /// `g_kappa E_l / sqrt(2 kappa_s)`, the form whose characteristic
    /// polynomial has the closed-form Routh-Hurwitz coefficients.
    Printed,
    /// `g_kappa E_l / sqrt(kappa_s)`, which reduces at `Delta_s = 0` to the
    /// Langevin equations behind the closed-form spectra (`G_kappa / 2` in
    /// both the `X` and the `P_1` rows). Used by the exact spectrum solver.
    Langevin,
}

/// Generator of the linearized dynamics of `(X, Y, Q_1, P_1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix {
    pub m: Matrix4<f64>,
    pub form: DriftForm,
}

/// Drift matrix in the printed form used for the Routh-Hurwitz analysis.
pub fn build_drift_matrix(sys: &LinearizedSystem) -> DriftMatrix {
    DriftMatrix::new(sys, DriftForm::Printed)
}

impl DriftMatrix {
    pub fn new(sys: &LinearizedSystem, form: DriftForm) -> Self {
        let op = &sys.point;
        let k = op.kappa_s;
        let d = op.delta_s;
        let gw = op.coupling_dispersive;
        let gk = op.coupling_dissipative;
        let t = match form {
            DriftForm::Printed => op.dissipative_drive() / sqrt(2.0 * k),
            DriftForm::Langevin => op.dissipative_drive() / sqrt(k),
        };
        #[rustfmt::skip]
        let m = Matrix4::new(
            -k,    d,           gk.re - gw.im - t, 0.0,
            -d,    -k,          gk.im + gw.re,     0.0,
            0.0,   0.0,         0.0,               sys.omega_m,
            gw.re, gw.im + t,   -sys.omega_m,      -sys.gamma_m,
        );
        Self { m, form }
    }

    pub fn trace(&self) -> f64 {
        self.m.trace()
    }

    /// Coefficients `(h1, h2, h3, h4)` of `det(lambda I - M) = lambda^4 + h1 lambda^3 + ...`,
    /// expanded numerically as signed sums of principal minors.
    pub fn characteristic_coefficients(&self) -> [f64; 4] {
        let m = &self.m;
        let e1 = m.trace();
        let mut e2 = 0.0;
        for i in 0..4 {
            for j in (i + 1)..4 {
                e2 += m[(i, i)] * m[(j, j)] - m[(i, j)] * m[(j, i)];
            }
        }
        let mut e3 = 0.0;
        for skip in 0..4 {
            let idx: [usize; 3] = match skip {
                0 => [1, 2, 3],
                1 => [0, 2, 3],
                2 => [0, 1, 3],
                _ => [0, 1, 2],
            };
            e3 += minor3(m, idx);
        }
        let e4 = m.determinant();
        [-e1, e2, -e3, e4]
    }

    /// Eigenvalues from a dense real Schur decomposition, sorted by real then
    /// imaginary part.
    pub fn eigenvalues(&self) -> [Complex64; 4] {
        let ev = self.m.complex_eigenvalues();
        let mut out = [ev[0], ev[1], ev[2], ev[3]];
        sort_roots(&mut out);
        out
    }
}

fn minor3(m: &Matrix4<f64>, idx: [usize; 3]) -> f64 {
    let a = |r: usize, c: usize| m[(idx[r], idx[c])];
    a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
        + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
}

pub(crate) fn sort_roots(r: &mut [Complex64; 4]) {
    r.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}
