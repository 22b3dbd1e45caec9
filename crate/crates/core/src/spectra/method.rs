use super::closed::{closed_form_comb_quadratures, closed_form_diss_quadratures, closed_form_disp_quadratures};
use super::exact::exact_quadratures;
use super::quadrature::QuadratureSpectrum;
use crate::model::{LinearizedSystem, ThermalEnvironment};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Method {
    Exact,
    ClosedFormDiss,
    ClosedFormDisp,
    ClosedFormComb,
}

impl Method {
    /// The closed form matching the coupling regime of a resonant point.
    pub fn closed_for(sys: &LinearizedSystem) -> Result<Self> {
        let op = &sys.point;
        if !op.is_resonant() {
            return Err(Error::precondition(
                "closed-form spectra need Delta_s = 0; use the exact solver",
            ));
        }
        let (gw, gk) = (op.coupling_dispersive.re, op.coupling_dissipative.re);
        Ok(if gk == 0.0 {
            Method::ClosedFormDisp
        } else if gw == 0.0 {
            Method::ClosedFormDiss
        } else {
            Method::ClosedFormComb
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::ClosedFormDiss => "closed_form_diss",
            Method::ClosedFormDisp => "closed_form_disp",
            Method::ClosedFormComb => "closed_form_comb",
        }
    }

    pub fn quadratures(&self, sys: &LinearizedSystem, env: &ThermalEnvironment, omega: f64) -> Result<QuadratureSpectrum> {
        match self {
            Method::Exact => exact_quadratures(sys, env, omega),
            Method::ClosedFormDiss => closed_form_diss_quadratures(sys, env, omega),
            Method::ClosedFormDisp => closed_form_disp_quadratures(sys, env, omega),
            Method::ClosedFormComb => closed_form_comb_quadratures(sys, env, omega),
        }
    }
}
