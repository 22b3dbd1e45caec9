use crate::math::{atan2, ceil, cos, sin, sqrt};
use core::f64::consts::PI;

/// Symmetrized output noise at one frequency as a quadratic form in the
/// homodyne angle: `S(theta) = xx cos^2 + yy sin^2 + 2 xy sin cos`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct QuadratureSpectrum {
    pub xx: f64,
    pub yy: f64,
    pub xy: f64,
}

impl QuadratureSpectrum {
    pub const SHOT_NOISE: Self = Self {
        xx: 0.5,
        yy: 0.5,
        xy: 0.0,
    };

    pub fn at(&self, theta: f64) -> f64 {
        let (s, c) = (sin(theta), cos(theta));
        self.xx * c * c + self.yy * s * s + 2.0 * self.xy * s * c
    }

    /// Smallest eigenvalue of the form, evaluated without cancellation.
    fn min_value(&self) -> f64 {
        let mean = 0.5 * (self.xx + self.yy);
        let r = sqrt(0.25 * (self.xx - self.yy) * (self.xx - self.yy) + self.xy * self.xy);
        let big = mean + r;
        if big > 0.0 {
            (self.xx * self.yy - self.xy * self.xy) / big
        } else {
            mean - r
        }
    }

    /// Angle in `[0, pi)` minimizing `S`, with the minimum.
    pub fn min(&self) -> (f64, f64) {
        let mut theta = 0.5 * atan2(-2.0 * self.xy, self.yy - self.xx);
        if theta < 0.0 {
            theta += PI;
        }
        (theta, self.min_value())
    }

    /// Minimum over `theta_lo <= theta <= theta_hi`. `S` has one minimum
    /// per period `pi`, so it sits at the free argmin or at an endpoint.
    pub fn min_over(&self, theta_lo: f64, theta_hi: f64) -> (f64, f64) {
        if theta_hi - theta_lo >= PI {
            return self.min();
        }
        let (t0, s0) = self.min();
        let k = ceil((theta_lo - t0) / PI);
        let t = t0 + k * PI;
        if t <= theta_hi {
            return (t, s0);
        }
        let (a, b) = (self.at(theta_lo), self.at(theta_hi));
        if a <= b {
            (theta_lo, a)
        } else {
            (theta_hi, b)
        }
    }

    /// `det = xx yy - xy^2`, a lower bound on `S(theta) S(theta + pi/2)`.
    pub fn determinant(&self) -> f64 {
        self.xx * self.yy - self.xy * self.xy
    }
}
