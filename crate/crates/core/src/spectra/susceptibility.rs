use num_complex::Complex64;

/// Mechanical response `chi(omega) = omega_m / (omega_m^2 - omega^2 - i omega gamma_m)`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Susceptibility {
    pub chi: Complex64,
}

/// `omega_m^2 - omega^2` is formed as `(omega_m - omega)(omega_m + omega)` so
/// the detuning from resonance keeps full precision.
pub fn mech_susceptibility(omega: f64, omega_m: f64, gamma_m: f64) -> Susceptibility {
    let den = Complex64::new((omega_m - omega) * (omega_m + omega), -omega * gamma_m);
    Susceptibility { chi: omega_m / den }
}

impl Susceptibility {
    /// `1 / chi`, computed directly rather than by inversion.
    pub fn inverse(omega: f64, omega_m: f64, gamma_m: f64) -> Complex64 {
        Complex64::new((omega_m - omega) * (omega_m + omega), -omega * gamma_m) / omega_m
    }
}
