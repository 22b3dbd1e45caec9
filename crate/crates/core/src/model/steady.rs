use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;

use super::params::{DriveMode, PhysicalParams};
use crate::constants::HBAR;
use crate::math::sqrt;
use crate::{Error, Result};

/// Residual threshold every returned operating point satisfies.
const MAX_RESIDUAL: f64 = 1e-10;
/// Convergence threshold on `|dQ| / max(1, |Q|)`.
const STEP_TOL: f64 = 1e-12;
const CONTINUATION_STEPS: usize = 32;
const MAX_FIXED_POINT_ITERS: usize = 10_000;

/// Classical mean values behind an operating point.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MeanField {
    /// Intracavity amplitude in photon-amplitude units.
    pub a_s: Complex64,
    /// Static dimensionless displacement.
    pub q_s: f64,
    /// `E_l = sqrt(P / (hbar omega_l))`, sqrt(photons/s).
    pub drive_amplitude: f64,
    /// Laser power, W.
    pub power: f64,
}

/// Linearization point: effective detuning and decay plus the enhanced
/// couplings `G = sqrt(2) a_s g`.
///
/// `mean_field` is `None` for points built straight from enhanced couplings
/// (the common way to specify a regime); everything the linearized
/// dynamics need is still available through [`OperatingPoint::dissipative_drive`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OperatingPoint {
    pub delta_s: f64,
    pub kappa_s: f64,
    /// Enhanced dispersive coupling `G_omega`, rad/s.
    pub coupling_dispersive: Complex64,
    /// Enhanced dissipative coupling `G_kappa`, rad/s.
    pub coupling_dissipative: Complex64,
    pub mean_field: Option<MeanField>,
}

impl OperatingPoint {
    /// Resonant (`Delta_s = 0`) point with real enhanced couplings.
    pub fn from_enhanced(kappa_s: f64, coupling_dispersive: f64, coupling_dissipative: f64) -> Result<Self> {
        Self::from_enhanced_detuned(kappa_s, 0.0, coupling_dispersive, coupling_dissipative)
    }

    /// Point at detuning `delta_s` whose enhanced couplings have the given
    /// magnitudes. The phase of both couplings is that of `1 / (kappa_s + i delta_s)`,
    /// as it must be for real bare couplings.
    pub fn from_enhanced_detuned(
        kappa_s: f64,
        delta_s: f64,
        coupling_dispersive: f64,
        coupling_dissipative: f64,
    ) -> Result<Self> {
        if !(kappa_s > 0.0 && kappa_s.is_finite()) {
            return Err(Error::Unphysical {
                reason: format!("kappa_s must be positive, got {kappa_s}"),
                power: f64::NAN,
                residual: f64::NAN,
            });
        }
        if !delta_s.is_finite() || !coupling_dispersive.is_finite() || !coupling_dissipative.is_finite() {
            return Err(Error::domain("operating point values must be finite"));
        }
        let den = Complex64::new(kappa_s, delta_s);
        let phase = den.conj() / den.norm();
        Ok(Self {
            delta_s,
            kappa_s,
            coupling_dispersive: phase * coupling_dispersive,
            coupling_dissipative: phase * coupling_dissipative,
            mean_field: None,
        })
    }

    /// `g_kappa E_l`, recovered from `G_kappa (kappa_s + i Delta_s) / (2 sqrt(kappa_s))`.
    pub fn dissipative_drive(&self) -> f64 {
        (self.coupling_dissipative * Complex64::new(self.kappa_s, self.delta_s)).re
            / (2.0 * sqrt(self.kappa_s))
    }

    /// `g_omega E_l`, analogous to [`dissipative_drive`](Self::dissipative_drive).
    pub fn dispersive_drive(&self) -> f64 {
        (self.coupling_dispersive * Complex64::new(self.kappa_s, self.delta_s)).re
            / (2.0 * sqrt(self.kappa_s))
    }

    /// True when `|Delta_s| <= 1e-12 kappa_s`.
    pub fn is_resonant(&self) -> bool {
        self.delta_s.abs() <= 1e-12 * self.kappa_s
    }
}

/// Result of following the fixed-frequency (or explicit-detuning) branch.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchSolution {
    pub point: OperatingPoint,
    /// Displacements `Q` of other self-consistent roots at the target power.
    /// They are reported, never returned as the solution.
    pub other_roots: Vec<f64>,
    pub continuation_steps: usize,
}

/// `E_l = sqrt(P / (hbar omega_l))`.
pub fn drive_amplitude(power: f64, omega_l: f64) -> Result<f64> {
    if !(omega_l > 0.0) {
        return Err(Error::domain(format!("omega_l must be positive, got {omega_l}")));
    }
    if !(power >= 0.0) {
        return Err(Error::domain(format!("power must be >= 0, got {power}")));
    }
    Ok(sqrt(power / (HBAR * omega_l)))
}

/// Solves for the operating point according to `params.drive.mode`.
pub fn solve_steady_state(params: &PhysicalParams) -> Result<OperatingPoint> {
    match params.drive.mode {
        DriveMode::ResonantLocked => solve_steady_state_resonant(params),
        DriveMode::FixedFrequency { .. } => solve_steady_state_fixed_frequency(params).map(|b| b.point),
        DriveMode::ExplicitDetuning { .. } => solve_steady_state_detuned(params).map(|b| b.point),
    }
}

/// Laser locked to the displaced resonance. `kappa_s` solves
/// `kappa_s^2 - kappa kappa_s + 2 E_l^2 g_omega g_kappa / omega_m = 0`; the
/// root continuous with `kappa` at zero power is taken.
pub fn solve_steady_state_resonant(params: &PhysicalParams) -> Result<OperatingPoint> {
    params.validate()?;
    if params.drive.mode != DriveMode::ResonantLocked {
        return Err(Error::precondition("resonant solver needs DriveMode::ResonantLocked"));
    }
    let p = params;
    let e_l = drive_amplitude(p.drive.power, p.omega_l)?;
    let c = 2.0 * e_l * e_l * p.g_omega * p.g_kappa / p.omega_m;
    let disc = p.kappa * p.kappa - 4.0 * c;
    if disc < 0.0 {
        return Err(Error::Unphysical {
            reason: format!("no real effective decay rate (discriminant {disc:e})"),
            power: p.drive.power,
            residual: f64::NAN,
        });
    }
    let kappa_s = 0.5 * (p.kappa + sqrt(disc));
    let a_s = sqrt(2.0 * kappa_s) * e_l / kappa_s;
    let q_s = p.g_omega / p.omega_m * a_s * a_s;
    let point = assemble(p, e_l, q_s, 0.0, kappa_s)?;
    check_residual(p, &point)?;
    Ok(point)
}

/// Laser at a fixed frequency: `Delta_s = bare_detuning - g_omega Q_s`.
///
/// The branch connected to `Q_s = 0` at zero power is followed by power
/// continuation; each step runs a damped fixed-point iteration on `Q_s` and
/// falls back to bracketed bisection on the residual.
pub fn solve_steady_state_fixed_frequency(params: &PhysicalParams) -> Result<BranchSolution> {
    params.validate()?;
    let DriveMode::FixedFrequency { bare_detuning } = params.drive.mode else {
        return Err(Error::precondition("fixed-frequency solver needs DriveMode::FixedFrequency"));
    };
    follow_branch(params, Detuning::Fixed(bare_detuning))
}

/// Effective detuning imposed directly; solves for `kappa_s` and `Q_s`.
pub fn solve_steady_state_detuned(params: &PhysicalParams) -> Result<BranchSolution> {
    params.validate()?;
    let DriveMode::ExplicitDetuning { delta_s } = params.drive.mode else {
        return Err(Error::precondition("detuned solver needs DriveMode::ExplicitDetuning"));
    };
    follow_branch(params, Detuning::Explicit(delta_s))
}

/// Largest relative residual of the steady-state equations at `point`
/// (zero for points without a mean field).
pub fn steady_state_residual(params: &PhysicalParams, point: &OperatingPoint) -> f64 {
    let Some(mf) = point.mean_field else {
        return 0.0;
    };
    let kappa_s = point.kappa_s;
    let delta_s = point.delta_s;
    let drive = sqrt(2.0 * kappa_s) * mf.drive_amplitude;
    let r_field = if drive == 0.0 {
        mf.a_s.norm()
    } else {
        (mf.a_s * Complex64::new(kappa_s, delta_s) - drive).norm() / drive
    };
    let rhs_q = (params.g_omega / params.omega_m - delta_s * params.g_kappa / (kappa_s * params.omega_m))
        * mf.a_s.norm_sqr();
    let scale_q = mf.q_s.abs().max(rhs_q.abs());
    let r_q = if scale_q == 0.0 { 0.0 } else { (mf.q_s - rhs_q).abs() / scale_q };
    let r_kappa = (kappa_s - (params.kappa - params.g_kappa * mf.q_s)).abs() / params.kappa;
    let r_delta = match params.drive.mode {
        DriveMode::ResonantLocked => delta_s.abs() / params.kappa,
        DriveMode::FixedFrequency { bare_detuning } => {
            (delta_s - (bare_detuning - params.g_omega * mf.q_s)).abs() / params.kappa
        }
        DriveMode::ExplicitDetuning { delta_s: target } => (delta_s - target).abs() / params.kappa,
    };
    r_field.max(r_q).max(r_kappa).max(r_delta)
}

fn assemble(p: &PhysicalParams, e_l: f64, q_s: f64, delta_s: f64, kappa_s: f64) -> Result<OperatingPoint> {
    if !(kappa_s > 0.0) {
        return Err(Error::Unphysical {
            reason: format!("effective decay rate kappa_s = {kappa_s:e} is not positive"),
            power: p.drive.power,
            residual: f64::NAN,
        });
    }
    let a_s = Complex64::new(sqrt(2.0 * kappa_s) * e_l, 0.0) / Complex64::new(kappa_s, delta_s);
    let root2 = core::f64::consts::SQRT_2;
    Ok(OperatingPoint {
        delta_s,
        kappa_s,
        coupling_dispersive: a_s * (root2 * p.g_omega),
        coupling_dissipative: a_s * (root2 * p.g_kappa),
        mean_field: Some(MeanField {
            a_s,
            q_s,
            drive_amplitude: e_l,
            power: p.drive.power,
        }),
    })
}

fn check_residual(p: &PhysicalParams, point: &OperatingPoint) -> Result<()> {
    let r = steady_state_residual(p, point);
    if r < MAX_RESIDUAL {
        Ok(())
    } else {
        Err(Error::Unphysical {
            reason: "steady-state residual above tolerance".into(),
            power: p.drive.power,
            residual: r,
        })
    }
}

#[derive(Debug, Clone, Copy)]
enum Detuning {
    /// `Delta_s = offset - g_omega Q`.
    Fixed(f64),
    Explicit(f64),
}

/// Force balance `Q = F(Q)` at one drive strength.
struct Balance<'a> {
    p: &'a PhysicalParams,
    e2: f64,
    detuning: Detuning,
}

impl Balance<'_> {
    fn delta(&self, q: f64) -> f64 {
        match self.detuning {
            Detuning::Fixed(offset) => offset - self.p.g_omega * q,
            Detuning::Explicit(d) => d,
        }
    }

    fn kappa_s(&self, q: f64) -> f64 {
        self.p.kappa - self.p.g_kappa * q
    }

    /// `F(Q)`; `None` outside the physical domain `kappa_s > 0`.
    fn map(&self, q: f64) -> Option<f64> {
        let k = self.kappa_s(q);
        if !(k > 0.0) {
            return None;
        }
        let d = self.delta(q);
        let p = self.p;
        Some(2.0 * self.e2 * (p.g_omega * k - d * p.g_kappa) / (p.omega_m * (k * k + d * d)))
    }

    fn residual(&self, q: f64) -> Option<f64> {
        self.map(q).map(|f| q - f)
    }
}

fn follow_branch(p: &PhysicalParams, detuning: Detuning) -> Result<BranchSolution> {
    let e_l = drive_amplitude(p.drive.power, p.omega_l)?;
    let e2_target = e_l * e_l;
    let mut q = 0.0;
    let mut q_prev = 0.0;
    let steps = if e2_target == 0.0 { 0 } else { CONTINUATION_STEPS };
    for step in 1..=steps {
        let e2 = e2_target * step as f64 / steps as f64;
        let bal = Balance { p, e2, detuning };
        // secant predictor along the branch
        let guess = if step > 1 { 2.0 * q - q_prev } else { q };
        let next = solve_balance(&bal, guess).or_else(|_| solve_balance(&bal, q))?;
        q_prev = q;
        q = next;
    }
    let bal = Balance { p, e2: e2_target, detuning };
    let other_roots = if steps == 0 { Vec::new() } else { scan_other_roots(&bal, q) };
    let point = assemble(p, e_l, q, bal.delta(q), bal.kappa_s(q))?;
    check_residual(p, &point)?;
    Ok(BranchSolution {
        point,
        other_roots,
        continuation_steps: steps,
    })
}

fn converged(q_old: f64, q_new: f64) -> bool {
    (q_new - q_old).abs() / q_new.abs().max(1.0) < STEP_TOL
}

fn solve_balance(bal: &Balance<'_>, guess: f64) -> Result<f64> {
    if let Some(q) = damped_fixed_point(bal, guess) {
        return Ok(q);
    }
    bisect_near(bal, guess)
}

fn damped_fixed_point(bal: &Balance<'_>, guess: f64) -> Option<f64> {
    let mut q = guess;
    let mut damping = 0.5;
    let mut last_res = bal.residual(q)?.abs();
    for _ in 0..MAX_FIXED_POINT_ITERS {
        let f = bal.map(q)?;
        let next = (1.0 - damping) * q + damping * f;
        let res = bal.residual(next).map(f64::abs);
        match res {
            Some(r) if r <= last_res || r == 0.0 => {
                if converged(q, next) {
                    return Some(next);
                }
                q = next;
                last_res = r;
                damping = (damping * 1.5).min(1.0);
            }
            _ => {
                damping *= 0.5;
                if damping < 1e-6 {
                    return None;
                }
            }
        }
    }
    None
}

fn bisect_near(bal: &Balance<'_>, guess: f64) -> Result<f64> {
    let fail = |residual: f64| Error::Unphysical {
        reason: format!(
            "steady-state iteration diverged near Q = {guess:e} (no bracket on the continued branch)"
        ),
        power: bal.p.drive.power,
        residual,
    };
    let r0 = bal.residual(guess).ok_or_else(|| fail(f64::NAN))?;
    if r0 == 0.0 {
        return Ok(guess);
    }
    let mut width = guess.abs().max(1.0) * 1e-3;
    for _ in 0..80 {
        for side in [-1.0, 1.0] {
            let x = guess + side * width;
            if let Some(r) = bal.residual(x) {
                if r.signum() != r0.signum() {
                    let (lo, hi) = if side < 0.0 { (x, guess) } else { (guess, x) };
                    return bisect(bal, lo, hi).ok_or_else(|| fail(r0));
                }
            }
        }
        width *= 2.0;
    }
    Err(fail(r0))
}

fn bisect(bal: &Balance<'_>, mut lo: f64, mut hi: f64) -> Option<f64> {
    let mut r_lo = bal.residual(lo)?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi || converged(lo, hi) {
            return Some(mid);
        }
        let r_mid = bal.residual(mid)?;
        if r_mid == 0.0 {
            return Some(mid);
        }
        if r_mid.signum() == r_lo.signum() {
            lo = mid;
            r_lo = r_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

fn scan_other_roots(bal: &Balance<'_>, root: f64) -> Vec<f64> {
    const SAMPLES: usize = 4000;
    let span = 10.0 * root.abs().max(1.0);
    let lo = root - span;
    let hi = root + span;
    let step = (hi - lo) / SAMPLES as f64;
    let mut out = Vec::new();
    let mut prev: Option<(f64, f64)> = None;
    for i in 0..=SAMPLES {
        let x = lo + step * i as f64;
        let Some(r) = bal.residual(x) else {
            prev = None;
            continue;
        };
        if let Some((xp, rp)) = prev {
            if rp.signum() != r.signum() && !(xp <= root && root <= x) {
                if let Some(z) = bisect(bal, xp, x) {
                    if (z - root).abs() > 1e-6 * root.abs().max(1.0) {
                        out.push(z);
                    }
                }
            }
        }
        prev = Some((x, r));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{hz, laser_angular_frequency, DEFAULT_WAVELENGTH};
    use crate::model::DriveSpec;

    fn base(mode: DriveMode, power: f64) -> PhysicalParams {
        PhysicalParams {
            kappa: hz(1.5e6),
            omega_m: hz(136e3),
            gamma_m: hz(0.23),
            g_omega: 1.5627,
            g_kappa: 0.31255,
            omega_l: laser_angular_frequency(DEFAULT_WAVELENGTH),
            drive: DriveSpec { power, mode },
        }
    }

    #[test]
    fn drive_amplitude_fixture() {
        // sqrt(P / (hbar * 2 pi c / 1064 nm)) evaluated at 30 digits
        let e = drive_amplitude(40e-3, laser_angular_frequency(1064e-9)).unwrap();
        approx::assert_relative_eq!(e, 462_873_634.209_050_6, max_relative = 1e-13);
        assert_eq!(drive_amplitude(0.0, 1.0).unwrap(), 0.0);
        let e1 = drive_amplitude(1e-3, 1e15).unwrap();
        let e4 = drive_amplitude(4e-3, 1e15).unwrap();
        approx::assert_relative_eq!(e4, 2.0 * e1, max_relative = 1e-15);
        assert!(matches!(drive_amplitude(1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(drive_amplitude(1.0, -3.0), Err(Error::Domain(_))));
    }

    #[test]
    fn resonant_zero_power() {
        let op = solve_steady_state_resonant(&base(DriveMode::ResonantLocked, 0.0)).unwrap();
        let mf = op.mean_field.unwrap();
        assert_eq!(op.kappa_s, hz(1.5e6));
        assert_eq!(mf.a_s, Complex64::new(0.0, 0.0));
        assert_eq!(mf.q_s, 0.0);
    }

    #[test]
    fn resonant_without_dissipative_coupling_keeps_kappa() {
        let p = base(DriveMode::ResonantLocked, 0.3).with_couplings(1.5627, 0.0);
        let op = solve_steady_state_resonant(&p).unwrap();
        assert_eq!(op.kappa_s, p.kappa);
        assert_eq!(op.delta_s, 0.0);
        assert_eq!(op.coupling_dissipative, Complex64::new(0.0, 0.0));
    }

    #[test]
    fn resonant_kappa_shift_small_below_10_mw() {
        for power in [1e-3, 5e-3, 10e-3] {
            let p = base(DriveMode::ResonantLocked, power);
            let op = solve_steady_state_resonant(&p).unwrap();
            assert!((op.kappa_s - p.kappa).abs() / p.kappa < 1e-3);
            assert_eq!(op.coupling_dispersive.im, 0.0);
            assert!(op.mean_field.unwrap().a_s.re > 0.0);
        }
    }

    #[test]
    fn resonant_rejects_wrong_mode_and_complex_root() {
        let p = base(DriveMode::ExplicitDetuning { delta_s: 0.0 }, 0.01);
        assert!(matches!(solve_steady_state_resonant(&p), Err(Error::Precondition(_))));
        let huge = base(DriveMode::ResonantLocked, 1e6).with_couplings(1e3, 1e3);
        assert!(matches!(solve_steady_state_resonant(&huge), Err(Error::Unphysical { .. })));
    }

    #[test]
    fn fixed_frequency_zero_power() {
        let b = solve_steady_state_fixed_frequency(&base(DriveMode::FixedFrequency { bare_detuning: 0.0 }, 0.0))
            .unwrap();
        assert_eq!(b.point.delta_s, 0.0);
        assert_eq!(b.point.kappa_s, hz(1.5e6));
        assert_eq!(b.point.mean_field.unwrap().q_s, 0.0);
    }

    #[test]
    fn fixed_frequency_residual_and_relations() {
        let p = base(DriveMode::FixedFrequency { bare_detuning: 0.0 }, 0.04);
        let b = solve_steady_state_fixed_frequency(&p).unwrap();
        let mf = b.point.mean_field.unwrap();
        assert!(steady_state_residual(&p, &b.point) < 1e-10);
        approx::assert_relative_eq!(b.point.delta_s, -p.g_omega * mf.q_s, max_relative = 1e-12);
        approx::assert_relative_eq!(b.point.kappa_s, p.kappa - p.g_kappa * mf.q_s, max_relative = 1e-12);
        assert!(b.other_roots.is_empty());
    }

    #[test]
    fn fixed_frequency_pure_couplings() {
        // dispersive spring still detunes without dissipative coupling
        let p = base(DriveMode::FixedFrequency { bare_detuning: 0.0 }, 0.05).with_couplings(1.5, 0.0);
        let b = solve_steady_state_fixed_frequency(&p).unwrap();
        assert!(b.point.delta_s < 0.0);
        // no dispersive coupling: resonance never moves
        let p = base(DriveMode::FixedFrequency { bare_detuning: 0.0 }, 0.05).with_couplings(0.0, 0.3);
        let b = solve_steady_state_fixed_frequency(&p).unwrap();
        assert_eq!(b.point.delta_s, 0.0);
    }

    #[test]
    fn detuned_solution_matches_requested_detuning() {
        let delta = hz(136e3);
        let p = base(DriveMode::ExplicitDetuning { delta_s: delta }, 0.2);
        let b = solve_steady_state_detuned(&p).unwrap();
        assert_eq!(b.point.delta_s, delta);
        assert!(steady_state_residual(&p, &b.point) < 1e-10);
        // couplings carry the phase of 1/(kappa_s + i delta)
        let g = b.point.coupling_dispersive;
        approx::assert_relative_eq!(g.im / g.re, -delta / b.point.kappa_s, max_relative = 1e-12);
    }

    #[test]
    fn kappa_collapse_is_unphysical() {
        let p = base(DriveMode::ExplicitDetuning { delta_s: 0.0 }, 10.0).with_couplings(1.5, 1e3);
        let r = solve_steady_state_detuned(&p);
        assert!(matches!(r, Err(Error::Unphysical { .. })), "{r:?}");
    }

    #[test]
    fn drives_recovered_from_enhanced_couplings() {
        let p = base(DriveMode::ExplicitDetuning { delta_s: -hz(20e3) }, 0.04);
        let b = solve_steady_state_detuned(&p).unwrap();
        let e = b.point.mean_field.unwrap().drive_amplitude;
        approx::assert_relative_eq!(b.point.dissipative_drive(), p.g_kappa * e, max_relative = 1e-12);
        approx::assert_relative_eq!(b.point.dispersive_drive(), p.g_omega * e, max_relative = 1e-12);
        let rebuilt = OperatingPoint::from_enhanced_detuned(
            b.point.kappa_s,
            b.point.delta_s,
            b.point.coupling_dispersive.norm(),
            b.point.coupling_dissipative.norm(),
        )
        .unwrap();
        approx::assert_relative_eq!(rebuilt.coupling_dispersive.re, b.point.coupling_dispersive.re, max_relative = 1e-12);
        approx::assert_relative_eq!(rebuilt.coupling_dispersive.im, b.point.coupling_dispersive.im, max_relative = 1e-12);
    }
}
