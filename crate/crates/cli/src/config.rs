//! Flat `key = value` run configuration.
//!
//! Keys are sectioned (`model.*`, `calibrate.*`, `enhanced.*`, `thermal.*`,
//! `grid.*`, `output.*`, `run.*`, `critical.*`). Frequencies are ordinary
//! frequencies in Hz, powers in W, temperatures in K and angles in degrees.
//! `#` starts a comment. Unknown or repeated keys are errors.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use ponderomotive_core::constants::{hz, laser_angular_frequency};
use ponderomotive_core::model::{
    calibrate_bare_couplings, CalibrationReference, DriveMode, DriveSpec, LinearizedSystem, OperatingPoint,
    PhysicalParams, ThermalEnvironment,
};
use ponderomotive_core::spectra::densified_offsets;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum MethodChoice {
    Exact,
    Closed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DriveKind {
    Resonant,
    Fixed,
    Detuned,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSection {
    pub omega_m_hz: f64,
    pub gamma_m_hz: f64,
    /// Bare linewidth; derived from `calibrate.*` when absent.
    pub kappa_hz: Option<f64>,
    /// Bare couplings, Hz per unit dimensionless displacement.
    pub g_omega_hz: Option<f64>,
    pub g_kappa_hz: Option<f64>,
    pub wavelength_m: f64,
    pub power_w: f64,
    pub drive: DriveKind,
    /// `omega_c - omega_l` for `drive = fixed`.
    pub bare_detuning_hz: f64,
    /// Effective detuning for `drive = detuned`.
    pub delta_hz: f64,
}

/// Published operating point used to infer bare couplings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrateSection {
    pub power_w: f64,
    pub g_omega_hz: f64,
    pub g_kappa_hz: f64,
    pub kappa_s_hz: f64,
    pub delta_hz: f64,
}

/// Operating point given directly by its enhanced couplings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnhancedSection {
    pub kappa_s_hz: f64,
    pub g_omega_hz: f64,
    pub g_kappa_hz: f64,
    pub delta_hz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThermalSection {
    pub n_th: Option<f64>,
    pub temperature_k: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSection {
    /// Log-spaced offsets from `omega_m` on each side, plus zero.
    pub offset_min_hz: f64,
    pub offset_max_hz: f64,
    pub offset_points: usize,
    pub theta_min_deg: f64,
    pub theta_max_deg: f64,
    pub theta_points: usize,
    pub power_min_w: f64,
    pub power_max_w: f64,
    pub power_points: usize,
    pub delta_min_hz: f64,
    pub delta_max_hz: f64,
    pub delta_points: usize,
    /// Log-spaced occupancies for `thermal-scan`.
    pub n_th_min: f64,
    pub n_th_max: f64,
    pub n_th_points: usize,
    pub contour_levels_db: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputSection {
    pub prefix: String,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSection {
    pub method: MethodChoice,
    pub seed: u64,
    /// Random draws per oracle suite in `selftest`.
    pub draws: usize,
    /// Fixed homodyne angle for `spectrum`; the optimum angle when absent.
    pub theta_deg: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalSection {
    pub cap_w: f64,
    pub rel_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub model: ModelSection,
    pub calibrate: Option<CalibrateSection>,
    pub enhanced: Option<EnhancedSection>,
    pub thermal: ThermalSection,
    pub grid: GridSection,
    pub output: OutputSection,
    pub run: RunSection,
    pub critical: CriticalSection,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: ModelSection {
                omega_m_hz: 136e3,
                gamma_m_hz: 0.23,
                kappa_hz: None,
                g_omega_hz: None,
                g_kappa_hz: None,
                wavelength_m: ponderomotive_core::constants::DEFAULT_WAVELENGTH,
                power_w: 40e-3,
                drive: DriveKind::Resonant,
                bare_detuning_hz: 0.0,
                delta_hz: 0.0,
            },
            calibrate: None,
            enhanced: None,
            thermal: ThermalSection {
                n_th: None,
                temperature_k: None,
            },
            grid: GridSection {
                offset_min_hz: 0.01,
                offset_max_hz: 1e4,
                offset_points: 1000,
                theta_min_deg: 0.0,
                theta_max_deg: 180.0,
                theta_points: 181,
                power_min_w: 0.0,
                power_max_w: 0.2,
                power_points: 41,
                delta_min_hz: -300e3,
                delta_max_hz: 300e3,
                delta_points: 121,
                n_th_min: 1.0,
                n_th_max: 1e6,
                n_th_points: 25,
                contour_levels_db: vec![3.0],
            },
            output: OutputSection {
                prefix: "run".into(),
                format: Format::Csv,
            },
            run: RunSection {
                method: MethodChoice::Exact,
                seed: 0,
                draws: 10_000,
                theta_deg: None,
            },
            critical: CriticalSection {
                cap_w: 2.0,
                rel_tol: 1e-6,
            },
        }
    }
}

struct Entries {
    map: BTreeMap<String, (usize, String)>,
}

impl Entries {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.map.remove(key)
    }

    fn f64(&mut self, key: &str) -> Result<Option<f64>> {
        self.take(key)
            .map(|(line, v)| {
                v.parse::<f64>()
                    .ok()
                    .filter(|x| x.is_finite())
                    .ok_or_else(|| CliError::Config(format!("line {line}: {key} = {v:?} is not a finite number")))
            })
            .transpose()
    }

    fn usize(&mut self, key: &str) -> Result<Option<usize>> {
        self.take(key)
            .map(|(line, v)| {
                v.parse::<usize>()
                    .map_err(|_| CliError::Config(format!("line {line}: {key} = {v:?} is not a count")))
            })
            .transpose()
    }

    fn u64(&mut self, key: &str) -> Result<Option<u64>> {
        self.take(key)
            .map(|(line, v)| {
                v.parse::<u64>()
                    .map_err(|_| CliError::Config(format!("line {line}: {key} = {v:?} is not an integer")))
            })
            .transpose()
    }

    fn choice<T>(&mut self, key: &str, options: &[(&str, T)]) -> Result<Option<T>>
    where
        T: Copy,
    {
        self.take(key)
            .map(|(line, v)| {
                options.iter().find(|(name, _)| *name == v).map(|(_, t)| *t).ok_or_else(|| {
                    let names: Vec<&str> = options.iter().map(|(n, _)| *n).collect();
                    CliError::Config(format!("line {line}: {key} = {v:?}, expected one of {}", names.join("|")))
                })
            })
            .transpose()
    }

    fn has_section(&self, prefix: &str) -> bool {
        self.map.keys().any(|k| k.starts_with(prefix))
    }
}

fn set<T>(slot: &mut T, value: Option<T>) {
    if let Some(v) = value {
        *slot = v;
    }
}

fn require(value: Option<f64>, key: &str) -> Result<f64> {
    value.ok_or_else(|| CliError::Config(format!("missing required key {key}")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", i + 1)))?;
            let (k, v) = (k.trim().to_string(), v.trim().to_string());
            if k.is_empty() || v.is_empty() {
                return Err(CliError::Config(format!("line {}: empty key or value", i + 1)));
            }
            if map.insert(k.clone(), (i + 1, v)).is_some() {
                return Err(CliError::Config(format!("line {}: duplicate key {k}", i + 1)));
            }
        }
        let mut e = Entries { map };
        let mut c = RunConfig::default();

        let m = &mut c.model;
        set(&mut m.omega_m_hz, e.f64("model.omega_m_hz")?);
        set(&mut m.gamma_m_hz, e.f64("model.gamma_m_hz")?);
        m.kappa_hz = e.f64("model.kappa_hz")?;
        m.g_omega_hz = e.f64("model.g_omega_hz")?;
        m.g_kappa_hz = e.f64("model.g_kappa_hz")?;
        set(&mut m.wavelength_m, e.f64("model.wavelength_m")?);
        set(&mut m.power_w, e.f64("model.power_w")?);
        set(
            &mut m.drive,
            e.choice(
                "model.drive",
                &[("resonant", DriveKind::Resonant), ("fixed", DriveKind::Fixed), ("detuned", DriveKind::Detuned)],
            )?,
        );
        set(&mut m.bare_detuning_hz, e.f64("model.bare_detuning_hz")?);
        set(&mut m.delta_hz, e.f64("model.delta_hz")?);

        if e.has_section("calibrate.") {
            c.calibrate = Some(CalibrateSection {
                power_w: require(e.f64("calibrate.power_w")?, "calibrate.power_w")?,
                g_omega_hz: e.f64("calibrate.g_omega_hz")?.unwrap_or(0.0),
                g_kappa_hz: e.f64("calibrate.g_kappa_hz")?.unwrap_or(0.0),
                kappa_s_hz: require(e.f64("calibrate.kappa_s_hz")?, "calibrate.kappa_s_hz")?,
                delta_hz: e.f64("calibrate.delta_hz")?.unwrap_or(0.0),
            });
        }
        if e.has_section("enhanced.") {
            c.enhanced = Some(EnhancedSection {
                kappa_s_hz: require(e.f64("enhanced.kappa_s_hz")?, "enhanced.kappa_s_hz")?,
                g_omega_hz: e.f64("enhanced.g_omega_hz")?.unwrap_or(0.0),
                g_kappa_hz: e.f64("enhanced.g_kappa_hz")?.unwrap_or(0.0),
                delta_hz: e.f64("enhanced.delta_hz")?.unwrap_or(0.0),
            });
        }

        c.thermal.n_th = e.f64("thermal.n_th")?;
        c.thermal.temperature_k = e.f64("thermal.temperature_k")?;

        let g = &mut c.grid;
        set(&mut g.offset_min_hz, e.f64("grid.offset_min_hz")?);
        set(&mut g.offset_max_hz, e.f64("grid.offset_max_hz")?);
        set(&mut g.offset_points, e.usize("grid.offset_points")?);
        set(&mut g.theta_min_deg, e.f64("grid.theta_min_deg")?);
        set(&mut g.theta_max_deg, e.f64("grid.theta_max_deg")?);
        set(&mut g.theta_points, e.usize("grid.theta_points")?);
        set(&mut g.power_min_w, e.f64("grid.power_min_w")?);
        set(&mut g.power_max_w, e.f64("grid.power_max_w")?);
        set(&mut g.power_points, e.usize("grid.power_points")?);
        set(&mut g.delta_min_hz, e.f64("grid.delta_min_hz")?);
        set(&mut g.delta_max_hz, e.f64("grid.delta_max_hz")?);
        set(&mut g.delta_points, e.usize("grid.delta_points")?);
        set(&mut g.n_th_min, e.f64("grid.n_th_min")?);
        set(&mut g.n_th_max, e.f64("grid.n_th_max")?);
        set(&mut g.n_th_points, e.usize("grid.n_th_points")?);
        if let Some((line, v)) = e.take("grid.contour_levels_db") {
            g.contour_levels_db = v
                .split(',')
                .map(|s| s.trim().parse::<f64>().ok().filter(|x| x.is_finite()))
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| CliError::Config(format!("line {line}: grid.contour_levels_db = {v:?}")))?;
        }

        if let Some((_, v)) = e.take("output.prefix") {
            c.output.prefix = v;
        }
        set(
            &mut c.output.format,
            e.choice("output.format", &[("csv", Format::Csv), ("json", Format::Json)])?,
        );
        set(
            &mut c.run.method,
            e.choice("run.method", &[("exact", MethodChoice::Exact), ("closed", MethodChoice::Closed)])?,
        );
        set(&mut c.run.seed, e.u64("run.seed")?);
        set(&mut c.run.draws, e.usize("run.draws")?);
        c.run.theta_deg = e.f64("run.theta_deg")?;
        set(&mut c.critical.cap_w, e.f64("critical.cap_w")?);
        set(&mut c.critical.rel_tol, e.f64("critical.rel_tol")?);

        if let Some((key, (line, _))) = e.map.into_iter().next() {
            return Err(CliError::Config(format!("line {line}: unknown key {key}")));
        }
        c.validate()?;
        Ok(c)
    }

    fn validate(&self) -> Result<()> {
        let g = &self.grid;
        let bad = |msg: &str| Err(CliError::Config(msg.into()));
        if !(g.offset_min_hz > 0.0 && g.offset_max_hz > g.offset_min_hz) || g.offset_points < 2 {
            return bad("grid offsets need 0 < offset_min_hz < offset_max_hz and offset_points >= 2");
        }
        if g.theta_points == 0 || g.theta_max_deg < g.theta_min_deg {
            return bad("grid theta range is empty");
        }
        if g.power_points == 0 || g.power_max_w < g.power_min_w || g.power_min_w < 0.0 {
            return bad("grid power range must be nonempty and nonnegative");
        }
        if g.delta_points == 0 || g.delta_max_hz < g.delta_min_hz {
            return bad("grid detuning range is empty");
        }
        if g.n_th_points == 0 || !(g.n_th_min > 0.0 && g.n_th_max >= g.n_th_min) {
            return bad("grid occupancy range needs 0 < n_th_min <= n_th_max");
        }
        if self.thermal.n_th.is_some() && self.thermal.temperature_k.is_some() {
            return bad("set either thermal.n_th or thermal.temperature_k, not both");
        }
        if !(self.critical.cap_w > 0.0 && self.critical.rel_tol > 0.0) {
            return bad("critical.cap_w and critical.rel_tol must be positive");
        }
        if self.output.prefix.contains(['/', '\\']) {
            return bad("output.prefix must be a plain file name prefix");
        }
        Ok(())
    }

    /// Canonical serialization; the basis of the config hash.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    pub fn sha256(&self) -> String {
        format!("{:x}", Sha256::digest(self.canonical_json().as_bytes()))
    }

    pub fn omega_l(&self) -> f64 {
        laser_angular_frequency(self.model.wavelength_m)
    }

    pub fn drive_mode(&self) -> DriveMode {
        match self.model.drive {
            DriveKind::Resonant => DriveMode::ResonantLocked,
            DriveKind::Fixed => DriveMode::FixedFrequency {
                bare_detuning: hz(self.model.bare_detuning_hz),
            },
            DriveKind::Detuned => DriveMode::ExplicitDetuning {
                delta_s: hz(self.model.delta_hz),
            },
        }
    }

    /// Bare parameters, from explicit `model.*` couplings or from `calibrate.*`.
    pub fn physical_params(&self) -> Result<PhysicalParams> {
        let m = &self.model;
        let omega_l = self.omega_l();
        let (kappa, g_omega, g_kappa) = match (&self.calibrate, m.g_omega_hz, m.g_kappa_hz) {
            (Some(_), Some(_), _) | (Some(_), _, Some(_)) => {
                return Err(CliError::Config(
                    "give bare couplings either as model.g_*_hz or through calibrate.*, not both".into(),
                ))
            }
            (Some(cal), None, None) => {
                let c = calibrate_bare_couplings(&CalibrationReference {
                    power: cal.power_w,
                    coupling_dispersive: hz(cal.g_omega_hz),
                    coupling_dissipative: hz(cal.g_kappa_hz),
                    kappa_s: hz(cal.kappa_s_hz),
                    delta_s: hz(cal.delta_hz),
                    omega_l,
                    omega_m: hz(m.omega_m_hz),
                })?;
                (m.kappa_hz.map(hz).unwrap_or(c.kappa), c.g_omega, c.g_kappa)
            }
            (None, gw, gk) => {
                let kappa = m
                    .kappa_hz
                    .ok_or_else(|| CliError::Config("missing model.kappa_hz (or a calibrate.* section)".into()))?;
                (hz(kappa), hz(gw.unwrap_or(0.0)), hz(gk.unwrap_or(0.0)))
            }
        };
        let p = PhysicalParams {
            kappa,
            omega_m: hz(m.omega_m_hz),
            gamma_m: hz(m.gamma_m_hz),
            g_omega,
            g_kappa,
            omega_l,
            drive: DriveSpec {
                power: m.power_w,
                mode: self.drive_mode(),
            },
        };
        p.validate()?;
        Ok(p)
    }

    pub fn environment(&self) -> Result<ThermalEnvironment> {
        Ok(match (self.thermal.n_th, self.thermal.temperature_k) {
            (Some(n), _) => ThermalEnvironment::from_occupancy(n)?,
            (None, Some(t)) => ThermalEnvironment::from_temperature(t, hz(self.model.omega_m_hz))?,
            (None, None) => ThermalEnvironment::ZERO,
        })
    }

    /// The operating point: `enhanced.*` when given, otherwise the steady
    /// state of the bare parameters at `model.power_w`.
    pub fn linearized(&self) -> Result<LinearizedSystem> {
        let (wm, g) = (hz(self.model.omega_m_hz), hz(self.model.gamma_m_hz));
        match &self.enhanced {
            Some(en) => {
                let op = OperatingPoint::from_enhanced_detuned(
                    hz(en.kappa_s_hz),
                    hz(en.delta_hz),
                    hz(en.g_omega_hz),
                    hz(en.g_kappa_hz),
                )?;
                Ok(LinearizedSystem::new(op, wm, g)?)
            }
            None => Ok(LinearizedSystem::from_params(&self.physical_params()?)?),
        }
    }

    /// Frequencies in rad/s, densified around `omega_m`.
    pub fn omega_grid(&self) -> Result<Vec<f64>> {
        let g = &self.grid;
        let wm = hz(self.model.omega_m_hz);
        Ok(densified_offsets(hz(g.offset_min_hz), hz(g.offset_max_hz), g.offset_points)?
            .into_iter()
            .map(|d| wm + d)
            .collect())
    }

    /// Homodyne angles in radians.
    pub fn theta_grid(&self) -> Vec<f64> {
        let g = &self.grid;
        linspace(g.theta_min_deg, g.theta_max_deg, g.theta_points)
            .into_iter()
            .map(|d| d * PI / 180.0)
            .collect()
    }

    pub fn power_grid(&self) -> Vec<f64> {
        linspace(self.grid.power_min_w, self.grid.power_max_w, self.grid.power_points)
    }

    /// Effective detunings in rad/s.
    pub fn delta_grid(&self) -> Vec<f64> {
        linspace(self.grid.delta_min_hz, self.grid.delta_max_hz, self.grid.delta_points)
            .into_iter()
            .map(hz)
            .collect()
    }

    pub fn n_th_grid(&self) -> Vec<f64> {
        let g = &self.grid;
        if g.n_th_points == 1 {
            return vec![g.n_th_min];
        }
        let (a, b) = (g.n_th_min.ln(), g.n_th_max.ln());
        (0..g.n_th_points)
            .map(|i| (a + (b - a) * i as f64 / (g.n_th_points - 1) as f64).exp())
            .collect()
    }
}

/// `n` evenly spaced values from `a` to `b` inclusive; `[a]` when `n == 1`.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}
