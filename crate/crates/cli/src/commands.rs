//! Subcommand implementations. Each returns the files it wrote and a short
//! human-readable report.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use ponderomotive_core::constants::{hz, to_hz};
use ponderomotive_core::model::{
    calibrate_bare_couplings, occupancy_temperature, solve_steady_state, CalibrationReference, LinearizedSystem,
    OperatingPoint, ThermalEnvironment,
};
use ponderomotive_core::spectra::{optimal_analytic, optimal_numeric, Method, OptimalSqueezing, Regime};
use ponderomotive_core::stability::{critical_power, Cell, CriticalPower, OnsetKind, Verdict};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::config::{Format, MethodChoice, RunConfig};
use crate::contour::contour;
use crate::error::{CliError, Result};
use crate::output::{fmt_f64, json_document, write_atomic, CsvTable, Metadata};
use crate::{selftest, sweep};

#[derive(Debug, Clone)]
pub struct Context {
    pub config: RunConfig,
    pub out_dir: PathBuf,
}

impl Context {
    pub fn new(config: RunConfig, out_dir: &Path) -> Self {
        Self {
            config,
            out_dir: out_dir.to_path_buf(),
        }
    }

    fn meta(&self, command: &str) -> Metadata {
        Metadata::new(command, &self.config.sha256())
    }

    fn path(&self, stem: &str, ext: &str) -> PathBuf {
        self.out_dir.join(format!("{}_{stem}.{ext}", self.config.output.prefix))
    }

    /// Writes `table` or `body` according to the configured format.
    fn emit(&self, command: &str, stem: &str, table: &CsvTable, body: Value) -> Result<PathBuf> {
        let meta = self.meta(command);
        let (path, text) = match self.config.output.format {
            Format::Csv => (self.path(stem, "csv"), table.render(&meta)),
            Format::Json => (self.path(stem, "json"), json_document(&meta, body)),
        };
        write_atomic(&path, &text)?;
        Ok(path)
    }

    fn method(&self, sys: &LinearizedSystem) -> Result<Method> {
        match self.config.run.method {
            MethodChoice::Exact => Ok(Method::Exact),
            MethodChoice::Closed => Ok(Method::closed_for(sys)?),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Outcome {
    pub files: Vec<PathBuf>,
    pub report: String,
}

fn f(x: f64) -> String {
    fmt_f64(x)
}

fn point_json(op: &OperatingPoint) -> Value {
    json!({
        "delta_s_hz": to_hz(op.delta_s),
        "kappa_s_hz": to_hz(op.kappa_s),
        "g_omega_hz": [to_hz(op.coupling_dispersive.re), to_hz(op.coupling_dispersive.im)],
        "g_kappa_hz": [to_hz(op.coupling_dissipative.re), to_hz(op.coupling_dissipative.im)],
        "q_s": op.mean_field.map(|m| m.q_s),
        "abs_a_s": op.mean_field.map(|m| m.a_s.norm()),
    })
}

fn optimum_json(o: &OptimalSqueezing, omega_m: f64) -> Value {
    json!({
        "theta_deg": o.theta_opt.to_degrees(),
        "omega_offset_hz": to_hz(o.omega_opt - omega_m),
        "s": o.s_opt,
        "depth_db": o.depth_db,
        "rough": o.rough,
    })
}

/// The analytic regime matching a resonant point, if any.
fn regime_of(sys: &LinearizedSystem) -> Option<Regime> {
    let op = &sys.point;
    if !op.is_resonant() {
        return None;
    }
    let (gw, gk) = (op.coupling_dispersive.re, op.coupling_dissipative.re);
    Some(if gk == 0.0 {
        Regime::Dispersive
    } else if gw == 0.0 {
        Regime::Dissipative
    } else {
        Regime::Combined
    })
}

pub fn steady_state(ctx: &Context) -> Result<Outcome> {
    let params = ctx.config.physical_params()?;
    let rows: Vec<(f64, Option<OperatingPoint>)> = ctx
        .config
        .power_grid()
        .into_par_iter()
        .map(|p| match solve_steady_state(&params.with_power(p)) {
            Ok(op) => Ok((p, Some(op))),
            Err(ponderomotive_core::Error::Unphysical { .. }) => Ok((p, None)),
            Err(e) => Err(CliError::from(e)),
        })
        .collect::<Result<_>>()?;

    let mut table = CsvTable::new(&[
        "P_W", "Delta_Hz", "kappa_s_Hz", "Q_s", "abs_a_s", "G_omega_Hz", "G_kappa_Hz", "status",
    ]);
    let mut points = Vec::new();
    let mut unphysical = 0;
    for (p, op) in &rows {
        match op {
            Some(op) => {
                let mf = op.mean_field.expect("solved points carry a mean field");
                table.push(vec![
                    f(*p),
                    f(to_hz(op.delta_s)),
                    f(to_hz(op.kappa_s)),
                    f(mf.q_s),
                    f(mf.a_s.norm()),
                    f(to_hz(op.coupling_dispersive.norm())),
                    f(to_hz(op.coupling_dissipative.norm())),
                    "ok".into(),
                ]);
                points.push(json!({"power_w": p, "status": "ok", "point": point_json(op)}));
            }
            None => {
                unphysical += 1;
                let mut row = vec![f(*p)];
                row.extend(std::iter::repeat_n("nan".to_string(), 6));
                row.push("unphysical".into());
                table.push(row);
                points.push(json!({"power_w": p, "status": "unphysical"}));
            }
        }
    }
    let path = ctx.emit("steady-state", "steady_state", &table, json!({ "points": points }))?;
    Ok(Outcome {
        files: vec![path],
        report: format!("{} powers, {} unphysical", rows.len(), unphysical),
    })
}

pub fn spectrum(ctx: &Context) -> Result<Outcome> {
    let sys = ctx.config.linearized()?;
    let env = ctx.config.environment()?;
    let method = ctx.method(&sys)?;
    let grid = ctx.config.omega_grid()?;
    let theta_range = (ctx.config.theta_grid()[0], *ctx.config.theta_grid().last().unwrap());
    let numeric = optimal_numeric(&sys, &env, method, theta_range, &grid)?;
    let theta = ctx.config.run.theta_deg.map(|d| d * PI / 180.0).unwrap_or(numeric.theta_opt);
    let values = grid
        .par_iter()
        .map(|&w| Ok(method.quadratures(&sys, &env, w)?.at(theta)))
        .collect::<Result<Vec<f64>>>()?;
    let analytic = regime_of(&sys).map(|r| optimal_analytic(&sys, &env, r)).transpose()?;

    let mut table = CsvTable::new(&["omega_Hz_offset_from_mech_resonance", "theta_deg", "S", "depth_dB"]);
    for (&w, &s) in grid.iter().zip(&values) {
        let d = ponderomotive_core::spectra::depth_db(s);
        table.push(vec![f(to_hz(w - sys.omega_m)), f(theta.to_degrees()), f(s), f(d)]);
    }
    let body = json!({
        "method": method.name(),
        "operating_point": point_json(&sys.point),
        "n_th": env.n_th,
        "theta_deg": theta.to_degrees(),
        "omega_offset_hz": grid.iter().map(|w| to_hz(w - sys.omega_m)).collect::<Vec<_>>(),
        "s": values,
        "depth_db": values.iter().map(|&s| ponderomotive_core::spectra::depth_db(s)).collect::<Vec<_>>(),
        "optimum": optimum_json(&numeric, sys.omega_m),
        "analytic_optimum": analytic.map(|a| optimum_json(&a, sys.omega_m)),
    });
    let path = ctx.emit("spectrum", "spectrum", &table, body)?;
    let mut report = format!(
        "{} optimum {:.3} dB at theta {:.4} deg, offset {:.4} Hz",
        method.name(),
        numeric.depth_db,
        numeric.theta_opt.to_degrees(),
        to_hz(numeric.omega_opt - sys.omega_m)
    );
    if let Some(a) = analytic {
        report.push_str(&format!("\nanalytic optimum {:.3} dB{}", a.depth_db, if a.rough { " (rough)" } else { "" }));
    }
    Ok(Outcome {
        files: vec![path],
        report,
    })
}

pub fn spectrum_map(ctx: &Context) -> Result<Outcome> {
    let sys = ctx.config.linearized()?;
    let env = ctx.config.environment()?;
    let method = ctx.method(&sys)?;
    let omegas = ctx.config.omega_grid()?;
    let thetas = ctx.config.theta_grid();
    let map = sweep::spectrum_map(&sys, &env, method, &omegas, &thetas)?;

    let offsets: Vec<f64> = omegas.iter().map(|w| to_hz(w - sys.omega_m)).collect();
    let degrees: Vec<f64> = thetas.iter().map(|t| t.to_degrees()).collect();
    let mut table = CsvTable::new(&["omega_Hz_offset_from_mech_resonance", "theta_deg", "S", "depth_dB"]);
    for (it, deg) in degrees.iter().enumerate() {
        for (iw, off) in offsets.iter().enumerate() {
            let k = map.index(it, iw);
            table.push(vec![f(*off), f(*deg), f(map.s[k]), f(map.depth_db[k])]);
        }
    }
    let rows = |v: &[f64]| v.chunks(offsets.len()).map(|c| c.to_vec()).collect::<Vec<_>>();
    let body = json!({
        "method": method.name(),
        "operating_point": point_json(&sys.point),
        "n_th": env.n_th,
        "omega_offset_hz": offsets,
        "theta_deg": degrees,
        "s": rows(&map.s),
        "depth_db": rows(&map.depth_db),
    });
    let mut files = vec![ctx.emit("spectrum-map", "spectrum_map", &table, body)?];

    let sets: Vec<_> = ctx
        .config
        .grid
        .contour_levels_db
        .iter()
        .map(|&level| contour(&offsets, &degrees, &map.depth_db, level))
        .collect();
    let contour_path = ctx.path("spectrum_map_contours", "json");
    let doc = json_document(
        &ctx.meta("spectrum-map"),
        json!({"x": "omega_Hz_offset_from_mech_resonance", "y": "theta_deg", "contours": sets}),
    );
    write_atomic(&contour_path, &doc)?;
    files.push(contour_path);

    let mut report = format!("{} map, max depth {:.3} dB", method.name(), map.max_depth_db());
    for s in &sets {
        report.push_str(&format!("\n{} dB contour: {} polylines", s.level, s.polylines.len()));
    }
    Ok(Outcome { files, report })
}

/// The operating point with one enhanced coupling removed.
fn restrict(sys: &LinearizedSystem, keep_dispersive: bool, keep_dissipative: bool) -> LinearizedSystem {
    let mut out = *sys;
    out.point.mean_field = None;
    if !keep_dispersive {
        out.point.coupling_dispersive = 0.0.into();
    }
    if !keep_dissipative {
        out.point.coupling_dissipative = 0.0.into();
    }
    out
}

pub fn thermal_scan(ctx: &Context) -> Result<Outcome> {
    let sys = ctx.config.linearized()?;
    let cases = [
        ("dispersive", restrict(&sys, true, false), Regime::Dispersive),
        ("dissipative", restrict(&sys, false, true), Regime::Dissipative),
        ("combined", sys, Regime::Combined),
    ];
    let grid = ctx.config.omega_grid()?;
    let ns = ctx.config.n_th_grid();
    let jobs: Vec<(f64, usize)> = ns.iter().flat_map(|&n| (0..cases.len()).map(move |c| (n, c))).collect();
    let results = jobs
        .par_iter()
        .map(|&(n, c)| -> Result<_> {
            let (_, s, regime) = &cases[c];
            let env = ThermalEnvironment::from_occupancy(n)?;
            let method = ctx.method(s)?;
            let numeric = optimal_numeric(s, &env, method, (0.0, PI), &grid)?;
            let analytic = if s.point.is_resonant() {
                Some(optimal_analytic(s, &env, *regime)?)
            } else {
                None
            };
            Ok((numeric, analytic))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut table = CsvTable::new(&[
        "n_th",
        "temperature_K",
        "regime",
        "depth_numeric_dB",
        "theta_deg",
        "omega_Hz_offset_from_mech_resonance",
        "depth_analytic_dB",
    ]);
    let mut rows = Vec::new();
    for (&(n, c), (numeric, analytic)) in jobs.iter().zip(&results) {
        let t = occupancy_temperature(n, sys.omega_m)?;
        let a = analytic.map(|a| a.depth_db).unwrap_or(f64::NAN);
        table.push(vec![
            f(n),
            f(t),
            cases[c].0.into(),
            f(numeric.depth_db),
            f(numeric.theta_opt.to_degrees()),
            f(to_hz(numeric.omega_opt - sys.omega_m)),
            f(a),
        ]);
        rows.push(json!({
            "n_th": n,
            "temperature_k": t,
            "regime": cases[c].0,
            "numeric": optimum_json(numeric, sys.omega_m),
            "analytic": analytic.map(|a| optimum_json(&a, sys.omega_m)),
        }));
    }
    let body = json!({"operating_point": point_json(&sys.point), "rows": rows});
    let path = ctx.emit("thermal-scan", "thermal_scan", &table, body)?;
    Ok(Outcome {
        files: vec![path],
        report: format!("{} occupancies x {} regimes", ns.len(), cases.len()),
    })
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Stable => "stable",
        Verdict::Unstable => "unstable",
        Verdict::Marginal => "marginal",
    }
}

fn critical_json(c: &CriticalPower) -> Value {
    match c {
        CriticalPower::Onset {
            power,
            last_stable,
            kind,
            point,
        } => json!({
            "status": "onset",
            "power_w": power,
            "last_stable_w": last_stable,
            "kind": match kind { OnsetKind::Dynamical => "dynamical", OnsetKind::NoSteadyState => "no_steady_state" },
            "point_below_onset": point_json(point),
        }),
        CriticalPower::StableUpToCap { cap } => json!({"status": "stable_up_to_cap", "cap_w": cap}),
    }
}

pub fn stability_map(ctx: &Context) -> Result<Outcome> {
    let params = ctx.config.physical_params()?;
    let powers = ctx.config.power_grid();
    let deltas = ctx.config.delta_grid();
    let map = sweep::stability_map(&params, &powers, &deltas)?;
    let bad = map.mismatches();
    if bad > 0 {
        return Err(CliError::Numerical(format!(
            "Routh-Hurwitz and eigenvalue verdicts disagree in {bad} non-marginal cells"
        )));
    }
    let crit = critical_power(&params, ctx.config.critical.cap_w, ctx.config.critical.rel_tol);

    let deltas_hz: Vec<f64> = deltas.iter().map(|&d| to_hz(d)).collect();
    let mut table = CsvTable::new(&["P_W", "Delta_Hz", "margin_Hz", "verdict", "rh_stable", "eig_stable"]);
    let mut cells = Vec::new();
    for (ip, &p) in powers.iter().enumerate() {
        for (id, &d) in deltas_hz.iter().enumerate() {
            match map.cell(ip, id) {
                Cell::Linearized(s) => {
                    table.push(vec![
                        f(p),
                        f(d),
                        f(to_hz(s.margin)),
                        verdict_name(s.verdict).into(),
                        s.rh_stable.to_string(),
                        s.eig_stable.to_string(),
                    ]);
                    cells.push(json!({"margin_hz": to_hz(s.margin), "verdict": verdict_name(s.verdict),
                        "rh_stable": s.rh_stable, "eig_stable": s.eig_stable}));
                }
                Cell::Unphysical => {
                    table.push(vec![f(p), f(d), "nan".into(), "unphysical".into(), String::new(), String::new()]);
                    cells.push(json!({"verdict": "unphysical"}));
                }
            }
        }
    }
    let margins: Vec<f64> = map.cells.iter().map(|c| c.margin()).collect();
    let boundary = contour(&deltas_hz, &powers, &margins, 0.0);
    let regions = map.unstable_regions();
    let body = json!({
        "powers_w": powers,
        "deltas_hz": deltas_hz,
        "cells": cells,
        "unstable_regions": regions,
        "boundary": {"x": "Delta_Hz", "y": "P_W", "polylines": boundary.polylines},
        "critical_power": crit.as_ref().ok().map(critical_json),
    });
    let mut files = vec![ctx.emit("stability-map", "stability_map", &table, body)?];
    if ctx.config.output.format == Format::Csv {
        let path = ctx.path("stability_boundary", "json");
        let doc = json_document(
            &ctx.meta("stability-map"),
            json!({"x": "Delta_Hz", "y": "P_W", "polylines": boundary.polylines, "unstable_regions": regions}),
        );
        write_atomic(&path, &doc)?;
        files.push(path);
    }
    let unstable = map.cells.iter().filter(|c| c.is_unstable()).count();
    let mut report = format!(
        "{} cells, {} unstable in {} regions, verdicts agree",
        map.cells.len(),
        unstable,
        regions.len()
    );
    match crit {
        Ok(c) => report.push_str(&format!("\ncritical power: {}", describe_critical(&c))),
        Err(e) => report.push_str(&format!("\ncritical power: {e}")),
    }
    Ok(Outcome { files, report })
}

fn describe_critical(c: &CriticalPower) -> String {
    match c {
        CriticalPower::Onset { power, kind, .. } => format!(
            "{:.6} W ({})",
            power,
            match kind {
                OnsetKind::Dynamical => "dynamical instability",
                OnsetKind::NoSteadyState => "steady state lost",
            }
        ),
        CriticalPower::StableUpToCap { cap } => format!("stable up to {cap} W"),
    }
}

pub fn critical_power_cmd(ctx: &Context) -> Result<Outcome> {
    let params = ctx.config.physical_params()?;
    let c = critical_power(&params, ctx.config.critical.cap_w, ctx.config.critical.rel_tol)?;
    let mut table = CsvTable::new(&["status", "P_crit_W", "last_stable_W", "kind", "Delta_Hz", "G_omega_Hz", "G_kappa_Hz"]);
    match &c {
        CriticalPower::Onset {
            power,
            last_stable,
            kind,
            point,
        } => table.push(vec![
            "onset".into(),
            f(*power),
            f(*last_stable),
            match kind {
                OnsetKind::Dynamical => "dynamical".into(),
                OnsetKind::NoSteadyState => "no_steady_state".into(),
            },
            f(to_hz(point.delta_s)),
            f(to_hz(point.coupling_dispersive.norm())),
            f(to_hz(point.coupling_dissipative.norm())),
        ]),
        CriticalPower::StableUpToCap { cap } => {
            let mut row = vec!["stable_up_to_cap".to_string(), "nan".into(), f(*cap)];
            row.extend(std::iter::repeat_n(String::new(), 4));
            table.push(row);
        }
    }
    let path = ctx.emit("critical-power", "critical_power", &table, json!({"critical_power": critical_json(&c)}))?;
    Ok(Outcome {
        files: vec![path],
        report: describe_critical(&c),
    })
}

pub fn calibrate(ctx: &Context) -> Result<Outcome> {
    let cal = ctx
        .config
        .calibrate
        .as_ref()
        .ok_or_else(|| CliError::Config("calibrate needs a calibrate.* section".into()))?;
    let r = CalibrationReference {
        power: cal.power_w,
        coupling_dispersive: hz(cal.g_omega_hz),
        coupling_dissipative: hz(cal.g_kappa_hz),
        kappa_s: hz(cal.kappa_s_hz),
        delta_s: hz(cal.delta_hz),
        omega_l: ctx.config.omega_l(),
        omega_m: hz(ctx.config.model.omega_m_hz),
    };
    let c = calibrate_bare_couplings(&r)?;
    let mut table = CsvTable::new(&["g_omega_Hz", "g_kappa_Hz", "kappa_Hz"]);
    table.push(vec![f(to_hz(c.g_omega)), f(to_hz(c.g_kappa)), f(to_hz(c.kappa))]);
    let body = json!({"g_omega_hz": to_hz(c.g_omega), "g_kappa_hz": to_hz(c.g_kappa), "kappa_hz": to_hz(c.kappa)});
    let path = ctx.emit("calibrate", "calibrate", &table, body)?;
    Ok(Outcome {
        files: vec![path],
        report: format!(
            "g_omega = {} Hz, g_kappa = {} Hz, kappa = {} Hz",
            f(to_hz(c.g_omega)),
            f(to_hz(c.g_kappa)),
            f(to_hz(c.kappa))
        ),
    })
}

pub fn selftest_cmd(ctx: &Context) -> Result<Outcome> {
    let checks = selftest::run(ctx.config.run.seed, ctx.config.run.draws)?;
    let report = checks.iter().map(|c| c.line()).collect::<Vec<_>>().join("\n");
    let failed = checks.iter().filter(|c| !c.passed).count();
    if failed > 0 {
        return Err(CliError::Numerical(format!("{report}\n{failed} selftest checks failed")));
    }
    Ok(Outcome {
        files: Vec::new(),
        report,
    })
}
