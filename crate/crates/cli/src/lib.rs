//! Command implementations behind the `dirac-barrier` binary. Each command
//! returns its rendered output so it can be tested without a process.

pub mod input;
pub mod output;

use std::path::Path;

use dirac_barrier::closedform::{nudge_off_singular, scatter};
use dirac_barrier::matcher::{solve_profile, PotentialProfile};
use dirac_barrier::resonance::{
    analytic_resonances, confirm_resonances, is_supercritical, supercritical_scalar_strengths, transmission_bands,
    ConfirmedResonance, SupercriticalCheck, TransmissionBand,
};
use dirac_barrier::{BarrierConfig, EnergyGrid};
use serde::Serialize;
use thiserror::Error;

use crate::input::Input;
use crate::output::{render_csv, render_json, render_scan, sig9, Format, ScanRow};

/// Largest closed-form vs matcher deviation `oracle-check` accepts.
pub const ORACLE_TOLERANCE: f64 = 1e-8;

/// Largest `| |R|² + |T|² − 1 |` accepted for matcher-only checks.
pub const UNITARITY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("oracle check failed: {0}")]
    OracleFailed(String),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::OracleFailed(_) => 3,
        }
    }
}

impl From<dirac_barrier::Error> for CliError {
    fn from(e: dirac_barrier::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

/// Scan grid `(emin, emax]` checked against the particle mass.
pub fn make_grid(mass: f64, emin: Option<f64>, emax: f64, points: usize) -> Result<EnergyGrid, CliError> {
    let emin = emin.unwrap_or(mass);
    if emin < mass {
        return Err(CliError::Usage(format!("--emin {emin} lies below the rest mass {mass}")));
    }
    if emax <= emin {
        return Err(CliError::Usage(format!("--emax {emax} must exceed --emin {emin}")));
    }
    if points < 2 {
        return Err(CliError::Usage(format!("--points must be at least 2, got {points}")));
    }
    Ok(EnergyGrid::new(emin, emax, points)?)
}

/// A scan plus notes for every grid point that had to be moved off the
/// threshold or a band edge.
#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    pub rows: Vec<ScanRow>,
    pub notes: Vec<String>,
}

pub fn scan(input: &Input, grid: &EnergyGrid) -> Result<Scan, CliError> {
    let mut rows = Vec::with_capacity(grid.points);
    let mut notes = Vec::new();
    match input {
        Input::Barrier(cfg, _) => {
            for e in grid.energies() {
                let (energy, moved) = nudge_off_singular(cfg, e);
                if moved {
                    notes.push(format!("grid point {} moved to {} (threshold or band edge)", sig9(e), energy));
                }
                let res = scatter(cfg, energy)?;
                rows.push(ScanRow { energy, t2: res.coef_t, r2: res.coef_r, mu2: Some(res.mu_sq) });
            }
        }
        Input::Profile(profile) => {
            for e in grid.energies() {
                let mut energy = e;
                if energy <= profile.mass() {
                    energy = profile.mass() * (1.0 + 1e-9);
                    notes.push(format!("grid point {} moved to {} (threshold)", sig9(e), energy));
                }
                let sol = solve_profile(profile, energy)?;
                rows.push(ScanRow { energy, t2: sol.coef_t(), r2: sol.coef_r(), mu2: None });
            }
        }
    }
    if let Some(bad) = rows.iter().find(|r| !(r.t2.is_finite() && r.r2.is_finite())) {
        return Err(CliError::Validation(format!("non-finite coefficients at ε = {}", bad.energy)));
    }
    Ok(Scan { rows, notes })
}

pub fn cmd_scan(input: &Input, grid: &EnergyGrid, format: Format) -> Result<(String, Vec<String>), CliError> {
    let Scan { rows, notes } = scan(input, grid)?;
    Ok((render_scan(&rows, format), notes))
}

pub fn resonance_table(cfg: &BarrierConfig, max_energy: f64) -> Vec<ConfirmedResonance> {
    confirm_resonances(cfg, &analytic_resonances(cfg, max_energy))
}

pub fn cmd_resonances(cfg: &BarrierConfig, max_energy: f64, format: Format) -> String {
    let table = resonance_table(cfg, max_energy);
    match format {
        Format::Json => render_json(&table),
        Format::Csv => {
            let rows: Vec<Vec<String>> = table
                .iter()
                .map(|c| {
                    let kinds: Vec<&str> = c.resonance.kinds.iter().map(|k| k.label()).collect();
                    vec![
                        kinds.join("+"),
                        c.resonance.oscillation_index().map(|n| n.to_string()).unwrap_or_default(),
                        sig9(c.resonance.energy),
                        c.refined.map(sig9).unwrap_or_default(),
                        c.confirmed.to_string(),
                    ]
                })
                .collect();
            render_csv(&["kind", "n", "energy", "refined", "confirmed"], &rows)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupercriticalRow {
    pub n: u32,
    #[serde(rename = "S")]
    pub s: f64,
    pub double_root: bool,
    pub check: SupercriticalCheck,
}

pub fn supercritical_rows(v: f64, a: f64, m: f64) -> Result<Vec<SupercriticalRow>, CliError> {
    if !(a > 0.0 && m > 0.0) {
        return Err(CliError::Validation(format!("a and m must be positive (a={a}, m={m})")));
    }
    let sols = supercritical_scalar_strengths(v, a, m)
        .map_err(|_| CliError::Validation("no supercritical configuration (V < m)".into()))?;
    let mut rows = Vec::new();
    for sol in sols {
        for &s in &sol.strengths {
            let check = is_supercritical(&BarrierConfig { v, s, a, m })?;
            rows.push(SupercriticalRow { n: sol.n, s, double_root: sol.double_root, check });
        }
    }
    Ok(rows)
}

pub fn cmd_supercritical(v: f64, a: f64, m: f64, format: Format) -> Result<String, CliError> {
    let rows = supercritical_rows(v, a, m)?;
    Ok(match format {
        Format::Json => render_json(&rows),
        Format::Csv => {
            let body: Vec<Vec<String>> = rows
                .iter()
                .map(|r| {
                    let mut fields = vec![r.n.to_string(), sig9(r.s), r.double_root.to_string(), r.check.supercritical.to_string()];
                    fields.extend(r.check.sequence.iter().map(|p| sig9(p.t2)));
                    fields
                })
                .collect();
            render_csv(
                &["n", "S", "double_root", "supercritical", "T2_m+1e-2", "T2_m+1e-4", "T2_m+1e-6", "T2_m+1e-8"],
                &body,
            )
        }
    })
}

pub fn cmd_bands(cfg: &BarrierConfig, grid: &EnergyGrid, threshold: f64, format: Format) -> Result<String, CliError> {
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(CliError::Usage(format!("--threshold must lie in (0, 1), got {threshold}")));
    }
    let bands: Vec<TransmissionBand> = transmission_bands(cfg, grid, threshold)?;
    Ok(match format {
        Format::Json => render_json(&bands),
        Format::Csv => {
            let rows: Vec<Vec<String>> = bands
                .iter()
                .map(|b| vec![sig9(b.interval.lo), sig9(b.interval.hi), sig9(b.min_t2), b.in_klein_zone.to_string()])
                .collect();
            render_csv(&["lo", "hi", "min_T2", "in_klein_zone"], &rows)
        }
    })
}

/// Scalar-strength sweep at fixed `V`, `a`, `m`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRequest {
    pub v: f64,
    pub a: f64,
    pub m: f64,
    pub s_from: f64,
    pub s_to: f64,
    pub s_steps: usize,
}

impl SweepRequest {
    pub fn strengths(&self) -> Vec<f64> {
        if self.s_steps == 1 {
            return vec![self.s_from];
        }
        let last = (self.s_steps - 1) as f64;
        (0..self.s_steps)
            .map(|i| self.s_from + (self.s_to - self.s_from) * i as f64 / last)
            .collect()
    }
}

/// Writes one scan file per frame plus `index.csv`; returns the frame paths.
pub fn cmd_sweep(
    req: &SweepRequest,
    emin: Option<f64>,
    emax: f64,
    points: usize,
    format: Format,
    out_dir: &Path,
) -> Result<Vec<std::path::PathBuf>, CliError> {
    if req.s_steps < 1 {
        return Err(CliError::Usage("--s-steps must be at least 1".into()));
    }
    std::fs::create_dir_all(out_dir)?;
    let mut index = Vec::new();
    let mut paths = Vec::new();
    for (frame, s) in req.strengths().into_iter().enumerate() {
        let (cfg, diag) = dirac_barrier::validate_config(BarrierConfig { v: req.v, s, a: req.a, m: req.m })?;
        let grid = make_grid(cfg.m, emin, emax, points)?;
        let (text, _) = cmd_scan(&Input::Barrier(cfg, diag), &grid, format)?;
        let path = out_dir.join(format!("frame_{frame:04}.{}", format.extension()));
        std::fs::write(&path, text)?;
        index.push(vec![frame.to_string(), sig9(s)]);
        paths.push(path);
    }
    std::fs::write(out_dir.join("index.csv"), render_csv(&["frame", "S"], &index))?;
    Ok(paths)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub points: usize,
    /// `None` when the closed form does not apply (more than one segment).
    pub max_delta_r: Option<f64>,
    pub max_delta_t: Option<f64>,
    pub max_delta_sum: Option<f64>,
    pub max_unitarity_error: f64,
    pub passed: bool,
}

pub fn oracle_check(input: &Input, grid: &EnergyGrid) -> Result<OracleReport, CliError> {
    let single = match input {
        Input::Barrier(cfg, _) => Some(*cfg),
        Input::Profile(p) if p.segments().len() == 1 => {
            let seg = p.segments()[0];
            Some(BarrierConfig { v: seg.v, s: seg.s, a: p.width(0), m: p.mass() })
        }
        Input::Profile(_) => None,
    };
    let mut unitarity: f64 = 0.0;
    match (single, input) {
        (Some(cfg), _) => {
            let profile = PotentialProfile::single_barrier(&cfg);
            let (mut dr, mut dt, mut sum) = (0.0f64, 0.0f64, 0.0f64);
            for e in grid.energies() {
                let (e, _) = nudge_off_singular(&cfg, e);
                let closed = scatter(&cfg, e)?;
                let oracle = solve_profile(&profile, e)?;
                let (r, t) = ((closed.r - oracle.r).norm(), (closed.t - oracle.t).norm());
                dr = dr.max(r);
                dt = dt.max(t);
                sum = sum.max(r + t);
                unitarity = unitarity.max((oracle.coef_r() + oracle.coef_t() - 1.0).abs());
                unitarity = unitarity.max((closed.coef_r + closed.coef_t - 1.0).abs());
            }
            Ok(OracleReport {
                points: grid.points,
                max_delta_r: Some(dr),
                max_delta_t: Some(dt),
                max_delta_sum: Some(sum),
                max_unitarity_error: unitarity,
                passed: sum <= ORACLE_TOLERANCE && !sum.is_nan(),
            })
        }
        (None, Input::Profile(profile)) => {
            for e in grid.energies() {
                let e = if e <= profile.mass() { profile.mass() * (1.0 + 1e-9) } else { e };
                let sol = solve_profile(profile, e)?;
                unitarity = unitarity.max((sol.coef_r() + sol.coef_t() - 1.0).abs());
            }
            Ok(OracleReport {
                points: grid.points,
                max_delta_r: None,
                max_delta_t: None,
                max_delta_sum: None,
                max_unitarity_error: unitarity,
                passed: unitarity <= UNITARITY_TOLERANCE,
            })
        }
        (None, Input::Barrier(..)) => unreachable!("a barrier always has a closed form"),
    }
}

pub fn render_oracle_report(report: &OracleReport, format: Format) -> String {
    match format {
        Format::Json => render_json(report),
        Format::Csv => {
            let opt = |x: Option<f64>| x.map(|v| format!("{v:e}")).unwrap_or_else(|| "skipped".into());
            render_csv(
                &["points", "max_dR", "max_dT", "max_dR_plus_dT", "max_unitarity_error", "passed"],
                &[vec![
                    report.points.to_string(),
                    opt(report.max_delta_r),
                    opt(report.max_delta_t),
                    opt(report.max_delta_sum),
                    format!("{:e}", report.max_unitarity_error),
                    report.passed.to_string(),
                ]],
            )
        }
    }
}
