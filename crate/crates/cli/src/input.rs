//! JSON configuration files and command-line overrides.

use std::path::Path;

use dirac_barrier::matcher::{PotentialProfile, Segment};
use dirac_barrier::{validate_config, BarrierConfig, ConfigDiagnostics};
use serde::Deserialize;

use crate::CliError;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(rename = "V")]
    pub v: Option<f64>,
    #[serde(rename = "S")]
    pub s: Option<f64>,
    pub a: Option<f64>,
    pub m: Option<f64>,
    pub segments: Option<Vec<SegmentSpec>>,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SegmentSpec {
    pub x0: f64,
    pub x1: f64,
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "S")]
    pub s: f64,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("malformed config: {e}")))
    }
}

/// Parameters given on the command line; each one overrides the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub v: Option<f64>,
    pub s: Option<f64>,
    pub a: Option<f64>,
    pub m: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Barrier(BarrierConfig, ConfigDiagnostics),
    Profile(PotentialProfile),
}

impl Input {
    pub fn mass(&self) -> f64 {
        match self {
            Input::Barrier(cfg, _) => cfg.m,
            Input::Profile(p) => p.mass(),
        }
    }

    pub fn barrier(&self) -> Result<BarrierConfig, CliError> {
        match self {
            Input::Barrier(cfg, _) => Ok(*cfg),
            Input::Profile(_) => {
                Err(CliError::Usage("this command needs a single barrier (V, S, a, m), not a segment profile".into()))
            }
        }
    }
}

pub fn resolve(file: Option<ConfigFile>, over: Overrides) -> Result<Input, CliError> {
    let file = file.unwrap_or_default();
    let m = over.m.or(file.m).unwrap_or(1.0);

    if let Some(specs) = file.segments {
        if over.v.is_some() || over.s.is_some() || over.a.is_some() {
            return Err(CliError::Usage("--V, --S and --a cannot override a segment profile".into()));
        }
        if specs.is_empty() {
            return Err(CliError::Validation("segment list is empty".into()));
        }
        let mut boundaries = vec![specs[0].x0];
        for (j, seg) in specs.iter().enumerate() {
            if seg.x0 != *boundaries.last().unwrap() {
                return Err(CliError::Validation(format!(
                    "segment {j} starts at {} but the previous one ends at {}",
                    seg.x0,
                    boundaries.last().unwrap()
                )));
            }
            boundaries.push(seg.x1);
        }
        let segments = specs.iter().map(|s| Segment { v: s.v, s: s.s }).collect();
        let profile = PotentialProfile::new(boundaries, segments, m).map_err(|e| CliError::Validation(e.to_string()))?;
        return Ok(Input::Profile(profile));
    }

    let missing = |name: &str| CliError::Usage(format!("missing barrier parameter {name} (use --{name} or a config file)"));
    let v = over.v.or(file.v).ok_or_else(|| missing("V"))?;
    let s = over.s.or(file.s).unwrap_or(0.0);
    let a = over.a.or(file.a).ok_or_else(|| missing("a"))?;
    let (cfg, diag) = validate_config(BarrierConfig { v, s, a, m }).map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(Input::Barrier(cfg, diag))
}
