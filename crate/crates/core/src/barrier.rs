//! Square-barrier configuration and energy-regime classification.
//!
//! All quantities are in natural units (ħ = c = 1): energies and the rest
//! mass share one unit and the barrier width is measured in inverse energy.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative tolerance used to decide that an energy sits on an analytically
/// exact point (band edge, threshold).
pub const EDGE_RTOL: f64 = 1e-9;

/// Absolute closeness window around `point` for [`EDGE_RTOL`].
#[inline]
pub fn edge_tolerance(point: f64) -> f64 {
    EDGE_RTOL * point.abs().max(1.0)
}

/// A single square barrier of width `a` on `[0, a]` carrying a vector
/// coupling `v` and a scalar coupling `s`, for a particle of rest mass `m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BarrierConfig {
    #[serde(rename = "V")]
    pub v: f64,
    #[serde(rename = "S")]
    pub s: f64,
    pub a: f64,
    pub m: f64,
}

impl BarrierConfig {
    /// Builds a validated configuration.
    pub fn new(v: f64, s: f64, a: f64, m: f64) -> Result<Self> {
        validate_config(BarrierConfig { v, s, a, m }).map(|(cfg, _)| cfg)
    }

    /// V₊ = V + S, the potential seen by the upper spinor component.
    #[inline]
    pub fn v_plus(&self) -> f64 {
        self.v + self.s
    }

    /// V₋ = V − S, the potential seen by the lower spinor component.
    #[inline]
    pub fn v_minus(&self) -> f64 {
        self.v - self.s
    }

    /// Effective mass m + S inside the barrier.
    #[inline]
    pub fn effective_mass(&self) -> f64 {
        self.m + self.s
    }
}

/// Non-fatal observations about a configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConfigDiagnostics {
    /// Whether V − 2m ≥ S ≥ −V holds, the necessary condition for
    /// sub-barrier full transmission.
    pub sub_barrier_bound: bool,
    /// S = −m within tolerance: the evanescent band collapses to the point ε = V.
    pub scalar_at_minus_mass: bool,
}

/// Checks `a > 0`, `m > 0` and finiteness, returning the configuration
/// untouched together with its diagnostics.
pub fn validate_config(raw: BarrierConfig) -> Result<(BarrierConfig, ConfigDiagnostics)> {
    let BarrierConfig { v, s, a, m } = raw;
    if ![v, s, a, m].iter().all(|x| x.is_finite()) {
        return Err(Error::InvalidConfig(format!(
            "all parameters must be finite (V={v}, S={s}, a={a}, m={m})"
        )));
    }
    if a <= 0.0 {
        return Err(Error::InvalidConfig(format!("barrier width a must be positive, got {a}")));
    }
    if m <= 0.0 {
        return Err(Error::InvalidConfig(format!("rest mass m must be positive, got {m}")));
    }
    let diagnostics = ConfigDiagnostics {
        sub_barrier_bound: v - 2.0 * m >= s && s >= -v,
        scalar_at_minus_mass: (s + m).abs() <= edge_tolerance(m),
    };
    Ok((raw, diagnostics))
}

/// A closed energy interval `[lo, hi]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyInterval {
    pub lo: f64,
    pub hi: f64,
}

impl EnergyInterval {
    /// Interval spanned by two endpoints given in either order.
    pub fn ordered(a: f64, b: f64) -> Self {
        EnergyInterval { lo: a.min(b), hi: a.max(b) }
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, e: f64) -> bool {
        self.lo <= e && e <= self.hi
    }

    pub fn contains_strictly(&self, e: f64) -> bool {
        self.lo < e && e < self.hi
    }

    pub fn contains_interval(&self, other: &EnergyInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }
}

/// Uniform, half-open energy grid `(lo, hi]` with `points` samples:
/// `lo + (hi - lo) * i / points` for `i = 1..=points`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnergyGrid {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl EnergyGrid {
    pub fn new(lo: f64, hi: f64, points: usize) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::InvalidConfig(format!("energy range ({lo}, {hi}] is empty")));
        }
        if points < 2 {
            return Err(Error::InvalidConfig(format!("grid needs at least 2 points, got {points}")));
        }
        Ok(EnergyGrid { lo, hi, points })
    }

    pub fn step(&self) -> f64 {
        (self.hi - self.lo) / self.points as f64
    }

    pub fn energy(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            self.hi
        } else {
            self.lo + (self.hi - self.lo) * (i + 1) as f64 / self.points as f64
        }
    }

    pub fn energies(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.points).map(move |i| self.energy(i))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalarCase {
    /// S > −m
    AboveMinusMass,
    /// S < −m
    BelowMinusMass,
    /// S = −m within tolerance
    AtMinusMass,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EnergySide {
    AboveV,
    /// Includes the tie ε = V.
    BelowV,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Oscillatory,
    Evanescent,
    BandEdge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct RegimeInfo {
    pub scalar_case: ScalarCase,
    pub energy_side: EnergySide,
    pub mode: Mode,
    pub in_klein_zone: bool,
}

/// Energies where the interior solution does not oscillate: the interval
/// with endpoints V₋ − m and V₊ + m, i.e. V ∓ (m + S).
pub fn evanescent_band(cfg: &BarrierConfig) -> EnergyInterval {
    EnergyInterval::ordered(cfg.v_minus() - cfg.m, cfg.v_plus() + cfg.m)
}

/// The Klein energy zone `[m, min(V₋ − m, V₊ + m)]`, present only when the
/// upper end exceeds the rest mass.
pub fn klein_zone(cfg: &BarrierConfig) -> Option<EnergyInterval> {
    let top = (cfg.v_minus() - cfg.m).min(cfg.v_plus() + cfg.m);
    (top > cfg.m).then_some(EnergyInterval { lo: cfg.m, hi: top })
}

/// Returns the band edge `energy` sits on, if any.
pub fn band_edge_at(cfg: &BarrierConfig, energy: f64) -> Option<f64> {
    let band = evanescent_band(cfg);
    [band.lo, band.hi]
        .into_iter()
        .find(|&edge| (energy - edge).abs() <= edge_tolerance(edge))
}

pub fn classify_regime(cfg: &BarrierConfig, energy: f64) -> Result<RegimeInfo> {
    if energy < cfg.m {
        return Err(Error::BelowContinuum { energy, mass: cfg.m });
    }
    let shifted = cfg.effective_mass();
    let scalar_case = if shifted.abs() <= edge_tolerance(cfg.m) {
        ScalarCase::AtMinusMass
    } else if shifted > 0.0 {
        ScalarCase::AboveMinusMass
    } else {
        ScalarCase::BelowMinusMass
    };
    let energy_side = if energy > cfg.v { EnergySide::AboveV } else { EnergySide::BelowV };
    let mode = if band_edge_at(cfg, energy).is_some() {
        Mode::BandEdge
    } else if evanescent_band(cfg).contains_strictly(energy) {
        Mode::Evanescent
    } else {
        Mode::Oscillatory
    };
    let in_klein_zone = klein_zone(cfg).is_some_and(|zone| zone.contains(energy));
    Ok(RegimeInfo { scalar_case, energy_side, mode, in_klein_zone })
}
