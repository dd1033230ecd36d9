//! Transmission resonances, zero-momentum (supercritical) configurations and
//! full-transmission bands.

use std::f64::consts::PI;

use serde::Serialize;

use crate::barrier::{band_edge_at, edge_tolerance, evanescent_band, klein_zone, BarrierConfig, EnergyGrid, EnergyInterval};
use crate::closedform::{nudge_off_singular, scatter};
use crate::error::{Error, Result};

/// `|R|²` below which a refined minimum counts as a resonance.
pub const RESONANCE_R2: f64 = 1e-10;

/// Offsets above threshold used to probe the `ε → m` limit.
pub const THRESHOLD_DELTAS: [f64; 4] = [1e-2, 1e-4, 1e-6, 1e-8];

/// Required `|T(m + δ)|²` at the smallest offset.
pub const SUPERCRITICAL_T2: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResonanceKind {
    /// `e^{2pa} = 1`, i.e. `ε = V ± √((S + m)² + (nπ/a)²)`.
    Oscillation { n: u32 },
    /// `μ = 0` at `ε₀ = −(V/S) m`.
    MuZero,
    /// The resonance sits at `ε = m`.
    ZeroMomentum,
}

impl ResonanceKind {
    pub fn label(&self) -> &'static str {
        match self {
            ResonanceKind::Oscillation { .. } => "oscillation",
            ResonanceKind::MuZero => "mu_zero",
            ResonanceKind::ZeroMomentum => "zero_momentum",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Resonance {
    pub energy: f64,
    /// Every mechanism producing this energy; coincident resonances are
    /// merged into one entry.
    pub kinds: Vec<ResonanceKind>,
}

impl Resonance {
    pub fn oscillation_index(&self) -> Option<u32> {
        self.kinds.iter().find_map(|k| match k {
            ResonanceKind::Oscillation { n } => Some(*n),
            _ => None,
        })
    }

    pub fn has_kind(&self, kind: ResonanceKind) -> bool {
        self.kinds.contains(&kind)
    }

    pub fn is_zero_momentum(&self) -> bool {
        self.has_kind(ResonanceKind::ZeroMomentum)
    }
}

/// Analytic resonances sorted by energy.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct ResonanceSet {
    pub resonances: Vec<Resonance>,
}

impl ResonanceSet {
    pub fn energies(&self) -> Vec<f64> {
        self.resonances.iter().map(|r| r.energy).collect()
    }

    pub fn len(&self) -> usize {
        self.resonances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.resonances.is_empty()
    }

    pub fn contains_energy(&self, energy: f64, tol: f64) -> bool {
        self.resonances.iter().any(|r| (r.energy - energy).abs() <= tol)
    }

    fn insert(&mut self, energy: f64, kind: ResonanceKind) {
        let tol = edge_tolerance(energy);
        if let Some(r) = self.resonances.iter_mut().find(|r| (r.energy - energy).abs() <= tol) {
            if !r.kinds.contains(&kind) {
                r.kinds.push(kind);
            }
        } else {
            self.resonances.push(Resonance { energy, kinds: vec![kind] });
        }
    }
}

/// All resonance energies in `[m, max_energy]` predicted by the
/// interior phase condition and by the impedance match `μ = 0`.
pub fn analytic_resonances(cfg: &BarrierConfig, max_energy: f64) -> ResonanceSet {
    let BarrierConfig { v, s, a, m } = *cfg;
    let mut set = ResonanceSet::default();
    let tol_m = edge_tolerance(m);
    let accept = |e: f64, kind: ResonanceKind, set: &mut ResonanceSet| {
        if e >= m - tol_m && e <= max_energy {
            set.insert(e.max(m), kind);
        }
    };

    let shifted_sq = (s + m) * (s + m);
    let reach = (v - m).max(max_energy - v) + tol_m;
    let mut n = 1u32;
    loop {
        let root = (shifted_sq + (n as f64 * PI / a).powi(2)).sqrt();
        if root > reach {
            break;
        }
        accept(v - root, ResonanceKind::Oscillation { n }, &mut set);
        accept(v + root, ResonanceKind::Oscillation { n }, &mut set);
        n += 1;
    }

    if s < 0.0 && s >= -v {
        accept(-(v / s) * m, ResonanceKind::MuZero, &mut set);
    }

    for r in &mut set.resonances {
        if (r.energy - m).abs() <= tol_m {
            r.energy = m;
            if !r.kinds.contains(&ResonanceKind::ZeroMomentum) {
                r.kinds.push(ResonanceKind::ZeroMomentum);
            }
        }
    }
    set.resonances.sort_by(|x, y| x.energy.total_cmp(&y.energy));
    set
}

/// `|R|²` with energies on the threshold or a band edge nudged upward.
fn reflection_sq(cfg: &BarrierConfig, energy: f64) -> Result<f64> {
    let (e, _) = nudge_off_singular(cfg, energy);
    Ok(scatter(cfg, e)?.coef_r)
}

/// Golden-section minimization of `|R|²` over `bracket`; succeeds only
/// when the minimum drops to [`RESONANCE_R2`].
pub fn refine_resonance(cfg: &BarrierConfig, bracket: EnergyInterval) -> Result<f64> {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    if lo < cfg.m {
        return Err(Error::BelowContinuum { energy: lo, mass: cfg.m });
    }
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = reflection_sq(cfg, x1)?;
    let mut f2 = reflection_sq(cfg, x2)?;
    for _ in 0..200 {
        if hi - lo <= 1e-13 * hi.abs().max(1.0) {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = reflection_sq(cfg, x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = reflection_sq(cfg, x2)?;
        }
    }
    let (at, min_r2) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if min_r2 <= RESONANCE_R2 {
        Ok(at)
    } else {
        Err(Error::NoResonance { lo: bracket.lo, hi: bracket.hi, at, min_r2 })
    }
}

/// One branch of the zero-momentum condition.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupercriticalSolution {
    pub n: u32,
    /// One value for `n = 0` and for a vanishing radicand, two otherwise.
    pub strengths: Vec<f64>,
    pub double_root: bool,
}

/// Scalar strengths `S` that put a resonance at `ε = m`: `S = −V` and
/// `S = −m ± √((V − m)² − (nπ/a)²)` for `1 ≤ n ≤ (a/π)(V − m)`.
pub fn supercritical_scalar_strengths(v: f64, a: f64, m: f64) -> Result<Vec<SupercriticalSolution>> {
    if v < m {
        return Err(Error::NoSupercriticality { v, m });
    }
    let mut out = vec![SupercriticalSolution { n: 0, strengths: vec![-v], double_root: false }];
    // Include the endpoint when (a/π)(V − m) is an integer up to round-off.
    let n_max = ((a / PI) * (v - m) + 1e-9).floor() as u32;
    let gap_sq = (v - m) * (v - m);
    for n in 1..=n_max {
        let radicand = gap_sq - (n as f64 * PI / a).powi(2);
        if radicand <= 1e-9 * gap_sq.max(1.0) {
            out.push(SupercriticalSolution { n, strengths: vec![-m], double_root: true });
        } else {
            let root = radicand.sqrt();
            out.push(SupercriticalSolution { n, strengths: vec![-m + root, -m - root], double_root: false });
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdProbe {
    pub delta: f64,
    pub t2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupercriticalCheck {
    pub supercritical: bool,
    pub sequence: Vec<ThresholdProbe>,
    pub notes: Vec<String>,
}

impl SupercriticalCheck {
    pub fn final_t2(&self) -> f64 {
        self.sequence.last().map_or(f64::NAN, |p| p.t2)
    }

    pub fn is_monotone(&self) -> bool {
        self.sequence.windows(2).all(|w| w[1].t2 >= w[0].t2 - 1e-12)
    }
}

/// Probes `|T(m + δ)|²` along [`THRESHOLD_DELTAS`]; supercritical when the
/// sequence rises monotonically and ends at or above [`SUPERCRITICAL_T2`].
pub fn is_supercritical(cfg: &BarrierConfig) -> Result<SupercriticalCheck> {
    let mut sequence = Vec::with_capacity(THRESHOLD_DELTAS.len());
    let mut notes = Vec::new();
    for &delta0 in &THRESHOLD_DELTAS {
        let mut delta = delta0;
        while band_edge_at(cfg, cfg.m + delta).is_some() {
            notes.push(format!("m + {delta:e} sits on a band edge; using δ = {:e}", delta / 10.0));
            delta /= 10.0;
        }
        let res = scatter(cfg, cfg.m + delta)?;
        sequence.push(ThresholdProbe { delta, t2: res.coef_t });
    }
    let mut check = SupercriticalCheck { supercritical: false, sequence, notes };
    check.supercritical = check.is_monotone() && check.final_t2() >= SUPERCRITICAL_T2;
    Ok(check)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TransmissionBand {
    pub interval: EnergyInterval,
    pub min_t2: f64,
    /// The band lies entirely inside the Klein zone.
    pub in_klein_zone: bool,
}

/// Default number of bisection steps applied to each band edge.
pub const BAND_EDGE_BISECTIONS: u32 = 6;

/// Maximal runs of `t2(ε) ≥ threshold` on the grid. Each edge between a
/// failing and a passing sample is bisected `bisections` times; the
/// reported edge is the innermost energy known to pass.
pub fn scan_bands<F>(t2: F, grid: &EnergyGrid, threshold: f64, bisections: u32) -> Result<Vec<(EnergyInterval, f64)>>
where
    F: Fn(f64) -> Result<f64>,
{
    if !(threshold > 0.0 && threshold < 1.0) {
        return Err(Error::InvalidConfig(format!("threshold must lie in (0, 1), got {threshold}")));
    }
    let energies: Vec<f64> = grid.energies().collect();
    let values = energies.iter().map(|&e| t2(e)).collect::<Result<Vec<f64>>>()?;

    let refine = |mut fail: f64, mut pass: f64, min: &mut f64| -> Result<f64> {
        for _ in 0..bisections {
            let mid = 0.5 * (fail + pass);
            let v = t2(mid)?;
            if v >= threshold {
                pass = mid;
                *min = min.min(v);
            } else {
                fail = mid;
            }
        }
        Ok(pass)
    };

    let mut bands = Vec::new();
    let mut i = 0;
    while i < energies.len() {
        if values[i] < threshold {
            i += 1;
            continue;
        }
        let start = i;
        while i < energies.len() && values[i] >= threshold {
            i += 1;
        }
        let end = i - 1;
        let mut min = values[start..=end].iter().copied().fold(f64::INFINITY, f64::min);
        let lo = if start > 0 { refine(energies[start - 1], energies[start], &mut min)? } else { energies[start] };
        let hi = if end + 1 < energies.len() { refine(energies[end + 1], energies[end], &mut min)? } else { energies[end] };
        bands.push((EnergyInterval { lo, hi }, min));
    }
    Ok(bands)
}

pub fn transmission_bands(cfg: &BarrierConfig, grid: &EnergyGrid, threshold: f64) -> Result<Vec<TransmissionBand>> {
    transmission_bands_refined(cfg, grid, threshold, BAND_EDGE_BISECTIONS)
}

pub fn transmission_bands_refined(
    cfg: &BarrierConfig,
    grid: &EnergyGrid,
    threshold: f64,
    bisections: u32,
) -> Result<Vec<TransmissionBand>> {
    if grid.lo < cfg.m {
        return Err(Error::BelowContinuum { energy: grid.lo, mass: cfg.m });
    }
    let eval = |e: f64| -> Result<f64> {
        let (e, _) = nudge_off_singular(cfg, e);
        Ok(scatter(cfg, e)?.coef_t)
    };
    let zone = klein_zone(cfg);
    Ok(scan_bands(eval, grid, threshold, bisections)?
        .into_iter()
        .map(|(interval, min_t2)| TransmissionBand {
            interval,
            min_t2,
            in_klein_zone: zone.is_some_and(|z| z.contains_interval(&interval)),
        })
        .collect())
}

/// Resonance energies inside the Klein zone, below the evanescent band.
pub fn sub_barrier_resonances(cfg: &BarrierConfig, set: &ResonanceSet) -> Vec<f64> {
    let Some(zone) = klein_zone(cfg) else { return Vec::new() };
    let band = evanescent_band(cfg);
    set.energies().into_iter().filter(|&e| zone.contains(e) && e < band.lo).collect()
}

/// Outcome of checking an analytic resonance numerically.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfirmedResonance {
    pub resonance: Resonance,
    /// Numerically located minimum of `|R|²`; `None` for `ε = m`, which is
    /// confirmed through the threshold limit instead.
    pub refined: Option<f64>,
    pub confirmed: bool,
}

/// Confirms every analytic resonance: `ε = m` through [`is_supercritical`],
/// all others by [`refine_resonance`] on a small bracket.
pub fn confirm_resonances(cfg: &BarrierConfig, set: &ResonanceSet) -> Vec<ConfirmedResonance> {
    let energies = set.energies();
    let band = evanescent_band(cfg);
    let threshold_check = is_supercritical(cfg).map(|c| c.supercritical).unwrap_or(false);
    set.resonances
        .iter()
        .enumerate()
        .map(|(idx, res)| {
            if res.is_zero_momentum() {
                return ConfirmedResonance { resonance: res.clone(), refined: None, confirmed: threshold_check };
            }
            let e = res.energy;
            let mut half = 1e-3f64.min(0.45 * (e - cfg.m));
            if idx > 0 {
                half = half.min(0.45 * (e - energies[idx - 1]));
            }
            if idx + 1 < energies.len() {
                half = half.min(0.45 * (energies[idx + 1] - e));
            }
            for edge in [band.lo, band.hi] {
                if (e - edge).abs() > 0.0 {
                    half = half.min(0.45 * (e - edge).abs());
                }
            }
            let refined = refine_resonance(cfg, EnergyInterval { lo: e - half, hi: e + half }).ok();
            let confirmed = refined.is_some_and(|r| (r - e).abs() <= 1e-6);
            ConfirmedResonance { resonance: res.clone(), refined, confirmed }
        })
        .collect()
}
