//! Closed-form reflection and transmission amplitudes for a single square
//! barrier on `[0, a]`.
//!
//! Outside the barrier the spinors are `(1, ±iγ) e^{±ikx}`; inside,
//! `ψ± = A± e^{px} + B± e^{-px}` with `p² = (m + S)² − (ε − V)²`. The
//! amplitudes are expressed through the impedance ratio
//! `μ = (iγ − α)/(iγ + α)`, where `α = p/(m + ε − V₋)`.

use num_complex::Complex64;
use serde::Serialize;

use crate::barrier::{band_edge_at, edge_tolerance, BarrierConfig};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Plane-wave data outside the barrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FreeKinematics {
    /// k = √(ε² − m²)
    pub k: f64,
    /// γ = √((ε − m)/(ε + m)) = k/(ε + m)
    pub gamma: f64,
}

pub fn free_kinematics(energy: f64, m: f64) -> Result<FreeKinematics> {
    if energy < m {
        return Err(Error::BelowContinuum { energy, mass: m });
    }
    let k = ((energy - m) * (energy + m)).sqrt();
    let gamma = ((energy - m) / (energy + m)).sqrt();
    Ok(FreeKinematics { k, gamma })
}

/// The two denominators of the component relations,
/// `m + ε − V₋` (upper) and `m − ε + V₊` (lower). Their product is `p²`.
fn denominators(cfg: &BarrierConfig, energy: f64) -> (f64, f64) {
    (cfg.m + energy - cfg.v_minus(), cfg.m - energy + cfg.v_plus())
}

/// Principal square root of the real `p²`: non-negative real inside the
/// evanescent band, positive imaginary where the interior oscillates.
pub fn barrier_momentum(cfg: &BarrierConfig, energy: f64) -> Complex64 {
    let (upper, lower) = denominators(cfg, energy);
    principal_sqrt(upper * lower)
}

fn principal_sqrt(x: f64) -> Complex64 {
    if x >= 0.0 {
        Complex64::new(x.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-x).sqrt())
    }
}

/// Interior quantities on the branch of `p` for which `|μ| ≤ 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BarrierKinematics {
    #[serde(serialize_with = "ser_complex")]
    pub p: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub alpha: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub mu: Complex64,
    /// `4iγα/(iγ + α)²`, the cancellation-free form of `1 − μ²`.
    #[serde(serialize_with = "ser_complex")]
    pub one_minus_mu_sq: Complex64,
    /// True when `p` is the negative of the principal root.
    pub branch_flipped: bool,
}

fn ser_complex<S: serde::Serializer>(z: &Complex64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeTuple;
    let mut t = s.serialize_tuple(2)?;
    t.serialize_element(&z.re)?;
    t.serialize_element(&z.im)?;
    t.end()
}

pub fn barrier_kinematics(cfg: &BarrierConfig, energy: f64) -> Result<BarrierKinematics> {
    let FreeKinematics { gamma, .. } = free_kinematics(energy, cfg.m)?;
    let (upper, lower) = denominators(cfg, energy);
    let p = principal_sqrt(upper * lower);

    // α = p/upper = lower/p; pick whichever divides by the larger quantity.
    let alpha = if upper.abs() >= lower.abs() {
        if upper.abs() <= edge_tolerance(energy) {
            return Err(Error::BandEdge { energy, edge: cfg.v_minus() - cfg.m });
        }
        p / upper
    } else {
        if p == Complex64::new(0.0, 0.0) {
            return Err(Error::BandEdge { energy, edge: cfg.v_minus() - cfg.m });
        }
        Complex64::new(lower, 0.0) / p
    };

    let ig = I * gamma;
    // p → −p sends α → −α and μ → 1/μ while leaving R and T unchanged;
    // keep the branch with |μ| ≤ 1.
    let (p, alpha, branch_flipped) = if (ig + alpha).norm() < (ig - alpha).norm() {
        (-p, -alpha, true)
    } else {
        (p, alpha, false)
    };
    let den = ig + alpha;
    let mu = (ig - alpha) / den;
    let one_minus_mu_sq = 4.0 * ig * alpha / (den * den);
    Ok(BarrierKinematics { p, alpha, mu, one_minus_mu_sq, branch_flipped })
}

/// Full single-barrier solution. The internal amplitudes refer to
/// `ψ± = A± e^{px} + B± e^{-px}` on the branch of `p` reported in
/// `kinematics`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScatteringResult {
    pub energy: f64,
    pub free: FreeKinematics,
    pub kinematics: BarrierKinematics,
    #[serde(serialize_with = "ser_complex")]
    pub r: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub t: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub a_plus: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub b_plus: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub a_minus: Complex64,
    #[serde(serialize_with = "ser_complex")]
    pub b_minus: Complex64,
    pub coef_r: f64,
    pub coef_t: f64,
    pub mu_sq: f64,
}

/// Guards shared by every amplitude evaluation: ε strictly above threshold
/// and off both band edges.
fn check_scattering_energy(cfg: &BarrierConfig, energy: f64) -> Result<()> {
    if energy < cfg.m {
        return Err(Error::BelowContinuum { energy, mass: cfg.m });
    }
    if energy - cfg.m <= edge_tolerance(cfg.m) {
        return Err(Error::Threshold { energy });
    }
    if let Some(edge) = band_edge_at(cfg, energy) {
        return Err(Error::BandEdge { energy, edge });
    }
    Ok(())
}

pub fn scatter(cfg: &BarrierConfig, energy: f64) -> Result<ScatteringResult> {
    check_scattering_energy(cfg, energy)?;
    let free = free_kinematics(energy, cfg.m)?;
    let kin = barrier_kinematics(cfg, energy)?;
    let BarrierKinematics { p, alpha, mu, one_minus_mu_sq, .. } = kin;
    let a = cfg.a;
    let mu_sq = mu * mu;
    let outgoing_phase = Complex64::new(0.0, -free.k * a).exp();

    // Never exponentiate a growing real part: for Re(p) > 0 divide through
    // by e^{2pa}.
    let (r, t) = if p.re > 0.0 {
        let decay = (-p * a).exp();
        let decay_sq = decay * decay;
        let den = decay_sq - mu_sq;
        (mu * (decay_sq - 1.0) / den, decay * outgoing_phase * one_minus_mu_sq / den)
    } else {
        let growth = (p * a).exp();
        let growth_sq = growth * growth;
        let den = 1.0 - growth_sq * mu_sq;
        (mu * (1.0 - growth_sq) / den, growth * outgoing_phase * one_minus_mu_sq / den)
    };

    let ig = I * free.gamma;
    let a_plus = ((ig + alpha) - (ig - alpha) * r) / (2.0 * alpha);
    let b_plus = -((ig - alpha) - (ig + alpha) * r) / (2.0 * alpha);

    Ok(ScatteringResult {
        energy,
        free,
        kinematics: kin,
        r,
        t,
        a_plus,
        b_plus,
        a_minus: alpha * a_plus,
        b_minus: -alpha * b_plus,
        coef_r: r.norm_sqr(),
        coef_t: t.norm_sqr(),
        mu_sq: mu.norm_sqr(),
    })
}

/// `(|R|², |T|², |μ|²)`.
pub fn coefficients(cfg: &BarrierConfig, energy: f64) -> Result<(f64, f64, f64)> {
    let res = scatter(cfg, energy)?;
    Ok((res.coef_r, res.coef_t, res.mu_sq))
}

/// Moves `energy` upward off the threshold and the band edges, returning
/// the adjusted energy and whether it moved.
pub fn nudge_off_singular(cfg: &BarrierConfig, energy: f64) -> (f64, bool) {
    let mut e = energy;
    let mut moved = false;
    for _ in 0..16 {
        match check_scattering_energy(cfg, e) {
            Err(Error::Threshold { .. }) | Err(Error::BandEdge { .. }) => {
                e += edge_tolerance(e);
                moved = true;
            }
            _ => break,
        }
    }
    (e, moved)
}
