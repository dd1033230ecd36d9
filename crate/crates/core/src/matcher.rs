//! Scattering off an arbitrary sequence of constant `(V, S)` segments by
//! direct spinor matching at every interface.
//!
//! This module never touches the closed-form amplitudes; it builds the
//! interior solutions from the first-order component relations
//!
//! ```text
//! ψ₊' = (m + ε − V₋) ψ₋        ψ₋' = (m − ε + V₊) ψ₊
//! ```
//!
//! and solves the resulting dense linear system for `R`, `T` and every
//! segment amplitude. Outside the profile the potentials vanish.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::barrier::BarrierConfig;
use crate::error::{Error, Result};

type Spinor = [Complex64; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Below this value of `|p|·width` a segment uses the `{1, x}` basis.
pub const DEGENERATE_PW: f64 = 1e-8;

/// Largest interface mismatch accepted from the linear solve.
pub const RESIDUAL_LIMIT: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub v: f64,
    pub s: f64,
}

/// Boundaries `x₀ < x₁ < … < x_N` with segment `j` occupying
/// `[x_j, x_{j+1}]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialProfile {
    boundaries: Vec<f64>,
    segments: Vec<Segment>,
    mass: f64,
}

impl PotentialProfile {
    pub fn new(boundaries: Vec<f64>, segments: Vec<Segment>, mass: f64) -> Result<Self> {
        if segments.is_empty() {
            return Err(Error::InvalidProfile("at least one segment is required".into()));
        }
        if boundaries.len() != segments.len() + 1 {
            return Err(Error::InvalidProfile(format!(
                "{} segments need {} boundaries, got {}",
                segments.len(),
                segments.len() + 1,
                boundaries.len()
            )));
        }
        if !boundaries.iter().all(|x| x.is_finite())
            || !segments.iter().all(|s| s.v.is_finite() && s.s.is_finite())
        {
            return Err(Error::InvalidProfile("non-finite boundary or potential".into()));
        }
        if let Some(w) = boundaries.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidProfile(format!(
                "boundaries must increase strictly ({} then {})",
                w[0], w[1]
            )));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(Error::InvalidProfile(format!("rest mass must be positive, got {mass}")));
        }
        Ok(PotentialProfile { boundaries, segments, mass })
    }

    /// The square barrier on `[0, a]`.
    pub fn single_barrier(cfg: &BarrierConfig) -> Self {
        PotentialProfile {
            boundaries: vec![0.0, cfg.a],
            segments: vec![Segment { v: cfg.v, s: cfg.s }],
            mass: cfg.m,
        }
    }

    pub fn boundaries(&self) -> &[f64] {
        &self.boundaries
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn width(&self, j: usize) -> f64 {
        self.boundaries[j + 1] - self.boundaries[j]
    }

    /// Same potential with every segment cut into `pieces` equal parts.
    pub fn subdivided(&self, pieces: usize) -> Self {
        let pieces = pieces.max(1);
        let mut boundaries = vec![self.boundaries[0]];
        let mut segments = Vec::with_capacity(self.segments.len() * pieces);
        for (j, seg) in self.segments.iter().enumerate() {
            let (x0, x1) = (self.boundaries[j], self.boundaries[j + 1]);
            for q in 1..=pieces {
                let x = if q == pieces { x1 } else { x0 + (x1 - x0) * q as f64 / pieces as f64 };
                boundaries.push(x);
                segments.push(*seg);
            }
        }
        PotentialProfile { boundaries, segments, mass: self.mass }
    }
}

/// Which component relation normalizes the exponential basis spinors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BasisForm {
    /// Whichever of the two denominators is larger in magnitude.
    #[default]
    Auto,
    /// `(1, ±α)` with `α = p/(m + ε − V₋)`.
    Upper,
    /// `(±β, 1)` with `β = p/(m − ε + V₊)`.
    Lower,
}

/// Two independent solutions inside one constant segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentBasis {
    /// `plus·e^{p(x − x_R)}` and `minus·e^{−p(x − x_L)}`, each referenced to
    /// the edge where it is largest.
    Exponential { p: Complex64, plus: Spinor, minus: Spinor },
    /// `p → 0` limit: `(1, lower·ξ)` and `(upper·ξ, 1)`, `ξ = x − x_L`.
    Linear { upper: f64, lower: f64 },
}

impl SegmentBasis {
    /// Values of the two basis spinors at local coordinate `xi` in a segment
    /// of the given width.
    fn columns(&self, xi: f64, width: f64) -> [Spinor; 2] {
        match *self {
            SegmentBasis::Exponential { p, plus, minus } => {
                let grow = (p * (xi - width)).exp();
                let decay = (-p * xi).exp();
                [[plus[0] * grow, plus[1] * grow], [minus[0] * decay, minus[1] * decay]]
            }
            SegmentBasis::Linear { upper, lower } => [
                [ONE, Complex64::new(lower * xi, 0.0)],
                [Complex64::new(upper * xi, 0.0), ONE],
            ],
        }
    }

    pub fn momentum(&self) -> Complex64 {
        match *self {
            SegmentBasis::Exponential { p, .. } => p,
            SegmentBasis::Linear { .. } => ZERO,
        }
    }
}

/// Basis for a segment of potentials `(v, s)` and the given width.
pub fn segment_basis(v: f64, s: f64, m: f64, energy: f64, width: f64, form: BasisForm) -> SegmentBasis {
    let upper = m + energy - (v - s);
    let lower = m - energy + (v + s);
    let p_sq = upper * lower;
    let p = if p_sq >= 0.0 {
        Complex64::new(p_sq.sqrt(), 0.0)
    } else {
        Complex64::new(0.0, (-p_sq).sqrt())
    };
    if p.norm() * width <= DEGENERATE_PW {
        return SegmentBasis::Linear { upper, lower };
    }
    let use_upper = match form {
        BasisForm::Upper => true,
        BasisForm::Lower => false,
        BasisForm::Auto => upper.abs() >= lower.abs(),
    };
    if use_upper {
        let alpha = p / upper;
        SegmentBasis::Exponential { p, plus: [ONE, alpha], minus: [ONE, -alpha] }
    } else {
        let beta = p / lower;
        SegmentBasis::Exponential { p, plus: [beta, ONE], minus: [-beta, ONE] }
    }
}

/// Free-space waves `(1, ±iγ) e^{±ikx}` referenced to the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
struct FreeWaves {
    k: f64,
    gamma: f64,
}

impl FreeWaves {
    fn new(m: f64, energy: f64) -> Self {
        let k = ((energy - m) * (energy + m)).sqrt();
        FreeWaves { k, gamma: k / (energy + m) }
    }

    fn right_moving(&self, x: f64) -> Spinor {
        let ph = Complex64::new(0.0, self.k * x).exp();
        [ph, Complex64::new(0.0, self.gamma) * ph]
    }

    fn left_moving(&self, x: f64) -> Spinor {
        let ph = Complex64::new(0.0, -self.k * x).exp();
        [ph, Complex64::new(0.0, -self.gamma) * ph]
    }
}

/// Coefficients of `ψ± = A± e^{pξ} + B± e^{−pξ}` in one segment, with `ξ`
/// measured from the segment's left edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComponentAmplitudes {
    pub p: Complex64,
    pub a_plus: Complex64,
    pub b_plus: Complex64,
    pub a_minus: Complex64,
    pub b_minus: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSolution {
    pub energy: f64,
    pub r: Complex64,
    pub t: Complex64,
    /// Coefficients of the two [`SegmentBasis`] solutions in each segment.
    pub amplitudes: Vec<(Complex64, Complex64)>,
    pub bases: Vec<SegmentBasis>,
    pub residual: f64,
    free: FreeWaves,
}

impl ProfileSolution {
    pub fn coef_r(&self) -> f64 {
        self.r.norm_sqr()
    }

    pub fn coef_t(&self) -> f64 {
        self.t.norm_sqr()
    }

    /// Component amplitudes of segment `j`, or `None` for a `{1, x}` segment.
    pub fn component_amplitudes(&self, profile: &PotentialProfile, j: usize) -> Option<ComponentAmplitudes> {
        let SegmentBasis::Exponential { p, plus, minus } = *self.bases.get(j)? else {
            return None;
        };
        let (a, b) = self.amplitudes[j];
        let a_left = a * (-p * profile.width(j)).exp();
        Some(ComponentAmplitudes {
            p,
            a_plus: a_left * plus[0],
            a_minus: a_left * plus[1],
            b_plus: b * minus[0],
            b_minus: b * minus[1],
        })
    }

    fn segment_value(&self, profile: &PotentialProfile, j: usize, xi: f64) -> Spinor {
        let [u, w] = self.bases[j].columns(xi, profile.width(j));
        let (a, b) = self.amplitudes[j];
        [a * u[0] + b * w[0], a * u[1] + b * w[1]]
    }

    fn left_value(&self, x: f64) -> Spinor {
        let inc = self.free.right_moving(x);
        let refl = self.free.left_moving(x);
        [inc[0] + self.r * refl[0], inc[1] + self.r * refl[1]]
    }

    fn right_value(&self, x: f64) -> Spinor {
        let out = self.free.right_moving(x);
        [self.t * out[0], self.t * out[1]]
    }

    /// Spinor values just left and just right of interface `i`.
    fn interface_sides(&self, profile: &PotentialProfile, i: usize) -> (Spinor, Spinor) {
        let x = profile.boundaries[i];
        let n = profile.segments.len();
        let left = if i == 0 { self.left_value(x) } else { self.segment_value(profile, i - 1, profile.width(i - 1)) };
        let right = if i == n { self.right_value(x) } else { self.segment_value(profile, i, 0.0) };
        (left, right)
    }
}

/// Builds and solves the `2(N + 1)` matching equations with unit incident
/// amplitude from the left.
pub fn solve_profile(profile: &PotentialProfile, energy: f64) -> Result<ProfileSolution> {
    solve_profile_with(profile, energy, BasisForm::Auto)
}

pub fn solve_profile_with(profile: &PotentialProfile, energy: f64, form: BasisForm) -> Result<ProfileSolution> {
    let m = profile.mass;
    if energy < m {
        return Err(Error::BelowContinuum { energy, mass: m });
    }
    if energy <= m {
        return Err(Error::Threshold { energy });
    }
    let free = FreeWaves::new(m, energy);
    let n = profile.segments.len();
    let bases: Vec<SegmentBasis> = profile
        .segments
        .iter()
        .enumerate()
        .map(|(j, seg)| segment_basis(seg.v, seg.s, m, energy, profile.width(j), form))
        .collect();

    // Unknown layout: [R, A_0, B_0, …, A_{N−1}, B_{N−1}, T].
    let size = 2 * n + 2;
    let mut matrix = DMatrix::<Complex64>::zeros(size, size);
    let mut rhs = DVector::<Complex64>::zeros(size);
    for i in 0..=n {
        let x = profile.boundaries[i];
        let rows = [2 * i, 2 * i + 1];
        if i == 0 {
            let inc = free.right_moving(x);
            let refl = free.left_moving(x);
            for c in 0..2 {
                matrix[(rows[c], 0)] += refl[c];
                rhs[rows[c]] -= inc[c];
            }
        } else {
            let j = i - 1;
            let cols = bases[j].columns(profile.width(j), profile.width(j));
            for c in 0..2 {
                matrix[(rows[c], 1 + 2 * j)] += cols[0][c];
                matrix[(rows[c], 2 + 2 * j)] += cols[1][c];
            }
        }
        if i == n {
            let out = free.right_moving(x);
            for c in 0..2 {
                matrix[(rows[c], size - 1)] -= out[c];
            }
        } else {
            let cols = bases[i].columns(0.0, profile.width(i));
            for c in 0..2 {
                matrix[(rows[c], 1 + 2 * i)] -= cols[0][c];
                matrix[(rows[c], 2 + 2 * i)] -= cols[1][c];
            }
        }
    }

    let x = matrix.lu().solve(&rhs).ok_or_else(|| Error::DegenerateEnergy {
        energy,
        detail: format!("singular {size}x{size} matching system"),
    })?;
    if !x.iter().all(|z| z.is_finite()) {
        return Err(Error::DegenerateEnergy { energy, detail: "non-finite amplitudes".into() });
    }

    let mut solution = ProfileSolution {
        energy,
        r: x[0],
        t: x[size - 1],
        amplitudes: (0..n).map(|j| (x[1 + 2 * j], x[2 + 2 * j])).collect(),
        bases,
        residual: 0.0,
        free,
    };
    let (residual, worst) = interface_residuals(&solution, profile);
    if !(residual <= RESIDUAL_LIMIT) {
        return Err(Error::DegenerateEnergy {
            energy,
            detail: format!("interface {worst} mismatch {residual:e} exceeds {RESIDUAL_LIMIT:e}"),
        });
    }
    solution.residual = residual;
    Ok(solution)
}

/// Two-component wavefunction at `x`.
pub fn evaluate_spinor(solution: &ProfileSolution, profile: &PotentialProfile, x: f64) -> Spinor {
    let b = &profile.boundaries;
    if x < b[0] {
        return solution.left_value(x);
    }
    if x > b[b.len() - 1] {
        return solution.right_value(x);
    }
    let j = b.partition_point(|&xb| xb <= x).saturating_sub(1).min(profile.segments.len() - 1);
    solution.segment_value(profile, j, x - b[j])
}

fn interface_residuals(solution: &ProfileSolution, profile: &PotentialProfile) -> (f64, usize) {
    let mut worst = (0.0, 0);
    for i in 0..profile.boundaries.len() {
        let (left, right) = solution.interface_sides(profile, i);
        for c in 0..2 {
            let scale = left[c].norm().max(right[c].norm());
            let mismatch = if scale > 0.0 { (left[c] - right[c]).norm() / scale } else { 0.0 };
            if mismatch > worst.0 || mismatch.is_nan() {
                worst = (mismatch, i);
            }
        }
    }
    worst
}

/// Largest relative mismatch of either component across any interface.
pub fn continuity_residual(solution: &ProfileSolution, profile: &PotentialProfile) -> f64 {
    interface_residuals(solution, profile).0
}
