//! Relativistic scattering of a Dirac particle in 1+1 dimensions off square
//! barriers that combine vector (`V`) and scalar (`S`) coupling.
//!
//! * [`barrier`]: configuration, validation and energy regimes.
//! * [`closedform`]: analytic reflection/transmission amplitudes.
//! * [`matcher`]: an independent interface-matching solver for arbitrary
//!   piecewise-constant profiles, used as an oracle for the closed form.
//! * [`resonance`]: resonance spectra, supercriticality and transmission bands.

pub mod barrier;
pub mod closedform;
pub mod error;
pub mod matcher;
pub mod resonance;

pub use barrier::{
    classify_regime, evanescent_band, klein_zone, validate_config, BarrierConfig, ConfigDiagnostics,
    EnergyGrid, EnergyInterval, RegimeInfo,
};
pub use closedform::{coefficients, scatter, ScatteringResult};
pub use error::{Error, Result};

pub use matcher::{solve_profile, PotentialProfile, ProfileSolution};
