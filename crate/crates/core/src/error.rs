use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("invalid potential profile: {0}")]
    InvalidProfile(String),

    #[error("energy {energy} lies below the continuum threshold m = {mass}")]
    BelowContinuum { energy: f64, mass: f64 },

    #[error("energy {energy} sits at the threshold ε = m; probe the limit with a δ-sequence instead")]
    Threshold { energy: f64 },

    #[error("energy {energy} sits at the evanescent band edge {edge}; nudge the energy off the edge")]
    BandEdge { energy: f64, edge: f64 },

    #[error("matching system is degenerate at energy {energy}: {detail}")]
    DegenerateEnergy { energy: f64, detail: String },

    #[error("no resonance in [{lo}, {hi}]: smallest |R|^2 found was {min_r2:e} at {at}")]
    NoResonance { lo: f64, hi: f64, at: f64, min_r2: f64 },

    #[error("no supercritical configuration: V = {v} is below the rest mass m = {m}")]
    NoSupercriticality { v: f64, m: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
