//! Error type shared across the crate.

use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Two expansions were combined with incompatible directions.
    #[error("direction mismatch: expected {expected}, got {got}")]
    DirectionMismatch {
        expected: &'static str,
        got: &'static str,
    },

    /// An operation needed the expansion to be complete to a higher order
    /// than its cutoff guarantees.
    #[error("insufficient expansion: cutoff {cutoff} < required {required}")]
    InsufficientExpansion { cutoff: f64, required: f64 },

    /// Gamma evaluated at a non-positive integer.
    #[error("gamma pole at -{n}: residue {residue}, finite part {finite_part}")]
    GammaPole {
        n: u32,
        residue: f64,
        finite_part: f64,
    },

    /// Hurwitz/Riemann zeta evaluated at s = 1.
    #[error("zeta pole at s = 1: residue 1, finite part {finite_part}")]
    ZetaPole { finite_part: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    /// Numerical quadrature failed to reach the requested accuracy.
    #[error("quadrature did not converge: {context} (error estimate {estimate:.3e}, tolerance {tolerance:.3e})")]
    QuadratureFailure {
        context: String,
        estimate: f64,
        tolerance: f64,
    },

    /// A model definition violated an invariant.
    #[error("invalid model: {0}")]
    InvalidModel(String),

    /// Heat-trace summation cannot reach the tolerance for this t.
    #[error("heat trace unavailable at t = {t:.3e}: estimated {terms:.2e} terms exceed the {max_terms:.2e} ceiling")]
    HeatFloor { t: f64, terms: f64, max_terms: f64 },

    /// Independent evaluation routes disagree.
    #[error("route consistency failure for {what}: heat route {heat}, derivative route {derivative}, |diff| = {diff:.3e} > {tol:.3e}")]
    RouteMismatch {
        what: String,
        heat: Complex64,
        derivative: Complex64,
        diff: f64,
        tol: f64,
    },

    /// Evaluation requested on (or across) the spectrum.
    #[error("z = {z} lies on or across the negated spectrum; logarithm undefined")]
    OnSpectrum { z: Complex64 },

    /// Least-squares basis too ill-conditioned.
    #[error("fit basis ill-conditioned (condition {condition:.3e} > {limit:.3e}); change the sample grid")]
    IllConditioned { condition: f64, limit: f64 },

    #[error("json error: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
