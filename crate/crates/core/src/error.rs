use std::fmt;

use thiserror::Error;

/// Which of the two hypotheses on an additive pair failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairCondition {
    /// `<phi(z), psi(w)> = 0`
    Orthogonality,
    /// `a <phi(z), phi(w)> a* = (1 - a) <psi(z), psi(w)> (1 - a)*`
    Balance,
    /// `(1 - p)^2 <phi(z), phi(w)> = p^2 <psi(z), psi(w)>`
    ScalarBalance,
}

impl fmt::Display for PairCondition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PairCondition::Orthogonality => "orthogonality",
            PairCondition::Balance => "balance",
            PairCondition::ScalarBalance => "scalar balance",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid algebra shape {0:?}: need at least one block and every block size >= 1")]
    InvalidShape(Vec<usize>),

    #[error("shape mismatch: {left:?} vs {right:?}")]
    ShapeMismatch { left: Vec<usize>, right: Vec<usize> },

    #[error("malformed algebra element: {0}")]
    MalformedElement(String),

    #[error("{what} is numerically singular in block {block} (smallest singular value {sigma_min:e})")]
    NearSingular {
        what: &'static str,
        block: usize,
        sigma_min: f64,
    },

    #[error("element is not self-adjoint (|x - x*| = {deviation:e})")]
    NotSelfAdjoint { deviation: f64 },

    #[error("spectrum [{min_eig}, {max_eig}] is not contained in (0, 1)")]
    OrderViolation { min_eig: f64, max_eig: f64 },

    #[error("module space mismatch: {left} vs {right}")]
    SpaceMismatch { left: String, right: String },

    #[error("invalid orthogonal sampler mode: {0}")]
    InvalidMode(String),

    #[error("invalid sampler: {0}")]
    InvalidSampler(String),

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("not a linear mapping: {0}")]
    NotLinear(String),

    #[error("pair condition `{condition}` violated at basis pair ({z}, {w}): residual {residual:e}")]
    PairConditionViolated {
        condition: PairCondition,
        z: usize,
        w: usize,
        residual: f64,
    },

    #[error("additive pair has not been validated")]
    PairNotValidated,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
