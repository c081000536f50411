//! Error type shared by every module in the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("mismatched discriminants: {left} vs {right}")]
    MismatchedDiscriminants { left: String, right: String },

    #[error("division by zero")]
    DivisionByZero,

    /// A value that must be rational turned out to carry a surd part.
    /// Every final quantity in the identities is rational, so this signals
    /// a failure somewhere upstream.
    #[error("irrational result: {0}")]
    IrrationalResult(String),

    #[error("no nonpositive-integer upper parameter; the series does not terminate")]
    NoTerminatingUpper,

    #[error("lower parameter collision: {param} yields a zero factor at k={k}")]
    LowerParameterCollision { param: String, k: u32 },

    #[error("prefactor undefined: ({param})_{order} contains a zero factor")]
    PrefactorUndefined { param: String, order: u32 },

    #[error("term ratio is not a rational function over the rationals")]
    RatioNotRational,

    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("graph has {vertices} vertices, above the subset-DP cap of {cap}; use the formula route")]
    Capacity { vertices: usize, cap: usize },

    #[error("parse error: {0}")]
    Parse(String),
}
