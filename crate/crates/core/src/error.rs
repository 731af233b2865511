use thiserror::Error;

use crate::level::Level;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("invalid fraction {0:?} (expected \"p/q\" or an integer)")]
    Fraction(String),
}

/// Failures of the Seifert / flat-connection layer.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeifertError {
    #[error("a Seifert-fibered homology sphere needs at least three exceptional fibers")]
    TooFewFibers,
    #[error("multiplicity {value} at position {index} must be at least 2")]
    MultiplicityTooSmall { index: usize, value: i64 },
    #[error("multiplicities at positions {0} and {1} are not coprime")]
    NotCoprime(usize, usize),
    #[error("product of multiplicities overflows")]
    Overflow,
    #[error("enumeration for {0} exceptional fibers is not supported")]
    Unsupported(usize),
    #[error("rotation numbers {0:?} admit no congruence label")]
    NoCongruenceSolution(Vec<i64>),
    #[error("rotation numbers {0:?} give inconsistent Chern-Simons values across sign choices")]
    InconsistentLabel(Vec<i64>),
    #[error("R-invariant for e = {e} evaluated to {value}, which is not within 1e-6 of an integer")]
    PrecisionFailure { e: i64, value: String },
}

/// Failures of the filtered complex algebra.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ComplexError {
    #[error("duplicate generator id {0:?}")]
    DuplicateId(String),
    #[error("unknown generator id {0:?}")]
    UnknownGenerator(String),
    #[error("cs level of {0:?} must lie in [0, 1)")]
    LevelOutOfRange(String),
    #[error("grading of {0:?} must lie in 0..8")]
    GradingOutOfRange(String),
    #[error("differential entry {source_id:?} -> {target:?} violates the degree or filtration rule")]
    InvalidEntry { source_id: String, target: String },
    #[error("differential does not square to zero ({source_id:?} -> {target:?} has coefficient {value})")]
    NotAComplex { source_id: String, target: String, value: i64 },
    #[error("level {0} equals a critical value and is not admissible")]
    ForbiddenLevel(Level),
    #[error("the differential of this complex is incomplete")]
    DifferentialIncomplete,
    #[error("cochain has degree {expected} but generator {id:?} has degree {found}")]
    DegreeMismatch { id: String, expected: u8, found: u8 },
    #[error("cochain is supported on {0:?}, which lies above the filtration level")]
    OutsideWindow(String),
}

/// Failures of the four-manifold invariants.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("operation is only defined for the product model Y x S^1")]
    UnsupportedModel,
    #[error("no cover data supplied for the {0}-fold cover")]
    MissingCover(u32),
    #[error("cover index must be positive")]
    ZeroCover,
    #[error("cs value {0} of a cover must lie in [0, 1)")]
    ValueOutOfRange(String),
    #[error("cover length l must be positive")]
    ZeroLength,
}

/// Failures of the obstruction engine (wraps the lower layers).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ObstructionError {
    #[error(transparent)]
    Seifert(#[from] SeifertError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("no theta data supplied (neither explicit counts nor a nonvanishing axiom)")]
    InsufficientAssumptions,
    #[error("nondegeneracy of flat connections was not asserted for an explicit complex")]
    NondegeneracyNotAsserted,
}
