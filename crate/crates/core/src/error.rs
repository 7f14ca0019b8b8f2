use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported residue degree {0} (expected 1..=6)")]
    UnsupportedDegree(i64),
    #[error("precision {0} out of range (expected 5..=60)")]
    BadPrecision(i64),
    #[error("zero element where a nonzero one is required")]
    Zero,
    #[error("element is not a unit")]
    NotUnit,
    #[error("element is not integral")]
    NotIntegral,
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),
    #[error("invalid space invariants: {0}")]
    InvalidSpace(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("resource guard: {0}")]
    Guard(String),
}

pub type Result<T> = std::result::Result<T, Error>;
