use crate::novikov::Energy;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("variant mismatch: cannot combine a Λ₀ scalar with a Λ scalar here")]
    VariantMismatch,
    #[error("Λ₀ scalar with negative exponent {0}")]
    NegativeExponent(Energy),
    #[error("no canonical reduction to Z/2 for an element of Λ")]
    NoReduction,
    #[error("division by zero")]
    DivisionByZero,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("not a chain map: {0}")]
    NotAChainMap(String),
    #[error("homotopy law violated at stage {stage}: {detail}")]
    HomotopyLaw { stage: usize, detail: String },
    #[error("invalid window: s = {s} > t = {t}")]
    InvalidWindow { s: Energy, t: Energy },
    #[error("differential does not square to zero: {0}")]
    NotSquareZero(String),
    #[error("group mismatch: {0}")]
    GroupMismatch(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("action is not free: {0}")]
    NotFree(String),
    #[error("complex is not a product built by this crate")]
    NotAProduct,
    #[error("invalid sphere model: group order {m}, dimension {n}")]
    InvalidSphereModel { m: usize, n: usize },
    #[error("unsupported group: {0}")]
    UnsupportedGroup(String),
    #[error("EG family too shallow: need connectivity {needed}, capped at {cap} stages")]
    FamilyTooShallow { needed: usize, cap: usize },
    #[error("invalid stratum: {0}")]
    InvalidStratum(String),
    #[error("invariant violated at {location}: {detail}")]
    Invariant { location: String, detail: String },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
