use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime power")]
    NotAPrimePower(u32),
    #[error("field size {0} exceeds 256")]
    TooLarge(u32),
    #[error("modulus is not irreducible over GF({p}) (or does not have degree {m})")]
    NotIrreducible { p: u32, m: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("space of size {size} exceeds the explicit cap {cap}")]
    SpaceTooLarge { size: u128, cap: u64 },
    #[error("invalid groups: {0}")]
    InvalidGroups(String),
    #[error("invalid arguments: {0}")]
    InvalidArgs(String),
    #[error("block id {id} out of range (partition has {blocks} blocks)")]
    BadBlockId { id: usize, blocks: usize },
    #[error("grouped partition is not consecutive")]
    NotConsecutive,
    #[error("partition is not locally ({rho},{lambda})-bounded")]
    NotLocallyBounded { rho: usize, lambda: usize },
    #[error("code does not certify the requirement matrix: {0}")]
    CertificateMismatch(String),
    #[error("clique is not full-size: {0}")]
    NotFullSize(String),
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("search budget exceeded after {nodes} nodes")]
    SearchBudgetExceeded { nodes: u64 },
    #[error("budget exceeded: lower bound {lower}, upper bound {}", upper.map(|u| u.to_string()).unwrap_or_else(|| "unknown".into()))]
    BudgetExceeded { lower: usize, upper: Option<usize> },
    #[error("no construction available: {0}")]
    NoConstruction(String),
    #[error("malformed input: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
