use thiserror::Error;

/// Errors raised by the tower computations.
///
/// Variants are grouped into families (see [`ErrorFamily`]) so a driver can
/// map them onto stable exit codes.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("group closure exceeded the order bound {0}")]
    OrderExceeded(usize),
    #[error("coset enumeration exceeded {0} cosets")]
    Overflow(usize),
    #[error("search budget exhausted: {0}")]
    Budget(String),
    #[error("module too large for exhaustive vector enumeration (dim {dim}, p {p})")]
    TooLarge { dim: usize, p: u32 },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("generators do not define a subgroup of the target group")]
    NotASubgroup,
    #[error("permutation is not an involution on the basis")]
    NotInvolution,
    #[error("no compatible lift of the complement action was found")]
    ActionLiftFailed,
    #[error("extension collapsed: order {got}, expected {expected}")]
    Collapse { got: usize, expected: usize },
    #[error("class is not p' for p = {0}")]
    NotPPrime(u32),
    #[error("no Nielsen tuples lie over the given tuple")]
    EmptyFiber,
    #[error("Nielsen class is empty")]
    EmptyNielsenClass,
    #[error("Riemann-Hurwitz produced a non-integral or negative genus ({0}/2)")]
    NonIntegralGenus(i64),
    #[error("levels do not match: {0}")]
    MismatchedLevels(String),
    #[error("hypothesis not met: {0}")]
    HypothesisUnmet(String),
    #[error("elements span a subspace of dimension < 2")]
    RankDeficient,
    #[error("no element outside V_D: the extension is not a Frattini Schur slice")]
    NoAlpha,
    #[error("central extensions sit over incompatible levels: {0}")]
    IncompatibleLevels(String),
    #[error("group is not {0}-perfect")]
    NotPPerfect(u32),
    #[error("class list contains no pair of inverse classes")]
    NoInversePairs,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),
}

/// Coarse classification of [`Error`] values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorFamily {
    Budget,
    EmptyNielsen,
    Invariant,
    Input,
}

impl Error {
    pub fn family(&self) -> ErrorFamily {
        match self {
            Error::OrderExceeded(_)
            | Error::Overflow(_)
            | Error::Budget(_)
            | Error::TooLarge { .. } => ErrorFamily::Budget,
            Error::EmptyNielsenClass | Error::EmptyFiber => ErrorFamily::EmptyNielsen,
            Error::NonIntegralGenus(_)
            | Error::InvariantViolation(_)
            | Error::Collapse { .. }
            | Error::NoAlpha
            | Error::ActionLiftFailed => ErrorFamily::Invariant,
            _ => ErrorFamily::Input,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
