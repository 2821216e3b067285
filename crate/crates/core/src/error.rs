use thiserror::Error;

/// Crate-wide error type. Variant names double as the machine-readable
/// error names emitted by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{q} is not a prime power")]
    NotPrimePower { q: u64 },
    #[error("field order {q} is not supported (need a prime, or one of 4, 8, 9, 16, 25, 27)")]
    UnsupportedOrder { q: u64 },
    #[error("division by zero in GF({q})")]
    DivisionByZero { q: u16 },
    #[error("unknown label `{label}`")]
    UnknownLabel { label: String },
    #[error("duplicate label `{label}` in ground set")]
    DuplicateLabel { label: String },
    #[error("ground sets do not match")]
    GroundMismatch,
    #[error("field or kind mismatch")]
    KindMismatch,
    #[error("matrix violates its {kind} invariant at ({row}, {col})")]
    KindViolation {
        kind: &'static str,
        row: String,
        col: String,
    },
    #[error("principal block is singular")]
    SingularPivotBlock,
    #[error("ground set has {n} elements, over the cap {cap}")]
    GroundSetTooLarge { n: usize, cap: usize },
    #[error("free gap has {n} elements, over the cap {cap}")]
    GapTooLarge { n: usize, cap: usize },
    #[error("invalid matrix representation: {reason}")]
    InvalidRepresentation { reason: String },
    #[error("chain is not a valid eulerian direction: {reason}")]
    NotIsotropicDirection { reason: String },
    #[error("chain-group is not isotropic")]
    NotIsotropic,
    #[error("chain-group is not Lagrangian")]
    NotLagrangian,
    #[error("chain is not eulerian for this chain-group")]
    NotEulerian,
    #[error("chains are not supplementary")]
    NotSupplementary,
    #[error("malformed decomposition tree: {reason}")]
    MalformedTree { reason: String },
    #[error("no linked optimal decomposition found; this contradicts the linkedness guarantee")]
    ExhaustionFailure,
    #[error("precondition failed: {reason}")]
    PreconditionFailed { reason: String },
    #[error("minor would drop the corank")]
    CorankDrop,
    #[error("invalid boundary: {reason}")]
    BadBoundary { reason: String },
    #[error("connection type is inconsistent with the given parts: {reason}")]
    InconsistentConnectionType { reason: String },
    #[error("feasible family is empty")]
    EmptyFamily,
    #[error("deletion leaves no feasible set")]
    EmptyAfterDeletion,
    #[error("family violates the symmetric exchange axiom")]
    ExchangeAxiomFailed,
    #[error("parse error at line {line}: {reason}")]
    ParseError { line: usize, reason: String },
}

impl Error {
    /// Stable machine-readable name, one per variant.
    pub fn name(&self) -> &'static str {
        match self {
            Error::NotPrimePower { .. } => "NotPrimePower",
            Error::UnsupportedOrder { .. } => "UnsupportedOrder",
            Error::DivisionByZero { .. } => "DivisionByZero",
            Error::UnknownLabel { .. } => "UnknownLabel",
            Error::DuplicateLabel { .. } => "DuplicateLabel",
            Error::GroundMismatch => "GroundMismatch",
            Error::KindMismatch => "KindMismatch",
            Error::KindViolation { .. } => "KindViolation",
            Error::SingularPivotBlock => "SingularPivotBlock",
            Error::GroundSetTooLarge { .. } => "GroundSetTooLarge",
            Error::GapTooLarge { .. } => "GapTooLarge",
            Error::InvalidRepresentation { .. } => "InvalidRepresentation",
            Error::NotIsotropicDirection { .. } => "NotIsotropicDirection",
            Error::NotIsotropic => "NotIsotropic",
            Error::NotLagrangian => "NotLagrangian",
            Error::NotEulerian => "NotEulerian",
            Error::NotSupplementary => "NotSupplementary",
            Error::MalformedTree { .. } => "MalformedTree",
            Error::ExhaustionFailure => "ExhaustionFailure",
            Error::PreconditionFailed { .. } => "PreconditionFailed",
            Error::CorankDrop => "CorankDrop",
            Error::BadBoundary { .. } => "BadBoundary",
            Error::InconsistentConnectionType { .. } => "InconsistentConnectionType",
            Error::EmptyFamily => "EmptyFamily",
            Error::EmptyAfterDeletion => "EmptyAfterDeletion",
            Error::ExchangeAxiomFailed => "ExchangeAxiomFailed",
            Error::ParseError { .. } => "ParseError",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
