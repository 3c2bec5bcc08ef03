use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("semantic error: {0}")]
    Semantic(String),

    #[error("not a ring: {0}")]
    NotARing(String),
    #[error("not local: {0}")]
    NotLocal(String),
    #[error("declared conductor is not the conductor: {0}")]
    ConductorNotExact(String),
    #[error("arithmetic genus {0} is below 2")]
    GenusTooSmall(usize),
    #[error("not a numerical semigroup: {0}")]
    NotASemigroup(String),
    #[error("divisor degree {0} is below 3")]
    DegreeTooSmall(usize),
    #[error("invalid curve data: {0}")]
    InvalidData(String),
    #[error("curve is not nearly normal")]
    NotNearlyNormal,
    #[error("parameter out of range: {0}")]
    BadRange(String),
    #[error("divisor meets a singular cluster at {0}")]
    SupportOnSingular(String),
    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("truncation order {order} insufficient: {what}")]
    TruncationInsufficient { order: i64, what: String },
    #[error("no valid probe among the first {0} candidates")]
    ProbeExhausted(usize),
    #[error("Hilbert function did not stabilize by degree {0}")]
    NoStabilization(usize),
    #[error("endomorphism rings did not stabilize: {0}")]
    StabilizationFailed(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("Euler characteristic inconsistent: {0}")]
    InconsistentEuler(String),
    #[error("no degree-2 factorization of the canonical map: {0}")]
    FactorizationFailed(String),
    #[error("canonical model check failed: {0}")]
    RmtViolation(String),
    #[error("model not verified: {0}")]
    ModelNotVerified(String),
    #[error("unsupported degree regime: {0}")]
    UnsupportedDegreeRegime(String),
    #[error("ideal generation fails: {0}")]
    GenerationFails(String),
    #[error("equivalence violated: {0}")]
    EquivalenceViolation(String),
    #[error("counterexample found: {0}")]
    CounterexampleFound(String),
}

/// Coarse classes used for process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Violation,
    Parse,
    Validation,
    Numeric,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Violation => 1,
            ErrorClass::Parse => 2,
            ErrorClass::Validation => 3,
            ErrorClass::Numeric => 4,
        }
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        use Error::*;
        match self {
            Syntax { .. } | Semantic(_) => ErrorClass::Parse,
            NotARing(_) | NotLocal(_) | ConductorNotExact(_) | GenusTooSmall(_) | NotASemigroup(_)
            | DegreeTooSmall(_) | InvalidData(_) | NotNearlyNormal | BadRange(_) | SupportOnSingular(_)
            | Precondition(_) => ErrorClass::Validation,
            TruncationInsufficient { .. } | ProbeExhausted(_) | NoStabilization(_) | StabilizationFailed(_) => {
                ErrorClass::Numeric
            }
            DimensionMismatch(_) | DegreeMismatch(_) | InconsistentEuler(_) | FactorizationFailed(_)
            | RmtViolation(_) | ModelNotVerified(_) | UnsupportedDegreeRegime(_) | GenerationFails(_)
            | EquivalenceViolation(_) | CounterexampleFound(_) => ErrorClass::Violation,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
