use thiserror::Error;

/// Failure of a single firing attempt.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StepError {
    #[error("transition {transition} does not start in the current state")]
    WrongState { transition: usize },
    /// Coordinate is 1-based, matching the text format.
    #[error("counter {0} would drop below zero")]
    Underflow(usize),
    #[error("successor configuration lies inside a hole")]
    HoleViolation,
    #[error("counter {0} overflowed")]
    Overflow(usize),
    #[error("no transition with index {0}")]
    NoSuchTransition(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("state universe mismatch: {0} vs {1} states")]
    StateUniverseMismatch(usize, usize),
    #[error("alphabets differ")]
    AlphabetMismatch,
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unsupported acceptance condition: {0}")]
    UnsupportedAcceptance(String),
    #[error("input has holes, which this operation does not support")]
    HolesNotSupported,
    #[error("input has epsilon transitions, which this operation does not support")]
    EpsilonNotSupported,
    #[error("input is not syntactically deterministic: {0}")]
    NotDeterministic(String),
    #[error("control automaton has more than {k} maximal runs on {witness:?}")]
    NotKDeterministic { k: usize, witness: Vec<String> },
    #[error("invalid coordinate {0}")]
    InvalidCoordinate(usize),
    #[error("invalid monoid: {0}")]
    InvalidMonoid(String),
    #[error("{what} budget exhausted after {spent}")]
    BudgetExhausted { what: &'static str, spent: usize },
    #[error("epsilon cycle makes the run set infinite")]
    EpsilonCycle,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Step(#[from] StepError),
    #[error("{path}:{line}:{col}: {msg}")]
    Parse {
        path: String,
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("io error on {path}: {msg}")]
    Io { path: String, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
