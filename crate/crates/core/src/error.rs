use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode surfaced by the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input must be nonzero")]
    ZeroInput,
    #[error("vector must have a nonzero coordinate")]
    ZeroVector,
    #[error("{0} is not a prime")]
    NotPrime(String),
    #[error("cannot certify the factorization of {0} within the trial-division bound")]
    FactorizationBound(String),
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("input of length {len} exceeds the bound {bound}")]
    InputTooLarge { len: usize, bound: usize },

    #[error("digit {digit} is invalid for base {base}")]
    InvalidDigit { digit: u32, base: u32 },
    #[error("invalid automaton: {0}")]
    InvalidAutomaton(String),

    #[error("value out of range: {0}")]
    OutOfRange(String),
    #[error("digits of the target do not begin with the pattern ABCB")]
    PatternMismatch,
    #[error("place set must contain every prime divisor of the base {0}")]
    BadPlaceSet(u32),
    #[error("pattern period consists only of the digit base-1")]
    DegeneratePattern,

    #[error("power-sum roots must be positive, got {0}")]
    NonpositiveRoot(String),
    #[error("q-th root leaves the rationals: {0}")]
    IrrationalObstruction(String),
    #[error("peeling exceeded the step limit {0}")]
    StepLimit(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("negative discriminant {0}: not a surface intersection form")]
    HodgeViolation(String),
    #[error("self-intersection {0} is not positive")]
    DegenerateSelfIntersection(String),
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),
    #[error("pairing D.C_{0} is not positive")]
    NonpositivePairing(usize),
    #[error("no convergence after {0} iterations")]
    NoConvergence(usize),
    #[error("matrix entry ({0}, {1}) is not positive")]
    PositivityViolation(usize, usize),
    #[error("screen failed: {0}")]
    ScreenFailed(String),
    #[error("chain is not nested at position {0}")]
    NotNested(usize),
    #[error("n*r > 2g-2 is required for the Riemann-Roch value (r={r}, g={g}, n={n})")]
    OutOfRiemannRochRange { r: u64, g: u64, n: u64 },
    #[error("theta {0} outside [0, gamma']")]
    ThetaOutOfRange(String),
}
