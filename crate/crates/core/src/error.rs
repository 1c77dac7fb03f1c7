use thiserror::Error;

/// Errors raised by the algebra engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime in the supported range 2 <= p < 2^31")]
    InvalidPrime(u64),
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown variable `{name}` at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("operands live in different rings")]
    RingMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("expected a univariate polynomial")]
    Multivariate,
    #[error("resource limit exceeded: {0}")]
    ResourceExceeded(String),
    #[error("{0} must be nonzero")]
    ZeroArgument(&'static str),
    #[error("exponent overflow")]
    Overflow,
    #[error("polynomial has a factor outside the prime table (residual {residual})")]
    UncoveredFactor { residual: String },
    #[error("prime tables differ")]
    TableMismatch,
    #[error("{0}")]
    NotIrreducible(String),
    #[error("divisor is not integral after scaling by p^e - 1{}", match .min_e { Some(e) => format!(" (smallest valid e is {e})"), None => String::from(" for any e") })]
    NonIntegral { min_e: Option<u32> },
    #[error("extension is not monogenic")]
    NonMonogenic,
    #[error("the map is zero (inseparable extension has vanishing trace)")]
    ZeroTrace,
    #[error("ideal is not the coordinate maximal ideal")]
    NotMaximal,
    #[error("no test element available: supply one explicitly")]
    NeedTestElement,
    #[error("no element of the prime table clears the divisor")]
    NoClearing,
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("internal verification failed: {0}")]
    Verification(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors caused by malformed input text.
    pub fn is_parse(&self) -> bool {
        matches!(self, Error::Syntax { .. } | Error::UnknownVariable { .. })
    }
}
