use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("arithmetic overflow computing {0}")]
    Overflow(String),

    /// The requested object is too large for the configured limit.
    #[error("infeasible size: {what} is {size}, limit is {limit}{hint}")]
    InfeasibleSize {
        what: &'static str,
        size: u128,
        limit: u128,
        hint: &'static str,
    },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("no zero verdict for N in {first}..={last}")]
    Inconclusive {
        first: u64,
        last: u64,
        transcript: Box<crate::driver::Transcript>,
    },

    #[error("lower bound {0} is not strict: the counting verdict at N = {0} is already zero")]
    LowerBoundNotStrict(u64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
