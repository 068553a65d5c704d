use thiserror::Error;

/// Errors raised by the algebra kernels and the presentation parser.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not prime")]
    NotPrime { value: u64 },

    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),

    #[error("parameter mismatch: {0}")]
    ParameterMismatch(String),

    #[error("constant term {0} is not a unit")]
    NonUnit(u64),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("size cap exceeded: {required} columns required but the cap is {cap} (raise the cap to at least {required})")]
    SizeCap { required: u64, cap: u64 },

    #[error("level {s} needs {required} columns but the cap is {cap}; the largest feasible level is {largest_feasible}")]
    LevelCap {
        s: u32,
        largest_feasible: u32,
        required: u64,
        cap: u64,
    },

    #[error("route not applicable: {0}")]
    RouteInapplicable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
