use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("enumeration budget of {limit} candidate visits exceeded in {op}")]
    CapExceeded { op: &'static str, limit: u64 },

    #[error("rewrite step bound of {limit} exceeded while normalizing")]
    RewriteBound { limit: u64 },

    #[error("scalars over Q(sqrt {left}) and Q(sqrt {right}) cannot be mixed")]
    FieldMismatch { left: u64, right: u64 },

    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("invalid quiver: {0}")]
    InvalidQuiver(String),

    #[error("invalid representation: {0}")]
    InvalidRep(String),

    #[error("symbol {symbol} does not belong to algebra {algebra}")]
    UnknownSymbol { symbol: String, algebra: String },

    #[error("unknown relation {0}")]
    UnknownRelation(String),

    #[error("bad parameter: {0}")]
    Param(String),

    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("unknown object {0}")]
    UnknownObject(String),

    #[error("io: {0}")]
    Io(String),
}

impl Error {
    /// True for resource-bound failures (enumeration cap or rewrite bound).
    pub fn is_resource(&self) -> bool {
        matches!(self, Error::CapExceeded { .. } | Error::RewriteBound { .. })
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
