use thiserror::Error;

/// Errors raised by the library. Range and hypothesis violations carry enough
/// context to locate the offending input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("growth bound violated for {name}: |f({p}^{k})| = {value} > H^k with H = {h}")]
    GrowthBound {
        name: String,
        p: u64,
        k: u32,
        value: f64,
        h: f64,
    },
    #[error("{name} is only defined on primes up to {limit}, queried p = {p}")]
    OutsideDomain { name: String, p: u64, limit: u64 },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("form {form} takes value {value} at {point:?}, outside the admissible range [{lo}, {hi}]")]
    FormRange {
        form: usize,
        value: i128,
        point: Vec<String>,
        lo: i128,
        hi: i128,
    },
    #[error("arithmetic overflow while evaluating {0}")]
    Overflow(String),
    #[error("enumeration budget exceeded: {0}")]
    Budget(String),
    #[error("gcd condition violated: {0}")]
    Coprimality(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("config error in {field}: {message}")]
    Config { field: String, message: String },
    #[error("malformed sieve table file: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
