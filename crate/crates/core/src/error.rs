use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("base {0} is not a valid digit base")]
    InvalidBase(u32),

    #[error("prime index {index} out of range (table holds {len} primes)")]
    PrimeIndex { index: usize, len: usize },

    #[error("scramble factor {factor} invalid for base {base}")]
    ScrambleFactor { base: u32, factor: u32 },

    #[error("{base}^{digits} does not fit the table limit")]
    TableTooLarge { base: u32, digits: u32 },

    #[error("table of size {len} is not a bijection")]
    NotABijection { len: usize },

    #[error("requested {requested} dimensions, only {available} available")]
    Dimensions { requested: usize, available: usize },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("sobol index {0} is not below 2^52")]
    SobolIndex(u64),

    #[error("generator component {index} is even ({value})")]
    EvenComponent { index: usize, value: u32 },

    #[error("LFSR seed must have a nonzero low 31 bits")]
    ZeroSeed,

    #[error("{0}")]
    Range(String),

    #[error("configuration: {0}")]
    Config(String),

    #[error("integrand returned non-finite value {value} at sample {index}")]
    NonFinite { index: u64, value: f64 },

    #[error("fixed-point accumulator overflow")]
    AccumulatorOverflow,
}
