use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension must be at least 2, got {0}")]
    Dimension(u64),

    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: u64, modulus: u64 },

    #[error("{divisor} does not divide {m}")]
    NotDivisor { m: u64, divisor: u64 },

    #[error("{m1} and {m2} are not relatively prime (gcd = {gcd})")]
    NotCoprime { m1: u64, m2: u64, gcd: u64 },

    #[error("trivial split of {m} (M1 = {m1}); both factors must be at least 2")]
    TrivialSplit { m: u64, m1: u64 },

    #[error("{name} = {value} out of range [0, {bound})")]
    OutOfRange {
        name: &'static str,
        value: u64,
        bound: u64,
    },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("threshold must be positive, got {0}")]
    Threshold(f64),

    #[error("{kind} basis requires coprime factors")]
    RequiresCoprime { kind: &'static str },

    #[error("bases have different factorizations: {left} vs {right}")]
    FactorMismatch { left: String, right: String },

    #[error("malformed state file: {0}")]
    StateFile(String),
}

pub(crate) fn check_range(name: &'static str, value: u64, bound: u64) -> Result<()> {
    if value < bound {
        Ok(())
    } else {
        Err(Error::OutOfRange { name, value, bound })
    }
}
