use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("extension degree must be at least 1")]
    InvalidDegree,
    #[error("field GF({p}^{m}) does not fit the 64-bit element encoding")]
    FieldTooLarge { p: u64, m: u32 },
    #[error("gcd({n}, {q}) != 1")]
    NotCoprime { n: u64, q: u64 },
    #[error("no element of order {order} in a field with {size} elements")]
    NoRootOfOrder { order: u64, size: u64 },
    #[error("no primitive {order}-th root r satisfies r^{power} = {value}")]
    AnchorUnsatisfiable { order: u64, power: u64, value: u64 },
    #[error("set is not a union of {q}-cyclotomic cosets modulo {n}: {detail}")]
    NotCosetClosed { n: u64, q: u64, detail: String },
    #[error("modulus mismatch: expected {expected}, got {got}")]
    ModulusMismatch { expected: u64, got: u64 },
    #[error("invalid index map: {0}")]
    InvalidMap(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("operation requires {expected}, got {got}")]
    WrongField { expected: String, got: String },
    #[error("enumeration of {size} codewords exceeds the budget of {budget}")]
    TooLarge { size: u128, budget: u128 },
    #[error("code is not Hermitian dual-containing")]
    NotDualContaining,
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
