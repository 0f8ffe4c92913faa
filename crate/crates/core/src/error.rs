use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parameters must satisfy 0 < q < p <= 1 (got p={p}, q={q})")]
    ParameterOrdering { p: String, q: String },
    #[error("deformation is not normalized: [0] = {0}")]
    NotNormalized(String),
    #[error("custom table cannot be evaluated at exponent {0}")]
    UnsupportedExponent(i64),
    #[error("negative argument {0}")]
    NegativeArgument(i64),
    #[error("index order violated: n={n}, k={k}")]
    IndexOrder { n: i64, k: i64 },
    #[error("0/0 at mode 0 has no declared limit for a custom family")]
    IndeterminateAtZero,
    #[error("division by a vanishing deformed number at mode {0}")]
    DivisionByZeroMode(i64),
    #[error("operands live on different windows or truncations")]
    WindowMismatch,
    #[error("series exponential needs a zero constant term")]
    NonzeroConstantTerm,
    #[error("valid window exhausted")]
    WindowExhausted,
    #[error("recursion hits m + s = 0 at m={m}, s={s}")]
    DegenerateRecursion { m: i64, s: i64 },
    #[error("quartic root of {0} is not rational")]
    ScaleNotRepresentable(String),
    #[error("time index {index} exceeds truncation order {order}")]
    TruncationOverflow { index: i64, order: usize },
    #[error("pole: factor denominator vanishes at k={0}")]
    PoleHit(usize),
    #[error("invalid configuration: {0}")]
    ConfigInvalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
