use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("d = {0} is not in the vetted catalog of narrow class number one fields {{2, 5, 13}}")]
    Catalog(i64),

    #[error("fundamental unit {unit} of Q(sqrt {d}) has norm +1, so the narrow class number is not one")]
    UnitSign { d: i64, unit: String },

    #[error("{0} is not totally positive")]
    Positivity(String),

    #[error("{0} is not squarefree")]
    NotSquarefree(String),

    #[error("{0} lies over 2; the Euler criterion needs an odd prime")]
    EvenPrime(String),

    #[error("{0} is not a prime element")]
    NotPrime(String),

    #[error("operation undefined for the zero element")]
    Zero,

    #[error("box too small: {0}")]
    BoxTooSmall(String),

    #[error("coefficient not well defined on ideals: {0}")]
    WellDefinedness(String),

    #[error("level {0} is not divisible by 4")]
    Level(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("matrix is not in the required group: {0}")]
    Membership(String),

    #[error("theta evaluation does not converge: {0}")]
    Convergence(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("quadratic symbol vanishes: {0}")]
    Symbol(String),

    #[error("invalid character data: {0}")]
    Character(String),

    #[error("dimension mismatch at n = {n}: closed form {formula}, omega set {computed}")]
    DimensionMismatch { n: u32, formula: usize, computed: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
