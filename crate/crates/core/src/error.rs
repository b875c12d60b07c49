use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian: entry ({row}, {col}) deviates by {deviation:e}")]
    NotHermitian {
        row: usize,
        col: usize,
        deviation: f64,
    },

    #[error("Clifford rank mismatch: {0} vs {1}")]
    RankMismatch(usize, usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid index: {0}")]
    InvalidIndex(String),

    #[error("entries span more than one complex subspace (imaginary units {0:?})")]
    MixedSubspace(Vec<usize>),

    #[error("generator must be traceless, trace = {0}")]
    NotTraceless(f64),

    #[error("determinant {0} is not real with unit modulus")]
    DeterminantNotUnit(String),

    #[error("left- and right-moving coefficients differ for mode {mode} by {deviation:e}")]
    BoundaryViolation { mode: i32, deviation: f64 },

    #[error("mode {0}: partner mode missing or A(-n,n) != A(n,-n)^dagger")]
    UnpairedMode(i32),

    #[error("times must satisfy 0 < t_emit <= t_obsv (got t_emit = {t_emit}, t_obsv = {t_obsv})")]
    NonpositiveTime { t_emit: f64, t_obsv: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
