use thiserror::Error;

use crate::states::BellCoefficients;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not Bell-diagonal (max deviation {deviation:e})")]
    NotBellDiagonal { deviation: f64 },

    #[error("invalid Bell-diagonal state {0}")]
    InvalidState(BellCoefficients),

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),

    #[error("{0}")]
    Domain(String),

    #[error("quadrature failure: {0}")]
    QuadratureFailure(String),
}
