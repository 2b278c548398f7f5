use thiserror::Error;

/// Errors raised by the solvers and experiment drivers.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The simplex iteration cap was reached before a status was proven.
    #[error("LP solver stalled after {pivots} pivots")]
    SolverStalled { pivots: usize },

    /// Coordinate descent ran out of sweeps; `best` is the last iterate.
    #[error("lasso did not converge after {sweeps} sweeps (kkt residual {kkt_residual:.3e})")]
    ConvergenceFailure {
        sweeps: usize,
        kkt_residual: f64,
        best: Vec<f64>,
    },

    #[error("problem is infeasible: {0}")]
    Infeasible(String),

    #[error("problem is unbounded: {0}")]
    Unbounded(String),

    /// Exhaustive enumeration refused because p exceeds the configured cap.
    #[error("p = {p} exceeds the enumeration cap {cap}")]
    DimensionCap { p: usize, cap: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
