use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("bandwidth {requested} exceeds cap {cap}; discarded tail {tail:e} is above tolerance")]
    BandwidthExceeded {
        requested: usize,
        cap: usize,
        tail: f64,
    },
    #[error("{nodes} nodes cannot resolve bandwidth {bandwidth} (need at least {})", 2 * .bandwidth + 1)]
    InsufficientNodes { nodes: usize, bandwidth: usize },
    #[error("{what} = {value} is out of range (max {max})")]
    OutOfRange {
        what: &'static str,
        value: usize,
        max: usize,
    },
    #[error("diffusion is not elliptic: min a(x) = {min_a:e}")]
    NotElliptic { min_a: f64 },
    #[error("linear solve residual {residual:e} exceeds tolerance {tol:e}")]
    SolveFailed { residual: f64, tol: f64 },
    #[error("computed density dips to {min:e} (below -1e-8)")]
    NotADensity { min: f64 },
    #[error("right-hand side has mean {mean:e}; the adjoint problem is not solvable")]
    NotSolvable { mean: f64 },
    #[error("decay fit failed: {0}")]
    FitFailed(String),
    #[error("transition row {row} sums to {sum} instead of 1")]
    RowSumViolation { row: usize, sum: f64 },
    #[error(
        "power iteration did not converge after {iterations} iterations (last change {change:e})"
    )]
    NoConvergence { iterations: usize, change: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
