//! Deterministic oracle for the Euler scheme. One step is exactly Gaussian,
//! so expectations, iterated laws and the scheme's invariant measure follow
//! from Gauss-Hermite quadrature and trigonometric interpolation on a grid.

mod quadrature;
mod transition;
mod weak;

pub use quadrature::{GaussHermite, DEFAULT_NODES, MIN_NODES};
pub use transition::{
    one_step_expectation, TransitionKernel, INVARIANT_TOL, MAX_POWER_ITERATIONS, ROW_SUM_TOL,
};
pub use weak::{
    discrete_decay_table, grid_expectation, kernel_expectation, step_count, weak_error_curve,
    KernelConfig, WeakErrorCurve, WeakErrorRow,
};
