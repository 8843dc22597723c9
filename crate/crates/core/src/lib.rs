//! Weak backward error analysis of the Euler scheme for elliptic SDEs on the
//! circle.
//!
//! The crate builds, to a chosen order, the one-step expansion operators
//! `A_n`, the modified Kolmogorov generator `L + sum tau^n L_n`, the
//! corrector hierarchy of the modified flow and the modified invariant density
//! `rho + sum tau^n mu_n`. Everything is checked against a deterministic
//! Gaussian transition-kernel oracle for the Euler step (Gauss-Hermite
//! quadrature plus trigonometric interpolation) and against seeded Monte
//! Carlo simulation.
//!
//! Modules, bottom up:
//! - [`opalg`]: trigonometric polynomials and differential operators.
//! - [`expansion`]: SDE model, Bernoulli numbers, `A_n` and `L_n`.
//! - [`kolmo`]: Fourier-Galerkin solvers for the Kolmogorov equation.
//! - [`measures`]: the modified invariant density and its residual.
//! - [`kernel`]: the exact one-step Euler transition operator.
//! - [`mc`]: Monte Carlo simulation of the scheme.

// `!(x > 0.0)` is used throughout to reject NaN along with nonpositive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exec;
pub mod expansion;
pub mod fit;
pub mod kernel;
pub mod kolmo;
pub mod mc;
pub mod measures;
pub mod opalg;

pub use error::{Error, Result};
pub use exec::Execution;
pub use expansion::{OperatorExpansion, SdeModel};
pub use opalg::{DiffOp, GridFunction, TrigPoly};

/// Library version.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
