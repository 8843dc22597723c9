//! Trigonometric polynomials on the circle and variable-coefficient
//! differential operators acting on them.
//!
//! Every scalar field in the crate (drift, diffusion, densities, test
//! functions, correctors) is a [`TrigPoly`]; every generator-like object is a
//! [`DiffOp`]. The spectral solvers work with the dense Fourier-basis matrix
//! given by [`DiffOp::matrix`]. Integrals over the torus use the Parseval
//! identity, which coincides with the uniform trapezoid rule on enough nodes.

mod diffop;
mod grid;
mod trig;

pub use diffop::DiffOp;
pub use grid::{node, GridFunction};
pub use trig::{TrigPoly, DEFAULT_BANDWIDTH_CAP, TAIL_TOL, TRIM_REL};
