//! Fourier-Galerkin solvers for the Kolmogorov equation and its adjoint:
//! stationary density, adjoint Poisson problems, semigroup propagation,
//! mixing-rate estimation and the corrector hierarchy of the modified flow.

mod hierarchy;
mod semigroup;
mod spectral;

pub use hierarchy::{hierarchy, modified_residual, v_truncated, HierarchyTrajectory};
pub use semigroup::{
    decay_table, fit_decay_rate, mixing_rate, propagate, MixingEstimate, Semigroup,
    MIXING_NOISE_FLOOR, MIXING_SAMPLES,
};
pub use spectral::{
    average, from_vector, solve_poisson_adjoint, spectral_gap, stationary_density, to_vector,
    SpectralConfig, DENSITY_FLOOR, SOLVABILITY_TOL,
};
