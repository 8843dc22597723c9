use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::opalg::{DiffOp, TrigPoly};

/// Mean tolerance for right-hand sides of adjoint Poisson problems.
pub const SOLVABILITY_TOL: f64 = 1e-10;

/// Lowest density value accepted from [`stationary_density`].
pub const DENSITY_FLOOR: f64 = -1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralConfig {
    /// Galerkin bandwidth `K`.
    pub bandwidth: usize,
    pub solve_tol: f64,
}

impl Default for SpectralConfig {
    fn default() -> Self {
        Self {
            bandwidth: 32,
            solve_tol: 1e-10,
        }
    }
}

impl SpectralConfig {
    pub fn with_bandwidth(bandwidth: usize) -> Self {
        Self {
            bandwidth,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.bandwidth < 8 {
            return Err(Error::InvalidArgument(format!(
                "Galerkin bandwidth must be at least 8, got {}",
                self.bandwidth
            )));
        }
        if !(self.solve_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "solve tolerance must be positive, got {}",
                self.solve_tol
            )));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        2 * self.bandwidth + 1
    }
}

/// Coefficient vector of `p` truncated (or padded) to bandwidth `k`.
pub fn to_vector(p: &TrigPoly, k: usize) -> DVector<f64> {
    DVector::from_vec(p.truncated(k).into_coeffs())
}

pub fn from_vector(v: &DVector<f64>) -> TrigPoly {
    TrigPoly::from_coeffs(v.as_slice().to_vec())
}

fn solve_square(m: DMatrix<f64>, rhs: &DVector<f64>, tol: f64) -> Result<DVector<f64>> {
    m.qr().solve(rhs).ok_or(Error::SolveFailed {
        residual: f64::INFINITY,
        tol,
    })
}

/// Normalised solution of `L* rho = 0`, `∫ rho dx = 1`.
///
/// Row 0 of the Galerkin matrix of `L*` vanishes (it is `∫ L e_j dx`, zero
/// because `L 1 = 0`), so it is replaced by the pin `c_0 = 1/(2 pi)`.
pub fn stationary_density(l: &DiffOp, cfg: &SpectralConfig) -> Result<TrigPoly> {
    cfg.validate()?;
    let k = cfg.bandwidth;
    let mut m = l.adjoint().matrix(k);
    m.row_mut(0).fill(0.0);
    m[(0, 0)] = 1.0;
    let mut rhs = DVector::zeros(cfg.dim());
    rhs[0] = 1.0 / (2.0 * PI);
    let rho = from_vector(&solve_square(m, &rhs, cfg.solve_tol)?);
    let residual = l.apply_adjoint(&rho)?.max_abs_coeff();
    if residual > cfg.solve_tol {
        return Err(Error::SolveFailed {
            residual,
            tol: cfg.solve_tol,
        });
    }
    let min = rho.grid_min(4 * k);
    if min < DENSITY_FLOOR {
        return Err(Error::NotADensity { min });
    }
    Ok(rho)
}

/// Solves `L* mu = g` under the normalisation `∫ mu rho dx = 0`.
///
/// The residual is checked on the exact (untruncated) application of `L*`,
/// relative to `max(1, max|g_k|)`.
pub fn solve_poisson_adjoint(
    l: &DiffOp,
    g: &TrigPoly,
    rho: &TrigPoly,
    cfg: &SpectralConfig,
) -> Result<TrigPoly> {
    cfg.validate()?;
    let mean = g.integral();
    if mean.abs() > SOLVABILITY_TOL {
        return Err(Error::NotSolvable { mean });
    }
    let k = cfg.bandwidth;
    let mut m = l.adjoint().matrix(k);
    let weights = to_vector(rho, k);
    m[(0, 0)] = 2.0 * PI * weights[0];
    for j in 1..cfg.dim() {
        m[(0, j)] = PI * weights[j];
    }
    let mut rhs = to_vector(g, k);
    rhs[0] = 0.0;
    let mu = from_vector(&solve_square(m, &rhs, cfg.solve_tol)?);
    let scale = g.max_abs_coeff().max(1.0);
    let residual = l.apply_adjoint(&mu)?.add_scaled(g, -1.0).max_abs_coeff() / scale;
    if residual > cfg.solve_tol {
        return Err(Error::SolveFailed {
            residual,
            tol: cfg.solve_tol,
        });
    }
    Ok(mu)
}

/// `<psi> = ∫ psi rho dx`.
pub fn average(psi: &TrigPoly, rho: &TrigPoly) -> f64 {
    psi.integral_of_product(rho)
}

/// Spectral gap `-max{Re z : z eigenvalue of M(L), z != 0}` of the Galerkin
/// matrix, skipping the eigenvalue closest to zero (the constants).
pub fn spectral_gap(l: &DiffOp, cfg: &SpectralConfig) -> Result<f64> {
    cfg.validate()?;
    let eig = l.matrix(cfg.bandwidth).complex_eigenvalues();
    let mut re: Vec<f64> = eig.iter().map(|z| z.re).collect();
    re.sort_by(|a, b| b.total_cmp(a));
    Ok(-re[1])
}
