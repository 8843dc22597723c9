use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};
use crate::opalg::{DiffOp, TrigPoly};

/// Scalar SDE `dX = f(X) dt + sigma(X) dW` on the circle.
#[derive(Debug, Clone, PartialEq)]
pub struct SdeModel {
    f: TrigPoly,
    sigma: TrigPoly,
    a: TrigPoly,
    ellipticity_min: f64,
}

impl SdeModel {
    /// Builds the model and enforces `min a(x) > 0` with `a = sigma^2 / 2`.
    pub fn new(f: TrigPoly, sigma: TrigPoly) -> Result<Self> {
        let model = Self::new_unchecked(f, sigma);
        if !(model.ellipticity_min > 0.0) {
            return Err(Error::NotElliptic {
                min_a: model.ellipticity_min,
            });
        }
        Ok(model)
    }

    /// Skips the ellipticity guard. Only the Monte Carlo path makes sense for
    /// a degenerate model; the spectral solvers assume ellipticity.
    pub fn new_unchecked(f: TrigPoly, sigma: TrigPoly) -> Self {
        let a = sigma
            .try_mul(&sigma)
            .expect("diffusion bandwidth within cap")
            .scale(0.5);
        let nodes = (16 * a.bandwidth()).max(256);
        let ellipticity_min = a.grid_min(nodes);
        Self {
            f,
            sigma,
            a,
            ellipticity_min,
        }
    }

    /// Gradient Langevin dynamics `f = -sin x`, `sigma = sqrt 2`, with
    /// invariant density proportional to `exp(cos x)`.
    pub fn langevin() -> Self {
        Self::new(TrigPoly::sin(1, -1.0), TrigPoly::constant(SQRT_2))
            .expect("constant diffusion is elliptic")
    }

    pub fn constant(f: f64, sigma: f64) -> Result<Self> {
        Self::new(TrigPoly::constant(f), TrigPoly::constant(sigma))
    }

    pub fn f(&self) -> &TrigPoly {
        &self.f
    }

    pub fn sigma(&self) -> &TrigPoly {
        &self.sigma
    }

    pub fn a(&self) -> &TrigPoly {
        &self.a
    }

    pub fn ellipticity_min(&self) -> f64 {
        self.ellipticity_min
    }

    /// Largest coefficient bandwidth among `f`, `sigma` and `a`.
    pub fn bandwidth(&self) -> usize {
        self.f
            .bandwidth()
            .max(self.sigma.bandwidth())
            .max(self.a.bandwidth())
    }
}

/// Kolmogorov generator `L = f d + a d^2`.
pub fn generator(model: &SdeModel) -> DiffOp {
    DiffOp::from_terms(vec![TrigPoly::zero(), model.f.clone(), model.a.clone()])
}
