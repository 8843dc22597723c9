//! The modified invariant density `mu^(N)(tau) = rho + sum tau^n mu_n` of the
//! Euler scheme and its residual under the modified adjoint generator.

use crate::error::{Error, Result};
use crate::kolmo::{solve_poisson_adjoint, HierarchyTrajectory, SpectralConfig};
use crate::opalg::{DiffOp, TrigPoly};

/// Tolerance on `|∫ G_n dx|` before each corrector solve.
pub const RHS_MEAN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureExpansion {
    rho: TrigPoly,
    /// `mu_1..=mu_N`, shifted so that `∫ mu_n dx = 0`.
    mu: Vec<TrigPoly>,
    /// The same correctors before the shift, normalised by `∫ mu_n rho dx = 0`.
    mu_unshifted: Vec<TrigPoly>,
    /// `|∫ G_n dx|` of each right-hand side.
    rhs_means: Vec<f64>,
}

impl MeasureExpansion {
    pub fn order(&self) -> usize {
        self.mu.len()
    }

    pub fn rho(&self) -> &TrigPoly {
        &self.rho
    }

    /// `mu_n`, with `mu_0 = rho`.
    pub fn mu(&self, n: usize) -> &TrigPoly {
        if n == 0 {
            &self.rho
        } else {
            &self.mu[n - 1]
        }
    }

    pub fn mu_unshifted(&self, n: usize) -> &TrigPoly {
        if n == 0 {
            &self.rho
        } else {
            &self.mu_unshifted[n - 1]
        }
    }

    pub fn rhs_means(&self) -> &[f64] {
        &self.rhs_means
    }
}

/// Solves `L_0* mu_n = -sum_{l=1}^{n} L_l* mu_{n-l}` for `n = 1..=N`, where
/// `N = ls.len() - 1`.
pub fn mu_hierarchy(
    ls: &[DiffOp],
    rho: &TrigPoly,
    cfg: &SpectralConfig,
) -> Result<MeasureExpansion> {
    if ls.is_empty() {
        return Err(Error::InvalidArgument(
            "measure hierarchy needs at least L_0".into(),
        ));
    }
    let order = ls.len() - 1;
    let mass = rho.integral();
    let mut mus: Vec<TrigPoly> = vec![rho.clone()];
    let mut mu_unshifted = Vec::with_capacity(order);
    let mut rhs_means = Vec::with_capacity(order);
    for n in 1..=order {
        let mut g = TrigPoly::zero();
        for l in 1..=n {
            g = g.add_scaled(&ls[l].apply_adjoint(&mus[n - l])?, -1.0);
        }
        let mean = g.integral();
        rhs_means.push(mean.abs());
        if mean.abs() > RHS_MEAN_TOL {
            return Err(Error::NotSolvable { mean });
        }
        let raw = solve_poisson_adjoint(&ls[0], &g, rho, cfg)?;
        let shifted = raw.add_scaled(rho, -raw.integral() / mass);
        mu_unshifted.push(raw);
        mus.push(shifted);
    }
    mus.remove(0);
    Ok(MeasureExpansion {
        rho: rho.clone(),
        mu: mus,
        mu_unshifted,
        rhs_means,
    })
}

/// `rho + sum_{n=1}^{N} tau^n mu_n`.
pub fn modified_density(me: &MeasureExpansion, tau: f64, n: usize) -> Result<TrigPoly> {
    if n > me.order() {
        return Err(Error::OutOfRange {
            what: "density order",
            value: n,
            max: me.order(),
        });
    }
    let mut acc = me.rho.clone();
    for m in 1..=n {
        acc = acc.add_scaled(me.mu(m), tau.powi(m as i32));
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub g: TrigPoly,
    pub sup_norm: f64,
    /// `∫ G dx`.
    pub mean: f64,
}

/// `G = LN* mu_N`, applied in divergence form.
pub fn residual_g(ln: &DiffOp, mu_n: &TrigPoly) -> Result<Residual> {
    let g = ln.apply_adjoint(mu_n)?;
    Ok(Residual {
        sup_norm: g.sup_norm(),
        mean: g.integral(),
        g,
    })
}

/// `∫ phi density dx`.
pub fn expectation_under(phi: &TrigPoly, density: &TrigPoly) -> f64 {
    phi.integral_of_product(density)
}

/// `c_n(t) = sum_{m=0}^{n} ∫ v_{n-m}(t) mu_m dx` at every trajectory time,
/// for `n = 0..=min(depth, order)`. Exactly conserved by the hierarchy.
pub fn conserved_series(traj: &HierarchyTrajectory, me: &MeasureExpansion) -> Vec<Vec<f64>> {
    let top = traj.depth().min(me.order());
    (0..=top)
        .map(|n| {
            (0..traj.times().len())
                .map(|i| {
                    (0..=n)
                        .map(|m| traj.v(n - m, i).integral_of_product(me.mu(m)))
                        .sum()
                })
                .collect()
        })
        .collect()
}
