use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use super::spectral::{from_vector, to_vector, SpectralConfig};
use crate::error::{Error, Result};
use crate::opalg::{DiffOp, TrigPoly};

/// Correctors `v_n(t)` of the modified flow at a list of times.
#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyTrajectory {
    times: Vec<f64>,
    /// `v[n][i]` is `v_n(times[i])`.
    v: Vec<Vec<TrigPoly>>,
    phi: TrigPoly,
}

impl HierarchyTrajectory {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// Highest corrector index `N`.
    pub fn depth(&self) -> usize {
        self.v.len() - 1
    }

    pub fn v(&self, n: usize, t_index: usize) -> &TrigPoly {
        &self.v[n][t_index]
    }

    /// `v_n` at every time.
    pub fn corrector(&self, n: usize) -> &[TrigPoly] {
        &self.v[n]
    }

    pub fn phi(&self) -> &TrigPoly {
        &self.phi
    }
}

/// Solves `d_t v_n = sum_{l=0}^{n} L_l v_{n-l}`, `v_0(0) = phi`, `v_n(0) = 0`,
/// as one block-lower-triangular linear system.
///
/// Block row `n` is rescaled by `c^n` (with `c` a power of two) so that the
/// off-diagonal blocks are no larger than the diagonal ones; this similarity
/// is exact and keeps the scaling-and-squaring step count driven by `L_0`.
pub fn hierarchy(
    ls: &[DiffOp],
    phi: &TrigPoly,
    times: &[f64],
    cfg: &SpectralConfig,
) -> Result<HierarchyTrajectory> {
    cfg.validate()?;
    if ls.is_empty() {
        return Err(Error::InvalidArgument(
            "hierarchy needs at least L_0".into(),
        ));
    }
    if times.first().is_some_and(|&t| !(t >= 0.0)) || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument(
            "hierarchy times must be increasing and nonnegative".into(),
        ));
    }
    let k = cfg.bandwidth;
    let d = cfg.dim();
    let depth = ls.len() - 1;
    let blocks: Vec<DMatrix<f64>> = ls.iter().map(|l| l.matrix(k)).collect();
    let base = blocks[0].norm().max(1.0);
    let mut c = 1.0f64;
    for (l, b) in blocks.iter().enumerate().skip(1) {
        let nb = b.norm();
        if nb > 0.0 {
            c = c.min((base / nb).powf(1.0 / l as f64));
        }
    }
    let c = if c < 1.0 {
        2f64.powi(c.log2().floor() as i32)
    } else {
        1.0
    };

    let size = d * (depth + 1);
    let mut big = DMatrix::zeros(size, size);
    for n in 0..=depth {
        for (l, block) in blocks.iter().enumerate().take(n + 1) {
            let w = c.powi(l as i32);
            big.view_mut((n * d, (n - l) * d), (d, d))
                .copy_from(&(block * w));
        }
    }

    let mut state = DVector::zeros(size);
    state.rows_mut(0, d).copy_from(&to_vector(phi, k));
    let mut v: Vec<Vec<TrigPoly>> = vec![Vec::with_capacity(times.len()); depth + 1];
    let mut cache: HashMap<u64, DMatrix<f64>> = HashMap::new();
    let mut prev = 0.0;
    for &t in times {
        let dt = t - prev;
        if dt > 0.0 {
            let step = cache
                .entry(dt.to_bits())
                .or_insert_with(|| (&big * dt).exp());
            state = &*step * state;
        }
        prev = t;
        for (n, vn) in v.iter_mut().enumerate() {
            let block = DVector::from_column_slice(state.rows(n * d, d).as_slice());
            vn.push(from_vector(&block).scale(c.powi(-(n as i32))));
        }
    }
    Ok(HierarchyTrajectory {
        times: times.to_vec(),
        v,
        phi: phi.clone(),
    })
}

/// `v^(N)(t) = sum_{n=0}^{N} tau^n v_n(t)`.
pub fn v_truncated(
    traj: &HierarchyTrajectory,
    tau: f64,
    n: usize,
    t_index: usize,
) -> Result<TrigPoly> {
    if n > traj.depth() {
        return Err(Error::OutOfRange {
            what: "truncation order",
            value: n,
            max: traj.depth(),
        });
    }
    let mut acc = TrigPoly::zero();
    for m in 0..=n {
        acc = acc.add_scaled(traj.v(m, t_index), tau.powi(m as i32));
    }
    Ok(acc)
}

/// `max_t ||d_t v^(N) - LN v^(N)||_inf`, with `d_t v^(N)` taken from the
/// hierarchy equations, `sum_{n<=N} tau^n sum_{l<=n} L_l v_{n-l}`.
///
/// With `LN = L^(N)(tau)` this is the sup of the explicit remainder
/// `-sum_{l,m<=N, l+m>N} tau^{l+m} L_l v_m`.
pub fn modified_residual(
    ln: &DiffOp,
    traj: &HierarchyTrajectory,
    ls: &[DiffOp],
    tau: f64,
    n: usize,
) -> Result<f64> {
    if n > traj.depth() || n >= ls.len() {
        return Err(Error::OutOfRange {
            what: "residual order",
            value: n,
            max: traj.depth().min(ls.len() - 1),
        });
    }
    let mut worst = 0.0f64;
    for i in 0..traj.times().len() {
        let mut dt = TrigPoly::zero();
        for m in 0..=n {
            for (l, op) in ls.iter().enumerate().take(m + 1) {
                let term = op.apply(traj.v(m - l, i))?;
                dt = dt.add_scaled(&term, tau.powi(m as i32));
            }
        }
        let vn = v_truncated(traj, tau, n, i)?;
        let r = dt.add_scaled(&ln.apply(&vn)?, -1.0);
        worst = worst.max(r.sup_norm());
    }
    Ok(worst)
}
