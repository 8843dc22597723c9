use num_rational::BigRational;

use super::bernoulli::{bernoulli_table, factorial_big, rational_to_f64};
use super::model::{generator, SdeModel};
use crate::error::{Error, Result};
use crate::opalg::{DiffOp, TrigPoly, DEFAULT_BANDWIDTH_CAP};

/// Default expansion order for `L_n`.
pub const DEFAULT_ORDER: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionConfig {
    /// Largest `n` for which `A_n` may be requested.
    pub max_order: usize,
    pub bandwidth_cap: usize,
}

impl Default for ExpansionConfig {
    fn default() -> Self {
        Self {
            max_order: 6,
            bandwidth_cap: DEFAULT_BANDWIDTH_CAP,
        }
    }
}

/// All ordered tuples of `parts` nonnegative integers summing to `total`.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(total: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(total);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 0..=total {
            prefix.push(first);
            rec(total - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if parts == 0 {
        if total == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// One step of the frozen-coefficient iteration: every term `c d^j`
/// contributes `c f d^{j+1} + c a d^{j+2}`, with `f`, `a` left undifferentiated.
fn freeze(op: &DiffOp, model: &SdeModel, cap: usize) -> Result<DiffOp> {
    let mut terms = vec![TrigPoly::zero(); op.max_order() + 3];
    for (j, c) in op.terms().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        terms[j + 1] = &terms[j + 1] + &c.try_mul_capped(model.f(), cap)?;
        terms[j + 2] = &terms[j + 2] + &c.try_mul_capped(model.a(), cap)?;
    }
    Ok(DiffOp::from_terms(terms))
}

/// One-step expansion operators `A_0..=A_n`, normalised so that
/// `E phi(X_1) = sum_n tau^n A_n phi + O(tau^{n+1})`:
/// `A_m` is the `m`-fold frozen iterate of `L` divided by `m!`.
pub fn a_operators(model: &SdeModel, n: usize, cfg: &ExpansionConfig) -> Result<Vec<DiffOp>> {
    if n > cfg.max_order {
        return Err(Error::OutOfRange {
            what: "expansion order",
            value: n,
            max: cfg.max_order,
        });
    }
    let mut ops = vec![DiffOp::identity()];
    for m in 1..=n {
        let next = freeze(&ops[m - 1], model, cfg.bandwidth_cap)?.scale(1.0 / m as f64);
        ops.push(next);
    }
    Ok(ops)
}

/// `ops[idx[0]] ∘ ops[idx[1]] ∘ ... ∘ last`, applied right to left.
fn chain(ops: &[DiffOp], idx: &[usize], last: &DiffOp, cap: usize) -> Result<DiffOp> {
    idx.iter()
        .rev()
        .try_fold(last.clone(), |acc, &i| ops[i].compose_capped(&acc, cap))
}

/// Modified-generator coefficients `L_0..=L_n` from `A_0..=A_{n+1}` via
/// `L_n = A_{n+1} + sum_{l=1}^{n} B_l/l! sum L_{n_1}...L_{n_l} A_{n_{l+1}+1}`,
/// the inner sum running over compositions of `n - l` into `l + 1` parts.
pub fn l_operators(a_ops: &[DiffOp], n: usize, cap: usize) -> Result<Vec<DiffOp>> {
    if a_ops.len() < n + 2 {
        return Err(Error::InvalidArgument(format!(
            "L_{n} needs A_0..A_{}, got {} operators",
            n + 1,
            a_ops.len()
        )));
    }
    let bern = bernoulli_table(n)?;
    let weights: Vec<f64> = (0..=n)
        .map(|l| rational_to_f64(&(&bern[l] / BigRational::from_integer(factorial_big(l)))))
        .collect();
    let mut ls: Vec<DiffOp> = vec![a_ops[1].clone()];
    for m in 1..=n {
        let mut acc = a_ops[m + 1].clone();
        for (l, &w) in weights.iter().enumerate().take(m + 1).skip(1) {
            if w == 0.0 {
                continue;
            }
            for comp in compositions(m - l, l + 1) {
                let (head, tail) = comp.split_at(l);
                let prod = chain(&ls, head, &a_ops[tail[0] + 1], cap)?;
                acc = acc.add_scaled(&prod, w);
            }
        }
        ls.push(acc);
    }
    Ok(ls)
}

/// Truncated modified generator `L^(N)(tau) = L_0 + sum_{n=1}^{N} tau^n L_n`.
pub fn truncated_generator(ls: &[DiffOp], tau: f64, n: usize) -> DiffOp {
    let weighted: Vec<(f64, &DiffOp)> = ls
        .iter()
        .take(n + 1)
        .enumerate()
        .map(|(k, l)| (tau.powi(k as i32), l))
        .collect();
    DiffOp::linear_combine(&weighted)
}

/// `A_n` and `L_n` for one SDE model.
#[derive(Debug, Clone)]
pub struct OperatorExpansion {
    model: SdeModel,
    order: usize,
    a_ops: Vec<DiffOp>,
    l_ops: Vec<DiffOp>,
    cap: usize,
}

/// Per-`n` discrepancy between `A_n` and its reconstruction from the `L_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct InverseReport {
    /// `(n, max |coefficient difference|)` for `n = 1..=order + 1`.
    pub residuals: Vec<(usize, f64)>,
}

impl InverseReport {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.1).fold(0.0, f64::max)
    }
}

impl OperatorExpansion {
    pub fn build(model: &SdeModel, order: usize) -> Result<Self> {
        Self::build_with(model, order, &ExpansionConfig::default())
    }

    pub fn build_with(model: &SdeModel, order: usize, cfg: &ExpansionConfig) -> Result<Self> {
        let a_ops = a_operators(model, order + 1, cfg)?;
        let l_ops = l_operators(&a_ops, order, cfg.bandwidth_cap)?;
        debug_assert_eq!(l_ops[0], generator(model));
        Ok(Self {
            model: model.clone(),
            order,
            a_ops,
            l_ops,
            cap: cfg.bandwidth_cap,
        })
    }

    pub fn model(&self) -> &SdeModel {
        &self.model
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `A_0..=A_{order+1}`.
    pub fn a_ops(&self) -> &[DiffOp] {
        &self.a_ops
    }

    /// `L_0..=L_order`.
    pub fn l_ops(&self) -> &[DiffOp] {
        &self.l_ops
    }

    pub fn generator(&self) -> &DiffOp {
        &self.l_ops[0]
    }

    /// `L^(N)(tau)`; `n` is clamped to the built order.
    pub fn modified_generator(&self, tau: f64, n: usize) -> DiffOp {
        truncated_generator(&self.l_ops, tau, n.min(self.order))
    }

    /// Rebuilds each `A_n` from `A_n = sum_{l=1}^{n} 1/l! sum L_{n_1}...L_{n_l}`
    /// (compositions of `n - l` into `l` parts) and reports the discrepancy.
    pub fn verify_inverse_relation(&self) -> Result<InverseReport> {
        let mut residuals = Vec::new();
        for n in 1..=self.order + 1 {
            let mut rebuilt = DiffOp::zero();
            let mut factorial = 1.0;
            for l in 1..=n {
                factorial *= l as f64;
                for comp in compositions(n - l, l) {
                    let (head, last) = comp.split_at(l - 1);
                    let prod = chain(&self.l_ops, head, &self.l_ops[last[0]], self.cap)?;
                    rebuilt = rebuilt.add_scaled(&prod, 1.0 / factorial);
                }
            }
            let diff = rebuilt.add_scaled(&self.a_ops[n], -1.0);
            residuals.push((n, diff.max_abs_coeff()));
        }
        Ok(InverseReport { residuals })
    }

    /// `max |coefficient|` of `L_n 1` for each `n` (zero in exact arithmetic).
    pub fn constant_annihilation(&self) -> Result<Vec<f64>> {
        self.l_ops
            .iter()
            .map(|l| Ok(l.apply(&TrigPoly::one())?.max_abs_coeff()))
            .collect()
    }
}
