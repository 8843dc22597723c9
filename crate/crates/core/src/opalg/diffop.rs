use nalgebra::DMatrix;

use super::trig::DEFAULT_BANDWIDTH_CAP;
use super::TrigPoly;
use crate::error::Result;

/// Linear differential operator `sum_k c_k(x) d^k/dx^k` with trigonometric
/// polynomial coefficients.
///
/// `terms[k]` holds `c_k`. Trailing zero terms are always trimmed, so
/// `max_order` is the highest derivative with a nonzero coefficient.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOp {
    terms: Vec<TrigPoly>,
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut b = 1.0;
    for i in 0..k {
        b = b * (n - i) as f64 / (i + 1) as f64;
    }
    b
}

impl DiffOp {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn identity() -> Self {
        Self::term(0, TrigPoly::one())
    }

    /// `d^k/dx^k` with unit coefficient.
    pub fn derivative(k: usize) -> Self {
        Self::term(k, TrigPoly::one())
    }

    /// Multiplication by `c`.
    pub fn multiplication(c: TrigPoly) -> Self {
        Self::term(0, c)
    }

    /// Single term `c(x) d^k`.
    pub fn term(k: usize, c: TrigPoly) -> Self {
        let mut terms = vec![TrigPoly::zero(); k + 1];
        terms[k] = c;
        Self::from_terms(terms)
    }

    pub fn from_terms(terms: Vec<TrigPoly>) -> Self {
        let mut op = Self { terms };
        op.trim();
        op
    }

    fn trim(&mut self) {
        while self.terms.last().is_some_and(|c| c.is_zero()) {
            self.terms.pop();
        }
    }

    /// Highest derivative order present; 0 for the zero operator.
    pub fn max_order(&self) -> usize {
        self.terms.len().saturating_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[TrigPoly] {
        &self.terms
    }

    /// Coefficient of `d^k` (zero if absent).
    pub fn coefficient(&self, k: usize) -> TrigPoly {
        self.terms.get(k).cloned().unwrap_or_else(TrigPoly::zero)
    }

    /// Largest coefficient bandwidth over all terms.
    pub fn coeff_bandwidth(&self) -> usize {
        self.terms
            .iter()
            .map(TrigPoly::bandwidth)
            .max()
            .unwrap_or(0)
    }

    /// Largest absolute Fourier coefficient over all terms.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms
            .iter()
            .map(TrigPoly::max_abs_coeff)
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::from_terms(self.terms.iter().map(|c| c.scale(s)).collect())
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &Self, s: f64) -> Self {
        let n = self.terms.len().max(other.terms.len());
        let terms = (0..n)
            .map(|k| self.coefficient(k).add_scaled(&other.coefficient(k), s))
            .collect();
        Self::from_terms(terms)
    }

    /// Term-wise weighted sum `sum_i w_i D_i`.
    pub fn linear_combine(ops: &[(f64, &DiffOp)]) -> Self {
        ops.iter()
            .fold(Self::zero(), |acc, (w, op)| acc.add_scaled(op, *w))
    }

    pub fn apply(&self, p: &TrigPoly) -> Result<TrigPoly> {
        self.apply_capped(p, DEFAULT_BANDWIDTH_CAP)
    }

    /// `sum_k c_k * p^(k)`.
    pub fn apply_capped(&self, p: &TrigPoly, cap: usize) -> Result<TrigPoly> {
        let mut out = TrigPoly::zero();
        for (k, c) in self.terms.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = &out + &c.try_mul_capped(&p.derivative(k), cap)?;
        }
        Ok(out)
    }

    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.compose_capped(other, DEFAULT_BANDWIDTH_CAP)
    }

    /// `self ∘ other`, expanded with the Leibniz rule:
    /// `(c d^a)(e d^b) = c sum_j C(a, j) (d^{a-j} e) d^{j+b}`.
    pub fn compose_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        if self.is_zero() || other.is_zero() {
            return Ok(Self::zero());
        }
        let mut terms = vec![TrigPoly::zero(); self.max_order() + other.max_order() + 1];
        for (a, c) in self.terms.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (b, e) in other.terms.iter().enumerate() {
                if e.is_zero() {
                    continue;
                }
                for j in 0..=a {
                    let de = e.derivative(a - j);
                    if de.is_zero() {
                        continue;
                    }
                    let prod = c.try_mul_capped(&de, cap)?;
                    terms[j + b] = terms[j + b].add_scaled(&prod, binomial(a, j));
                }
            }
        }
        Ok(Self::from_terms(terms))
    }

    /// L2 adjoint in standard form:
    /// `sum_k (-1)^k d^k(c_k .) = sum_k (-1)^k sum_j C(k, j) c_k^(k-j) d^j`.
    ///
    /// Only derivatives of coefficients appear, so bandwidth never grows.
    pub fn adjoint(&self) -> Self {
        let mut terms = vec![TrigPoly::zero(); self.terms.len()];
        for (k, c) in self.terms.iter().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            for (j, slot) in terms.iter_mut().enumerate().take(k + 1) {
                let dc = c.derivative(k - j);
                *slot = slot.add_scaled(&dc, sign * binomial(k, j));
            }
        }
        Self::from_terms(terms)
    }

    pub fn apply_adjoint(&self, p: &TrigPoly) -> Result<TrigPoly> {
        self.apply_adjoint_capped(p, DEFAULT_BANDWIDTH_CAP)
    }

    /// Applies the adjoint in divergence form, `sum_k (-1)^k d^k(c_k p)`.
    ///
    /// Equal to `self.adjoint().apply(p)`, but every term with `k >= 1` is an
    /// exact derivative, so the result has zero mean whenever `c_0 = 0`.
    pub fn apply_adjoint_capped(&self, p: &TrigPoly, cap: usize) -> Result<TrigPoly> {
        let mut out = TrigPoly::zero();
        for (k, c) in self.terms.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let cp = c.try_mul_capped(p, cap)?;
            out = out.add_scaled(&cp.derivative(k), sign);
        }
        Ok(out)
    }

    /// Fourier-Galerkin matrix on bandwidth `k`: column `j` holds the
    /// coefficients of `D e_j` truncated to bandwidth `k`, with basis
    /// `[1, cos x, sin x, ..., cos kx, sin kx]`.
    pub fn matrix(&self, k: usize) -> DMatrix<f64> {
        let n = 2 * k + 1;
        let cap = k + self.coeff_bandwidth();
        let mut m = DMatrix::zeros(n, n);
        for j in 0..n {
            let mut e = vec![0.0; n];
            e[j] = 1.0;
            let col = self
                .apply_capped(&TrigPoly::from_coeffs(e), cap)
                .expect("cap covers the exact product bandwidth")
                .truncated(k);
            for (i, v) in col.coeffs().iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }
}
