use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Default bandwidth cap for products.
pub const DEFAULT_BANDWIDTH_CAP: usize = 256;
/// A product tail beyond the cap is discarded silently when it is below this
/// fraction of the largest retained coefficient.
pub const TAIL_TOL: f64 = 1e-12;
/// Coefficients below this fraction of the largest coefficient are zeroed
/// after every product.
pub const TRIM_REL: f64 = 1e-14;

/// Real trigonometric polynomial `c0 + sum_k a_k cos(kx) + b_k sin(kx)`.
///
/// Coefficients are stored as `[c0, a1, b1, a2, b2, ..., aK, bK]`, which is
/// also the ordering of the Fourier basis used by [`DiffOp::matrix`].
///
/// [`DiffOp::matrix`]: super::DiffOp::matrix
#[derive(Debug, Clone, PartialEq)]
pub struct TrigPoly {
    coeffs: Vec<f64>,
}

impl TrigPoly {
    pub fn zero() -> Self {
        Self { coeffs: vec![0.0] }
    }

    pub fn constant(c: f64) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// `amp * cos(k x)`.
    pub fn cos(k: usize, amp: f64) -> Self {
        let mut p = Self::with_bandwidth(k);
        p.set_harmonic(k, amp, 0.0);
        p
    }

    /// `amp * sin(k x)`.
    pub fn sin(k: usize, amp: f64) -> Self {
        let mut p = Self::with_bandwidth(k);
        p.set_harmonic(k, 0.0, amp);
        p
    }

    /// Builds a polynomial from `(k, a_k, b_k)` triples; repeated harmonics
    /// are summed and the sine part of `k = 0` is ignored.
    pub fn from_harmonics(terms: &[(usize, f64, f64)]) -> Self {
        let k_max = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut p = Self::with_bandwidth(k_max);
        for &(k, a, b) in terms {
            let (a0, b0) = p.harmonic(k);
            p.set_harmonic(k, a0 + a, b0 + b);
        }
        p
    }

    /// Coefficient vector in `[c0, a1, b1, ...]` layout. The length must be odd.
    pub fn from_coeffs(coeffs: Vec<f64>) -> Self {
        assert!(
            coeffs.len() % 2 == 1,
            "coefficient vector must have odd length"
        );
        Self { coeffs }
    }

    pub fn with_bandwidth(k: usize) -> Self {
        Self {
            coeffs: vec![0.0; 2 * k + 1],
        }
    }

    pub fn bandwidth(&self) -> usize {
        (self.coeffs.len() - 1) / 2
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<f64> {
        self.coeffs
    }

    /// `(a_k, b_k)`; for `k = 0` this is `(c0, 0)`. Zero beyond the bandwidth.
    pub fn harmonic(&self, k: usize) -> (f64, f64) {
        if k == 0 {
            (self.coeffs[0], 0.0)
        } else if k <= self.bandwidth() {
            (self.coeffs[2 * k - 1], self.coeffs[2 * k])
        } else {
            (0.0, 0.0)
        }
    }

    fn set_harmonic(&mut self, k: usize, a: f64, b: f64) {
        if k == 0 {
            self.coeffs[0] = a;
        } else {
            self.coeffs[2 * k - 1] = a;
            self.coeffs[2 * k] = b;
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let (s1, c1) = x.sin_cos();
        // cos(kx), sin(kx) by the rotation recurrence
        let (mut ck, mut sk) = (1.0, 0.0);
        let mut acc = self.coeffs[0];
        for k in 1..=self.bandwidth() {
            let c = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = c;
            acc += self.coeffs[2 * k - 1] * ck + self.coeffs[2 * k] * sk;
        }
        acc
    }

    /// Exact `order`-th derivative.
    pub fn derivative(&self, order: usize) -> Self {
        if order == 0 {
            return self.clone();
        }
        let mut out = Self::with_bandwidth(self.bandwidth());
        for k in 1..=self.bandwidth() {
            let (a, b) = self.harmonic(k);
            let scale = (k as f64).powi(order as i32);
            // d/dx rotates (a, b) -> (k b, -k a)
            let (ra, rb) = match order % 4 {
                0 => (a, b),
                1 => (b, -a),
                2 => (-a, -b),
                _ => (-b, a),
            };
            out.set_harmonic(k, scale * ra, scale * rb);
        }
        out
    }

    /// Antiderivative of the zero-mean part (the constant term is dropped).
    pub fn antiderivative(&self) -> Self {
        let mut out = Self::with_bandwidth(self.bandwidth());
        for k in 1..=self.bandwidth() {
            let (a, b) = self.harmonic(k);
            let kf = k as f64;
            out.set_harmonic(k, -b / kf, a / kf);
        }
        out
    }

    /// Exact product with the default bandwidth cap.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.try_mul_capped(other, DEFAULT_BANDWIDTH_CAP)
    }

    /// Exact product via the product-to-sum identities.
    ///
    /// The result is truncated at `cap`; this fails only if the discarded
    /// harmonics exceed `TAIL_TOL` relative to the retained ones.
    pub fn try_mul_capped(&self, other: &Self, cap: usize) -> Result<Self> {
        let (k1, k2) = (self.bandwidth(), other.bandwidth());
        let full = k1 + k2;
        let mut cos_acc = vec![0.0; full + 1];
        let mut sin_acc = vec![0.0; full + 1];
        for j in 0..=k1 {
            let (aj, bj) = self.harmonic(j);
            if aj == 0.0 && bj == 0.0 {
                continue;
            }
            for k in 0..=k2 {
                let (ak, bk) = other.harmonic(k);
                if ak == 0.0 && bk == 0.0 {
                    continue;
                }
                let sum = j + k;
                let (diff, sign) = if j >= k { (j - k, 1.0) } else { (k - j, -1.0) };
                // cos j cos k, sin j sin k
                cos_acc[sum] += 0.5 * (aj * ak - bj * bk);
                cos_acc[diff] += 0.5 * (aj * ak + bj * bk);
                // sin j cos k, cos j sin k
                sin_acc[sum] += 0.5 * (bj * ak + aj * bk);
                sin_acc[diff] += 0.5 * sign * (bj * ak - aj * bk);
            }
        }
        // sin_acc[0] multiplies sin(0) and is discarded
        let mut out = Self::with_bandwidth(full);
        out.coeffs[0] = cos_acc[0];
        for k in 1..=full {
            out.set_harmonic(k, cos_acc[k], sin_acc[k]);
        }
        let out = out.truncate_checked(cap)?;
        Ok(out.trimmed(TRIM_REL))
    }

    fn truncate_checked(self, cap: usize) -> Result<Self> {
        if self.bandwidth() <= cap {
            return Ok(self);
        }
        let split = 2 * cap + 1;
        let tail = self.coeffs[split..]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
        let kept = self.coeffs[..split]
            .iter()
            .fold(0.0f64, |m, c| m.max(c.abs()));
        if tail > TAIL_TOL * kept {
            return Err(Error::BandwidthExceeded {
                requested: self.bandwidth(),
                cap,
                tail,
            });
        }
        Ok(self.truncated(cap))
    }

    /// Drops harmonics above `k` (or zero-pads up to `k`).
    pub fn truncated(&self, k: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(2 * k + 1, 0.0);
        Self { coeffs }
    }

    /// Zeroes coefficients below `rel * max|c|` and shrinks the bandwidth to
    /// the highest nonzero harmonic.
    pub fn trimmed(mut self, rel: f64) -> Self {
        let max = self.max_abs_coeff();
        let thresh = rel * max;
        for c in self.coeffs.iter_mut() {
            if c.abs() < thresh {
                *c = 0.0;
            }
        }
        let mut k = self.bandwidth();
        while k > 0 && self.coeffs[2 * k - 1] == 0.0 && self.coeffs[2 * k] == 0.0 {
            k -= 1;
        }
        self.coeffs.truncate(2 * k + 1);
        self
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    /// `self + s * other`.
    pub fn add_scaled(&self, other: &Self, s: f64) -> Self {
        let k = self.bandwidth().max(other.bandwidth());
        let mut coeffs = self.truncated(k).coeffs;
        for (c, o) in coeffs.iter_mut().zip(other.coeffs.iter()) {
            *c += s * o;
        }
        Self { coeffs }
    }

    /// Mean over one period, `(1/2pi) ∫ p dx`.
    pub fn mean(&self) -> f64 {
        self.coeffs[0]
    }

    /// `∫_0^{2pi} p dx`.
    pub fn integral(&self) -> f64 {
        2.0 * PI * self.coeffs[0]
    }

    /// `∫_0^{2pi} p q dx`, exact by orthogonality.
    pub fn integral_of_product(&self, other: &Self) -> f64 {
        let k = self.bandwidth().min(other.bandwidth());
        let mut acc = 2.0 * self.coeffs[0] * other.coeffs[0];
        for i in 1..=2 * k {
            acc += self.coeffs[i] * other.coeffs[i];
        }
        PI * acc
    }

    /// Sup norm estimated on `max(64, 8K)` uniform nodes.
    pub fn sup_norm(&self) -> f64 {
        let m = (8 * self.bandwidth()).max(64);
        self.sample(m).max_abs()
    }

    /// Minimum over `m` uniform nodes.
    pub fn grid_min(&self, m: usize) -> f64 {
        self.sample(m)
            .values()
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b))
    }

    pub fn sample(&self, m: usize) -> super::GridFunction {
        super::GridFunction::sample(self, m)
    }
}

impl Add for &TrigPoly {
    type Output = TrigPoly;
    fn add(self, rhs: &TrigPoly) -> TrigPoly {
        self.add_scaled(rhs, 1.0)
    }
}

impl Sub for &TrigPoly {
    type Output = TrigPoly;
    fn sub(self, rhs: &TrigPoly) -> TrigPoly {
        self.add_scaled(rhs, -1.0)
    }
}

impl Neg for &TrigPoly {
    type Output = TrigPoly;
    fn neg(self) -> TrigPoly {
        self.scale(-1.0)
    }
}

impl Mul<f64> for &TrigPoly {
    type Output = TrigPoly;
    fn mul(self, rhs: f64) -> TrigPoly {
        self.scale(rhs)
    }
}
