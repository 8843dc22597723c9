use std::f64::consts::PI;

use super::TrigPoly;
use crate::error::{Error, Result};

/// Values at the uniform nodes `x_i = 2 pi i / M`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    values: Vec<f64>,
}

pub fn node(i: usize, m: usize) -> f64 {
    2.0 * PI * i as f64 / m as f64
}

impl GridFunction {
    pub fn new(values: Vec<f64>) -> Self {
        assert!(!values.is_empty(), "grid function needs at least one node");
        Self { values }
    }

    pub fn sample(p: &TrigPoly, m: usize) -> Self {
        Self {
            values: (0..m).map(|i| p.eval(node(i, m))).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> + '_ {
        let m = self.size();
        (0..m).map(move |i| node(i, m))
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |a, v| a.max(v.abs()))
    }

    /// Trapezoid rule `∫ g dx` over the period.
    pub fn integral(&self) -> f64 {
        self.values.iter().sum::<f64>() * 2.0 * PI / self.size() as f64
    }

    /// Discrete Fourier analysis onto harmonics `0..=k`.
    ///
    /// For `M > 2K + 1` this is the least-squares trigonometric fit; for
    /// `M = 2K + 1` it interpolates.
    pub fn interpolate(&self, k: usize) -> Result<TrigPoly> {
        let m = self.size();
        if m < 2 * k + 1 {
            return Err(Error::InsufficientNodes {
                nodes: m,
                bandwidth: k,
            });
        }
        let mut coeffs = vec![0.0; 2 * k + 1];
        coeffs[0] = self.values.iter().sum::<f64>() / m as f64;
        let scale = 2.0 / m as f64;
        for h in 1..=k {
            let (mut a, mut b) = (0.0, 0.0);
            for (i, v) in self.values.iter().enumerate() {
                // reduce h*i mod m so the angle stays small
                let (s, c) = node((h * i) % m, m).sin_cos();
                a += v * c;
                b += v * s;
            }
            coeffs[2 * h - 1] = scale * a;
            coeffs[2 * h] = scale * b;
        }
        Ok(TrigPoly::from_coeffs(coeffs))
    }
}
