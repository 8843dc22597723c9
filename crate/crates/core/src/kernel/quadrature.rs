use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Smallest node count accepted by the kernel oracle.
pub const MIN_NODES: usize = 20;

pub const DEFAULT_NODES: usize = 40;

/// Gauss-Hermite rule for a standard normal variable:
/// `E g(Z) ≈ sum_q w_q g(z_q)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussHermite {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussHermite {
    /// Newton iteration on the orthonormal Hermite recurrence, started from
    /// the usual asymptotic guesses for the largest roots.
    pub fn new(q: usize) -> Result<Self> {
        if q < MIN_NODES {
            return Err(Error::InvalidArgument(format!(
                "Gauss-Hermite needs at least {MIN_NODES} nodes, got {q}"
            )));
        }
        let n = q as f64;
        let pim4 = PI.powf(-0.25);
        let mut x = vec![0.0; q];
        let mut w = vec![0.0; q];
        let mut z = 0.0f64;
        for i in 0..q.div_ceil(2) {
            z = match i {
                0 => (2.0 * n + 1.0).sqrt() - 1.85575 * (2.0 * n + 1.0).powf(-0.16667),
                1 => z - 1.14 * n.powf(0.426) / z,
                2 => 1.86 * z - 0.86 * x[0],
                3 => 1.91 * z - 0.91 * x[1],
                _ => 2.0 * z - x[i - 2],
            };
            let mut pp = 0.0;
            for _ in 0..100 {
                let (mut p1, mut p2) = (pim4, 0.0);
                for j in 0..q {
                    let p3 = p2;
                    p2 = p1;
                    let jf = j as f64;
                    p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
                }
                pp = (2.0 * n).sqrt() * p2;
                let dz = p1 / pp;
                z -= dz;
                if dz.abs() <= 1e-15 * z.abs().max(1.0) {
                    break;
                }
            }
            x[i] = z;
            x[q - 1 - i] = -z;
            w[i] = 2.0 / (pp * pp);
            w[q - 1 - i] = w[i];
        }
        // physicists' rule for exp(-x^2) -> unit-variance normal
        let nodes = x.iter().rev().map(|v| v * 2f64.sqrt()).collect();
        let weights = w.iter().rev().map(|v| v / PI.sqrt()).collect();
        Ok(Self { nodes, weights })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn expect(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * g(z))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_moments() {
        for q in [20, 40, 64] {
            let gh = GaussHermite::new(q).unwrap();
            assert_eq!(gh.len(), q);
            assert!((gh.expect(|_| 1.0) - 1.0).abs() < 1e-14);
            assert!(gh.expect(|z| z).abs() < 1e-14);
            assert!((gh.expect(|z| z * z) - 1.0).abs() < 1e-13);
            assert!((gh.expect(|z| z.powi(4)) - 3.0).abs() < 1e-12);
            assert!((gh.expect(|z| z.powi(6)) - 15.0).abs() < 1e-11);
            assert!(gh.nodes().windows(2).all(|p| p[0] < p[1]));
        }
    }

    #[test]
    fn characteristic_function() {
        let gh = GaussHermite::new(40).unwrap();
        for s in [0.1f64, 0.5, 1.0, 2.0] {
            let exact = (-0.5 * s * s).exp();
            assert!((gh.expect(|z| (s * z).cos()) - exact).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_small_rules() {
        assert!(GaussHermite::new(19).is_err());
    }
}
