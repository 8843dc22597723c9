use std::f64::consts::PI;

use nalgebra::DMatrix;

use super::quadrature::GaussHermite;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::expansion::SdeModel;
use crate::opalg::{node, GridFunction, TrigPoly};

/// Row-sum tolerance enforced after building a transition matrix.
pub const ROW_SUM_TOL: f64 = 1e-10;

/// Sup-norm change at which the left power iteration stops.
pub const INVARIANT_TOL: f64 = 1e-12;

pub const MAX_POWER_ITERATIONS: usize = 1_000_000;

fn check_step(tau: f64) -> Result<()> {
    if !(tau > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "step size must be positive, got {tau}"
        )));
    }
    Ok(())
}

/// `E phi(x + tau f(x) + sigma(x) sqrt(tau) Z)` by Gauss-Hermite quadrature.
pub fn one_step_expectation(
    model: &SdeModel,
    phi: &TrigPoly,
    tau: f64,
    x: f64,
    gh: &GaussHermite,
) -> Result<f64> {
    check_step(tau)?;
    let mean = x + tau * model.f().eval(x);
    let spread = model.sigma().eval(x) * tau.sqrt();
    Ok(gh.expect(|z| phi.eval(mean + spread * z)))
}

/// One Euler step as a Markov matrix on the `M` uniform nodes: row `i` maps
/// grid values of `phi` to `E phi(X_1 | X_0 = x_i)`, evaluating `phi` off the
/// grid by trigonometric interpolation of bandwidth `K_interp`.
#[derive(Debug, Clone)]
pub struct TransitionKernel {
    model: SdeModel,
    tau: f64,
    quad_points: usize,
    bandwidth: usize,
    matrix: DMatrix<f64>,
}

impl TransitionKernel {
    /// Builds the kernel with the largest interpolation bandwidth the grid
    /// supports, `(M - 1) / 2`.
    pub fn build(model: &SdeModel, tau: f64, m: usize, q: usize, exec: Execution) -> Result<Self> {
        Self::build_with_bandwidth(model, tau, m, q, m.saturating_sub(1) / 2, exec)
    }

    pub fn build_with_bandwidth(
        model: &SdeModel,
        tau: f64,
        m: usize,
        q: usize,
        k_interp: usize,
        exec: Execution,
    ) -> Result<Self> {
        check_step(tau)?;
        if m < 2 * k_interp + 1 || m == 0 {
            return Err(Error::InsufficientNodes {
                nodes: m,
                bandwidth: k_interp,
            });
        }
        let gh = GaussHermite::new(q)?;
        let rows = exec.map_indexed(m, |i| kernel_row(model, tau, m, k_interp, &gh, i));
        let mut matrix = DMatrix::zeros(m, m);
        for (i, row) in rows.iter().enumerate() {
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::RowSumViolation { row: i, sum });
            }
            for (j, v) in row.iter().enumerate() {
                matrix[(i, j)] = *v;
            }
        }
        Ok(Self {
            model: model.clone(),
            tau,
            quad_points: q,
            bandwidth: k_interp,
            matrix,
        })
    }

    pub fn model(&self) -> &SdeModel {
        &self.model
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn grid_size(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn quad_points(&self) -> usize {
        self.quad_points
    }

    pub fn interp_bandwidth(&self) -> usize {
        self.bandwidth
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `P g`: conditional expectation after one step, on the grid.
    pub fn apply(&self, g: &GridFunction) -> GridFunction {
        assert_eq!(g.size(), self.grid_size(), "grid size mismatch");
        let v = nalgebra::DVector::from_column_slice(g.values());
        GridFunction::new((&self.matrix * v).as_slice().to_vec())
    }

    /// `P^p g`.
    pub fn apply_n(&self, g: &GridFunction, p: usize) -> GridFunction {
        let mut v = nalgebra::DVector::from_column_slice(g.values());
        for _ in 0..p {
            v = &self.matrix * v;
        }
        GridFunction::new(v.as_slice().to_vec())
    }

    /// Left fixed point `pi P = pi`, returned as a density on the grid
    /// (normalised so that its trapezoid integral is one).
    pub fn numerical_invariant(&self) -> Result<GridFunction> {
        let m = self.grid_size();
        let pt = self.matrix.transpose();
        let scale = m as f64 / (2.0 * PI);
        let mut pi = nalgebra::DVector::from_element(m, 1.0 / m as f64);
        let mut change = f64::INFINITY;
        for _ in 0..MAX_POWER_ITERATIONS {
            let mut next = &pt * &pi;
            let total: f64 = next.iter().sum();
            next /= total;
            change = (&next - &pi).amax() * scale;
            pi = next;
            if change < INVARIANT_TOL {
                return Ok(GridFunction::new(pi.iter().map(|p| p * scale).collect()));
            }
        }
        Err(Error::NoConvergence {
            iterations: MAX_POWER_ITERATIONS,
            change,
        })
    }

    /// Second-largest eigenvalue modulus of `P`; `1` is always the largest.
    pub fn second_eigenvalue_modulus(&self) -> f64 {
        let mut moduli: Vec<f64> = self
            .matrix
            .complex_eigenvalues()
            .iter()
            .map(|z| z.norm())
            .collect();
        moduli.sort_by(|a, b| b.total_cmp(a));
        moduli.get(1).copied().unwrap_or(0.0)
    }
}

/// `P[i][j] = (1/M) sum_q w_q (1 + 2 sum_{k<=K} cos k(y_iq - x_j))`.
fn kernel_row(
    model: &SdeModel,
    tau: f64,
    m: usize,
    k: usize,
    gh: &GaussHermite,
    i: usize,
) -> Vec<f64> {
    let x = node(i, m);
    let mean = x + tau * model.f().eval(x);
    let spread = model.sigma().eval(x) * tau.sqrt();
    let mut chi_c = vec![0.0; k + 1];
    let mut chi_s = vec![0.0; k + 1];
    for (&z, &w) in gh.nodes().iter().zip(gh.weights()) {
        let (s1, c1) = (mean + spread * z).sin_cos();
        let (mut ck, mut sk) = (1.0, 0.0);
        chi_c[0] += w;
        for h in 1..=k {
            let c = ck * c1 - sk * s1;
            sk = sk * c1 + ck * s1;
            ck = c;
            chi_c[h] += w * ck;
            chi_s[h] += w * sk;
        }
    }
    (0..m)
        .map(|j| {
            let mut acc = chi_c[0];
            for h in 1..=k {
                let (s, c) = node((h * j) % m, m).sin_cos();
                acc += 2.0 * (chi_c[h] * c + chi_s[h] * s);
            }
            acc / m as f64
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::SQRT_2;

    fn heat() -> SdeModel {
        SdeModel::constant(0.0, SQRT_2).unwrap()
    }

    #[test]
    fn one_step_closed_forms() {
        let gh = GaussHermite::new(40).unwrap();
        let one = one_step_expectation(&SdeModel::langevin(), &TrigPoly::one(), 0.1, 0.3, &gh);
        assert!((one.unwrap() - 1.0).abs() < 1e-14);
        let cos = TrigPoly::cos(1, 1.0);
        for &x in &[0.0, 0.7, 2.0, 4.5] {
            for &tau in &[0.01, 0.1, 0.5] {
                let e = one_step_expectation(&heat(), &cos, tau, x, &gh).unwrap();
                assert!((e - (-tau).exp() * x.cos()).abs() < 1e-12);
            }
        }
        assert!(one_step_expectation(&heat(), &cos, 0.0, 0.0, &gh).is_err());
    }

    #[test]
    fn quadrature_saturates() {
        let model = SdeModel::langevin();
        let phi = TrigPoly::from_harmonics(&[(1, 1.0, 0.5), (5, 0.2, -0.1), (8, 0.05, 0.05)]);
        let (g40, g80) = (
            GaussHermite::new(40).unwrap(),
            GaussHermite::new(80).unwrap(),
        );
        for &x in &[0.1, 1.3, 3.0] {
            let a = one_step_expectation(&model, &phi, 0.1, x, &g40).unwrap();
            let b = one_step_expectation(&model, &phi, 0.1, x, &g80).unwrap();
            assert!((a - b).abs() <= 1e-12);
        }
    }

    #[test]
    fn heat_kernel_matrix() {
        let ker = TransitionKernel::build(&heat(), 0.1, 33, 40, Execution::default()).unwrap();
        let ones = ker.apply(&GridFunction::new(vec![1.0; 33]));
        assert!(ones.values().iter().all(|v| (v - 1.0).abs() < 1e-12));
        let cos = TrigPoly::cos(1, 1.0);
        let out = ker.apply(&cos.sample(33));
        for (v, x) in out.values().iter().zip(out.nodes()) {
            assert!((v - (-0.1f64).exp() * x.cos()).abs() < 1e-10);
        }
        let inv = ker.numerical_invariant().unwrap();
        assert!(inv
            .values()
            .iter()
            .all(|v| (v - 1.0 / (2.0 * PI)).abs() < 1e-10));
    }

    #[test]
    fn matrix_matches_pointwise_quadrature() {
        let model = SdeModel::langevin();
        let (m, tau) = (41, 0.05);
        let ker = TransitionKernel::build(&model, tau, m, 40, Execution::default()).unwrap();
        let gh = GaussHermite::new(40).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10 {
            let terms: Vec<(usize, f64, f64)> = (0..=8)
                .map(|k| (k, rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let phi = TrigPoly::from_harmonics(&terms);
            let out = ker.apply(&phi.sample(m));
            for (i, v) in out.values().iter().enumerate() {
                let e = one_step_expectation(&model, &phi, tau, node(i, m), &gh).unwrap();
                assert!((v - e).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn constant_model_invariant_is_uniform() {
        let model = SdeModel::constant(0.7, 1.1).unwrap();
        let ker = TransitionKernel::build(&model, 0.1, 33, 40, Execution::Sequential).unwrap();
        let inv = ker.numerical_invariant().unwrap();
        assert!(inv
            .values()
            .iter()
            .all(|v| (v - 1.0 / (2.0 * PI)).abs() < 1e-10));
        assert!((inv.integral() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn execution_modes_agree() {
        let model = SdeModel::langevin();
        let a = TransitionKernel::build(&model, 0.1, 25, 40, Execution::Sequential).unwrap();
        let b = TransitionKernel::build(&model, 0.1, 25, 40, Execution::Parallel).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn build_errors() {
        let model = SdeModel::langevin();
        assert!(matches!(
            TransitionKernel::build_with_bandwidth(&model, 0.1, 16, 40, 8, Execution::Sequential),
            Err(Error::InsufficientNodes { .. })
        ));
        assert!(TransitionKernel::build(&model, 0.1, 17, 10, Execution::Sequential).is_err());
    }

    #[test]
    fn heat_second_eigenvalue() {
        let ker = TransitionKernel::build(&heat(), 0.2, 33, 40, Execution::default()).unwrap();
        assert!((ker.second_eigenvalue_modulus() - (-0.2f64).exp()).abs() < 1e-10);
    }
}
