use super::quadrature::DEFAULT_NODES;
use super::transition::TransitionKernel;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::expansion::{OperatorExpansion, SdeModel};
use crate::fit::loglog_slope;
use crate::kolmo::{spectral_gap, stationary_density, SpectralConfig, MIXING_SAMPLES};
use crate::measures::{expectation_under, modified_density, mu_hierarchy};
use crate::opalg::{GridFunction, TrigPoly};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelConfig {
    /// Grid size `M` (odd).
    pub grid_size: usize,
    /// Gauss-Hermite nodes `Q`.
    pub quad_points: usize,
}

impl Default for KernelConfig {
    fn default() -> Self {
        Self {
            grid_size: 65,
            quad_points: DEFAULT_NODES,
        }
    }
}

/// Number of steps `ceil(T / tau)`, robust to `T / tau` landing a hair above
/// an integer.
pub fn step_count(horizon: f64, tau: f64) -> usize {
    let r = horizon / tau;
    let n = r.round();
    if (r - n).abs() <= 1e-9 * n.max(1.0) {
        n as usize
    } else {
        r.ceil() as usize
    }
}

/// `E phi(X_p)` for `X_0 = 0` under the kernel: entry 0 of `P^p phi`.
pub fn kernel_expectation(kernel: &TransitionKernel, phi: &TrigPoly, p: usize) -> f64 {
    kernel.apply_n(&phi.sample(kernel.grid_size()), p).values()[0]
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakErrorRow {
    pub tau: f64,
    pub steps: usize,
    /// `E phi(X_p)` from the kernel.
    pub kernel: f64,
    /// `∫ phi mu^(N)(tau) dx`.
    pub modified: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeakErrorCurve {
    pub order: usize,
    pub horizon: f64,
    pub rows: Vec<WeakErrorRow>,
    pub slope: f64,
    /// `exp(-lambda T)` with `lambda` the spectral gap of `L`: the size of the
    /// transient the horizon leaves behind.
    pub transient: f64,
}

/// Long-time weak error of the Euler scheme against the modified invariant
/// density `mu^(N)(tau)`, for each step size.
#[allow(clippy::too_many_arguments)]
pub fn weak_error_curve(
    model: &SdeModel,
    phi: &TrigPoly,
    taus: &[f64],
    n: usize,
    horizon: f64,
    kcfg: &KernelConfig,
    scfg: &SpectralConfig,
    exec: Execution,
) -> Result<WeakErrorCurve> {
    if taus.len() < 2 {
        return Err(Error::InvalidArgument(
            "need at least two step sizes".into(),
        ));
    }
    if !(horizon > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    let exp = OperatorExpansion::build(model, n)?;
    let rho = stationary_density(exp.generator(), scfg)?;
    let me = mu_hierarchy(exp.l_ops(), &rho, scfg)?;
    let gap = spectral_gap(exp.generator(), scfg)?;
    let mut rows = Vec::with_capacity(taus.len());
    for &tau in taus {
        let kernel = TransitionKernel::build(model, tau, kcfg.grid_size, kcfg.quad_points, exec)?;
        let steps = step_count(horizon, tau);
        let k = kernel_expectation(&kernel, phi, steps);
        let modified = expectation_under(phi, &modified_density(&me, tau, n)?);
        rows.push(WeakErrorRow {
            tau,
            steps,
            kernel: k,
            modified,
            error: (k - modified).abs(),
        });
    }
    let t: Vec<f64> = rows.iter().map(|r| r.tau).collect();
    let e: Vec<f64> = rows.iter().map(|r| r.error).collect();
    Ok(WeakErrorCurve {
        order: n,
        horizon,
        slope: loglog_slope(&t, &e),
        transient: (-gap * horizon).exp(),
        rows,
    })
}

/// `∫ phi pi dx` for a grid density `pi`, by the trapezoid rule.
pub fn grid_expectation(phi: &TrigPoly, density: &GridFunction) -> f64 {
    let weighted: Vec<f64> = density
        .values()
        .iter()
        .zip(density.nodes())
        .map(|(p, x)| p * phi.eval(x))
        .collect();
    GridFunction::new(weighted).integral()
}

/// Decay of `||P^p phi - <phi>_pi||_inf` over the grid toward the kernel's
/// stationary expectation, sampled at [`MIXING_SAMPLES`] multiples of a fixed
/// step count spanning roughly `(0, T]`. Returns the deviation at `p = 0` and
/// rows `(p tau, deviation)`.
pub fn discrete_decay_table(
    kernel: &TransitionKernel,
    phi: &TrigPoly,
    horizon: f64,
) -> Result<(f64, Vec<(f64, f64)>)> {
    if !(horizon > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    let pi = kernel.numerical_invariant()?;
    let mean = grid_expectation(phi, &pi);
    let stride = ((horizon / (MIXING_SAMPLES as f64 * kernel.tau())).round() as usize).max(1);
    let dev = |g: &GridFunction| {
        g.values()
            .iter()
            .fold(0.0f64, |a, v| a.max((v - mean).abs()))
    };
    let mut g = phi.sample(kernel.grid_size());
    let initial = dev(&g);
    let mut rows = Vec::with_capacity(MIXING_SAMPLES);
    for j in 1..=MIXING_SAMPLES {
        g = kernel.apply_n(&g, stride);
        rows.push(((j * stride) as f64 * kernel.tau(), dev(&g)));
    }
    Ok((initial, rows))
}
