//! Seeded Monte Carlo simulation of the Euler scheme.
//!
//! Path `i` draws its normals from a ChaCha8 stream keyed by `(seed, i)`, so
//! results do not depend on the execution policy or on how paths are split
//! between runs.

use std::f64::consts::TAU;
use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::expansion::SdeModel;
use crate::opalg::TrigPoly;

/// Batches used for ergodic-average standard errors.
pub const ERGODIC_BATCHES: usize = 32;

/// Stream reserved for the single long ergodic path.
pub const ERGODIC_STREAM: u64 = u64::MAX;

#[derive(Debug, Clone, PartialEq)]
pub struct McConfig {
    pub model: SdeModel,
    pub tau: f64,
    /// Number of Euler steps `p`.
    pub steps: usize,
    pub paths: usize,
    pub seed: u64,
    /// Steps discarded before an ergodic average starts.
    pub burn_in: usize,
    /// Starting point of every path.
    pub x0: f64,
}

impl McConfig {
    pub fn new(model: SdeModel, tau: f64, steps: usize, paths: usize, seed: u64) -> Self {
        Self {
            model,
            tau,
            steps,
            paths,
            seed,
            burn_in: 0,
            x0: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "step size must be positive, got {}",
                self.tau
            )));
        }
        if self.paths == 0 {
            return Err(Error::InvalidArgument("need at least one path".into()));
        }
        Ok(())
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeakEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub paths: usize,
}

impl WeakEstimate {
    /// Sample mean and standard error of the mean; a single sample has
    /// standard error zero.
    pub fn from_samples(values: &[f64]) -> Self {
        let n = values.len();
        assert!(n > 0, "need at least one sample");
        let mean = values.iter().sum::<f64>() / n as f64;
        let std_error = if n > 1 {
            let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
            (var / n as f64).sqrt()
        } else {
            0.0
        };
        Self {
            mean,
            std_error,
            paths: n,
        }
    }

    /// `|mean - target| <= k std_error` (with a round-off allowance when the
    /// standard error vanishes).
    pub fn covers(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.std_error + 1e-12 * target.abs().max(1.0)
    }

    /// Distance to `target` in standard errors.
    pub fn z_score(&self, target: f64) -> f64 {
        if self.std_error > 0.0 {
            (self.mean - target).abs() / self.std_error
        } else if self.mean == target {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// `x + tau f(x) + sigma(x) sqrt(tau) xi`, reduced to `[0, 2 pi)`.
pub fn euler_step(model: &SdeModel, x: f64, tau: f64, xi: f64) -> f64 {
    let y = x + tau * model.f().eval(x) + model.sigma().eval(x) * tau.sqrt() * xi;
    let r = y.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2 pi for tiny negative y
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Endpoint `X_p` of path `index`.
pub fn simulate_path(cfg: &McConfig, index: u64) -> f64 {
    let mut rng = cfg.rng(index);
    let mut x = cfg.x0;
    for _ in 0..cfg.steps {
        let xi: f64 = rng.sample(StandardNormal);
        x = euler_step(&cfg.model, x, cfg.tau, xi);
    }
    x
}

/// `phi(X_p)` for each path index in `range`, in index order.
pub fn path_values(
    cfg: &McConfig,
    phi: &TrigPoly,
    range: Range<u64>,
    exec: Execution,
) -> Result<Vec<f64>> {
    cfg.validate()?;
    let start = range.start;
    let n = range.end.saturating_sub(start) as usize;
    Ok(exec.map_indexed(n, |i| phi.eval(simulate_path(cfg, start + i as u64))))
}

/// Estimate of `E phi(X_p)` from `cfg.paths` independent paths.
pub fn weak_estimate(cfg: &McConfig, phi: &TrigPoly, exec: Execution) -> Result<WeakEstimate> {
    let values = path_values(cfg, phi, 0..cfg.paths as u64, exec)?;
    Ok(WeakEstimate::from_samples(&values))
}

/// Time average of `phi(X_n)` over `burn_in < n <= steps` on one long path,
/// with a batch-means standard error.
pub fn ergodic_average(cfg: &McConfig, phi: &TrigPoly) -> Result<WeakEstimate> {
    cfg.validate()?;
    if cfg.burn_in >= cfg.steps {
        return Err(Error::InvalidArgument(format!(
            "burn-in {} must be below the step count {}",
            cfg.burn_in, cfg.steps
        )));
    }
    let kept = cfg.steps - cfg.burn_in;
    if kept < ERGODIC_BATCHES {
        return Err(Error::InvalidArgument(format!(
            "need at least {ERGODIC_BATCHES} averaged steps, got {kept}"
        )));
    }
    let mut rng = cfg.rng(ERGODIC_STREAM);
    let mut x = cfg.x0;
    let mut values = Vec::with_capacity(kept);
    for n in 1..=cfg.steps {
        let xi: f64 = rng.sample(StandardNormal);
        x = euler_step(&cfg.model, x, cfg.tau, xi);
        if n > cfg.burn_in {
            values.push(phi.eval(x));
        }
    }
    let mean = values.iter().sum::<f64>() / kept as f64;
    let size = kept / ERGODIC_BATCHES;
    let batch_means: Vec<f64> = values
        .chunks_exact(size)
        .take(ERGODIC_BATCHES)
        .map(|b| b.iter().sum::<f64>() / size as f64)
        .collect();
    let batch = WeakEstimate::from_samples(&batch_means);
    Ok(WeakEstimate {
        mean,
        std_error: batch.std_error,
        paths: 1,
    })
}

/// Outcome of a `k`-sigma comparison that is retried once with `seed + 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SigmaCheck {
    pub estimate: WeakEstimate,
    pub target: f64,
    pub pass: bool,
    pub reran: bool,
}

/// Runs `estimate(seed)` and compares it to `target`; on a miss, reruns once
/// with `seed + 1` and reports the second outcome.
pub fn check_with_rerun(
    seed: u64,
    target: f64,
    k: f64,
    estimate: impl Fn(u64) -> Result<WeakEstimate>,
) -> Result<SigmaCheck> {
    let first = estimate(seed)?;
    if first.covers(target, k) {
        return Ok(SigmaCheck {
            estimate: first,
            target,
            pass: true,
            reran: false,
        });
    }
    let second = estimate(seed.wrapping_add(1))?;
    Ok(SigmaCheck {
        estimate: second,
        target,
        pass: second.covers(target, k),
        reran: true,
    })
}
