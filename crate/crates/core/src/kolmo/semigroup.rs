use nalgebra::DMatrix;

use super::spectral::{average, from_vector, to_vector, SpectralConfig};
use crate::error::{Error, Result};
use crate::fit::linear_slope;
use crate::opalg::{DiffOp, TrigPoly};

/// Number of sample times used by [`mixing_rate`].
pub const MIXING_SAMPLES: usize = 32;

/// Decay values below this fraction of the initial deviation are treated as
/// round-off and excluded from the rate fit.
pub const MIXING_NOISE_FLOOR: f64 = 1e-12;

/// `P_t = exp(t M(L))` on the Galerkin space of bandwidth `K`.
#[derive(Debug, Clone)]
pub struct Semigroup {
    matrix: DMatrix<f64>,
    bandwidth: usize,
}

impl Semigroup {
    pub fn new(l: &DiffOp, cfg: &SpectralConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            matrix: l.matrix(cfg.bandwidth),
            bandwidth: cfg.bandwidth,
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `exp(t M)` by scaling and squaring.
    pub fn step_matrix(&self, t: f64) -> DMatrix<f64> {
        (&self.matrix * t).exp()
    }

    pub fn propagate(&self, phi: &TrigPoly, t: f64) -> Result<TrigPoly> {
        if !(t >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "propagation time must be nonnegative, got {t}"
            )));
        }
        if t == 0.0 {
            return Ok(phi.clone());
        }
        let v = to_vector(phi, self.bandwidth);
        Ok(from_vector(&(self.step_matrix(t) * v)))
    }
}

/// `P_t phi` for the semigroup generated by `l`.
pub fn propagate(l: &DiffOp, phi: &TrigPoly, t: f64, cfg: &SpectralConfig) -> Result<TrigPoly> {
    Semigroup::new(l, cfg)?.propagate(phi, t)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingEstimate {
    /// Fitted `lambda` in `||P_t phi - <phi>|| ~ C exp(-lambda t)`.
    pub rate: f64,
    /// `(t, ||P_t phi - <phi>||_inf)` at every sample time.
    pub decay: Vec<(f64, f64)>,
    /// Number of samples that entered the fit.
    pub fitted: usize,
}

/// `(t_j, ||P_{t_j} phi - <phi>||_inf)` for [`MIXING_SAMPLES`] equally spaced
/// times `t_j` in `(0, T]`, together with the deviation at `t = 0`.
pub fn decay_table(
    l: &DiffOp,
    phi: &TrigPoly,
    rho: &TrigPoly,
    horizon: f64,
    cfg: &SpectralConfig,
) -> Result<(f64, Vec<(f64, f64)>)> {
    if !(horizon > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "mixing horizon must be positive, got {horizon}"
        )));
    }
    let sg = Semigroup::new(l, cfg)?;
    let mean = average(phi, rho);
    let centred = |p: &TrigPoly| p.add_scaled(&TrigPoly::one(), -mean).sup_norm();
    let dt = horizon / MIXING_SAMPLES as f64;
    let step = sg.step_matrix(dt);
    let mut v = to_vector(phi, cfg.bandwidth);
    let mut decay = Vec::with_capacity(MIXING_SAMPLES);
    for j in 1..=MIXING_SAMPLES {
        v = &step * v;
        decay.push((j as f64 * dt, centred(&from_vector(&v))));
    }
    Ok((centred(phi), decay))
}

/// Log-linear fit of `decay ~ C exp(-lambda t)` over the tail half of the
/// table, ignoring values below [`MIXING_NOISE_FLOOR`]` * initial`.
/// Returns `(lambda, number of fitted samples)`.
pub fn fit_decay_rate(initial: f64, decay: &[(f64, f64)]) -> Result<(f64, usize)> {
    if !(initial > 0.0) {
        return Err(Error::FitFailed("observable is constant".into()));
    }
    let tail = &decay[decay.len() / 2..];
    let floor = MIXING_NOISE_FLOOR * initial;
    let usable: Vec<(f64, f64)> = tail.iter().copied().filter(|d| d.1 > floor).collect();
    if usable.len() < 4 {
        return Err(Error::FitFailed(format!(
            "only {} tail samples above the noise floor; shorten the horizon",
            usable.len()
        )));
    }
    if usable.windows(2).any(|w| w[1].1 > w[0].1 * 1.05) {
        return Err(Error::FitFailed(
            "decay is not monotone over the tail window; lengthen the horizon".into(),
        ));
    }
    let t: Vec<f64> = usable.iter().map(|d| d.0).collect();
    let ln: Vec<f64> = usable.iter().map(|d| d.1.ln()).collect();
    let rate = -linear_slope(&t, &ln);
    if !(rate > 0.0) {
        return Err(Error::FitFailed(format!(
            "fitted rate {rate} is not positive"
        )));
    }
    Ok((rate, usable.len()))
}

/// Fits the exponential decay rate of `P_t phi` toward `<phi>` from
/// [`MIXING_SAMPLES`] equally spaced times in `(0, T]`, using the tail half.
pub fn mixing_rate(
    l: &DiffOp,
    phi: &TrigPoly,
    rho: &TrigPoly,
    horizon: f64,
    cfg: &SpectralConfig,
) -> Result<MixingEstimate> {
    let (initial, decay) = decay_table(l, phi, rho, horizon, cfg)?;
    let (rate, fitted) = fit_decay_rate(initial, &decay)?;
    Ok(MixingEstimate {
        rate,
        decay,
        fitted,
    })
}
