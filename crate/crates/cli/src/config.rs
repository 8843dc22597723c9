//! Experiment configuration: a TOML file, optional, with `--override`
//! edits applied on top. Unknown keys are rejected.

use std::f64::consts::SQRT_2;
use std::path::Path;

use serde::{Deserialize, Serialize};
use weakbea::expansion::{ExpansionConfig, SdeModel};
use weakbea::kernel::KernelConfig;
use weakbea::kolmo::SpectralConfig;
use weakbea::TrigPoly;

/// Harmonic `(k, cos coefficient, sin coefficient)`.
pub type Harmonic = [f64; 3];

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub f: Vec<Harmonic>,
    pub sigma: Vec<Harmonic>,
}

impl Default for ModelSpec {
    fn default() -> Self {
        Self {
            f: vec![[1.0, 0.0, -1.0]],
            sigma: vec![[0.0, SQRT_2, 0.0]],
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Resolution {
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "Q")]
    pub q: usize,
}

impl Default for Resolution {
    fn default() -> Self {
        Self {
            k: 32,
            m: 65,
            q: 40,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Linear-solve residual bound.
    pub solve: f64,
    /// Inverse-relation reconstruction residual.
    pub inverse: f64,
    /// `max |L_n 1|` and, for constant coefficients, `max |L_n|`.
    pub annihilation: f64,
    /// Closed-form density comparison and the mean of `mu^(N)`.
    pub density: f64,
    /// Change of `rho`, `mu_n` when the Galerkin bandwidth doubles.
    pub refinement: f64,
    /// Order-`N` slopes are accepted in `[N + slope_low, N + slope_high]`.
    pub slope_low: f64,
    pub slope_high: f64,
    /// Errors below this are round-off; such sweeps are flagged "floor".
    pub floor: f64,
    /// Monte Carlo acceptance radius in standard errors.
    pub sigma: f64,
    /// Relative agreement of continuous and discrete mixing rates.
    pub rate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            solve: 1e-10,
            inverse: 1e-8,
            annihilation: 1e-10,
            density: 1e-8,
            refinement: 1e-9,
            slope_low: 0.75,
            slope_high: 1.4,
            floor: 1e-12,
            sigma: 3.0,
            rate: 0.2,
        }
    }
}

impl Tolerances {
    /// Accepted slope window `[n + slope_low, n + slope_high]`.
    pub fn slope_window(&self, n: usize) -> (f64, f64) {
        (n as f64 + self.slope_low, n as f64 + self.slope_high)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SimulateSpec {
    pub paths: usize,
    pub steps: usize,
    pub tau: f64,
    /// Start of the one-step check.
    pub x_start: f64,
    pub ergodic_tau: f64,
    pub ergodic_steps: usize,
    pub burn_in: usize,
}

impl Default for SimulateSpec {
    fn default() -> Self {
        Self {
            paths: 100_000,
            steps: 200,
            tau: 0.1,
            x_start: 1.0,
            ergodic_tau: 0.05,
            ergodic_steps: 2_000_000,
            burn_in: 2_000,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct MixingSpec {
    pub horizon: f64,
    pub tau: f64,
}

impl Default for MixingSpec {
    fn default() -> Self {
        Self {
            horizon: 10.0,
            tau: 0.05,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct ConvergeSpec {
    /// Minimum horizon of the long-time sweep. It is lengthened until
    /// `exp(-lambda T) ||phi||` falls below `tolerances.floor`.
    pub horizon: f64,
    /// Step sizes of the long-time sweep.
    pub long_time_tau: Vec<f64>,
    /// Long-time slopes for orders at or above this are reported but not
    /// enforced.
    pub soft_from: usize,
}

impl Default for ConvergeSpec {
    fn default() -> Self {
        Self {
            horizon: 20.0,
            long_time_tau: vec![0.2, 0.1, 0.05, 0.025],
            soft_from: 2,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct Config {
    pub model: ModelSpec,
    pub observable: Vec<Harmonic>,
    #[serde(alias = "N")]
    pub order: usize,
    pub tau: Vec<f64>,
    pub seed: u64,
    pub resolution: Resolution,
    pub tolerances: Tolerances,
    pub simulate: SimulateSpec,
    pub mixing: MixingSpec,
    pub converge: ConvergeSpec,
}

impl Default for Config {
    fn default() -> Self {
        Self {
            model: ModelSpec::default(),
            observable: vec![[1.0, 1.0, 0.0]],
            order: 2,
            tau: vec![0.1, 0.05, 0.025, 0.0125],
            seed: 20_240_601,
            resolution: Resolution::default(),
            tolerances: Tolerances::default(),
            simulate: SimulateSpec::default(),
            mixing: MixingSpec::default(),
            converge: ConvergeSpec::default(),
        }
    }
}

fn parse_value(raw: &str) -> toml::Value {
    match toml::from_str::<toml::Table>(&format!("v = {raw}")) {
        Ok(mut t) => t
            .remove("v")
            .unwrap_or_else(|| toml::Value::String(raw.into())),
        Err(_) => toml::Value::String(raw.into()),
    }
}

/// Applies `key.path=value` to a TOML table, creating intermediate tables.
pub fn apply_override(table: &mut toml::Table, spec: &str) -> Result<(), String> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| format!("override `{spec}` is not of the form key=value"))?;
    let parts: Vec<&str> = key.trim().split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(format!("override key `{key}` is malformed"));
    }
    let mut cur = table;
    for p in &parts[..parts.len() - 1] {
        let entry = cur
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()));
        cur = entry
            .as_table_mut()
            .ok_or_else(|| format!("override key `{key}`: `{p}` is not a table"))?;
    }
    cur.insert(parts[parts.len() - 1].to_string(), parse_value(raw.trim()));
    Ok(())
}

/// Reads the config file (if any), applies overrides and validates.
pub fn load(path: Option<&Path>, overrides: &[String]) -> Result<Config, String> {
    let mut table = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| format!("cannot read config {}: {e}", p.display()))?;
            toml::from_str::<toml::Table>(&text)
                .map_err(|e| format!("config {} is not valid TOML: {e}", p.display()))?
        }
        None => toml::Table::new(),
    };
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    let cfg: Config = toml::Value::Table(table)
        .try_into()
        .map_err(|e: toml::de::Error| format!("config schema error: {}", e.message()))?;
    cfg.validate()?;
    Ok(cfg)
}

fn harmonics(name: &str, list: &[Harmonic]) -> Result<TrigPoly, String> {
    let mut terms = Vec::with_capacity(list.len());
    for h in list {
        let k = h[0];
        if !(k >= 0.0 && k.fract() == 0.0 && k <= 256.0) {
            return Err(format!(
                "{name}: harmonic index {k} must be an integer in 0..=256"
            ));
        }
        if k == 0.0 && h[2] != 0.0 {
            return Err(format!("{name}: the k = 0 entry has no sine coefficient"));
        }
        if !h[1].is_finite() || !h[2].is_finite() {
            return Err(format!("{name}: coefficients must be finite"));
        }
        terms.push((k as usize, h[1], h[2]));
    }
    Ok(TrigPoly::from_harmonics(&terms))
}

impl Config {
    pub fn validate(&self) -> Result<(), String> {
        self.model()?;
        self.observable()?;
        if self.model.sigma.is_empty() {
            return Err("model.sigma must list at least one harmonic".into());
        }
        if self.tau.len() < 2 || self.tau.iter().any(|t| !(*t > 0.0)) {
            return Err("tau must list at least two positive step sizes".into());
        }
        let lt = &self.converge.long_time_tau;
        if lt.len() < 2 || lt.iter().any(|t| !(*t > 0.0)) {
            return Err("converge.long_time_tau must list at least two positive step sizes".into());
        }
        if self.order > ExpansionConfig::default().max_order - 1 {
            return Err(format!(
                "order {} exceeds the supported maximum {}",
                self.order,
                ExpansionConfig::default().max_order - 1
            ));
        }
        let r = &self.resolution;
        if r.k < 8 {
            return Err(format!("resolution.K must be at least 8, got {}", r.k));
        }
        if r.m.is_multiple_of(2) || r.m < 17 {
            return Err(format!(
                "resolution.M must be odd and at least 17, got {}",
                r.m
            ));
        }
        if r.q < weakbea::kernel::MIN_NODES {
            return Err(format!(
                "resolution.Q must be at least {}, got {}",
                weakbea::kernel::MIN_NODES,
                r.q
            ));
        }
        let s = &self.simulate;
        if s.paths == 0 || !(s.tau > 0.0) || !(s.ergodic_tau > 0.0) {
            return Err("simulate: paths must be positive and step sizes positive".into());
        }
        if s.burn_in + 32 > s.ergodic_steps {
            return Err("simulate: ergodic_steps must exceed burn_in by at least 32".into());
        }
        if !(self.mixing.horizon > 0.0) || !(self.mixing.tau > 0.0) {
            return Err("mixing: horizon and tau must be positive".into());
        }
        if !(self.converge.horizon > 0.0) {
            return Err("converge.horizon must be positive".into());
        }
        let t = &self.tolerances;
        if [
            t.solve,
            t.inverse,
            t.annihilation,
            t.density,
            t.refinement,
            t.floor,
            t.sigma,
            t.rate,
        ]
        .iter()
        .any(|v| !(*v > 0.0))
        {
            return Err("tolerances must be positive".into());
        }
        if !(t.slope_high > t.slope_low) {
            return Err("tolerances.slope_high must exceed slope_low".into());
        }
        Ok(())
    }

    pub fn model(&self) -> Result<SdeModel, String> {
        let f = harmonics("model.f", &self.model.f)?;
        let sigma = harmonics("model.sigma", &self.model.sigma)?;
        SdeModel::new(f, sigma).map_err(|e| format!("model: {e}"))
    }

    pub fn observable(&self) -> Result<TrigPoly, String> {
        harmonics("observable", &self.observable)
    }

    pub fn spectral(&self) -> SpectralConfig {
        SpectralConfig {
            bandwidth: self.resolution.k,
            solve_tol: self.tolerances.solve,
        }
    }

    pub fn kernel(&self) -> KernelConfig {
        KernelConfig {
            grid_size: self.resolution.m,
            quad_points: self.resolution.q,
        }
    }

    /// True when drift and diffusion are both constant.
    pub fn constant_coefficients(&self) -> bool {
        let flat = |l: &[Harmonic]| {
            l.iter()
                .all(|h| h[0] == 0.0 || (h[1] == 0.0 && h[2] == 0.0))
        };
        flat(&self.model.f) && flat(&self.model.sigma)
    }
}
