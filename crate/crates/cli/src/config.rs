//! Versioned JSON experiment configs, one per subcommand.

use anyhow::Result;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::Path;

pub const SCHEMA: u32 = 1;

/// Config and schema problems; maps to exit code 2.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "config error: {}", self.0)
    }
}

impl std::error::Error for ConfigError {}

pub trait Versioned {
    fn schema(&self) -> u32;
    fn validate(&self) -> Result<(), String> {
        Ok(())
    }
}

/// Reads `path`, or returns the default config when no path is given.
pub fn load<C: DeserializeOwned + Default + Versioned>(path: Option<&Path>) -> Result<C> {
    let Some(path) = path else {
        return Ok(C::default());
    };
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read {}: {e}", path.display())))?;
    let cfg: C = serde_json::from_str(&text).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    if cfg.schema() != SCHEMA {
        return Err(ConfigError(format!("{}: unsupported schema {} (expected {SCHEMA})", path.display(), cfg.schema())).into());
    }
    cfg.validate().map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
    Ok(cfg)
}

fn positive(name: &str, v: f64) -> Result<(), String> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(format!("{name} must be positive, got {v}"))
    }
}

/// Rectangle sampled at cell centres.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid2 {
    pub re: [f64; 2],
    pub im: [f64; 2],
    pub n_re: usize,
    pub n_im: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhaseConfig {
    pub schema: u32,
    pub xi: Vec<f64>,
    #[serde(default = "PhaseConfig::default_grid")]
    pub grid: Grid2,
}

impl PhaseConfig {
    fn default_grid() -> Grid2 {
        Grid2 { re: [-3.0, 3.0], im: [0.0, 3.0], n_re: 120, n_im: 60 }
    }
}

impl Default for PhaseConfig {
    fn default() -> Self {
        Self { schema: SCHEMA, xi: vec![-2.0, -0.5, 0.05, 1.0], grid: Self::default_grid() }
    }
}

impl Versioned for PhaseConfig {
    fn schema(&self) -> u32 {
        self.schema
    }
    fn validate(&self) -> Result<(), String> {
        let g = &self.grid;
        if g.n_re == 0 || g.n_im == 0 || g.n_re * g.n_im > 4_000_000 {
            return Err("grid sizes must lie in [1, 4e6] points".into());
        }
        if !(g.re[1] > g.re[0] && g.im[1] > g.im[0]) {
            return Err("grid ranges must be increasing".into());
        }
        Ok(())
    }
}

/// A pole in the upper half plane with its norming constant; the partner -1/rho is added.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolePair {
    pub rho: [f64; 2],
    pub c: [f64; 2],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Profile {
    Zero,
    Sech {
        amplitude: f64,
        phase_velocity: f64,
    },
    Soliton {
        pairs: Vec<PolePair>,
        #[serde(default = "default_y_nodes")]
        n_y: usize,
    },
}

fn default_y_nodes() -> usize {
    800
}

/// Initial datum on x_j = -L + 2Lj/N.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Datum {
    pub profile: Profile,
    pub l: f64,
    pub n: usize,
}

impl Default for Datum {
    fn default() -> Self {
        Self { profile: Profile::Sech { amplitude: 0.2, phase_velocity: 0.5 }, l: 30.0, n: 4096 }
    }
}

impl Datum {
    fn validate(&self) -> Result<(), String> {
        positive("datum.l", self.l)?;
        if !self.n.is_power_of_two() || self.n < 256 || self.n > 1 << 20 {
            return Err(format!("datum.n = {} must be a power of two in [256, 2^20]", self.n));
        }
        match &self.profile {
            Profile::Sech { amplitude, .. } if !(amplitude.is_finite() && *amplitude >= 0.0) => {
                Err("sech amplitude must be finite and non-negative".into())
            }
            Profile::Soliton { pairs, n_y } => {
                if *n_y < 4 {
                    return Err("soliton n_y must be at least 4".into());
                }
                if pairs.iter().any(|p| !(p.rho[1] > 0.0)) {
                    return Err("soliton poles must lie in the upper half plane".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchRect {
    pub re_min: f64,
    pub re_max: f64,
    pub im_min: f64,
    pub im_max: f64,
}

impl Default for SearchRect {
    fn default() -> Self {
        Self { re_min: -3.0, re_max: 3.0, im_min: 0.02, im_max: 3.0 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScatterConfig {
    pub schema: u32,
    #[serde(default)]
    pub datum: Datum,
    #[serde(default = "ScatterConfig::default_n_half")]
    pub n_half: usize,
    /// Largest ln|z| on the grid; defaults to the resolved maximum for the datum.
    #[serde(default)]
    pub sigma_max: Option<f64>,
}

impl ScatterConfig {
    fn default_n_half() -> usize {
        1400
    }
}

impl Default for ScatterConfig {
    fn default() -> Self {
        Self { schema: SCHEMA, datum: Datum::default(), n_half: Self::default_n_half(), sigma_max: None }
    }
}

impl Versioned for ScatterConfig {
    fn schema(&self) -> u32 {
        self.schema
    }
    fn validate(&self) -> Result<(), String> {
        self.datum.validate()?;
        if self.n_half < 8 || self.n_half > 100_000 {
            return Err("n_half must lie in [8, 1e5]".into());
        }
        if let Some(s) = self.sigma_max {
            positive("sigma_max", s)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumConfig {
    pub schema: u32,
    #[serde(default)]
    pub datum: Datum,
    #[serde(default)]
    pub search_box: SearchRect,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        Self { schema: SCHEMA, datum: Datum::default(), search_box: SearchRect::default() }
    }
}

impl Versioned for SpectrumConfig {
    fn schema(&self) -> u32 {
        self.schema
    }
    fn validate(&self) -> Result<(), String> {
        self.datum.validate()?;
        let b = &self.search_box;
        if !(b.re_max > b.re_min && b.im_max > b.im_min && b.im_min > 0.0) {
            return Err("search_box must be a non-empty rectangle in Im z > 0".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonConfig {
    pub schema: u32,
    pub pairs: Vec<PolePair>,
    pub times: Vec<f64>,
    pub l: f64,
    pub n: usize,
    /// y-range of the coarse solve; defaults to 1.75 L on each side.
    #[serde(default)]
    pub y_range: Option<[f64; 2]>,
    #[serde(default = "default_y_nodes")]
    pub n_y: usize,
}

impl Default for SolitonConfig {
    fn default() -> Self {
        Self {
            schema: SCHEMA,
            pairs: vec![PolePair { rho: [(0.15f64 * std::f64::consts::PI).cos(), (0.15f64 * std::f64::consts::PI).sin()], c: [1.0, 0.0] }],
            times: vec![0.0, 5.0],
            l: 40.0,
            n: 1024,
            y_range: None,
            n_y: default_y_nodes(),
        }
    }
}

impl Versioned for SolitonConfig {
    fn schema(&self) -> u32 {
        self.schema
    }
    fn validate(&self) -> Result<(), String> {
        positive("l", self.l)?;
        if self.n < 4 || self.n > 1 << 20 || self.n_y < 4 {
            return Err("n must lie in [4, 2^20] and n_y must be at least 4".into());
        }
        if self.times.iter().any(|t| !t.is_finite() || *t < 0.0) {
            return Err("times must be finite and non-negative".into());
        }
        if self.pairs.iter().any(|p| !(p.rho[1] > 0.0)) {
            return Err("poles must lie in the upper half plane".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AsymConfig {
    pub schema: u32,
    /// Used for whichever of the table and the spectrum is not read from disk.
    #[serde(default)]
    pub datum: Datum,
    #[serde(default = "ScatterConfig::default_n_half")]
    pub n_half: usize,
    /// `scatter.csv` written by the scatter command.
    #[serde(default)]
    pub table: Option<String>,
    /// `spectrum.csv` written by the spectrum command.
    #[serde(default)]
    pub spectrum: Option<String>,
    #[serde(default)]
    pub search_box: SearchRect,
    /// Threshold for the soliton set; absent keeps every pole.
    #[serde(default)]
    pub delta0: Option<f64>,
    pub times: Vec<f64>,
    pub xi: Vec<f64>,
}

impl Default for AsymConfig {
    fn default() -> Self {
        Self {
            schema: SCHEMA,
            datum: Datum::default(),
            n_half: ScatterConfig::default_n_half(),
            table: None,
            spectrum: None,
            search_box: SearchRect::default(),
            delta0: None,
            times: vec![40.0, 80.0, 160.0],
            xi: vec![-2.0, -0.5, 0.05, 1.0],
        }
    }
}

impl Versioned for AsymConfig {
    fn schema(&self) -> u32 {
        self.schema
    }
    fn validate(&self) -> Result<(), String> {
        self.datum.validate()?;
        if let Some(d) = self.delta0 {
            positive("delta0", d)?;
        }
        if self.times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
            return Err("times must be positive".into());
        }
        if self.n_half < 8 || self.n_half > 100_000 {
            return Err("n_half must lie in [8, 1e5]".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub schema: u32,
    pub datum: Datum,
    /// Time step; defaults to the stability limit dx/4.
    #[serde(default)]
    pub dt: Option<f64>,
    pub times: Vec<f64>,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            schema: SCHEMA,
            datum: Datum { profile: Profile::Sech { amplitude: 0.2, phase_velocity: 0.5 }, l: 40.0, n: 1024 },
            dt: None,
            times: vec![1.0, 2.0, 5.0],
        }
    }
}

impl Versioned for SimulateConfig {
    fn schema(&self) -> u32 {
        self.schema
    }
    fn validate(&self) -> Result<(), String> {
        positive("datum.l", self.datum.l)?;
        if !self.datum.n.is_power_of_two() || self.datum.n < 16 || self.datum.n > 1 << 20 {
            return Err("datum.n must be a power of two in [16, 2^20]".into());
        }
        if let Some(dt) = self.dt {
            positive("dt", dt)?;
        }
        if self.times.windows(2).any(|w| w[1] < w[0]) || self.times.iter().any(|t| !(*t >= 0.0)) {
            return Err("times must be non-negative and ascending".into());
        }
        Ok(())
    }
}

/// Overrides of the long-time comparison in the acceptance suite.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValidateConfig {
    pub schema: u32,
    #[serde(default)]
    pub times: Option<Vec<f64>>,
    #[serde(default)]
    pub l: Option<f64>,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub n_half: Option<usize>,
}

impl Default for ValidateConfig {
    fn default() -> Self {
        Self { schema: SCHEMA, times: None, l: None, n: None, n_half: None }
    }
}

impl Versioned for ValidateConfig {
    fn schema(&self) -> u32 {
        self.schema
    }
    fn validate(&self) -> Result<(), String> {
        if let Some(t) = &self.times {
            if t.len() < 2 || t.iter().any(|v| !(*v > 0.0)) {
                return Err("times needs at least two positive entries".into());
            }
        }
        if let Some(l) = self.l {
            positive("l", l)?;
        }
        Ok(())
    }
}
