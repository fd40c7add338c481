use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::mild::{Problem, SolverConfig};
use crate::spectral::ProductMethod;
use crate::trajectory::TimeGrid;

/// Initial datum family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataKind {
    /// Gaussian coefficients `~ |k|^slope`, scaled to `|v0|_{X^-1} = amplitude`.
    Random,
    /// ABC flow with `A = B = C = amplitude`.
    Beltrami,
    /// `amplitude * (1, -1, 0) cos(x + y)`.
    SingleMode,
    /// `amplitude * sin x` (Burgers).
    Sine,
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeGridKind {
    Uniform,
    /// `0, t_first, ..., horizon` with constant ratio.
    Geometric,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub problem: Problem,
    pub n: usize,
    pub mu: f64,
    /// Horizon `T`.
    pub horizon: f64,
    /// Number of sample times after `t = 0`.
    pub samples: usize,
    pub time_grid: TimeGridKind,
    /// First positive sample of a geometric grid.
    pub t_first: f64,
    pub alpha: f64,
    pub tol: f64,
    pub max_iters: usize,
    pub substeps: usize,
    pub method: ProductMethod,
    pub seed: u64,
    pub data: DataKind,
    pub amplitude: f64,
    /// Spectral slope of random data: coefficient amplitudes `~ |k|^slope`.
    pub slope: f64,
    /// Drop the nonlinearity: the solution is the heat flow.
    pub linear: bool,
    /// Also run the time stepper and report the difference.
    pub cross_check: bool,
    /// Calibration trials (calibrate, and depend without `c_bilinear`).
    pub trials: usize,
    /// Bilinear constant for depend; calibrated when absent.
    pub c_bilinear: Option<f64>,
    /// Data size for depend as a fraction of `epsilon0`.
    pub epsilon_fraction: f64,
    /// Relative size of the depend perturbation.
    pub perturbation: f64,
    /// Extra `alpha` values for the radius study.
    pub alpha_sweep: Vec<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            problem: Problem::Ns3d,
            n: 8,
            mu: 1.0,
            horizon: 1.0,
            samples: 16,
            time_grid: TimeGridKind::Uniform,
            t_first: 1e-3,
            alpha: 0.5,
            tol: 1e-10,
            max_iters: 50,
            substeps: 4,
            method: ProductMethod::Pseudospectral,
            seed: 0,
            data: DataKind::Random,
            amplitude: 0.02,
            slope: -2.0,
            linear: false,
            cross_check: false,
            trials: 100,
            c_bilinear: None,
            epsilon_fraction: 0.1,
            perturbation: 0.1,
            alpha_sweep: Vec::new(),
        }
    }
}

/// Partial config from a file or from command-line flags. Every present key
/// replaces the corresponding value.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub preset: Option<String>,
    pub problem: Option<Problem>,
    pub n: Option<usize>,
    pub mu: Option<f64>,
    pub horizon: Option<f64>,
    pub samples: Option<usize>,
    pub time_grid: Option<TimeGridKind>,
    pub t_first: Option<f64>,
    pub alpha: Option<f64>,
    pub tol: Option<f64>,
    pub max_iters: Option<usize>,
    pub substeps: Option<usize>,
    pub method: Option<ProductMethod>,
    pub seed: Option<u64>,
    pub data: Option<DataKind>,
    pub amplitude: Option<f64>,
    pub slope: Option<f64>,
    pub linear: Option<bool>,
    pub cross_check: Option<bool>,
    pub trials: Option<usize>,
    pub c_bilinear: Option<f64>,
    pub epsilon_fraction: Option<f64>,
    pub perturbation: Option<f64>,
    pub alpha_sweep: Option<Vec<f64>>,
}

macro_rules! overlay {
    ($cfg:ident, $o:ident; $($field:ident),*) => {
        $(if let Some(v) = $o.$field.clone() { $cfg.$field = v; })*
    };
}

impl ConfigOverrides {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn apply(&self, cfg: &mut ExperimentConfig) {
        overlay!(cfg, self; problem, n, mu, horizon, samples, time_grid, t_first, alpha, tol, max_iters,
            substeps, method, seed, data, amplitude, slope, linear, cross_check, trials, epsilon_fraction,
            perturbation, alpha_sweep);
        if self.c_bilinear.is_some() {
            cfg.c_bilinear = self.c_bilinear;
        }
    }
}

impl ExperimentConfig {
    /// Resolves `preset <- file <- flags`; a preset named in the flags wins
    /// over one named in the file.
    pub fn resolve(file: Option<&ConfigOverrides>, flags: &ConfigOverrides) -> Result<Self> {
        let preset = flags.preset.as_deref().or(file.and_then(|f| f.preset.as_deref()));
        let mut cfg = match preset {
            Some(name) => super::presets::preset(name)?,
            None => Self::default(),
        };
        if let Some(f) = file {
            f.apply(&mut cfg);
        }
        flags.apply(&mut cfg);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return bad(format!("horizon must be positive, got {}", self.horizon));
        }
        if self.samples < 2 {
            return bad(format!("need at least 2 samples after t = 0, got {}", self.samples));
        }
        if self.time_grid == TimeGridKind::Geometric && !(self.t_first > 0.0 && self.t_first < self.horizon) {
            return bad(format!("t_first must lie in (0, horizon), got {}", self.t_first));
        }
        if !self.amplitude.is_finite() || !self.slope.is_finite() {
            return bad("amplitude and slope must be finite".into());
        }
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if !(self.epsilon_fraction > 0.0 && self.epsilon_fraction < 1.0) {
            return bad(format!("epsilon_fraction must lie in (0, 1), got {}", self.epsilon_fraction));
        }
        if !(self.perturbation >= 0.0 && self.perturbation.is_finite()) {
            return bad(format!("perturbation must be nonnegative, got {}", self.perturbation));
        }
        if let Some(c) = self.c_bilinear {
            if !(c > 0.0) {
                return bad(format!("c_bilinear must be positive, got {c}"));
            }
        }
        for &a in self.alpha_sweep.iter().chain(std::iter::once(&self.alpha)) {
            if !(a > 0.0 && a < 1.0) {
                return bad(format!("alpha must lie in (0, 1), got {a}"));
            }
        }
        let matches = match self.data {
            DataKind::Beltrami | DataKind::SingleMode => self.problem == Problem::Ns3d,
            DataKind::Sine => self.problem == Problem::Burgers1d,
            DataKind::Random | DataKind::Zero => true,
        };
        if !matches {
            return bad(format!("data {:?} does not apply to {}", self.data, self.problem.name()));
        }
        self.solver_config().map(|_| ())
    }

    pub fn time_grid(&self) -> Result<TimeGrid> {
        match self.time_grid {
            TimeGridKind::Uniform => TimeGrid::uniform(self.horizon, self.samples),
            TimeGridKind::Geometric => TimeGrid::geometric(self.horizon, self.samples, self.t_first),
        }
    }

    pub fn solver_config(&self) -> Result<SolverConfig> {
        let mut c = SolverConfig::new(self.problem, self.mu, self.n, self.time_grid()?)
            .map_err(|e| Error::Config(e.to_string()))?;
        c.picard_tol = self.tol;
        c.picard_max_iters = self.max_iters;
        c.alpha = self.alpha;
        c.substeps = self.substeps;
        c.method = self.method;
        c.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(c)
    }

    /// SHA-256 of the compact JSON form of the resolved config.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
