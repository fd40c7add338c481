use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{GridSpec, ProductMethod};
use crate::trajectory::TimeGrid;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Problem {
    /// Incompressible Navier-Stokes on the 3-torus.
    #[serde(rename = "ns3d")]
    Ns3d,
    /// Viscous Burgers `u_t + u u_x = mu u_xx` on the circle.
    #[serde(rename = "burgers1d")]
    Burgers1d,
}

impl Problem {
    pub fn dims(&self) -> usize {
        match self {
            Problem::Ns3d => 3,
            Problem::Burgers1d => 1,
        }
    }

    pub fn ncomp(&self) -> usize {
        self.dims()
    }

    pub fn name(&self) -> &'static str {
        match self {
            Problem::Ns3d => "ns3d",
            Problem::Burgers1d => "burgers1d",
        }
    }
}

impl std::str::FromStr for Problem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ns3d" | "ns" => Ok(Problem::Ns3d),
            "burgers1d" | "burgers" => Ok(Problem::Burgers1d),
            other => Err(Error::Config(format!("unknown problem '{other}'"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolverConfig {
    pub problem: Problem,
    /// Viscosity.
    pub mu: f64,
    pub grid: GridSpec,
    pub times: TimeGrid,
    /// Stop once the triple norm of a Picard increment drops below this.
    pub picard_tol: f64,
    pub picard_max_iters: usize,
    /// Linear-rate weight parameter for the analyticity weights, in (0, 1).
    pub alpha: f64,
    /// Runge-Kutta substeps per sample interval in the time-stepping oracle.
    pub substeps: usize,
    pub method: ProductMethod,
}

impl SolverConfig {
    pub fn new(problem: Problem, mu: f64, n: usize, times: TimeGrid) -> Result<Self> {
        let cfg = Self {
            problem,
            mu,
            grid: GridSpec::new(problem.dims(), n)?,
            times,
            picard_tol: 1e-10,
            picard_max_iters: 50,
            alpha: 0.5,
            substeps: 4,
            method: ProductMethod::Pseudospectral,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu > 0.0) || !self.mu.is_finite() {
            return Err(Error::InvalidParameter(format!("viscosity must be positive, got {}", self.mu)));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.grid.dims() != self.problem.dims() {
            return Err(Error::GridMismatch(format!(
                "{} needs a {}-D grid",
                self.problem.name(),
                self.problem.dims()
            )));
        }
        if !(self.picard_tol > 0.0) || self.picard_max_iters == 0 || self.substeps == 0 {
            return Err(Error::InvalidParameter(
                "picard_tol, picard_max_iters and substeps must be positive".into(),
            ));
        }
        Ok(())
    }
}
