use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{GridSpec, SpectralField};

/// Sample times `0 = t_0 < t_1 < ... < t_M` with `M >= 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct TimeGrid {
    times: Vec<f64>,
}

impl TryFrom<Vec<f64>> for TimeGrid {
    type Error = Error;

    fn try_from(times: Vec<f64>) -> Result<Self> {
        TimeGrid::new(times)
    }
}

impl From<TimeGrid> for Vec<f64> {
    fn from(g: TimeGrid) -> Vec<f64> {
        g.times
    }
}

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.len() < 3 {
            return Err(Error::InvalidTimeGrid(format!(
                "need at least 3 samples, got {}",
                times.len()
            )));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidTimeGrid(format!("first sample must be 0, got {}", times[0])));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidTimeGrid("non-finite sample".into()));
        }
        if let Some(w) = times.windows(2).find(|w| w[1] <= w[0]) {
            return Err(Error::InvalidTimeGrid(format!(
                "samples not strictly increasing: {} then {}",
                w[0], w[1]
            )));
        }
        Ok(Self { times })
    }

    /// `steps + 1` equally spaced samples on `[0, horizon]`.
    pub fn uniform(horizon: f64, steps: usize) -> Result<Self> {
        if !(horizon > 0.0) {
            return Err(Error::InvalidTimeGrid(format!("horizon must be positive, got {horizon}")));
        }
        let h = horizon / steps as f64;
        let mut times: Vec<f64> = (0..=steps).map(|m| m as f64 * h).collect();
        if let Some(last) = times.last_mut() {
            *last = horizon;
        }
        Self::new(times)
    }

    /// `t_0 = 0` followed by `t_m = T r^{M-m}` for `m = 1..M`, with `r` chosen so
    /// that `t_1 = first`.
    pub fn geometric(horizon: f64, steps: usize, first: f64) -> Result<Self> {
        if !(horizon > 0.0) || !(first > 0.0) || first >= horizon || steps < 2 {
            return Err(Error::InvalidTimeGrid(format!(
                "geometric grid needs 0 < first < horizon and steps >= 2 (got {first}, {horizon}, {steps})"
            )));
        }
        let ratio = (first / horizon).powf(1.0 / (steps - 1) as f64);
        let mut times = Vec::with_capacity(steps + 1);
        times.push(0.0);
        for m in 1..=steps {
            times.push(horizon * ratio.powi((steps - m) as i32));
        }
        times[1] = first;
        times[steps] = horizon;
        Self::new(times)
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    pub fn horizon(&self) -> f64 {
        self.times[self.times.len() - 1]
    }

    /// Composite trapezoid weights, so `int f ≈ sum_m w_m f(t_m)`.
    pub fn trapezoid_weights(&self) -> Vec<f64> {
        let t = &self.times;
        let mut w = vec![0.0; t.len()];
        for m in 0..t.len() - 1 {
            let h = t[m + 1] - t[m];
            w[m] += 0.5 * h;
            w[m + 1] += 0.5 * h;
        }
        w
    }
}

/// Time-sampled sequence of fields sharing one grid.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    times: TimeGrid,
    fields: Vec<SpectralField>,
}

impl Trajectory {
    pub fn new(times: TimeGrid, fields: Vec<SpectralField>) -> Result<Self> {
        let first = fields.first().ok_or(Error::EmptyTrajectory)?;
        if fields.len() != times.len() {
            return Err(Error::ShapeMismatch { expected: times.len(), got: fields.len() });
        }
        for f in &fields[1..] {
            first.ensure_compatible(f)?;
        }
        Ok(Self { times, fields })
    }

    pub fn constant(field: &SpectralField, times: &TimeGrid) -> Self {
        Self { times: times.clone(), fields: vec![field.clone(); times.len()] }
    }

    pub fn zeros(grid: &GridSpec, ncomp: usize, times: &TimeGrid) -> Self {
        Self::constant(&SpectralField::zeros(grid, ncomp), times)
    }

    pub fn grid(&self) -> &GridSpec {
        self.fields[0].grid()
    }

    pub fn ncomp(&self) -> usize {
        self.fields[0].ncomp()
    }

    pub fn times(&self) -> &TimeGrid {
        &self.times
    }

    pub fn fields(&self) -> &[SpectralField] {
        &self.fields
    }

    pub fn fields_mut(&mut self) -> &mut [SpectralField] {
        &mut self.fields
    }

    pub fn into_fields(self) -> Vec<SpectralField> {
        self.fields
    }

    pub fn field(&self, m: usize) -> &SpectralField {
        &self.fields[m]
    }

    pub fn last(&self) -> &SpectralField {
        &self.fields[self.fields.len() - 1]
    }

    pub fn len(&self) -> usize {
        self.fields.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fields.is_empty()
    }

    pub fn ensure_compatible(&self, other: &Trajectory) -> Result<()> {
        if self.times != other.times {
            return Err(Error::GridMismatch("time grids differ".into()));
        }
        self.fields[0].ensure_compatible(&other.fields[0])
    }

    pub fn max_abs(&self) -> f64 {
        self.fields.iter().map(SpectralField::max_abs).fold(0.0, f64::max)
    }

    pub fn scaled(&self, a: f64) -> Trajectory {
        Self { times: self.times.clone(), fields: self.fields.iter().map(|f| f.scaled(a)).collect() }
    }

    /// `self += a * other`; callers must have checked compatibility.
    pub fn add_scaled(&mut self, other: &Trajectory, a: f64) {
        for (x, y) in self.fields.iter_mut().zip(&other.fields) {
            x.add_scaled(y, a);
        }
    }

    /// `self - other`.
    pub fn difference(&self, other: &Trajectory) -> Result<Trajectory> {
        self.ensure_compatible(other)?;
        let mut out = self.clone();
        out.add_scaled(other, -1.0);
        Ok(out)
    }

    /// `self + other`.
    pub fn sum(&self, other: &Trajectory) -> Result<Trajectory> {
        self.ensure_compatible(other)?;
        let mut out = self.clone();
        out.add_scaled(other, 1.0);
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(TimeGrid::new(vec![0.0, 1.0]).is_err());
        assert!(TimeGrid::new(vec![0.1, 0.2, 0.3]).is_err());
        assert!(TimeGrid::new(vec![0.0, 0.2, 0.2]).is_err());
        assert!(TimeGrid::new(vec![0.0, 0.2, 0.3]).is_ok());
    }

    #[test]
    fn geometric_endpoints() {
        let g = TimeGrid::geometric(8.0, 40, 1e-3).unwrap();
        assert_eq!(g.len(), 41);
        assert_eq!(g.times()[1], 1e-3);
        assert_eq!(g.horizon(), 8.0);
        let r = g.times()[3] / g.times()[2];
        assert!((g.times()[20] / g.times()[19] - r).abs() < 1e-12);
    }

    #[test]
    fn trapezoid_weights_sum_to_horizon() {
        let g = TimeGrid::geometric(2.0, 10, 0.01).unwrap();
        let s: f64 = g.trapezoid_weights().iter().sum();
        assert!((s - 2.0).abs() < 1e-14);
    }
}
