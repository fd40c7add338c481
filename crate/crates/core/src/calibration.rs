//! Empirical bilinear constant and the smallness thresholds built on it.

use rand::seq::IndexedRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mild::duhamel_bilinear;
use crate::norms::triple;
use crate::random::{random_hermitian, random_solenoidal};
use crate::spectral::{GridSpec, SpectralField};
use crate::trajectory::{TimeGrid, Trajectory};

/// Spectral slopes drawn by the sampler.
pub const SAMPLER_SLOPES: [f64; 3] = [2.0, 3.0, 4.0];

/// Redraws allowed before a zero-norm sample is reported as an error.
const MAX_REDRAWS: usize = 8;

/// Time modulation of a sampled trajectory.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Envelope {
    /// Constant in time.
    Constant,
    /// `e^{-t}`.
    Unit,
    /// `e^{-|k|^2 t}`, mode by mode.
    Heat,
}

impl Envelope {
    pub const ALL: [Envelope; 3] = [Envelope::Constant, Envelope::Unit, Envelope::Heat];
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleDescriptor {
    pub trial: usize,
    pub slope_f: f64,
    pub slope_g: f64,
    pub envelope_f: Envelope,
    pub envelope_g: Envelope,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub mu: f64,
    pub trials: usize,
    /// Largest observed `⦀B(F, G)⦀ / ((1 + 1/mu) ⦀F⦀ ⦀G⦀)`; a lower bound on
    /// the true constant.
    #[serde(rename = "C_empirical")]
    pub c_empirical: f64,
    /// `C (1 + 1/mu)`.
    pub eta: f64,
    /// `mu^2 / (4 C (1 + mu)^2)`.
    pub epsilon0: f64,
    pub argmax_descriptor: SampleDescriptor,
    pub seed: u64,
    pub sampler: String,
    /// Observed ratio of every trial, in trial order.
    pub ratios: Vec<f64>,
}

impl ConstantEstimate {
    /// Largest ratio among the first `m` trials.
    pub fn running_sup(&self, m: usize) -> f64 {
        self.ratios.iter().take(m).copied().fold(0.0, f64::max)
    }
}

/// `⦀B(F, G)⦀ / ((1 + 1/mu) ⦀F⦀ ⦀G⦀)`, defined as 0 when either factor
/// vanishes.
pub fn bilinear_ratio(f: &Trajectory, g: &Trajectory, mu: f64) -> Result<f64> {
    let (nf, ng) = (triple(f)?, triple(g)?);
    if nf == 0.0 || ng == 0.0 {
        return Ok(0.0);
    }
    Ok(triple(&duhamel_bilinear(f, g, mu)?)? / ((1.0 + 1.0 / mu) * nf * ng))
}

fn sample_datum(grid: &GridSpec, slope: f64, rng: &mut ChaCha8Rng) -> SpectralField {
    if grid.dims() == 3 {
        random_solenoidal(grid, slope, rng)
    } else {
        random_hermitian(grid, grid.dims(), slope, rng)
    }
}

fn modulate(f0: &SpectralField, envelope: Envelope, times: &TimeGrid) -> Trajectory {
    let ks = f0.grid().norm_sq().to_vec();
    let fields = times
        .times()
        .iter()
        .map(|&t| {
            let mut f = f0.clone();
            match envelope {
                Envelope::Constant => {}
                Envelope::Unit => f.map_modes(|_| (-t).exp()),
                Envelope::Heat => f.map_modes(|idx| (-ks[idx] * t).exp()),
            }
            f
        })
        .collect();
    Trajectory::new(times.clone(), fields).expect("samples share the grid")
}

/// Draws one trajectory, redrawing on a zero norm.
fn sample_trajectory(
    grid: &GridSpec,
    times: &TimeGrid,
    rng: &mut ChaCha8Rng,
) -> Result<(Trajectory, f64, Envelope)> {
    for _ in 0..MAX_REDRAWS {
        let slope = *SAMPLER_SLOPES.choose(rng).expect("nonempty");
        let envelope = *Envelope::ALL.choose(rng).expect("nonempty");
        let traj = modulate(&sample_datum(grid, slope, rng), envelope, times);
        if triple(&traj)? > 0.0 {
            return Ok((traj, slope, envelope));
        }
    }
    Err(Error::ZeroField)
}

/// Maximizes the bilinear ratio over `trials` random pairs. Trial `i` draws
/// from stream `i` of a ChaCha generator seeded with `seed`, so any trial can
/// be reproduced on its own.
pub fn measure_bilinear_constant(
    mu: f64,
    trials: usize,
    grid: &GridSpec,
    times: &TimeGrid,
    seed: u64,
) -> Result<ConstantEstimate> {
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    if !(mu > 0.0) {
        return Err(Error::InvalidParameter(format!("mu must be positive, got {mu}")));
    }
    let mut ratios = Vec::with_capacity(trials);
    let mut best: Option<(f64, SampleDescriptor)> = None;
    for trial in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(trial as u64);
        let (f, slope_f, envelope_f) = sample_trajectory(grid, times, &mut rng)?;
        let (g, slope_g, envelope_g) = sample_trajectory(grid, times, &mut rng)?;
        let r = bilinear_ratio(&f, &g, mu)?;
        if !r.is_finite() {
            return Err(Error::Oracle(format!("non-finite bilinear ratio in trial {trial}")));
        }
        ratios.push(r);
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, SampleDescriptor { trial, slope_f, slope_g, envelope_f, envelope_g }));
        }
    }
    let (c, argmax) = best.expect("at least one trial");
    if !(c > 0.0) {
        return Err(Error::ZeroField);
    }
    Ok(ConstantEstimate {
        mu,
        trials,
        c_empirical: c,
        eta: eta(mu, c),
        epsilon0: epsilon0(mu, c)?,
        argmax_descriptor: argmax,
        seed,
        sampler: format!(
            "gaussian |k|^-beta, beta in {SAMPLER_SLOPES:?}, envelope in {{1, e^-t, e^-|k|^2 t}}, n = {}, steps = {}",
            grid.n(),
            times.steps()
        ),
        ratios,
    })
}

/// `C (1 + 1/mu)`.
pub fn eta(mu: f64, c: f64) -> f64 {
    c * (1.0 + 1.0 / mu)
}

/// `mu^2 / (4 C (1 + mu)^2)`.
pub fn epsilon0(mu: f64, c: f64) -> Result<f64> {
    if !(mu > 0.0) || !(c > 0.0) {
        return Err(Error::InvalidParameter(format!("need mu > 0 and C > 0, got mu = {mu}, C = {c}")));
    }
    Ok(mu * mu / (4.0 * c * (1.0 + mu) * (1.0 + mu)))
}

/// Smallness threshold for the linear-rate weight: the linear estimate's
/// factor `1 + 1/((1 - alpha) mu)` takes the place of `1 + 1/mu`, i.e.
/// `epsilon0((1 - alpha) mu, C)`.
pub fn epsilon0_alpha(mu: f64, alpha: f64, c: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidParameter(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    epsilon0((1.0 - alpha) * mu, c)
}

/// `4 eta |x0| < 1`.
pub fn contraction_precondition(x0_norm: f64, eta: f64) -> bool {
    4.0 * eta * x0_norm < 1.0
}

/// `a(z) = z - z^2 / 2`.
pub fn aux_a(z: f64) -> f64 {
    z - 0.5 * z * z
}

/// One family of checks in the discreteness report.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub name: String,
    pub checks: u64,
    pub violations: u64,
    /// Largest value of the quantity that must not exceed `limit`.
    pub max_value: f64,
    pub limit: f64,
}

impl CheckSummary {
    fn new(name: &str, limit: f64) -> Self {
        Self { name: name.into(), checks: 0, violations: 0, max_value: f64::NEG_INFINITY, limit }
    }

    fn record(&mut self, value: f64, tolerance: f64) {
        self.checks += 1;
        self.max_value = self.max_value.max(value);
        if value > self.limit + tolerance {
            self.violations += 1;
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiscretenessReport {
    pub n: usize,
    pub mu: f64,
    pub alpha: f64,
    pub time_pairs: usize,
    pub checks: Vec<CheckSummary>,
    /// Total over all checks.
    pub violations: u64,
}

/// Exhaustive sweep of the pointwise exponent inequalities behind the weighted
/// estimates, over every retained `k != 0` and every pair `s <= t` of samples:
///
/// * `alpha mu (t - s) |k| (1 - |k|) <= 0` (factored, exact), and its
///   expanded form `alpha mu t |k| - alpha mu s |k| - alpha mu (t - s) |k|^2`
///   up to round-off;
/// * `|k| - |l| - |k - l| <= 0` and the same for `sum |k_i|`, for every pair
///   of retained `k, l` with `k - l` retained, scaled by `alpha mu T`;
/// * `mu sqrt(t) |k| - mu t |k|^2 / 2 <= mu / 2` and the `sum |k_i|` variant
///   `<= 3 mu / 2`, at every sample time;
/// * `a(z) <= 1/2` on the sampled `z = sqrt(t) |k|`.
pub fn verify_discreteness_inequality(
    grid: &GridSpec,
    mu: f64,
    alpha: f64,
    times: &TimeGrid,
) -> Result<DiscretenessReport> {
    crate::analyticity::lower_bound(0.0, mu, alpha)?;
    let t = times.times();
    let zero = grid.zero_index();
    let nonzero: Vec<usize> = (0..grid.len()).filter(|&i| i != zero).collect();
    let am = alpha * mu;

    let mut factored = CheckSummary::new("linear_weight_factored", 0.0);
    let mut expanded = CheckSummary::new("linear_weight_expanded", 0.0);
    let mut pairs = 0usize;
    for (j, &tt) in t.iter().enumerate() {
        for &s in &t[..=j] {
            pairs += 1;
            for &idx in &nonzero {
                let k = grid.norms()[idx];
                let k2 = grid.norm_sq()[idx];
                factored.record(am * (tt - s) * k * (1.0 - k), 0.0);
                let e = am * tt * k - am * s * k - am * (tt - s) * k2;
                let scale = am * tt.max(1.0) * k2;
                expanded.record(e, 1e-12 * scale);
            }
        }
    }

    let horizon = times.horizon();
    let mut tri_euclid = CheckSummary::new("triangle_euclid", 0.0);
    let mut tri_l1 = CheckSummary::new("triangle_l1", 0.0);
    for &ki in &nonzero {
        let k = grid.wavevector(ki);
        for &li in &nonzero {
            let l = grid.wavevector(li);
            let d = crate::spectral::WaveVector([k.0[0] - l.0[0], k.0[1] - l.0[1], k.0[2] - l.0[2]]);
            if grid.index_of(d).is_none() {
                continue;
            }
            let e = k.euclid_norm() - l.euclid_norm() - d.euclid_norm();
            tri_euclid.record(am * horizon * e, 1e-12 * am * horizon * k.euclid_norm());
            let e1 = k.l1_norm() as f64 - l.l1_norm() as f64 - d.l1_norm() as f64;
            tri_l1.record(am * horizon * e1, 0.0);
        }
    }

    let mut heat_euclid = CheckSummary::new("heat_weight_euclid", 0.5 * mu);
    let mut heat_l1 = CheckSummary::new("heat_weight_l1", 1.5 * mu);
    let mut aux = CheckSummary::new("aux_a", 0.5);
    for &tt in t {
        let r = tt.sqrt();
        for &idx in &nonzero {
            let k = grid.norms()[idx];
            let k1 = grid.l1_norms()[idx] as f64;
            let k2 = grid.norm_sq()[idx];
            heat_euclid.record(mu * r * k - 0.5 * mu * tt * k2, 1e-12 * mu);
            heat_l1.record(mu * r * k1 - 0.5 * mu * tt * k2, 1e-12 * mu);
            aux.record(aux_a(r * k), 1e-15);
        }
    }

    let checks = vec![factored, expanded, tri_euclid, tri_l1, heat_euclid, heat_l1, aux];
    let violations = checks.iter().map(|c| c.violations).sum();
    Ok(DiscretenessReport { n: grid.n(), mu, alpha, time_pairs: pairs, checks, violations })
}

/// Largest sampled value of `a` on a uniform grid over `[lo, hi]`, and its
/// location.
pub fn sample_aux_max(lo: f64, hi: f64, samples: usize) -> (f64, f64) {
    let mut best = (f64::NEG_INFINITY, lo);
    let step = (hi - lo) / (samples - 1) as f64;
    for i in 0..samples {
        let z = lo + step * i as f64;
        let a = aux_a(z);
        if a > best.0 {
            best = (a, z);
        }
    }
    best
}

/// Beltrami trajectory scaled so that `4 eta |heat flow| = target`.
pub fn scaled_beltrami_datum(grid: &GridSpec, eta: f64, target: f64, mu: f64, times: &TimeGrid) -> Result<SpectralField> {
    let u = crate::oracles::beltrami_field(1.0, 1.0, 1.0, 0.0, mu, grid)?;
    let heat = triple(&crate::mild::heat_flow(&u, times, mu))?;
    Ok(u.scaled(target / (4.0 * eta * heat)))
}
