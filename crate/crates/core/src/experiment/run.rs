use std::fs;
use std::path::{Path, PathBuf};

use log::info;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use super::config::{DataKind, ExperimentConfig};
use crate::analyticity::{crossover_time, radius_series, RadiusSeries};
use crate::calibration::{
    epsilon0, epsilon0_alpha, measure_bilinear_constant, sample_aux_max, verify_discreteness_inequality,
};
use crate::error::{Error, Result};
use crate::io::save_trajectory;
use crate::mild::{
    continuous_dependence_experiment, heat_flow, heat_quadrature_slack, picard_solve, timestep_solve, PicardReport,
    Problem,
};
use crate::norms::{script_x_minus1_norm, triple, triple_norm, x_minus1_norm};
use crate::oracles::OracleSpec;
use crate::random::{random_hermitian, random_solenoidal};
use crate::spectral::{transform_to_physical, SpectralField};
use crate::trajectory::Trajectory;

/// Version of the JSON and CSV artifact schemas.
pub const ARTIFACT_FORMAT_VERSION: u32 = 1;

/// `alpha` values reported in every epsilon0 sweep.
pub const EPSILON0_SWEEP: [f64; 4] = [0.25, 0.5, 0.75, 0.9];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    NotConverged,
}

#[derive(Clone, Debug, Serialize)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub artifacts: Vec<PathBuf>,
    pub summary: Value,
}

/// Provenance block embedded in every artifact.
pub fn artifact_meta(cfg: &ExperimentConfig, experiment: &str) -> Value {
    json!({
        "format_version": ARTIFACT_FORMAT_VERSION,
        "tool_version": env!("CARGO_PKG_VERSION"),
        "experiment": experiment,
        "config_hash": cfg.hash(),
        "seed": cfg.seed,
        "config": cfg,
    })
}

fn write_json(dir: &Path, name: &str, value: &Value) -> Result<PathBuf> {
    let path = dir.join(name);
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(&path, text)?;
    Ok(path)
}

fn write_csv(dir: &Path, name: &str, cfg: &ExperimentConfig, experiment: &str, body: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    let header = format!(
        "# mildflow {experiment} format_version={ARTIFACT_FORMAT_VERSION} config_hash={} seed={}\n",
        cfg.hash(),
        cfg.seed
    );
    fs::write(&path, header + body)?;
    Ok(path)
}

fn report_json<T: Serialize>(cfg: &ExperimentConfig, experiment: &str, key: &str, value: &T) -> Result<Value> {
    Ok(json!({ "meta": artifact_meta(cfg, experiment), key: serde_json::to_value(value)? }))
}

/// The oracle matching the configured datum, if there is one.
pub fn oracle_for(cfg: &ExperimentConfig) -> Option<OracleSpec> {
    match cfg.data {
        DataKind::Beltrami => Some(OracleSpec::Beltrami { a: cfg.amplitude, b: cfg.amplitude, c: cfg.amplitude }),
        DataKind::SingleMode => {
            Some(OracleSpec::SingleMode { k: [1, 1, 0], polarization: [1.0, -1.0, 0.0], amplitude: cfg.amplitude })
        }
        DataKind::Sine => Some(OracleSpec::ColeHopf { amplitude: cfg.amplitude }),
        DataKind::Random | DataKind::Zero => None,
    }
}

/// Initial datum for the config; random data are drawn from `seed`.
pub fn initial_datum(cfg: &ExperimentConfig) -> Result<SpectralField> {
    let solver = cfg.solver_config()?;
    let grid = &solver.grid;
    if let Some(oracle) = oracle_for(cfg) {
        return oracle.evaluate(0.0, cfg.mu, grid);
    }
    match cfg.data {
        DataKind::Zero => Ok(SpectralField::zeros(grid, cfg.problem.ncomp())),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let shape = random_shape(cfg, &mut rng);
            Ok(shape.scaled(cfg.amplitude / x_minus1_norm(&shape)?))
        }
    }
}

fn random_shape(cfg: &ExperimentConfig, rng: &mut ChaCha8Rng) -> SpectralField {
    let grid = crate::spectral::make_grid(cfg.problem.dims(), cfg.n).expect("validated grid");
    match cfg.problem {
        Problem::Ns3d => random_solenoidal(&grid, -cfg.slope, rng),
        Problem::Burgers1d => random_hermitian(&grid, 1, -cfg.slope, rng),
    }
}

/// Solution trajectory: the Picard fixed point, or the heat flow for a
/// linear config.
fn solve(cfg: &ExperimentConfig, v0: &SpectralField) -> Result<(Trajectory, Option<PicardReport>)> {
    let solver = cfg.solver_config()?;
    if cfg.linear {
        return Ok((heat_flow(v0, &solver.times, cfg.mu), None));
    }
    let (v, report) = picard_solve(v0, &solver)?;
    Ok((v, Some(report)))
}

#[derive(Clone, Debug, Serialize)]
struct OracleErrors {
    oracle: OracleSpec,
    /// `max_t max_k |v - v_ref| / max_t max_k |v_ref|`.
    picard_coefficient_error: f64,
    timestep_coefficient_error: Option<f64>,
    /// `max |u - u_ref| / max |u_ref|` on the sample points at the horizon.
    picard_pointwise_error: f64,
    timestep_pointwise_error: Option<f64>,
}

fn coefficient_error(v: &Trajectory, reference: &[SpectralField]) -> f64 {
    let scale = reference.iter().map(SpectralField::max_abs).fold(0.0, f64::max);
    let err = v.fields().iter().zip(reference).map(|(a, b)| (a - b).max_abs()).fold(0.0, f64::max);
    if scale > 0.0 {
        err / scale
    } else {
        err
    }
}

/// `max |u - u_ref| / max |u_ref|` in physical space.
pub fn pointwise_relative_error(u: &SpectralField, reference: &SpectralField) -> Result<f64> {
    let diff = transform_to_physical(&(u - reference))?;
    let scale = transform_to_physical(reference)?.max_abs();
    Ok(if scale > 0.0 { diff.max_abs() / scale } else { diff.max_abs() })
}

pub fn run_solve(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    fs::create_dir_all(out)?;
    let v0 = initial_datum(cfg)?;
    let solver = cfg.solver_config()?;
    let (v, picard) = solve(cfg, &v0)?;
    let converged = picard.as_ref().is_none_or(|r| r.converged);
    let norms = triple_norm(&v)?;
    let heat = triple(&heat_flow(&v0, &solver.times, cfg.mu))?;
    let data_norm = x_minus1_norm(&v0)?;
    let slack = heat_quadrature_slack(&v0, &solver.times, cfg.mu);

    let stepped = if cfg.cross_check && !cfg.linear { Some(timestep_solve(&v0, &solver)?) } else { None };
    let cross_check = match &stepped {
        Some(s) => {
            let diff = script_x_minus1_norm(&v.difference(s)?)?;
            Some(json!({ "script_x_minus1_difference": diff, "relative": diff / script_x_minus1_norm(s)?.max(f64::MIN_POSITIVE) }))
        }
        None => None,
    };
    let oracle = match oracle_for(cfg) {
        Some(spec) => {
            let reference = solver
                .times
                .times()
                .iter()
                .map(|&t| spec.evaluate(t, cfg.mu, &solver.grid))
                .collect::<Result<Vec<_>>>()?;
            let last = reference.last().expect("nonempty time grid");
            Some(OracleErrors {
                oracle: spec,
                picard_coefficient_error: coefficient_error(&v, &reference),
                timestep_coefficient_error: stepped.as_ref().map(|s| coefficient_error(s, &reference)),
                picard_pointwise_error: pointwise_relative_error(v.last(), last)?,
                timestep_pointwise_error: stepped.as_ref().map(|s| pointwise_relative_error(s.last(), last)).transpose()?,
            })
        }
        None => None,
    };

    let meta = artifact_meta(cfg, "solve");
    let mut artifacts = Vec::new();
    let traj_path = out.join("trajectory.bin");
    let mut traj_meta = meta.clone();
    if let Some(spec) = oracle_for(cfg) {
        traj_meta["oracle"] = serde_json::to_value(spec)?;
    }
    save_trajectory(&traj_path, &v, &traj_meta)?;
    artifacts.push(traj_path);
    if let Some(r) = &picard {
        artifacts.push(write_json(out, "picard_report.json", &report_json(cfg, "solve", "picard", r)?)?);
    }
    artifacts.push(write_json(out, "norm_report.json", &report_json(cfg, "solve", "norms", &norms)?)?);

    let summary = json!({
        "meta": meta,
        "converged": converged,
        "iterations": picard.as_ref().map(|r| r.iterations),
        "mild_residual": picard.as_ref().map(|r| r.residual),
        "data_norm": data_norm,
        "solution_norm": norms.triple,
        "heat_norm": heat,
        "heat_bound": (1.0 + 1.0 / cfg.mu) * data_norm,
        "heat_quadrature_slack": slack,
        "solution_bound_holds": norms.triple <= 2.0 * heat + 1e-6,
        "heat_estimate_holds": heat <= (1.0 + 1.0 / cfg.mu) * data_norm + slack,
        "cross_check": cross_check,
        "oracle": oracle,
    });
    artifacts.push(write_json(out, "summary.json", &summary)?);
    info!("solve finished: converged = {converged}");
    let status = if converged { RunStatus::Ok } else { RunStatus::NotConverged };
    Ok(RunOutcome { status, artifacts, summary })
}

fn alpha_file_tag(alpha: f64) -> String {
    format!("{alpha}").replace('.', "p")
}

fn radius_summary(s: &RadiusSeries) -> Value {
    let valid = s.estimates.iter().filter(|e| e.fit.valid).count();
    let above = s.estimates.iter().filter(|e| e.fit.valid).all(|e| e.fit.rho >= e.bound);
    json!({
        "alpha": s.alpha,
        "crossover": s.crossover,
        "crossover_formula": crossover_time(s.alpha),
        "min_margin": if valid > 0 { Some(s.min_margin) } else { None },
        "valid_rows": valid,
        "rows": s.estimates.len(),
        "window": s.window,
        "all_valid_above_bound": above,
        "data_norm": s.data_norm,
        "k_sqrt": s.k_sqrt,
        "k_linear": s.k_linear,
    })
}

/// Radius study for `cfg.alpha` and every value in `cfg.alpha_sweep`.
pub fn run_radius(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    fs::create_dir_all(out)?;
    let v0 = initial_datum(cfg)?;
    let (v, picard) = solve(cfg, &v0)?;
    let converged = picard.as_ref().is_none_or(|r| r.converged);
    let mut alphas = vec![cfg.alpha];
    for &a in &cfg.alpha_sweep {
        if !alphas.contains(&a) {
            alphas.push(a);
        }
    }
    let mut artifacts = Vec::new();
    let mut per_alpha = Vec::new();
    for (i, &alpha) in alphas.iter().enumerate() {
        let series = radius_series(&v, cfg.mu, alpha)?;
        let name = if i == 0 { "radius.csv".to_string() } else { format!("radius_alpha_{}.csv", alpha_file_tag(alpha)) };
        artifacts.push(write_csv(out, &name, cfg, "radius", &series.to_csv())?);
        let mut s = radius_summary(&series);
        s["csv"] = json!(name);
        per_alpha.push(s);
    }
    let summary = json!({
        "meta": artifact_meta(cfg, "radius"),
        "converged": converged,
        "iterations": picard.as_ref().map(|r| r.iterations),
        "mild_residual": picard.as_ref().map(|r| r.residual),
        "linear": cfg.linear,
        "series": per_alpha,
    });
    artifacts.push(write_json(out, "radius_summary.json", &summary)?);
    let status = if converged { RunStatus::Ok } else { RunStatus::NotConverged };
    Ok(RunOutcome { status, artifacts, summary })
}

pub fn run_calibrate(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    fs::create_dir_all(out)?;
    let solver = cfg.solver_config()?;
    let est = measure_bilinear_constant(cfg.mu, cfg.trials, &solver.grid, &solver.times, cfg.seed)?;
    let sweep = EPSILON0_SWEEP
        .iter()
        .map(|&a| Ok(json!({ "alpha": a, "epsilon0": epsilon0_alpha(cfg.mu, a, est.c_empirical)? })))
        .collect::<Result<Vec<_>>>()?;
    let summary = json!({
        "meta": artifact_meta(cfg, "calibrate"),
        "mu": est.mu,
        "trials": est.trials,
        "C_empirical": est.c_empirical,
        "eta": est.eta,
        "epsilon0": est.epsilon0,
        "argmax_descriptor": est.argmax_descriptor,
        "seed": est.seed,
        "sampler": est.sampler,
        "ratios": est.ratios,
        "epsilon0_alpha": sweep,
    });
    let artifacts = vec![write_json(out, "calibration.json", &summary)?];
    Ok(RunOutcome { status: RunStatus::Ok, artifacts, summary })
}

pub fn run_verify(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    fs::create_dir_all(out)?;
    let solver = cfg.solver_config()?;
    let report = verify_discreteness_inequality(&solver.grid, cfg.mu, cfg.alpha, &solver.times)?;
    let (aux_max, aux_argmax) = sample_aux_max(-10.0, 10.0, 100_001);
    let summary = json!({
        "meta": artifact_meta(cfg, "verify"),
        "violations": report.violations,
        "report": report,
        "aux_a": { "samples": 100_001, "interval": [-10.0, 10.0], "max": aux_max, "argmax": aux_argmax },
    });
    let artifacts = vec![write_json(out, "verify.json", &summary)?];
    Ok(RunOutcome { status: RunStatus::Ok, artifacts, summary })
}

pub fn run_depend(cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    fs::create_dir_all(out)?;
    let solver = cfg.solver_config()?;
    let (c, calibrated) = match cfg.c_bilinear {
        Some(c) => (c, false),
        None => (measure_bilinear_constant(cfg.mu, cfg.trials, &solver.grid, &solver.times, cfg.seed)?.c_empirical, true),
    };
    let eps0 = epsilon0(cfg.mu, c)?;
    let target = cfg.epsilon_fraction * eps0;
    let shape = initial_datum(cfg)?;
    let u0 = if shape.is_zero() { shape } else { shape.scaled(target / x_minus1_norm(&shape)?) };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(1));
    let w = random_shape(cfg, &mut rng);
    let v0 = &u0 + &w.scaled(cfg.perturbation * target / x_minus1_norm(&w)?);
    let report = continuous_dependence_experiment(&u0, &v0, &solver, c)?;
    let converged = report.u_converged && report.v_converged;
    let summary = json!({
        "meta": artifact_meta(cfg, "depend"),
        "c_bilinear": c,
        "c_calibrated": calibrated,
        "epsilon0": eps0,
        "target_norm": target,
        "report": report,
    });
    let artifacts = vec![write_json(out, "depend.json", &summary)?];
    let status = if converged { RunStatus::Ok } else { RunStatus::NotConverged };
    Ok(RunOutcome { status, artifacts, summary })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subcommand {
    Solve,
    Calibrate,
    Radius,
    Verify,
    Depend,
}

impl std::str::FromStr for Subcommand {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "solve" => Ok(Subcommand::Solve),
            "calibrate" => Ok(Subcommand::Calibrate),
            "radius" => Ok(Subcommand::Radius),
            "verify" => Ok(Subcommand::Verify),
            "depend" => Ok(Subcommand::Depend),
            other => Err(Error::Config(format!("unknown subcommand '{other}'"))),
        }
    }
}

pub fn run(cmd: Subcommand, cfg: &ExperimentConfig, out: &Path) -> Result<RunOutcome> {
    match cmd {
        Subcommand::Solve => run_solve(cfg, out),
        Subcommand::Calibrate => run_calibrate(cfg, out),
        Subcommand::Radius => run_radius(cfg, out),
        Subcommand::Verify => run_verify(cfg, out),
        Subcommand::Depend => run_depend(cfg, out),
    }
}
