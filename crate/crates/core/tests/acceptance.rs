//! Acceptance suite: one test per primary criterion, each printing a single
//! PASS/FAIL line. Run with `cargo test --test acceptance -- --nocapture`.

use std::fs;
use std::path::Path;
use std::time::Instant;

use mildflow::analyticity::{crossover_time, radius_series};
use mildflow::calibration::{measure_bilinear_constant, sample_aux_max, verify_discreteness_inequality};
use mildflow::experiment::{initial_datum, preset, run, run_depend, run_solve, ExperimentConfig, Subcommand};
use mildflow::mild::{picard_solve, DependenceReport};
use mildflow::random::random_solenoidal;
use mildflow::spectral::{make_grid, nonlinear_term, tensor_product, ProductMethod};
use mildflow::trajectory::TimeGrid;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

fn verdict(name: &str, pass: bool, detail: String) -> bool {
    println!("{} {name}: {detail}", if pass { "PASS" } else { "FAIL" });
    pass
}

fn num(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("expected a number, got {v}"))
}

#[test]
fn oracle_exactness_beltrami() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = preset("beltrami").unwrap();
    assert_eq!((cfg.n, cfg.mu, cfg.horizon), (8, 0.1, 1.0));
    let start = Instant::now();
    let out = run_solve(&cfg, dir.path()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let o = &out.summary["oracle"];
    let picard = num(&o["picard_coefficient_error"]);
    let stepped = num(&o["timestep_coefficient_error"]);
    let pass = picard <= 1e-8 && stepped <= 1e-8 && secs <= 10.0;
    let detail = format!("picard {picard:.2e}, timestep {stepped:.2e} (tol 1e-8), {secs:.2} s (limit 10 s)");
    assert!(verdict("oracle exactness (Beltrami n=8 mu=0.1 T=1)", pass, detail));
}

#[test]
fn burgers_against_cole_hopf() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = preset("burgers").unwrap();
    assert_eq!((cfg.n, cfg.mu, cfg.amplitude, cfg.horizon), (64, 1.0, 1.0, 0.5));
    let start = Instant::now();
    let out = run_solve(&cfg, dir.path()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let o = &out.summary["oracle"];
    let picard = num(&o["picard_pointwise_error"]);
    let stepped = num(&o["timestep_pointwise_error"]);
    let pass = picard <= 1e-6 && stepped <= 1e-6 && secs <= 30.0;
    let detail = format!("picard {picard:.2e}, timestep {stepped:.2e} (tol 1e-6), {secs:.2} s (limit 30 s)");
    assert!(verdict("Burgers vs Cole-Hopf (n=64 mu=1 A=1 T=0.5)", pass, detail));
}

#[test]
fn convolution_equivalence() {
    let grid = make_grid(3, 8).unwrap();
    let mut worst: f64 = 0.0;
    for pair in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + pair);
        let decay = [0.0, 1.0, 2.0, 3.0][pair as usize % 4];
        let f = random_solenoidal(&grid, decay, &mut rng);
        let g = random_solenoidal(&grid, decay, &mut rng);
        let fast = tensor_product(&f, &g, ProductMethod::Pseudospectral).unwrap();
        let slow = tensor_product(&f, &g, ProductMethod::Direct).unwrap();
        let scale = slow.max_abs().max(1.0);
        worst = worst.max(fast.max_abs_diff(&slow) / scale);
        let bf = nonlinear_term(&f, &g, ProductMethod::Pseudospectral).unwrap();
        let bs = nonlinear_term(&f, &g, ProductMethod::Direct).unwrap();
        worst = worst.max((&bf - &bs).max_abs() / bs.max_abs().max(1.0));
    }
    let pass = worst <= 1e-12;
    assert!(verdict("convolution equivalence (50 pairs, n=8)", pass, format!("max difference {worst:.2e} (tol 1e-12)")));
}

/// Small-data NS run with n = 16, T = 1 and 128 samples.
fn small_data_config() -> ExperimentConfig {
    let cfg = preset("small-random").unwrap();
    assert_eq!((cfg.n, cfg.horizon, cfg.samples), (16, 1.0, 128));
    cfg
}

#[test]
fn mild_residual_and_contraction() {
    let cfg = small_data_config();
    let solver = cfg.solver_config().unwrap();
    let v0 = initial_datum(&cfg).unwrap();
    let (_, report) = picard_solve(&v0, &solver).unwrap();

    let coarse = make_grid(3, 8).unwrap();
    let times = TimeGrid::uniform(cfg.horizon, 32).unwrap();
    let est = measure_bilinear_constant(cfg.mu, 50, &coarse, &times, 1).unwrap();
    let limit = 4.0 * est.eta * report.heat_norm + 0.05;
    // quotients of increments near round-off say nothing about contraction
    let floor = 1e-12 * report.solution_norm;
    let observed = report
        .contraction_ratios
        .iter()
        .zip(report.increment_norms.iter().skip(1))
        .filter(|(_, &inc)| inc > floor)
        .map(|(&r, _)| r)
        .fold(0.0, f64::max);
    let pass = report.converged && report.residual <= 1e-9 && observed <= limit;
    let detail = format!(
        "converged {} in {} iterations, residual {:.2e} (tol 1e-9), ratio {observed:.3e} <= {limit:.3e} (eta {:.3})",
        report.converged, report.iterations, report.residual, est.eta
    );
    assert!(verdict("mild residual and Picard contraction (n=16 T=1 128 samples)", pass, detail));
}

#[test]
fn solution_and_heat_bounds() {
    let mut lines = Vec::new();
    let mut pass = true;
    for name in ["small-random", "beltrami", "burgers"] {
        let dir = tempfile::tempdir().unwrap();
        let cfg = preset(name).unwrap();
        let s = run_solve(&cfg, dir.path()).unwrap().summary;
        let (v, heat) = (num(&s["solution_norm"]), num(&s["heat_norm"]));
        let (bound, slack) = (num(&s["heat_bound"]), num(&s["heat_quadrature_slack"]));
        let ok = s["converged"] == true && v <= 2.0 * heat + 1e-6 && heat <= bound + slack;
        pass &= ok;
        lines.push(format!("{name}: |v| {v:.4} <= 2*{heat:.4}, heat {heat:.4} <= {bound:.4} + {slack:.1e}"));
    }
    assert!(verdict("solution bound and heat estimate", pass, lines.join("; ")));
}

/// Radius study with rough data on a geometric grid over `[1e-3, 8]`.
fn radius_config(samples: usize) -> ExperimentConfig {
    ExperimentConfig {
        n: 32,
        mu: 1.0,
        alpha: 0.5,
        horizon: 8.0,
        t_first: 1e-3,
        samples,
        slope: -3.5,
        ..preset("radius-ns").unwrap()
    }
}

#[test]
fn analyticity_bound() {
    let mut runs = Vec::new();
    let mut pass = true;
    let mut lines = Vec::new();
    for samples in [32, 64] {
        let cfg = radius_config(samples);
        let v0 = initial_datum(&cfg).unwrap();
        let (v, report) = picard_solve(&v0, &cfg.solver_config().unwrap()).unwrap();
        let s = radius_series(&v, cfg.mu, cfg.alpha).unwrap();
        let valid: Vec<_> = s.estimates.iter().filter(|e| e.fit.valid).collect();
        let above = valid.iter().all(|e| e.fit.rho >= e.bound);
        let finite = s.k_sqrt.is_finite() && s.k_linear.is_finite();
        pass &= report.converged && !valid.is_empty() && above && finite && s.crossover == 4.0;
        lines.push(format!(
            "{samples} steps: {}/{} valid, min margin {:.3}, K_sqrt {:.3}, K_lin {:.3}",
            valid.len(),
            s.estimates.len(),
            s.min_margin,
            s.k_sqrt,
            s.k_linear
        ));
        runs.push(s);
    }
    let drift = |a: f64, b: f64| (b - a).abs() / a;
    let d_sqrt = drift(runs[0].k_sqrt, runs[1].k_sqrt);
    let d_lin = drift(runs[0].k_linear, runs[1].k_linear);
    pass &= d_sqrt <= 0.1 && d_lin <= 0.1 && crossover_time(0.5) == 4.0;
    lines.push(format!("K drift {:.2}% / {:.2}% (limit 10%), crossover {}", 100.0 * d_sqrt, 100.0 * d_lin, runs[0].crossover));
    assert!(verdict("analyticity bound (n=32 slope -3.5 alpha=0.5)", pass, lines.join("; ")));
}

#[test]
fn inequality_sweeps() {
    let cfg = preset("verify").unwrap();
    let solver = cfg.solver_config().unwrap();
    assert_eq!(solver.grid.n(), 8);
    let report = verify_discreteness_inequality(&solver.grid, cfg.mu, cfg.alpha, &solver.times).unwrap();
    let checks: u64 = report.checks.iter().map(|c| c.checks).sum();
    let (max, argmax) = sample_aux_max(-10.0, 10.0, 100_001);
    let pass = report.violations == 0 && max <= 0.5 && (argmax - 1.0).abs() <= 1e-6;
    let detail = format!("{} violations in {checks} checks, a max {max} at z = {argmax}", report.violations);
    assert!(verdict("inequality sweeps (n=8)", pass, detail));
}

#[test]
fn continuous_dependence() {
    let mut pass = true;
    let mut lines = Vec::new();
    for seed in [2, 3, 4] {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig { seed, ..preset("depend").unwrap() };
        assert_eq!(cfg.epsilon_fraction, 0.1);
        let s = run_depend(&cfg, dir.path()).unwrap().summary;
        let r: DependenceReport = serde_json::from_value(s["report"].clone()).unwrap();
        let bound = r.lipschitz_factor * r.data_difference + 1e-8;
        let ok = r.u_converged && r.v_converged && r.solution_difference <= bound;
        pass &= ok;
        lines.push(format!("seed {seed}: {:.4e} <= {bound:.4e}", r.solution_difference));
    }
    assert!(verdict("continuous dependence (10% of epsilon0)", pass, lines.join("; ")));
}

fn run_all(dir: &Path) {
    let small = ExperimentConfig { samples: 8, trials: 5, ..ExperimentConfig::default() };
    let radius = ExperimentConfig { samples: 8, ..preset("radius-ns").unwrap() };
    for (cmd, cfg, sub) in [
        (Subcommand::Solve, preset("beltrami").unwrap(), "solve"),
        (Subcommand::Calibrate, small.clone(), "calibrate"),
        (Subcommand::Radius, radius, "radius"),
        (Subcommand::Verify, preset("verify").unwrap(), "verify"),
        (Subcommand::Depend, small, "depend"),
    ] {
        run(cmd, &cfg, &dir.join(sub)).unwrap();
    }
}

fn artifact_files(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut files = Vec::new();
    for sub in fs::read_dir(dir).unwrap() {
        for f in fs::read_dir(sub.unwrap().path()).unwrap() {
            files.push(f.unwrap().path().strip_prefix(dir).unwrap().to_path_buf());
        }
    }
    files.sort();
    files
}

#[test]
fn determinism() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_all(a.path());
    run_all(b.path());
    let files = artifact_files(a.path());
    let same = files == artifact_files(b.path())
        && files.iter().all(|f| fs::read(a.path().join(f)).unwrap() == fs::read(b.path().join(f)).unwrap());
    let text = files.iter().filter(|f| f.extension().is_some_and(|e| e == "csv" || e == "json")).count();
    let pass = same && text > 0;
    assert!(verdict("determinism", pass, format!("{} artifacts ({text} CSV/JSON) byte-identical: {same}", files.len())));
}
