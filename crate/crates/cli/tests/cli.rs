use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn mildflow(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mildflow"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn stderr_json(o: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&o.stderr);
    let line = text.lines().rev().find(|l| l.starts_with('{')).expect("json diagnostic on stderr");
    serde_json::from_str(line).unwrap()
}

#[test]
fn solve_beltrami_succeeds() {
    let dir = tempfile::tempdir().unwrap();
    let o = mildflow(&["solve", "--preset", "beltrami"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["status"], "ok");
    assert_eq!(report["summary"]["iterations"], 1);
    assert!(dir.path().join("trajectory.bin").exists());
    assert!(dir.path().join("summary.json").exists());
}

#[test]
fn invalid_config_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let o = mildflow(&["solve", "--n", "7"], dir.path());
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(stderr_json(&o)["error"], "invalid_config");

    let o = mildflow(&["solve", "--data", "vortex"], dir.path());
    assert_eq!(o.status.code(), Some(4));

    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "viscosity = 2.0\n").unwrap();
    let o = mildflow(&["solve", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn non_convergence_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = mildflow(&["solve", "--preset", "large"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"], "not_converged");
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    fs::write(&cfg, "preset = \"verify\"\nmu = 0.5\nalpha = 0.25\n").unwrap();
    let o = mildflow(&["verify", "--config", cfg.to_str().unwrap(), "--alpha", "0.75"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let c = &report["summary"]["meta"]["config"];
    assert_eq!(c["mu"], 0.5);
    assert_eq!(c["alpha"], 0.75);
    assert_eq!(c["samples"], 13);
    assert_eq!(report["summary"]["violations"], 0);
}

#[test]
fn artifacts_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["radius", "--n", "8", "--samples", "8", "--time-grid", "geometric", "--slope", "-3.5", "--seed", "5"];
    for d in [a.path(), b.path()] {
        assert_eq!(mildflow(&args, d).status.code(), Some(0));
    }
    let mut names: Vec<_> = fs::read_dir(a.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(!names.is_empty());
    for name in names {
        assert_eq!(fs::read(a.path().join(&name)).unwrap(), fs::read(b.path().join(&name)).unwrap(), "{name:?}");
    }
}
