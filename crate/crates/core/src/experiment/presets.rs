use super::config::{DataKind, ExperimentConfig, TimeGridKind};
use crate::error::{Error, Result};
use crate::mild::Problem;

pub const PRESETS: [&str; 10] = [
    "beltrami",
    "zero",
    "large",
    "small-random",
    "heat-only",
    "radius-ns",
    "burgers",
    "calibrate",
    "verify",
    "depend",
];

pub fn preset(name: &str) -> Result<ExperimentConfig> {
    let base = ExperimentConfig::default();
    let cfg = match name {
        "beltrami" => ExperimentConfig {
            mu: 0.1,
            data: DataKind::Beltrami,
            amplitude: 1.0,
            cross_check: true,
            ..base
        },
        "zero" => ExperimentConfig { data: DataKind::Zero, ..base },
        "large" => ExperimentConfig { mu: 0.05, amplitude: 50.0, slope: -1.0, max_iters: 12, ..base },
        "small-random" => ExperimentConfig { n: 16, samples: 128, amplitude: 0.02, cross_check: true, ..base },
        "heat-only" => ExperimentConfig {
            n: 16,
            horizon: 8.0,
            samples: 32,
            time_grid: TimeGridKind::Geometric,
            slope: -3.5,
            amplitude: 0.05,
            linear: true,
            ..base
        },
        "radius-ns" => ExperimentConfig {
            n: 16,
            horizon: 8.0,
            samples: 32,
            time_grid: TimeGridKind::Geometric,
            slope: -3.5,
            amplitude: 0.05,
            alpha_sweep: vec![0.25, 0.75, 0.9],
            ..base
        },
        "burgers" => ExperimentConfig {
            problem: Problem::Burgers1d,
            n: 64,
            horizon: 0.5,
            samples: 256,
            data: DataKind::Sine,
            amplitude: 1.0,
            cross_check: true,
            ..base
        },
        "calibrate" => ExperimentConfig { trials: 100, seed: 1, ..base },
        "verify" => ExperimentConfig { samples: 13, horizon: 2.0, ..base },
        "depend" => ExperimentConfig { samples: 32, trials: 50, seed: 2, ..base },
        other => {
            return Err(Error::Config(format!("unknown preset '{other}'; known: {}", PRESETS.join(", "))));
        }
    };
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_preset_validates() {
        for name in PRESETS {
            preset(name).unwrap().validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}
