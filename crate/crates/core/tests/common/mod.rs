#![allow(dead_code)]

use std::path::PathBuf;

use decolab::cli::{cmd_convergence, cmd_cutoff_temp, cmd_simulate, cmd_timescales, Outcome, ScenarioConfig};

pub const SCENARIOS: [&str; 5] = ["rabi", "cat-t0", "cat-thermal", "paris", "continuum-flat"];

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

pub fn scenario_path(name: &str) -> PathBuf {
    crate_dir().join("scenarios").join(format!("{name}.toml"))
}

pub fn scenario(name: &str, overrides: &[&str]) -> ScenarioConfig {
    let o: Vec<String> = overrides.iter().map(|s| s.to_string()).collect();
    ScenarioConfig::load(&scenario_path(name), &o).unwrap()
}

pub fn run(command: &str, cfg: &ScenarioConfig) -> Outcome {
    match command {
        "simulate" => cmd_simulate(cfg),
        "timescales" => cmd_timescales(cfg),
        "convergence" => cmd_convergence(cfg),
        "cutoff-temp" => cmd_cutoff_temp(cfg),
        other => panic!("unknown command {other}"),
    }
    .unwrap()
}

/// Commands whose outputs are pinned for each bundled scenario.
pub fn golden_commands(name: &str) -> &'static [&'static str] {
    match name {
        "rabi" => &["simulate"],
        "cat-t0" | "cat-thermal" => &["simulate", "convergence"],
        "paris" => &["timescales", "cutoff-temp"],
        "continuum-flat" => &["timescales"],
        other => panic!("unknown scenario {other}"),
    }
}

/// Every file an outcome produces, with the key-value report included.
pub fn rendered(outcome: &Outcome) -> Vec<(String, String)> {
    let mut files = outcome.files.clone();
    files.push(("report.kv".into(), outcome.report.render_kv()));
    files
}

/// Numeric data lines of a CSV (header dropped).
pub fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect()
}

pub fn csv_column(text: &str, name: &str) -> Vec<f64> {
    let header: Vec<&str> = text.lines().next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap_or_else(|| panic!("no column {name}"));
    csv_rows(text).iter().map(|r| r[k]).collect()
}

pub fn kv(text: &str) -> Vec<(String, String)> {
    text.lines()
        .map(|l| {
            let (k, v) = l.split_once('=').unwrap();
            (k.to_string(), v.to_string())
        })
        .collect()
}

pub fn kv_num(text: &str, key: &str) -> f64 {
    kv(text).into_iter().find(|(k, _)| k == key).unwrap_or_else(|| panic!("no key {key}")).1.parse().unwrap()
}

pub fn close(a: f64, b: f64) -> bool {
    if a.is_nan() || b.is_nan() {
        return a.is_nan() && b.is_nan();
    }
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()) + 1e-13
}
