use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use gsqg_cli::snapshot;
use gsqg_cli::{CliError, Experiment, ExperimentConfig};
use gsqg_core::{FourierField, Grid};
use proptest::prelude::*;

fn gsqg(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gsqg"));
    cmd.args(args).env_remove("GSQG_THREADS");
    if let Some(t) = threads {
        cmd.env("GSQG_THREADS", t);
    }
    cmd.output().expect("binary runs")
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, json).unwrap();
    path.to_str().unwrap().to_string()
}

fn small_conservation(dir: &Path, out: &str) -> String {
    let json = format!(
        r#"{{"alpha": 1.5, "experiment": "Conservation", "n_points": 256, "half_length": {}, "t_final": 0.5, "output_dir": "{}"}}"#,
        8.0 * PI,
        dir.join(out).display()
    );
    write_config(dir, &format!("{out}.json"), &json)
}

#[test]
fn negative_dt_is_a_config_error_naming_dt() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "bad.json", r#"{"alpha": 1.5, "experiment": "Conservation", "dt": -0.1}"#);
    for sub in ["run", "check"] {
        let out = gsqg(&[sub, &cfg], None);
        assert_eq!(out.status.code(), Some(2));
        let err = String::from_utf8_lossy(&out.stderr);
        assert!(err.contains("`dt`"), "{err}");
    }
}

#[test]
fn unknown_field_and_missing_file_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "typo.json", r#"{"alpha": 1.5, "experiment": "Conservation", "tfinal": 2}"#);
    assert_eq!(gsqg(&["check", &cfg], None).status.code(), Some(2));
    let missing = dir.path().join("absent.json");
    assert_eq!(gsqg(&["check", missing.to_str().unwrap()], None).status.code(), Some(1));
    assert_eq!(gsqg(&["frobnicate"], None).status.code(), Some(2));
}

#[test]
fn generic_only_experiment_rejects_log_branch() {
    let err = ExperimentConfig::from_json(r#"{"alpha": 1.0, "experiment": "Resonance"}"#).unwrap_err();
    assert!(matches!(err, CliError::Config { field: "alpha", .. }), "{err}");
    let err = ExperimentConfig::from_json(r#"{"alpha": 1.0, "experiment": "Decay"}"#).unwrap_err();
    assert!(matches!(err, CliError::Config { field: "alpha", .. }), "{err}");
}

#[test]
fn oversized_data_are_rejected_by_field() {
    let mut cfg = ExperimentConfig::new(0.5, Experiment::NullScaling);
    cfg.epsilon = 2.0;
    assert!(matches!(cfg.validate(), Err(CliError::Config { field: "epsilon", .. })));
    let mut cfg = ExperimentConfig::new(0.5, Experiment::Conservation);
    cfg.width = 0.1;
    assert!(matches!(cfg.validate(), Err(CliError::Config { field: "width", .. })));
    cfg.width = 20.0;
    assert!(matches!(cfg.validate(), Err(CliError::Config { field: "width", .. })));
}

#[test]
fn bad_thread_count_is_a_usage_error() {
    let out = gsqg(&["list-experiments"], Some("zero"));
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(gsqg(&["list-experiments"], Some("0")).status.code(), Some(2));
}

#[test]
fn list_experiments_names_every_experiment_once() {
    let out = gsqg(&["list-experiments"], Some("1"));
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    for e in Experiment::ALL {
        assert_eq!(text.lines().filter(|l| l.starts_with(e.name())).count(), 1, "{text}");
    }
    let mut covered: Vec<u8> = Experiment::ALL.iter().flat_map(|e| e.criteria().iter().copied()).collect();
    covered.sort_unstable();
    assert_eq!(covered, (1..=9).collect::<Vec<u8>>());
}

#[test]
fn run_is_deterministic_and_writes_summary() {
    let dir = tempfile::tempdir().unwrap();
    let a = small_conservation(dir.path(), "a");
    let b = small_conservation(dir.path(), "b");
    assert_eq!(gsqg(&["run", &a], Some("2")).status.code(), Some(0));
    assert_eq!(gsqg(&["run", &b], Some("2")).status.code(), Some(0));
    for file in ["mass.csv", "final.gsqgfield"] {
        let x = std::fs::read(dir.path().join("a").join(file)).unwrap();
        let y = std::fs::read(dir.path().join("b").join(file)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{file} differs between runs");
    }
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("a/summary.json")).unwrap()).unwrap();
    assert_eq!(summary["passed"], true);
    let c = &summary["criteria"][0];
    assert_eq!(c["id"], 2);
    assert!(c["checks"][0]["measured"].as_f64().unwrap() < 1e-6);
    assert_eq!(c["checks"][0]["bound"]["below"], 1e-6);

    let snap = snapshot::read(&dir.path().join("a/final.gsqgfield")).unwrap();
    assert_eq!(snap.t, 0.5);
    assert_eq!(snap.field.grid().n(), 256);
}

#[test]
fn criterion_failure_exits_with_one() {
    // The plain Q amplitude exponent is 2, not 1, so NullScaling reports a failure.
    let dir = tempfile::tempdir().unwrap();
    let json = format!(
        r#"{{"alpha": 1.5, "experiment": "NullScaling", "n_points": 256, "half_length": {}, "output_dir": "{}"}}"#,
        8.0 * PI,
        dir.path().join("out").display()
    );
    let cfg = write_config(dir.path(), "null.json", &json);
    let out = gsqg(&["run", &cfg], None);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL criterion 3"), "{text}");
    assert!(text.contains("PASS criterion 9"), "{text}");
}

fn sample_field(n: usize) -> FourierField {
    let g = Grid::new(n, 3.0).unwrap();
    FourierField::from_fn(&g, |x| (x.sin() * 2.0).exp() - 1.0 / 3.0)
}

#[test]
fn snapshot_errors_are_distinguished() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.gsqgfield");
    let text = snapshot::render(1.25, &sample_field(32));

    let truncated: String = text.lines().take(20).map(|l| format!("{l}\n")).collect();
    assert!(matches!(snapshot::parse(&path, &truncated), Err(CliError::CorruptSnapshot { .. })));

    let future = text.replacen("gsqgfield v1", "gsqgfield v9", 1);
    assert!(matches!(snapshot::parse(&path, &future), Err(CliError::SnapshotVersion { .. })));

    let longer = format!("{text}3.0e0, 1.0e0\n");
    assert!(matches!(
        snapshot::parse(&path, &longer),
        Err(CliError::SnapshotLength { expected: 32, found: 33, .. })
    ));

    assert!(matches!(snapshot::parse(&path, "hello\n"), Err(CliError::CorruptSnapshot { .. })));
    let garbled = text.replacen(", ", ", x", 3);
    assert!(snapshot::parse(&path, &garbled).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn snapshot_round_trip_is_exact(log_n in 4u32..9, t in 0.0f64..1e3, scale in -1e6f64..1e6) {
        let n = 1usize << log_n;
        let f = sample_field(n).scale(scale);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.gsqgfield");
        snapshot::write(&path, t, &f).unwrap();
        let back = snapshot::read(&path).unwrap();
        prop_assert_eq!(back.t, t);
        prop_assert_eq!(back.field.grid().half_length(), 3.0);
        prop_assert_eq!(back.field.values(), f.values());
    }

    #[test]
    fn config_json_round_trip(alpha in 0.05f64..1.95, dt in 1e-3f64..0.05, seed in any::<u64>()) {
        let mut cfg = ExperimentConfig::new(alpha, Experiment::Conservation);
        cfg.dt = dt;
        cfg.seed = seed;
        let json = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, cfg);
    }
}
