use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wavefront")).args(args).output().expect("binary runs")
}

fn run_scenario(cmd: &str, path: &Path, out: &Path, extra: &[&str]) -> Output {
    let mut args = vec![cmd, "--scenario", path.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    run(&args)
}

fn header(path: &Path) -> String {
    fs::read_to_string(path).unwrap().lines().next().unwrap().to_string()
}

#[test]
fn simulate_writes_all_outputs_with_hash_header() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_scenario("simulate", &scenario("shock-impact.json"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let h = header(&dir.path().join("snapshots.csv"));
    assert!(h.starts_with("# scenario_sha256=") && h.len() == 18 + 64, "{h}");
    for f in ["events.csv", "functionals.csv"] {
        assert_eq!(header(&dir.path().join(f)), h);
    }
    let run: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("run.json")).unwrap()).unwrap();
    assert_eq!(run["violations"], 0);
    assert!(run["interactions"].as_u64().unwrap() > 0);
    assert!(!dir.path().join("violation.json").exists());
}

#[test]
fn numbers_are_written_in_full_precision() {
    let dir = tempfile::tempdir().unwrap();
    run_scenario("simulate", &scenario("static.json"), dir.path(), &[]);
    let text = fs::read_to_string(dir.path().join("snapshots.csv")).unwrap();
    let row = text.lines().nth(2).unwrap();
    assert!(row.split(',').nth(4).unwrap().contains("e"), "{row}");
    assert!(row.contains("1.0000000000000000e0"), "{row}");
}

#[test]
fn reruns_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run_scenario("simulate", &scenario("bouncing.json"), a.path(), &[]);
    run_scenario("simulate", &scenario("bouncing.json"), b.path(), &[]);
    for f in ["snapshots.csv", "events.csv", "functionals.csv", "run.json"] {
        assert_eq!(fs::read(a.path().join(f)).unwrap(), fs::read(b.path().join(f)).unwrap(), "{f}");
    }
}

#[test]
fn malformed_json_reports_location() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\n  \"schema\": 3,\n").unwrap();
    let o = run_scenario("simulate", &bad, &dir.path().join("out"), &[]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(&format!("{}:2:", bad.display())), "{err}");
}

#[test]
fn unknown_fields_and_schema_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let text = fs::read_to_string(scenario("static.json")).unwrap();
    for (k, bad) in [
        text.replacen("\"m\": 1.0", "\"m\": 1.0, \"mass\": 2.0", 1),
        text.replace("wavefront-scenario/1", "wavefront-scenario/9"),
        text.replacen("\"m\": 1.0", "\"m\": -1.0", 1),
    ]
    .iter()
    .enumerate()
    {
        let path = dir.path().join(format!("s{k}.json"));
        fs::write(&path, bad).unwrap();
        let o = run_scenario("simulate", &path, &dir.path().join("out"), &[]);
        assert_eq!(o.status.code(), Some(1), "case {k}");
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["simulate"]).status.code(), Some(1));
    assert_eq!(run(&["explode"]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn corrupted_weights_exit_two_with_violation_record() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_scenario("simulate", &scenario("corrupted-weights.json"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("violation.json")).unwrap()).unwrap();
    assert_eq!(v["verdict"]["ok"], false);
    assert!(v["event"]["incoming"].as_array().is_some_and(|a| !a.is_empty()));
}

#[test]
fn event_cap_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_scenario("simulate", &scenario("bouncing.json"), dir.path(), &["--max-events", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(dir.path().join("violation.json").exists());
}

#[test]
fn eta_override_changes_the_run() {
    let dir = tempfile::tempdir().unwrap();
    run_scenario("simulate", &scenario("bouncing.json"), dir.path(), &["--eta", "30"]);
    let run: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("run.json")).unwrap()).unwrap();
    assert_eq!(run["eta"], 30.0);
}

#[test]
fn limit_writes_droplet_history() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_scenario("limit", &scenario("constant-dp.json"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("droplet.csv")).unwrap();
    assert_eq!(text.lines().nth(1), Some("t,v_l,impulse"));
    let last: Vec<f64> = text.lines().last().unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    // Pushed from the left by a higher pressure, the droplet moves right.
    assert!(last[1] > 0.0);
    let run: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("run.json")).unwrap()).unwrap();
    assert!(run["newton_law_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn sweep_writes_long_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_scenario("sweep", &scenario("static.json"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("metrics.csv")).unwrap();
    assert_eq!(text.lines().nth(1), Some("eta,t,metric,value"));
    assert!(text.lines().any(|l| l.contains(",liquid_l1_v,")));
    assert!(text.lines().any(|l| l.starts_with("inf,") && l.contains(",a,")));
    let s: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("sweep.json")).unwrap()).unwrap();
    assert_eq!(s["runs"].as_array().unwrap().len(), 2);
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(2)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

#[test]
fn static_scenario_has_no_events() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_scenario("simulate", &scenario("static.json"), dir.path(), &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(fs::read_to_string(dir.path().join("events.csv")).unwrap().lines().count(), 2);
    let l = tempfile::tempdir().unwrap();
    run_scenario("limit", &scenario("static.json"), l.path(), &[]);
    assert!(csv_rows(&l.path().join("droplet.csv")).iter().all(|r| r[1] == 0.0 && r[2] == 0.0));
}

#[test]
fn constant_pressure_difference_starts_on_the_free_fall_line() {
    let dir = tempfile::tempdir().unwrap();
    run_scenario("limit", &scenario("constant-dp.json"), dir.path(), &[]);
    let rows = csv_rows(&dir.path().join("droplet.csv"));
    // Δp = 1e-3 and m = 1 until the first piston wave leaves the droplet.
    assert!((rows[1][1] - 1e-3 * rows[1][0]).abs() < 1e-15);
    // Afterwards the reacting gas only slows the droplet down.
    for w in rows.windows(3) {
        assert!(w[2][1] - w[1][1] <= w[1][1] - w[0][1] + 1e-15);
    }
}

#[test]
fn impulse_column_is_mass_times_velocity_change() {
    let dir = tempfile::tempdir().unwrap();
    run_scenario("limit", &scenario("shock-impact.json"), dir.path(), &[]);
    let rows = csv_rows(&dir.path().join("droplet.csv"));
    let v0 = rows[0][1];
    let worst = rows.iter().map(|r| (1.0 * (r[1] - v0) - r[2]).abs()).fold(0.0, f64::max);
    assert!(worst < 1e-12, "{worst}");
    assert!(rows.last().unwrap()[1] > 0.0);
}
