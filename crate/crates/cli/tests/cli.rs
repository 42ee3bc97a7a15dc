use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const SMALL: &str = r#"{
  "rovers": 3,
  "terrain": { "source": "synth", "width": 160, "height": 160, "cell_size_m": 0.25 },
  "pdm": { "components": 2, "min_variance_m2": 4.0, "max_variance_m2": 25.0 },
  "search": { "budget": 3 }
}"#;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rover-team")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn small_config(dir: &Path) -> String {
    let path = dir.join("small.json");
    fs::write(&path, SMALL).unwrap();
    path.display().to_string()
}

#[test]
fn help_and_bad_usage() {
    assert_eq!(code(&run(&["--help"])), 0);
    assert_eq!(code(&run(&["fly-away"])), 1);
    assert_eq!(code(&run(&["plan-mission", "--rovers", "many"])), 1);
}

#[test]
fn bad_config_is_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"rovers": 0}"#).unwrap();
    let out = run(&["terrain-stats", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    fs::write(&path, r#"{"unknown_field": 1}"#).unwrap();
    assert_eq!(code(&run(&["gen-pdm", "--config", path.to_str().unwrap()])), 1);
    let out = run(&["batch", "--config", &small_config(dir.path()), "--seeds", "x..y"]);
    assert_eq!(code(&out), 1);
}

#[test]
fn missing_files_are_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    assert_eq!(code(&run(&["plan-targets", "--config", missing.to_str().unwrap()])), 3);
    let out = dir.path().to_str().unwrap();
    assert_eq!(code(&run(&["report", "--out", out])), 3);
}

#[test]
fn impossible_mission_is_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cliff.json");
    // rocky ground with nowhere for five rovers to stand
    fs::write(
        &path,
        r#"{
  "terrain": { "source": "synth", "width": 40, "height": 40, "cell_size_m": 0.25,
               "roughness": { "amplitude_m": 30.0 } },
  "search": { "budget": 2, "cell_size_m": 2.0 }
}"#,
    )
    .unwrap();
    let out = run(&["plan-mission", "--config", path.to_str().unwrap(), "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn stage_commands_print_their_products() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out_dir = dir.path().join("out");
    let out = out_dir.to_str().unwrap();

    let stats = run(&["terrain-stats", "--config", &cfg, "--out", out]);
    assert_eq!(code(&stats), 0);
    assert!(stdout(&stats).contains("traversable_pct"));
    assert!(out_dir.join("terrain_stats.json").exists());

    let pdm = run(&["gen-pdm", "--config", &cfg, "--out", out, "--seed", "3"]);
    assert_eq!(code(&pdm), 0);
    assert!(out_dir.join("pdm.json").exists() && out_dir.join("search_grid.csv").exists());

    let targets = run(&["plan-targets", "--config", &cfg, "--out", out]);
    assert_eq!(code(&targets), 0);
    // header, column names and one row per target
    assert_eq!(stdout(&targets).lines().count(), 2 + 3);
}

#[test]
fn mission_report_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("mission");
    let o = out.to_str().unwrap();

    let mission = run(&["plan-mission", "--config", &cfg, "--out", o, "--seed", "5", "--rovers", "2"]);
    assert_eq!(code(&mission), 0, "{}", String::from_utf8_lossy(&mission.stderr));
    assert!(stdout(&mission).contains("rovers 2"));
    for f in ["report.json", "config.json", "targets.csv", "trajectories/rover1.csv", "trajectories/rover2.csv"] {
        assert!(out.join(f).exists(), "{f}");
    }

    let report = run(&["report", "--out", o]);
    assert_eq!(code(&report), 0);
    assert_eq!(stdout(&report).lines().next(), stdout(&mission).lines().next());

    fs::remove_dir_all(out.join("plots")).unwrap();
    assert_eq!(code(&run(&["plot", "--out", o])), 0);
    assert!(out.join("plots").join("trajectories.svg").exists());
}

#[test]
fn batch_writes_a_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path());
    let out = dir.path().join("batch");
    let b = run(&["batch", "--config", &cfg, "--out", out.to_str().unwrap(), "--seeds", "1,2", "--rovers", "2"]);
    assert_eq!(code(&b), 0, "{}", String::from_utf8_lossy(&b.stderr));
    assert!(stdout(&b).contains("\"succeeded\": 2"));
    assert!(out.join("batch_summary.json").exists());
}
