//! Black-box tests of the `tropical-lg` binary: exit codes, JSON output,
//! and rendering determinism.

use std::path::Path;
use std::process::{Command, Output};

use tropical_lg::cli::Config;
use tropical_lg::geom2d::{Point, Scalar};
use tropical_lg::ringalg::Fan;

const BIN: &str = env!("CARGO_BIN_EXE_tropical-lg");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, cfg: &Config) -> String {
    let path = dir.join("config.json");
    std::fs::write(&path, serde_json::to_string_pretty(cfg).unwrap()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn one_point_config(dir: &Path) -> String {
    write_config(
        dir,
        &Config {
            fan: Fan::projective_plane(),
            points: vec![Point::from_ints(0, 0)],
            queries: vec![],
            seed: None,
            svg: None,
            json: None,
        },
    )
}

#[test]
fn help_and_usage_errors() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(1));
    assert_eq!(run(&["diagram"]).status.code(), Some(1)); // missing --config
    assert_eq!(
        run(&["diagram", "--config", "/nonexistent.json"]).status.code(),
        Some(1)
    );
}

#[test]
fn diagram_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = one_point_config(dir.path());
    let a = run(&["diagram", "--config", &cfg]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let b = run(&["diagram", "--config", &cfg]);
    assert_eq!(a.stdout, b.stdout);
    let d: tropical_lg::scattering::Diagram = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(d.walls().len(), 3);
    assert!(d.joints().is_empty());
}

#[test]
fn potential_on_a_wall_is_exit_2_with_machine_readable_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = one_point_config(dir.path());
    // (-2, 0) lies on the wall sweeping (0,0) in direction (-1, 0)
    let out = run(&["potential", "--config", &cfg, "--q", "-2,0"]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_slice(&out.stderr).expect("stderr is one-line JSON");
    assert_eq!(err["non_generic"], serde_json::Value::Bool(true));
    assert!(err["error"].is_string());

    // a generic chamber point succeeds
    let out = run(&["potential", "--config", &cfg, "--q", "-2,1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["potential"].is_array());
}

#[test]
fn verify_passes_and_drop_wall_fails() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        &Config {
            fan: Fan::projective_plane(),
            points: vec![Point::from_ints(0, 0), Point::from_ints(-1, 2)],
            queries: vec![
                Point::new(Scalar::ratio(-31, 10), Scalar::ratio(-13, 11)),
                Point::new(Scalar::ratio(-29, 10), Scalar::ratio(-35, 11)),
            ],
            seed: Some(7),
            svg: None,
            json: None,
        },
    );
    let out = run(&["verify", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(true));

    // drop the scattered wall between the two query points
    let d: tropical_lg::scattering::Diagram = serde_json::from_slice(
        &run(&["diagram", "--config", &cfg]).stdout,
    )
    .unwrap();
    let k = d
        .walls()
        .iter()
        .position(|w| w.marks.len() == 2)
        .expect("scattered wall exists");
    let out = run(&["verify", "--config", &cfg, "--drop-wall", &k.to_string()]);
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], serde_json::Value::Bool(false));
}

#[test]
fn oracle_compare_agrees() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = one_point_config(dir.path());
    let out = run(&["oracle-compare", "--config", &cfg, "--q", "3,1"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let docs: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(docs[0]["matches"], serde_json::Value::Bool(true));
}

#[test]
fn render_writes_deterministic_svg() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = one_point_config(dir.path());
    let svg1 = dir.path().join("a.svg");
    let svg2 = dir.path().join("b.svg");
    for p in [&svg1, &svg2] {
        let out = run(&["render", "--config", &cfg, "--svg", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&svg1).unwrap();
    assert_eq!(a, std::fs::read(&svg2).unwrap());
    assert!(String::from_utf8(a).unwrap().starts_with("<svg"));
}

#[test]
fn json_output_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = one_point_config(dir.path());
    let path = dir.path().join("diagram.json");
    let out = run(&["diagram", "--config", &cfg, "--json", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let from_file = std::fs::read(&path).unwrap();
    let from_stdout = run(&["diagram", "--config", &cfg]).stdout;
    assert_eq!(from_file, from_stdout);
}
