use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn xxrect(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xxrect"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn configs() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

const SMALL_SWEEP: &str = r#"{
    "schema_version": 1,
    "chain": { "template": "field-junction", "n": 8, "alpha": 1 },
    "baths": { "t": 10, "delta_t": 5 },
    "sweep": { "axes": [
        { "param": "h1", "min": -2, "max": 2, "steps": 5 },
        { "param": "h2", "min": -2, "max": 2, "steps": 5 }
    ] }
}"#;

#[test]
fn rectify_ballistic_limit() {
    let cfg = configs().join("ballistic_limit.json");
    let out = xxrect(&["rectify", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("J_fwd,J_rev,R,flags"));
    let fields: Vec<f64> = lines.next().unwrap().split(',').take(3).map(|v| v.parse().unwrap()).collect();
    assert!((fields[0] - 3.0).abs() < 1e-12);
    assert!((fields[1] + 2.0).abs() < 1e-12);
    assert!((fields[2] - 0.5).abs() < 1e-12);
}

#[test]
fn point_commands() {
    let cfg = configs().join("ballistic_limit.json");
    let cfg = cfg.to_str().unwrap();
    let spectrum = String::from_utf8(xxrect(&["spectrum", "--config", cfg]).stdout).unwrap();
    assert_eq!(spectrum.lines().count(), 51);
    assert!(spectrum.starts_with("k,eps,g_left,g_right\n"));
    let steady = String::from_utf8(xxrect(&["steady", "--config", cfg]).stdout).unwrap();
    // hot left bath at T = inf pins every occupation at 1/2
    for line in steady.lines().skip(1) {
        assert!(line.ends_with(",5.0000000000000000e-1"), "{line}");
    }
    let current = String::from_utf8(xxrect(&["current", "--config", cfg]).stdout).unwrap();
    assert!(current.starts_with("J_N,J_E\n"));
}

#[test]
fn sweep_is_deterministic_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.json", SMALL_SWEEP);
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let path = dir.path().join(format!("t{threads}.csv"));
        let out = xxrect(&["sweep", "--config", &cfg, "--threads", threads, "--output", path.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        outputs.push(fs::read(path).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let text = String::from_utf8(outputs.remove(0)).unwrap();
    assert_eq!(text.lines().next(), Some("param1,param2,J_fwd,J_rev,R,flags"));
    assert_eq!(text.lines().count(), 26);
}

#[test]
fn sweep_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.json", SMALL_SWEEP);
    let out = xxrect(&["sweep", "--config", &cfg]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 26);
}

#[test]
fn validation_errors_exit_with_category() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", &SMALL_SWEEP.replace("\"h2\"", "\"beta\""));
    let out = xxrect(&["sweep", "--config", &bad]);
    assert_eq!(out.status.code(), Some(65));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.starts_with("error[validation]: sweep.axes[1].param"), "{err}");

    let broken = write(dir.path(), "broken.json", "{\n  \"schema_version\": 1,\n");
    let out = xxrect(&["sweep", "--config", &broken]);
    assert_eq!(out.status.code(), Some(65));
    assert!(String::from_utf8(out.stderr).unwrap().contains("line 3"));

    let out = xxrect(&["rectify"]);
    assert_eq!(out.status.code(), Some(65));
}

#[test]
fn io_errors_exit_with_category() {
    let out = xxrect(&["rectify", "--config", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(74));
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "s.json", SMALL_SWEEP);
    let target = dir.path().join("missing").join("out.csv");
    let out = xxrect(&["sweep", "--config", &cfg, "--output", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(74));
}

#[test]
fn verify_prints_table() {
    let out = xxrect(&["verify", "--draws", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("PASS").count(), 5, "{text}");
    let out = xxrect(&["verify", "--sizes", "7"]);
    assert_eq!(out.status.code(), Some(65));
}

#[test]
fn shipped_configs_parse() {
    for entry in fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "json") {
            let text = fs::read(&path).unwrap();
            xxrect::config::parse_config(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        }
    }
}
