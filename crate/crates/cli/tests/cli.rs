use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn marc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_marc")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn status(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Writes a region JSON and returns its path.
fn region_file(dir: &Path, name: &str, model: &str, channel: &str, dist: &str) -> PathBuf {
    let out = dir.join(name);
    let o = marc(&[
        "region",
        "--channel",
        &fixture(channel),
        "--dist",
        &fixture(dist),
        "--model",
        model,
        "--out",
        path_str(&out),
    ]);
    assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    out
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn info_reports_classes_and_rejects_bad_rows() {
    let o = marc(&["info", "--channel", &fixture("bottleneck.json")]);
    assert_eq!(status(&o), 0);
    assert!(stdout(&o).contains("madrc"));

    let o = marc(&["info", "--channel", &fixture("bad_row.json")]);
    assert_eq!(status(&o), 1);

    let o = marc(&["info", "--channel", &fixture("missing.json")]);
    assert_eq!(status(&o), 1);
}

#[test]
fn region_values_on_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let madrc = region_file(dir.path(), "madrc.json", "madrc", "bottleneck.json", "bottleneck_uniform.json");
    let text = std::fs::read_to_string(&madrc).unwrap();
    assert!(text.contains("\"bound\": 1"), "{text}");
    let vertices = std::fs::read_to_string(madrc.with_extension("vertices.csv")).unwrap();
    assert_eq!(vertices.lines().next(), Some("r0,r1,r2"));
    assert_eq!(vertices.lines().count(), 4);

    let o = marc(&[
        "region",
        "--channel",
        &fixture("mac_noiseless.json"),
        "--dist",
        &fixture("mac_uniform.json"),
        "--model",
        "mac",
    ]);
    assert_eq!(status(&o), 0);
    let out = stdout(&o);
    for line in ["R1 <= 1", "R2 <= 1", "R1+R2 <= 2", "R0+R1+R2 <= 2"] {
        assert!(out.contains(line), "{out}");
    }
}

#[test]
fn general_with_degraded_substitution_on_bottleneck() {
    let o = marc(&[
        "region",
        "--channel",
        &fixture("bottleneck.json"),
        "--dist",
        &fixture("bottleneck_uniform.json"),
        "--model",
        "general",
        "--class",
        "madrc",
    ]);
    assert_eq!(status(&o), 0);
    let out = stdout(&o);
    for line in ["R1 <= 1", "R2 <= 1", "R1+R2 <= 1"] {
        assert!(out.contains(line), "{out}");
    }
}

#[test]
fn mismatched_distribution_and_unknown_model_are_usage_errors() {
    let o = marc(&[
        "region",
        "--channel",
        &fixture("bottleneck.json"),
        "--dist",
        &fixture("bottleneck_kw.json"),
        "--model",
        "general",
    ]);
    assert_eq!(status(&o), 2);
    let o = marc(&[
        "region",
        "--channel",
        &fixture("bottleneck.json"),
        "--dist",
        &fixture("bottleneck_uniform.json"),
        "--model",
        "nonsense",
    ]);
    assert_eq!(status(&o), 2);
    assert_eq!(status(&marc(&["region"])), 2);
}

#[test]
fn include_reports_witness() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let small = write(
        d,
        "small.json",
        r#"{"constraints": [{"subset": [0], "bound": 1}, {"subset": [1], "bound": 1}, {"subset": [2], "bound": 1}]}"#,
    );
    let big = write(
        d,
        "big.json",
        r#"{"constraints": [{"subset": [0], "bound": 2}, {"subset": [1], "bound": 2}, {"subset": [2], "bound": 2}]}"#,
    );
    assert_eq!(status(&marc(&["include", path_str(&small), path_str(&small)])), 0);
    assert_eq!(status(&marc(&["include", path_str(&big), path_str(&small)])), 0);
    let o = marc(&["include", path_str(&small), path_str(&big)]);
    assert_eq!(status(&o), 1);
    assert!(stdout(&o).contains("witness"));

    let kw = region_file(d, "kw.json", "kw", "bottleneck.json", "bottleneck_kw.json");
    let general = region_file(d, "general.json", "general", "bottleneck.json", "bottleneck_factorized.json");
    assert_eq!(status(&marc(&["include", path_str(&general), path_str(&kw)])), 0);
}

#[test]
fn check_statuses() {
    // The reversely degraded identity is algebraic, so it holds off-class too.
    let o = marc(&["check", "--channel", &fixture("bottleneck.json"), "--class", "mardrc", "--seed", "1"]);
    assert_eq!(status(&o), 0);
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    // Relay-dependent inputs open a gap between I(X_R;Y_D) and I(X_R;Y_D|X_2).
    let o = marc(&["check", "--channel", &fixture("bottleneck.json"), "--class", "madrc", "--seed", "1"]);
    assert_eq!(status(&o), 1);
    assert!(stdout(&o).contains("result: mismatch"));
    let o = marc(&["check", "--channel", &fixture("xor_relay.json"), "--class", "masdrc", "--seed", "1"]);
    assert_eq!(status(&o), 0);
    let o = marc(&["check", "--channel", &fixture("bottleneck.json"), "--class", "general", "--seed", "1"]);
    assert_eq!(status(&o), 2);
}

#[test]
fn simulate_with_zero_rates_is_error_free() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "cfg.json",
        r#"{"n": 4, "B": 2, "eps": 8, "trials": 1, "seed": 3,
            "rates": {"r0": 0, "r1p": 0, "r1pp": 0, "r2p": 0, "r2pp": 0}}"#,
    );
    let out = dir.path().join("report.csv");
    let o = marc(&[
        "simulate",
        "--channel",
        &fixture("bottleneck.json"),
        "--dist",
        &fixture("bottleneck_uniform.json"),
        "--config",
        path_str(&cfg),
        "--out",
        path_str(&out),
    ]);
    assert_eq!(status(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("sink_block_error_rate: 0"));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("trial,relay_errors,sink_errors,ambiguities"));

    let bad = write(dir.path(), "bad.json", r#"{"n": 0, "B": 2, "eps": 8, "trials": 1, "seed": 3, "rates": {}}"#);
    let o = marc(&[
        "simulate",
        "--channel",
        &fixture("bottleneck.json"),
        "--dist",
        &fixture("bottleneck_uniform.json"),
        "--config",
        path_str(&bad),
        "--out",
        path_str(&dir.path().join("never.csv")),
    ]);
    assert_eq!(status(&o), 2);
    assert!(!dir.path().join("never.csv").exists());
}

#[test]
fn failed_runs_leave_existing_outputs_untouched() {
    let dir = tempfile::tempdir().unwrap();
    let out = write(dir.path(), "keep.json", "previous");
    let o = marc(&[
        "region",
        "--channel",
        &fixture("bad_row.json"),
        "--dist",
        &fixture("bottleneck_uniform.json"),
        "--model",
        "madrc",
        "--out",
        path_str(&out),
    ]);
    assert_ne!(status(&o), 0);
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "previous");
}
