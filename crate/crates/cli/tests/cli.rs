use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fewcopy(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fewcopy"))
        .args(args)
        .current_dir(dir)
        .env_remove("FEWCOPY_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = fewcopy(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    fs::read_to_string(path).unwrap()
}

fn rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path)
        .unwrap()
        .records()
        .map(Result::unwrap)
        .collect()
}

#[test]
fn outputs_match_golden_files() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let cases: [(&[&str], &str); 5] = [
        (
            &["confidence-curve", "--lambda", "0,0.2,0.4", "--n", "4", "--max-copies", "50", "--out", "curve.csv"],
            "curve.csv",
        ),
        (
            &["trace", "--lambda", "0.2", "--graph", "c4", "--copies", "40", "--seed", "7", "--out", "trace_c4.csv"],
            "trace_c4.csv",
        ),
        (
            &["witness-compare", "--lambda", "0.1,0.2", "--q", "16", "--out", "witness.csv"],
            "witness.csv",
        ),
        (&["noise-limit", "--n", "4", "--out", "noise_limit.csv"], "noise_limit.csv"),
        (
            &[
                "fidelity", "--lambda", "0.3", "--graph", "linear:5", "--copies", "2000", "--seed", "11",
                "--format", "json", "--out", "fidelity.json",
            ],
            "fidelity.json",
        ),
    ];
    for (args, name) in cases {
        ok(d, args);
        assert_eq!(fs::read_to_string(d.join(name)).unwrap(), golden(name), "{name}");
    }
}

#[test]
fn noiseless_curve_reaches_99_percent_at_16_copies() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &["confidence-curve", "--lambda", "0", "--n", "4", "--max-copies", "50"]);
    let rows = rows(&tmp.path().join("confidence-curve.csv"));
    assert_eq!(rows.len(), 50);
    let c16: f64 = rows[15][1].parse().unwrap();
    assert_eq!(&rows[15][0], "16");
    assert!((c16 - 0.99).abs() < 1e-3, "{c16}");
    assert!(tmp.path().join("confidence-curve.manifest.json").exists());
}

#[test]
fn zero_copies_gives_an_empty_curve() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &["confidence-curve", "--lambda", "0.1", "--max-copies", "0"]);
    let text = fs::read_to_string(tmp.path().join("confidence-curve.csv")).unwrap();
    assert_eq!(text, "n_copies,c_min,lambda\n");
}

#[test]
fn noise_beyond_the_limit_is_a_domain_error() {
    let tmp = TempDir::new().unwrap();
    let out = fewcopy(tmp.path(), &["confidence-curve", "--lambda", "0.6", "--n", "16"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("0.500007629"), "{err}");
    assert!(err.contains("2^n / (2(2^n - 1))"), "{err}");
}

#[test]
fn usage_errors_exit_with_one() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(fewcopy(tmp.path(), &["bogus"]).status.code(), Some(1));
    assert_eq!(fewcopy(tmp.path(), &["trace"]).status.code(), Some(1));
    assert_eq!(
        fewcopy(tmp.path(), &["trace", "--lambda", "x"]).status.code(),
        Some(1)
    );
    assert_eq!(fewcopy(tmp.path(), &["noise-limit"]).status.code(), Some(1));
    assert!(fewcopy(tmp.path(), &["--help"]).status.success());
}

#[test]
fn bad_graph_file_reports_the_line() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("g.txt"), "# ring\n0 1\n1 2\n2 x\n").unwrap();
    let out = fewcopy(tmp.path(), &["trace", "--lambda", "0.1", "--graph", "g.txt"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("g.txt") && err.contains("line 4"), "{err}");
}

#[test]
fn edge_list_files_are_accepted() {
    let tmp = TempDir::new().unwrap();
    fs::write(tmp.path().join("star.txt"), "0 1\n0 2\n0 3\n").unwrap();
    ok(tmp.path(), &["trace", "--lambda", "0", "--graph", "star.txt", "--copies", "20"]);
    for r in rows(&tmp.path().join("trace.csv")) {
        assert_eq!(&r[3], "1");
    }
}

#[test]
fn noiseless_trace_always_answers_yes() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &["trace", "--lambda", "0", "--graph", "c4", "--copies", "30", "--seed", "5"]);
    let rows = rows(&tmp.path().join("trace.csv"));
    assert_eq!(rows.len(), 30);
    assert!(rows.iter().all(|r| &r[3] == "1"));
    assert_eq!(&rows[29][4], "30");
    // Measured and theoretical C_min coincide without noise.
    assert!(rows.iter().all(|r| r[7] == r[9]));
}

#[test]
fn identical_seeds_give_identical_files() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let args = |out: &'static str, seed: &'static str| {
        ["trace", "--lambda", "0.3", "--graph", "linear:6", "--copies", "300", "--seed", seed, "--out", out]
    };
    ok(d, &args("a.csv", "42"));
    ok(d, &args("b.csv", "42"));
    ok(d, &args("c.csv", "43"));
    let read = |f: &str| fs::read(d.join(f)).unwrap();
    assert_eq!(read("a.csv"), read("b.csv"));
    assert_ne!(read("a.csv"), read("c.csv"));
}

#[test]
fn near_limit_trials_mostly_miss_the_target() {
    let tmp = TempDir::new().unwrap();
    let stdout = ok(
        tmp.path(),
        &[
            "trace", "--lambda", "0.53", "--graph", "linear:4", "--copies", "1000", "--trials", "40",
            "--seed", "9", "--out", "runs/summary.csv",
        ],
    );
    assert!(stdout.contains("/40 reached"), "{stdout}");
    let summary = rows(&tmp.path().join("runs/summary.csv"));
    assert_eq!(summary.len(), 40);
    let met = summary.iter().filter(|r| &r[8] == "true").count();
    assert!(met < 20, "{met}/40 reached 0.99");
    assert!(tmp.path().join("runs/summary.trial0039.csv").exists());
    assert!(tmp.path().join("runs/summary.manifest.json").exists());
    // Trial seeds are distinct.
    let mut seeds: Vec<&str> = summary.iter().map(|r| r.get(1).unwrap()).collect();
    seeds.sort_unstable();
    seeds.dedup();
    assert_eq!(seeds.len(), 40);
}

#[test]
fn noise_limit_for_four_qubits() {
    let tmp = TempDir::new().unwrap();
    let stdout = ok(tmp.path(), &["noise-limit", "--n", "4"]);
    assert_eq!(stdout.trim(), "0.533333333333");
    let r = &rows(&tmp.path().join("noise-limit.csv"))[0];
    assert_eq!(&r[1], "0.533333333333");
    assert_eq!(&r[2], "0.533333333333");
    let stdout = ok(tmp.path(), &["noise-limit", "--graph", "linear:16"]);
    assert_eq!(stdout.trim(), "0.500007629511");
}

#[test]
fn witness_comparison_at_low_noise() {
    let tmp = TempDir::new().unwrap();
    ok(
        tmp.path(),
        &["witness-compare", "--lambda", "0.1", "--epsilon", "0.02", "--cl", "0.95", "--q", "16"],
    );
    let r = &rows(&tmp.path().join("witness-compare.csv"))[0];
    assert_eq!(&r[5], "29200");
    let ratio: f64 = r[7].parse().unwrap();
    assert!(ratio >= 10.0, "{ratio}");
}

#[test]
fn noiseless_fidelity_is_one() {
    let tmp = TempDir::new().unwrap();
    ok(tmp.path(), &["fidelity", "--lambda", "0", "--graph", "c4", "--copies", "100"]);
    let r = &rows(&tmp.path().join("fidelity.csv"))[0];
    assert_eq!(&r[3], "1");
    assert_eq!(&r[4], "0");
}

#[test]
fn json_mirrors_csv() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    let args = ["trace", "--lambda", "0.25", "--copies", "25", "--seed", "3"];
    ok(d, &[&args[..], &["--out", "t.csv"]].concat());
    ok(d, &[&args[..], &["--format", "json", "--out", "t.json"]].concat());
    let csv_rows = rows(&d.join("t.csv"));
    let json: Value = serde_json::from_str(&fs::read_to_string(d.join("t.json")).unwrap()).unwrap();
    let json = json.as_array().unwrap();
    assert_eq!(json.len(), csv_rows.len());
    for (c, j) in csv_rows.iter().zip(json) {
        assert_eq!(c[2], j["pauli_string"].as_str().unwrap().to_string());
        assert_eq!(c[4].parse::<u64>().unwrap(), j["cumulative_s"].as_u64().unwrap());
        assert_eq!(c[7].parse::<f64>().unwrap(), j["c_min"].as_f64().unwrap());
    }
}

#[test]
fn replaying_a_manifest_reproduces_the_output() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    ok(
        d,
        &["trace", "--lambda", "0.35", "--graph", "linear:5", "--copies", "500", "--seed", "77", "--trials", "3", "--out", "orig.csv"],
    );
    let manifest: Value =
        serde_json::from_str(&fs::read_to_string(d.join("orig.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["command"], "trace");
    assert_eq!(manifest["rng_seed"], 77);
    assert_eq!(manifest["parameters"]["copies"], 500);
    assert_eq!(manifest["outputs"].as_array().unwrap().len(), 4);
    assert!(manifest["duration_secs"].as_f64().unwrap() >= 0.0);

    ok(d, &["replay", "--manifest", "orig.manifest.json", "--out", "again.csv"]);
    assert_eq!(fs::read(d.join("orig.csv")).unwrap(), fs::read(d.join("again.csv")).unwrap());
    for k in 0..3 {
        let a = fs::read(d.join(format!("orig.trial{k:04}.csv"))).unwrap();
        let b = fs::read(d.join(format!("again.trial{k:04}.csv"))).unwrap();
        assert_eq!(a, b, "trial {k}");
    }

    let before = fs::read(d.join("orig.csv")).unwrap();
    ok(d, &["replay", "--manifest", "orig.manifest.json"]);
    assert_eq!(before, fs::read(d.join("orig.csv")).unwrap());
}

#[test]
fn config_sets_defaults_and_flags_override_it() {
    let tmp = TempDir::new().unwrap();
    let d = tmp.path();
    fs::write(d.join("run.conf"), "# shared settings\ngraph = linear:5\ncopies = 60\nseed = 4\n").unwrap();
    ok(d, &["--config", "run.conf", "trace", "--lambda", "0.2", "--out", "a.csv"]);
    ok(d, &["trace", "--lambda", "0.2", "--graph", "linear:5", "--copies", "60", "--seed", "4", "--out", "b.csv"]);
    assert_eq!(fs::read(d.join("a.csv")).unwrap(), fs::read(d.join("b.csv")).unwrap());

    ok(d, &["trace", "--config", "run.conf", "--lambda", "0.2", "--copies", "10", "--out", "c.csv"]);
    assert_eq!(rows(&d.join("c.csv")).len(), 10);

    // The manifest records the expanded arguments, so replay needs no config.
    let m: Value = serde_json::from_str(&fs::read_to_string(d.join("a.manifest.json")).unwrap()).unwrap();
    let argv: Vec<&str> = m["argv"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    assert!(argv.windows(2).any(|w| w == ["--graph", "linear:5"]));

    fs::write(d.join("bad.conf"), "max-copies = 3\n").unwrap();
    let out = fewcopy(d, &["--config", "bad.conf", "trace", "--lambda", "0.2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn output_directory_comes_from_the_environment() {
    let tmp = TempDir::new().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_fewcopy"))
        .args(["noise-limit", "--n", "3"])
        .current_dir(tmp.path())
        .env("FEWCOPY_OUT_DIR", tmp.path().join("results"))
        .output()
        .unwrap()
        .status;
    assert!(status.success());
    assert!(tmp.path().join("results/noise-limit.csv").exists());
    assert!(tmp.path().join("results/noise-limit.manifest.json").exists());
}
