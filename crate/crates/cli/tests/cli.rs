use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_levy-lil"))
}

fn workdir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

const MINIMAL: &str = r#"{
  "seed": 7,
  "process": { "measure": { "kind": { "power_law": { "alpha": { "constant": 1.5 } } } } },
  "analyses": [ { "symbol": { "xi": [0.5, 1, 2, 4, 8] } } ]
}"#;

fn data_rows(csv: &str) -> Vec<Vec<f64>> {
    csv.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

#[test]
fn minimal_scenario_tabulates_power_law_symbol() {
    let dir = workdir("minimal");
    let file = dir.join("s.json");
    fs::write(&file, MINIMAL).unwrap();
    let out = dir.join("out");
    let st = bin()
        .args(["symbol", "--scenario", file.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    let csv = fs::read_to_string(out.join("01-symbol.csv")).unwrap();
    assert!(csv.starts_with("# scenario_hash="));
    assert!(csv.contains("# seed=7"));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 5);
    for r in rows {
        let (xi, pu) = (r[1], r[4]);
        assert!((pu - xi.powf(1.5)).abs() <= 1e-6 * xi.powf(1.5), "xi={xi} pu={pu}");
    }
}

#[test]
fn misspelled_key_exits_with_usage_status() {
    let dir = workdir("misspelled");
    let file = dir.join("s.json");
    fs::write(&file, MINIMAL.replace("\"alpha\"", "\"alhpa\"")).unwrap();
    let out = bin()
        .args(["report", "--scenario", file.to_str().unwrap(), "--out", dir.join("o").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("alhpa"), "{msg}");
    assert!(msg.contains("process.measure.kind"), "{msg}");
}

#[test]
fn missing_seed_exits_with_usage_status() {
    let dir = workdir("noseed");
    let file = dir.join("s.json");
    fs::write(&file, MINIMAL.replace("\"seed\": 7,", "")).unwrap();
    let out = bin().args(["report", "--scenario", file.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));
}

#[test]
fn numeric_failure_exits_with_status_one() {
    let dir = workdir("numeric");
    let file = dir.join("s.json");
    let s = r#"{
      "seed": 1,
      "process": { "measure": { "kind": { "power_law": { "alpha": { "constant": 1.5 } } } } },
      "analyses": [ { "norming": { "function": "u_inverse", "arguments": [1e9] } } ]
    }"#;
    fs::write(&file, s).unwrap();
    let out = bin()
        .args(["norming", "--scenario", file.to_str().unwrap(), "--out", dir.join("o").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1), "{}", String::from_utf8_lossy(&out.stderr));
}

const FULL: &str = r#"{
  "name": "stable 1.5",
  "seed": 11,
  "process": { "measure": { "kind": { "power_law": { "alpha": { "constant": 1.5 }, "scale": "stable" } } } },
  "simulation": { "paths": 200, "grid": { "t_max": 0.0625, "layout": { "uniform": { "steps": 64 } } } },
  "analyses": [
    { "verify": { "sup_probability": { "t": [0.0625], "r": [0.1, 0.2], "direction": "at_least" } } },
    { "classify": { "upper_function": { "epsilon": 0.5, "n": 1, "t_max": 0.01, "levels": 10 } } },
    { "norming": { "function": "chung_rate", "arguments": [0.001, 0.01] } },
    { "simulate": { "save_paths": true } },
    { "symbol": { "xi": [1, 2] } }
  ]
}"#;

#[test]
fn report_is_byte_identical_across_runs() {
    let dir = workdir("rerun");
    let file = dir.join("s.json");
    fs::write(&file, FULL).unwrap();
    let run = |out: &Path| {
        let st = bin()
            .args([
                "report",
                "--scenario",
                file.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "--canonical-output",
            ])
            .output()
            .unwrap();
        assert!(st.status.success(), "{}", String::from_utf8_lossy(&st.stderr));
    };
    let (a, b) = (dir.join("a"), dir.join("b"));
    run(&a);
    run(&b);
    let mut names: Vec<_> = fs::read_dir(&a).unwrap().map(|e| e.unwrap().file_name()).collect();
    names.sort();
    assert!(names.len() >= 11, "{names:?}");
    for n in &names {
        let x = fs::read(a.join(n)).unwrap();
        let y = fs::read(b.join(n)).unwrap();
        assert!(x == y, "{n:?} differs");
        let text = String::from_utf8_lossy(&x);
        assert!(text.contains("scenario_hash"), "{n:?} lacks the scenario hash");
        assert!(text.contains("seed"), "{n:?} lacks the seed");
    }
    let report = fs::read_to_string(a.join("report.json")).unwrap();
    assert!(!report.contains("generated_at"));
    let order: Vec<usize> = ["05-symbol", "03-norming", "02-classify", "04-simulate", "01-verify"]
        .iter()
        .map(|k| report.find(k).unwrap())
        .collect();
    assert!(order.windows(2).all(|w| w[0] < w[1]), "stage order {order:?}");
}

#[test]
fn seed_override_changes_outputs() {
    let dir = workdir("seed");
    let file = dir.join("s.json");
    fs::write(&file, FULL).unwrap();
    let run = |out: &Path, seed: &str| {
        assert!(bin()
            .args([
                "simulate",
                "--scenario",
                file.to_str().unwrap(),
                "--out",
                out.to_str().unwrap(),
                "--seed",
                seed,
                "--paths",
                "20",
                "--canonical-output",
            ])
            .output()
            .unwrap()
            .status
            .success());
    };
    run(&dir.join("a"), "1");
    run(&dir.join("b"), "2");
    let a = fs::read_to_string(dir.join("a/04-simulate.csv")).unwrap();
    let b = fs::read_to_string(dir.join("b/04-simulate.csv")).unwrap();
    assert!(a.contains("# seed=1") && b.contains("# seed=2"));
    assert_ne!(a, b);
}

#[test]
fn shipped_example_runs() {
    let dir = workdir("example");
    let file = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/example.scenario.json");
    let out = bin()
        .args([
            "report",
            "--scenario",
            file.to_str().unwrap(),
            "--out",
            dir.to_str().unwrap(),
            "--paths",
            "200",
            "--canonical-output",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(dir.join("08-verify-chung.csv").exists());
}
