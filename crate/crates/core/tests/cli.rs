use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const GRID: &str = r#""grid": {"x_min": -10, "x_max": 10, "nx": 41, "t_min": -2, "t_max": 2, "nt": 11},
  "tolerances": {"residual": 1e-8, "invariant": 1e-10, "energy": 1e-4}"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_solitonforge"))
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, format!("{{ {GRID}, {body} }}")).unwrap();
    p
}

fn run(cmd: &str, config: &Path, out: &Path) -> Output {
    bin()
        .args([cmd, "--config", config.to_str().unwrap(), "--out", out.to_str().unwrap()])
        .output()
        .unwrap()
}

fn report(out: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<f64>> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

fn check<'a>(r: &'a Value, name: &str) -> &'a Value {
    r["checks"].as_array().unwrap().iter().find(|c| c["name"] == name).unwrap()
}

const ONE: &str = r#""soliton": {"pairs": [{"lambda": [0, 1], "alpha": [1, 0]}]}"#;

#[test]
fn one_soliton_passes_with_peak_two() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(d.path(), "c.json", ONE);
    let out = d.path().join("out");
    let o = run("soliton", &cfg, &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let text = std::fs::read_to_string(out.join("solution.csv")).unwrap();
    assert!(text.starts_with("x,t,re_u,im_u,re_v,im_v\n"));
    let rows = csv_rows(&out.join("solution.csv"));
    assert_eq!(rows.len(), 41 * 11);
    let peak = rows.iter().find(|r| r[0] == 0.0 && r[1] == 0.0).unwrap();
    assert!(((peak[2].powi(2) + peak[3].powi(2)).sqrt() - 2.0).abs() < 1e-12);
    let first = text.lines().nth(1).unwrap();
    assert!(first.split(',').all(|c| c.split('e').next().unwrap().trim_start_matches('-').len() == 18));
    let r = report(&out);
    assert_eq!(r["pass"], true);
    assert_eq!(r["tolerances"]["residual"], 1e-8);
    assert!(check(&r, "cnl_residual")["max_defect"].as_f64().unwrap() < 1e-8);
    let names: Vec<_> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 2, "no temporary files left: {names:?}");
}

#[test]
fn empty_pairs_is_config_error() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(d.path(), "c.json", r#""soliton": {"pairs": []}"#);
    assert_eq!(run("soliton", &cfg, &d.path().join("o")).status.code(), Some(1));
}

#[test]
fn usage_and_parse_errors_exit_one() {
    let d = TempDir::new().unwrap();
    assert_eq!(bin().args(["nope", "--config", "x", "--out", "y"]).output().unwrap().status.code(), Some(1));
    assert_eq!(bin().arg("soliton").output().unwrap().status.code(), Some(1));
    let bad = d.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(run("soliton", &bad, &d.path().join("o")).status.code(), Some(1));
    assert_eq!(run("soliton", &d.path().join("missing.json"), &d.path().join("o")).status.code(), Some(1));
}

#[test]
fn conjugate_violation_fails_reality() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(
        d.path(),
        "c.json",
        r#""soliton": {"sigma1": false, "pairs": [
            {"lambda": [0, 1], "alpha": [1, 0]}, {"lambda": [0, -1], "alpha": [1, 0]},
            {"lambda": [0.5, 1], "alpha": [1, 0]}, {"lambda": [0.5, -1], "alpha": [2, 0]}]}"#,
    );
    let out = d.path().join("o");
    assert_eq!(run("soliton", &cfg, &out).status.code(), Some(2));
    assert_eq!(check(&report(&out), "sigma1_reality")["pass"], false);
}

#[test]
fn verify_round_trip_and_corruption() {
    let d = TempDir::new().unwrap();
    let body = format!(r#"{ONE}, "verify": {{"input": "gen/solution.csv", "model": "soliton"}}"#);
    let cfg = write_config(d.path(), "c.json", &body);
    assert_eq!(run("soliton", &cfg, &d.path().join("gen")).status.code(), Some(0));
    let v1 = d.path().join("v1");
    assert_eq!(run("verify", &cfg, &v1).status.code(), Some(0));
    let v2 = d.path().join("v2");
    assert_eq!(run("verify", &cfg, &v2).status.code(), Some(0));
    assert_eq!(
        std::fs::read(v1.join("report.json")).unwrap(),
        std::fs::read(v2.join("report.json")).unwrap()
    );

    let text = std::fs::read_to_string(d.path().join("gen/solution.csv")).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let mut cells: Vec<f64> = lines[100].split(',').map(|c| c.parse().unwrap()).collect();
    let (x, t) = (cells[0], cells[1]);
    cells[2] *= 1.1;
    cells[3] *= 1.1;
    lines[100] = cells.iter().map(|c| format!("{c:.16e}")).collect::<Vec<_>>().join(",");
    let bad = d.path().join("bad.csv");
    std::fs::write(&bad, lines.join("\n") + "\n").unwrap();
    let v3 = d.path().join("v3");
    let o = bin()
        .args(["verify", "--config", cfg.to_str().unwrap(), "--out", v3.to_str().unwrap(), "--input"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let c = check(&report(&v3), "sample_defect").clone();
    assert_eq!(c["pass"], false);
    assert_eq!(c["at"], serde_json::json!([x, t]));
}

#[test]
fn verify_vacuum_file() {
    let d = TempDir::new().unwrap();
    let mut csv = String::from("x,t,re_u,im_u,re_v,im_v\n");
    for i in 0..5 {
        csv.push_str(&format!("{:.16e},0,0,0,0,0\n", i as f64 - 2.0));
    }
    std::fs::write(d.path().join("vac.csv"), csv).unwrap();
    let cfg = write_config(
        d.path(),
        "c.json",
        r#""soliton": {"pairs": []}, "verify": {"input": "vac.csv", "model": "soliton"}"#,
    );
    let out = d.path().join("o");
    assert_eq!(run("verify", &cfg, &out).status.code(), Some(0));
    let r = report(&out);
    for c in r["checks"].as_array().unwrap() {
        assert_eq!(c["max_defect"], 0.0, "{c}");
    }
}

#[test]
fn verify_rejects_malformed_input() {
    let d = TempDir::new().unwrap();
    std::fs::write(d.path().join("x.csv"), "x,t\n1,2\n").unwrap();
    let cfg = write_config(d.path(), "c.json", &format!(r#"{ONE}, "verify": {{"input": "x.csv", "model": "soliton"}}"#));
    assert_eq!(run("verify", &cfg, &d.path().join("o")).status.code(), Some(1));
}

#[test]
fn discrete_single_exponential_has_zero_v() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(
        d.path(),
        "c.json",
        r#""discrete": {"seed": {"exponential": {"ks": [[1, 0]], "cs": [[1, 0]]}}, "steps": 1}"#,
    );
    let out = d.path().join("o");
    assert_eq!(run("discrete", &cfg, &out).status.code(), Some(0));
    for r in csv_rows(&out.join("solution.csv")) {
        assert!(r[4].abs() <= 1e-12 && r[5].abs() <= 1e-12);
    }
}

#[test]
fn energy_is_constant_for_one_soliton() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(d.path(), "c.json", r#""energy": {"pairs": [{"lambda": [0, 1], "alpha": [1, 0]}]}"#);
    let out = d.path().join("o");
    assert_eq!(run("energy", &cfg, &out).status.code(), Some(0));
    let text = std::fs::read_to_string(out.join("energy.csv")).unwrap();
    assert!(text.starts_with("t,raw_energy,normalized_energy\n"));
    let rows = csv_rows(&out.join("energy.csv"));
    assert_eq!(rows.len(), 11);
    let raw: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    assert!(raw.iter().all(|e| (e - raw[0]).abs() < 1e-4));
    assert!(rows.iter().all(|r| (r[2] - 1.0).abs() < 1e-12));
}

#[test]
fn energy_needs_its_tolerance() {
    let d = TempDir::new().unwrap();
    let p = d.path().join("c.json");
    std::fs::write(
        &p,
        r#"{"grid": {"x_min": -10, "x_max": 10, "nx": 41, "t_min": -2, "t_max": 2, "nt": 3},
            "tolerances": {"residual": 1e-8, "invariant": 1e-10},
            "energy": {"pairs": [{"lambda": [0, 1], "alpha": [1, 0]}]}}"#,
    )
    .unwrap();
    assert_eq!(run("energy", &p, &d.path().join("o")).status.code(), Some(1));
}

#[test]
fn backlund_order_swap_gives_same_csv() {
    let d = TempDir::new().unwrap();
    let pairs = r#"[{"lambda": [0, 1], "alpha": [1, 0]}, {"lambda": [0.5, 1], "alpha": [0.8, 0.6]}, {"lambda": [-0.4, 0.7], "alpha": [2, -1]}]"#;
    let plain = write_config(d.path(), "a.json", &format!(r#""backlund": {{"pairs": {pairs}}}"#));
    let swapped = write_config(
        d.path(),
        "b.json",
        &format!(r#""backlund": {{"pairs": {pairs}, "swap": [0, 2], "appendix": true}}"#),
    );
    let (oa, ob) = (d.path().join("a"), d.path().join("b"));
    assert_eq!(run("backlund", &plain, &oa).status.code(), Some(0));
    assert_eq!(run("backlund", &swapped, &ob).status.code(), Some(0));
    let (a, b) = (csv_rows(&oa.join("solution.csv")), csv_rows(&ob.join("solution.csv")));
    assert_eq!(a.len(), b.len());
    for (ra, rb) in a.iter().zip(&b) {
        for (x, y) in ra.iter().zip(rb) {
            assert!((x - y).abs() <= 1e-8 * 1f64.max(x.abs()));
        }
    }
    let r = report(&ob);
    assert_eq!(check(&r, "order_swap")["pass"], true);
    assert_eq!(check(&r, "appendix_reconstruction")["pass"], true);
}

#[test]
fn sigma2_records_convention_and_constraints() {
    let d = TempDir::new().unwrap();
    let p = d.path().join("c.json");
    std::fs::write(
        &p,
        r#"{"grid": {"x_min": -3, "x_max": 3, "nx": 7, "t_min": -0.5, "t_max": 0.5, "nt": 3},
            "tolerances": {"residual": 1e-8, "invariant": 1e-10},
            "sigma2": {"lambdas": [[0.5, 0], [1, 0.5], [1, -0.5]], "free": [[1, 0], [0.8, 0.3], [0, 0]],
              "triangular": {"lambda0": 0.4, "lambda1": [1, 0], "lambda2": [-0.3, 0],
                "nu1": [0.3282660821493064, 0.765954191681715], "nu2": [-0.6776309271789385, 0.22587697572631282]}}}"#,
    )
    .unwrap();
    let out = d.path().join("o");
    let o = run("sigma2", &p, &out);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let r = report(&out);
    assert_eq!(r["metadata"]["convention"], "full_phase");
    assert_eq!(r["metadata"]["branches"], serde_json::json!(["real_pair"]));
    for row in csv_rows(&out.join("solution.csv")) {
        assert!(((row[4].powi(2) + row[5].powi(2)).sqrt() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn thread_cap_is_validated_and_results_unchanged() {
    let d = TempDir::new().unwrap();
    let cfg = write_config(d.path(), "c.json", ONE);
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    let args = |out: &Path| {
        vec!["soliton".to_string(), "--config".into(), cfg.to_str().unwrap().into(), "--out".into(), out.to_str().unwrap().into()]
    };
    assert_eq!(bin().args(args(&a)).env("SOLITONFORGE_THREADS", "1").status().unwrap().code(), Some(0));
    assert_eq!(bin().args(args(&b)).env("SOLITONFORGE_THREADS", "3").status().unwrap().code(), Some(0));
    assert_eq!(std::fs::read(a.join("report.json")).unwrap(), std::fs::read(b.join("report.json")).unwrap());
    assert_eq!(std::fs::read(a.join("solution.csv")).unwrap(), std::fs::read(b.join("solution.csv")).unwrap());
    assert_eq!(bin().args(args(&a)).env("SOLITONFORGE_THREADS", "0").status().unwrap().code(), Some(1));
}
