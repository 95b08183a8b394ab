// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use multiboson::distribution::OutputDistribution;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_multiboson"))
}

fn scenarios() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn identical_photons_suppress_coincidences() {
    let s = scenarios().join("hom_identical.json");
    let o = run(&["distribution", "--scenario", s.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let dist = OutputDistribution::read_csv(o.stdout.as_slice()).unwrap();
    assert!(dist.probability_of(&[1, 1]).unwrap().abs() < 1e-15);
    assert!(String::from_utf8_lossy(&o.stderr).contains("total probability"));
}

#[test]
fn orthogonal_polarizations_do_not_interfere() {
    let s = scenarios().join("hom_orthogonal.json");
    let o = run(&["distribution", "--scenario", s.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let dist = OutputDistribution::from_json(&stdout(&o)).unwrap();
    assert!((dist.probability_of(&[1, 1]).unwrap() - 0.5).abs() < 1e-15);
}

#[test]
fn malformed_json_exits_with_parse_code() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "bad.json", "{\"unitary\": ");
    let o = run(&["distribution", "--scenario", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
    let o = run(&["distribution", "--scenario", "/nonexistent/scenario.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn infeasible_sizes_exit_with_code_three() {
    let dir = TempDir::new().unwrap();
    // 11 photons with a Gram matrix of no limiting form
    let n: usize = 11;
    let rows: Vec<String> = (0..n)
        .map(|i| {
            let cells: Vec<String> = (0..n)
                .map(|j| if i == j { "1".into() } else if i.abs_diff(j) == 1 { "0.2".into() } else { "0".into() })
                .collect();
            format!("[{}]", cells.join(","))
        })
        .collect();
    let inputs: Vec<String> = (0..n).map(|p| format!("{{\"port\": {p}}}")).collect();
    let body = format!(
        "{{\"unitary\": {{\"haar\": {{\"m\": {n}, \"seed\": 1}}}}, \"inputs\": [{}], \"gram_override\": [{}]}}",
        inputs.join(","),
        rows.join(",")
    );
    let p = write(&dir, "big.json", &body);
    let o = run(&["distribution", "--scenario", &p]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("estimated cost"));
}

#[test]
fn dip_scan_rows() {
    let s = scenarios().join("hom_identical.json");
    let o = run(&["dip-scan", "--scenario", s.to_str().unwrap(), "--tau-min", "-5", "--tau-max", "5", "--steps", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[1][0], 0.0);
    assert_eq!(rows[1][2], 0.0);
    assert!((rows[0][2] - 0.5).abs() < 1e-5);
    for r in &rows {
        assert!((r[2] - 0.5 * (1.0 - r[1])).abs() < 1e-15);
    }

    let o = run(&["dip-scan", "--scenario", s.to_str().unwrap(), "--tau-min", "0.25", "--steps", "1"]);
    assert_eq!(stdout(&o).lines().count(), 2);
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("0.25,"));
}

#[test]
fn dip_scan_refuses_non_gaussian() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "delta.json",
        r#"{"unitary": {"beamsplitter": {}}, "inputs": [
            {"port": 0, "spectrum": {"kind": "delta", "omega0": 1}},
            {"port": 1, "spectrum": {"kind": "delta", "omega0": 1}}]}"#,
    );
    let o = run(&["dip-scan", "--scenario", &p]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn sampling_is_deterministic() {
    let s = scenarios().join("haar_three_photons.json");
    let s = s.to_str().unwrap();
    let a = run(&["sample", "--scenario", s, "--count", "500", "--seed", "17"]);
    let b = run(&["sample", "--scenario", s, "--count", "500", "--seed", "17"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a).lines().count(), 500);
    let c = run(&["sample", "--scenario", s, "--count", "500", "--seed", "18"]);
    assert_ne!(a.stdout, c.stdout);

    let empty = run(&["sample", "--scenario", s, "--count", "0"]);
    assert_eq!(empty.status.code(), Some(0));
    assert!(empty.stdout.is_empty());
}

#[test]
fn identical_photon_samples_never_coincide() {
    let s = scenarios().join("hom_identical.json");
    let o = run(&["sample", "--scenario", s.to_str().unwrap(), "--count", "10000", "--seed", "5"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 10_000);
    assert!(!text.lines().any(|l| l == "1,1"));
}

#[test]
fn out_flag_writes_file_that_round_trips() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("dist.csv");
    let s = scenarios().join("gram_override.json");
    let o = run(&["distribution", "--scenario", s.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let bytes = std::fs::read(&out).unwrap();
    let dist = OutputDistribution::read_csv(bytes.as_slice()).unwrap();
    let mut again = Vec::new();
    dist.write_csv(&mut again).unwrap();
    assert_eq!(bytes, again);
}

#[test]
fn validate_passes_well_formed_scenarios() {
    for name in ["hom_identical.json", "hom_orthogonal.json", "haar_three_photons.json", "gram_override.json"] {
        let s = scenarios().join(name);
        let o = run(&["validate", "--scenario", s.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{name}: {}", stdout(&o));
        assert!(!stdout(&o).contains("FAIL"));
    }
}

#[test]
fn validate_reports_non_unitary_matrix() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "nonunitary.json",
        r#"{"unitary": {"explicit": [[1, 0.5], [0, 1]]}, "inputs": [{"port": 0}], "gram_override": [[1]]}"#,
    );
    let o = run(&["validate", "--scenario", &p]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL") && l.contains("unitarity")));
    // other commands refuse it outright
    assert_eq!(run(&["distribution", "--scenario", &p]).status.code(), Some(1));
}

#[test]
fn validate_reports_offending_eigenvalue() {
    let dir = TempDir::new().unwrap();
    let p = write(
        &dir,
        "notpsd.json",
        r#"{"unitary": {"haar": {"m": 3, "seed": 2}}, "inputs": [{"port": 0}, {"port": 1}, {"port": 2}],
            "gram_override": [[1, -0.9, -0.9], [-0.9, 1, -0.9], [-0.9, -0.9, 1]]}"#,
    );
    let o = run(&["validate", "--scenario", &p]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    let line = text.lines().find(|l| l.contains("gram matrix")).unwrap();
    assert!(line.starts_with("FAIL") && line.contains("eigenvalue -8.000e-1"), "{line}");
}

#[test]
fn permanent_from_json_and_csv() {
    let dir = TempDir::new().unwrap();
    let j = write(&dir, "m.json", "[[1, 2], [3, 4]]");
    let o = run(&["permanent", "--matrix", &j]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value: 10.0 +0.0i"), "{}", stdout(&o));

    let c = write(&dir, "m.csv", "1,1,1\n1,1,1\n1,1,1\n");
    let o = run(&["permanent", "--matrix", &c, "--algorithm", "naive"]);
    assert!(stdout(&o).contains("value: 6.0 +0.0i"));

    let c = write(&dir, "z.csv", "0.5,0+0.5i\n0+0.5i,0.5\n");
    let o = run(&["permanent", "--matrix", &c]);
    assert!(stdout(&o).contains("value: 0.0"), "{}", stdout(&o));

    let bad = write(&dir, "bad.csv", "1,x\n1,1\n");
    assert_eq!(run(&["permanent", "--matrix", &bad]).status.code(), Some(2));
    let big = write(&dir, "big.json", &format!("[{}]", vec![format!("[{}]", vec!["1"; 13].join(",")); 13].join(",")));
    assert_eq!(run(&["permanent", "--matrix", &big, "--algorithm", "naive"]).status.code(), Some(3));
}

#[test]
fn permanent_respects_thread_cap() {
    let dir = TempDir::new().unwrap();
    let rows: Vec<String> = (0..12)
        .map(|i| format!("[{}]", (0..12).map(|j| format!("[{}, {}]", ((i * 7 + j * 3) % 5) as f64 * 0.1, ((i + 2 * j) % 3) as f64 * 0.1)).collect::<Vec<_>>().join(",")))
        .collect();
    let p = write(&dir, "m.json", &format!("[{}]", rows.join(",")));
    let run_with = |threads: &str| {
        let o = bin().args(["permanent", "--matrix", &p]).env("MULTIBOSON_THREADS", threads).output().unwrap();
        let text = stdout(&o);
        assert!(text.contains(&format!("({threads} worker blocks)")), "{text}");
        text.lines().find(|l| l.starts_with("value")).unwrap().to_string()
    };
    assert_eq!(run_with("4"), run_with("4"));
}
