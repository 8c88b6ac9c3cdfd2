//! End-to-end runs of the `slipchan` binary.

use std::path::Path;
use std::process::{Command, Output};

fn slipchan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slipchan"))
        .args(args)
        .env_remove("SLIPCHAN_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn field(text: &str, key: &str) -> String {
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key} ")))
        .unwrap_or_else(|| panic!("no '{key}' line in {text}"))
        .to_string()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name))
        .expect("golden file present")
}

#[test]
fn eigenvalue_lowest_friction_mode() {
    let o = slipchan(&["eigenvalue", "--m", "0", "--n", "0", "--p", "0", "--beta", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(field(&s, "value"), "0.740173884395");
    assert_eq!(field(&s, "branch"), "cot");
    assert_eq!(field(&s, "bracket"), "0 2.46740110027");
}

#[test]
fn eigenvalue_no_slip_nonconstant_pressure() {
    let o = slipchan(&["eigenvalue", "--m", "1", "--n", "0", "--p", "0", "--dirichlet", "--pressure-class", "nonconst"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(field(&stdout(&o), "value").starts_with("9.31"));
}

#[test]
fn eigenvalue_perfect_slip_kernel() {
    let o = slipchan(&["eigenvalue", "--m", "0", "--n", "0", "--p", "0", "--navier"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(field(&stdout(&o), "value"), "0");
}

#[test]
fn zero_beta_is_rejected_with_hint() {
    let o = slipchan(&["eigenvalue", "--m", "0", "--n", "0", "--p", "0", "--beta", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--navier"));
}

#[test]
fn friction_flags_are_exclusive() {
    let o = slipchan(&["eigenvalue", "--m", "0", "--n", "0", "--p", "0", "--beta", "1", "--dirichlet"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_combination_names_precondition() {
    let o = slipchan(&["eigenvalue", "--m", "0", "--n", "0", "--p", "0", "--navier", "--pressure-class", "nonconst"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("m² + n² > 0"), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn table_matches_golden_and_reruns_identically() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for out in [&a, &b] {
        let o = slipchan(&["table", "--family", "const", "--beta", "1", "--count", "10", "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    assert_eq!(String::from_utf8(first).unwrap(), golden("table_const_beta1.csv"));
}

#[test]
fn table_perfect_slip_single_row() {
    let o = slipchan(&["table", "--navier", "--count", "1"]);
    assert_eq!(stdout(&o), "j,family,m,n,p,permuted,value,multiplicity\n1,const,0,0,0,false,0,2\n");
}

#[test]
fn table_nonconstant_beta10_matches_reference_column() {
    let o = slipchan(&["table", "--family", "nonconst", "--beta", "10", "--count", "10"]);
    let reference = [7.80, 7.97, 9.02, 9.72, 12.16, 13.04, 13.93, 16.69, 17.53, 18.07];
    let mut values: Vec<f64> = Vec::new();
    let mut last_j = 0;
    for line in stdout(&o).lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let j: usize = cols[0].parse().unwrap();
        if j != last_j {
            values.push(cols[6].parse().unwrap());
            last_j = j;
        }
    }
    assert_eq!(values.len(), 10);
    for (v, p) in values.iter().zip(reference) {
        assert_eq!(format!("{v:.2}"), format!("{p:.2}"));
    }
}

#[test]
fn table_json_records_seed() {
    let o = slipchan(&["table", "--beta", "1", "--count", "2", "--format", "json", "--seed", "7"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["seed"], 7);
    assert_eq!(doc["rows"][0]["multiplicity"], 2);
}

#[test]
fn config_supplies_defaults_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"friction": "dirichlet", "count": 2}"#).unwrap();
    let o = slipchan(&["--config", cfg.to_str().unwrap(), "table"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert_eq!(s.lines().count(), 3);
    assert!(s.contains(",2.4674,"));
    let o = slipchan(&["--config", cfg.to_str().unwrap(), "table", "--navier"]);
    assert!(stdout(&o).contains(",0,2\n"));
}

#[test]
fn config_rejects_unknown_keys() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"frction": 1}"#).unwrap();
    let o = slipchan(&["--config", cfg.to_str().unwrap(), "table"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_an_io_error() {
    let o = slipchan(&["table", "--beta", "1", "--out", "/nonexistent-dir/t.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_modes_passes() {
    let o = slipchan(&["verify", "--suite", "modes", "--beta", "1", "--max-index", "2", "--max-p", "1"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["pass"], true);
}

#[test]
fn verify_forced_tolerance_fails() {
    let o = slipchan(&["verify", "--suite", "modes", "--beta", "1", "--max-index", "1", "--max-p", "1", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(doc["records"].as_array().unwrap().iter().any(|r| r["pass"] == false));
}

#[test]
fn verify_oracle_coarse_grid() {
    let o = slipchan(&["verify", "--suite", "oracle", "--beta", "1", "--grid", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    for r in doc["records"].as_array().unwrap() {
        assert!(r["value"].as_f64().unwrap() < 4e-3);
    }
}

fn simulate(manifest: &str) -> (Output, String, String) {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("run.json");
    let t = dir.path().join("traj.csv");
    let e = dir.path().join("energy.csv");
    std::fs::write(&m, manifest).unwrap();
    let o = slipchan(&[
        "simulate",
        "--manifest",
        m.to_str().unwrap(),
        "--trajectory",
        t.to_str().unwrap(),
        "--energy",
        e.to_str().unwrap(),
    ]);
    let traj = std::fs::read_to_string(&t).unwrap_or_default();
    let energy = std::fs::read_to_string(&e).unwrap_or_default();
    (o, traj, energy)
}

/// `(A_k, λ_k)` pairs from a simulate summary.
fn terminal(summary: &str) -> Vec<(f64, f64)> {
    summary
        .lines()
        .filter(|l| l.starts_with("A_"))
        .map(|l| {
            let w: Vec<&str> = l.split_whitespace().collect();
            (w[1].parse().unwrap(), w[3].parse().unwrap())
        })
        .collect()
}

#[test]
fn simulate_single_mode_decays_exponentially() {
    let (o, traj, energy) = simulate(
        r#"{"friction": 1.0, "indices": [{"m": 1, "n": 1, "p": 0}],
            "coeffs": {"uniform": {"a": 0.6, "b": -0.8, "c": -0.6, "d": -0.8}},
            "dt": 0.001, "T": 1.0, "initial": {"gammas": [1.0]}, "stride": 100}"#,
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let (a, l) = terminal(&stdout(&o))[0];
    assert!(((a - (-l).exp()) / (-l).exp()).abs() < 1e-6);
    assert!(traj.starts_with("t,A_1,energy,dissipation\n"));
    assert_eq!(traj.lines().count(), 12);
    assert!(energy.starts_with("t,energy,dissipation,balance_residual\n"));
}

#[test]
fn simulate_zero_data_stays_zero() {
    let (o, traj, _) = simulate(
        r#"{"friction": "navier", "indices": [{"m": 1, "n": 0, "p": 0}, {"m": 1, "n": 1, "p": 1}],
            "coeffs": {"uniform": {"a": 1, "b": 0.5, "c": 0.2, "d": 0.1}},
            "dt": 0.01, "T": 0.5, "initial": {"gammas": [0, 0]}}"#,
    );
    assert_eq!(o.status.code(), Some(0));
    for line in traj.lines().skip(1) {
        assert!(line.split(',').skip(1).all(|v| v == "0"), "{line}");
    }
}

#[test]
fn simulate_hp3_five_modes_decouple() {
    let (o, _, _) = simulate(
        r#"{"friction": 10, "indices": [{"m": 1, "n": 1, "p": 0}, {"m": 2, "n": 1, "p": 0}, {"m": 1, "n": 2, "p": 1},
                                        {"m": 3, "n": 1, "p": 0}, {"m": 0, "n": 2, "p": 1}],
            "coeffs": {"uniform": {"a": 0.3, "b": 1.1, "c": 0, "d": 0}},
            "dt": 0.001, "T": 1.0, "initial": {"gammas": [1, 0.5, -0.7, 0.2, 0.9]}, "stride": 1000}"#,
    );
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = terminal(&stdout(&o));
    assert_eq!(rows.len(), 5);
    // Amplitudes are sorted with the basis; each decays at its own rate.
    let mut gammas = Vec::new();
    for (a, l) in &rows {
        gammas.push(a * l.exp());
    }
    let mut expect = vec![1.0, 0.5, -0.7, 0.2, 0.9];
    expect.sort_by(|x: &f64, y| x.abs().total_cmp(&y.abs()));
    let mut got = gammas.clone();
    got.sort_by(|x, y| x.abs().total_cmp(&y.abs()));
    for (g, e) in got.iter().zip(&expect) {
        assert!((g - e).abs() < 1e-6 * e.abs(), "{g} vs {e}");
    }
}

#[test]
fn simulate_stability_violation_exits_2() {
    let (o, _, _) = simulate(
        r#"{"friction": 1, "indices": [{"m": 3, "n": 3, "p": 3}], "coeffs": {"uniform": {"a": 1, "b": 0, "c": 0, "d": 0}},
            "dt": 1.0, "T": 1.0, "initial": {"gammas": [1]}}"#,
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("stability"));
}

fn staircases(text: &str) -> Vec<(String, Vec<f64>)> {
    let mut out: Vec<(String, Vec<f64>)> = Vec::new();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let v: f64 = cols[2].parse().unwrap();
        match out.last_mut() {
            Some((b, vals)) if b == cols[0] => vals.push(v),
            _ => out.push((cols[0].to_string(), vec![v])),
        }
    }
    out
}

#[test]
fn figure_staircases_ordered_by_friction() {
    let o = slipchan(&["figure", "--friction-list", "0,1,10,inf", "--count", "46"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("beta,k,lambda_k\n"));
    let st = staircases(&s);
    assert_eq!(st.iter().map(|(b, _)| b.as_str()).collect::<Vec<_>>(), ["0", "1", "10", "inf"]);
    for (_, vals) in &st {
        assert_eq!(vals.len(), 46);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }
    for pair in st.windows(2) {
        assert!(pair[0].1.iter().zip(&pair[1].1).all(|(a, b)| a < b));
    }
}

#[test]
fn figure_is_byte_stable() {
    let a = slipchan(&["figure", "--friction-list", "1", "--count", "12"]);
    let b = slipchan(&["figure", "--friction-list", "1", "--count", "12"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(staircases(&stdout(&a)).len(), 1);
}

#[test]
fn thread_cap_must_be_positive() {
    let o = Command::new(env!("CARGO_BIN_EXE_slipchan"))
        .args(["table", "--beta", "1"])
        .env("SLIPCHAN_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_slipchan"))
        .args(["table", "--beta", "1", "--count", "1"])
        .env("SLIPCHAN_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
}
