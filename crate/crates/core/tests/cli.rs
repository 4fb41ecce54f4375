// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn modfa(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modfa"))
        .args(args)
        .env_remove("MODFA_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = modfa(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn json(args: &[&str]) -> serde_json::Value {
    serde_json::from_str(ok(args).trim()).unwrap()
}

#[derive(Debug)]
struct Row {
    length: usize,
    scheme: String,
    p: u32,
    k_set: Vec<u32>,
    ideal_prob: f64,
    noisy_prob: Option<f64>,
    fidelity: Option<f64>,
    sx: usize,
    cx: usize,
}

fn parse_csv(text: &str) -> Vec<Row> {
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "length,scheme,p,k_set,ideal_prob,noisy_prob,fidelity,sx,rz,cx,depth"
    );
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            assert_eq!(f.len(), 11, "{l}");
            let opt = |s: &str| (!s.is_empty()).then(|| s.parse::<f64>().unwrap());
            f[9].parse::<usize>().unwrap();
            f[10].parse::<usize>().unwrap();
            f[8].parse::<usize>().unwrap();
            Row {
                length: f[0].parse().unwrap(),
                scheme: f[1].to_string(),
                p: f[2].parse().unwrap(),
                k_set: f[3].split(';').map(|k| k.parse().unwrap()).collect(),
                ideal_prob: f[4].parse().unwrap(),
                noisy_prob: opt(f[5]),
                fidelity: opt(f[6]),
                sx: f[7].parse().unwrap(),
                cx: f[9].parse().unwrap(),
            }
        })
        .collect()
}

#[test]
fn compile_opt_rz_report() {
    let v = json(&["compile", "--p", "11", "--k", "3,5,7", "--scheme", "opt-rz", "--length", "11", "--emit", "report"]);
    assert_eq!(v["cx"], 44);
    let keys: Vec<_> = v.as_object().unwrap().keys().cloned().collect();
    assert_eq!(keys.len(), 6);
    for k in ["sx", "rz", "cx", "x", "depth", "qubits"] {
        assert!(v.get(k).is_some());
    }
}

#[test]
fn compile_rz_single_counts() {
    let raw = json(&["compile", "--p", "11", "--k", "1", "--scheme", "rz", "--length", "5", "--emit", "report", "--no-optimize"]);
    assert_eq!((raw["sx"].as_u64(), raw["rz"].as_u64()), (Some(2), Some(7)));
    let opt = json(&["compile", "--p", "11", "--k", "1", "--scheme", "rz", "--length", "5", "--emit", "report"]);
    assert_eq!(opt["sx"], 2);
    assert!(opt["rz"].as_u64().unwrap() < 7);
}

#[test]
fn compile_circuit_output_parses() {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("cli_opt_ry.txt");
    ok(&[
        "compile", "--p", "11", "--k", "3,5,7", "--scheme", "opt-ry", "--length", "3", "--emit", "circuit", "--output",
        path.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&path).unwrap();
    let c = modfa_core::circuit::parse(&text).unwrap();
    assert_eq!(c.num_qubits(), 3);
    let v = json(&["simulate", path.to_str().unwrap()]);
    let req = modfa_core::compiler::LoweringRequest::new(11, vec![3, 5, 7], 3, modfa_core::compiler::Scheme::OptRy, true).unwrap();
    assert!((v["acceptance"].as_f64().unwrap() - req.ideal_acceptance()).abs() < 1e-9);
}

#[test]
fn both_emits_circuit_then_report() {
    let out = ok(&["compile", "--p", "5", "--k", "2", "--scheme", "ry", "--length", "2"]);
    let last = out.lines().last().unwrap();
    let v: serde_json::Value = serde_json::from_str(last).unwrap();
    assert_eq!(v["sx"], 4);
    assert!(out.starts_with("qubits 1\n"));
}

#[test]
fn sweep_members_accept() {
    let rows = parse_csv(&ok(&["sweep", "--p", "11", "--k", "3,5,7", "--scheme", "opt-rz", "--max-length", "22"]));
    assert_eq!(rows.len(), 23);
    for (i, r) in rows.iter().enumerate() {
        assert_eq!(r.length, i);
        assert_eq!((r.scheme.as_str(), r.p, r.k_set.as_slice()), ("opt-rz", 11, &[3, 5, 7][..]));
        assert!(r.noisy_prob.is_none() && r.fidelity.is_none());
        assert_eq!(r.cx, 4 * i);
        if i % 11 == 0 {
            assert!((r.ideal_prob - 1.0).abs() < 1e-9, "row {i}");
        } else {
            assert!(r.ideal_prob < 0.5, "row {i}");
        }
    }
}

#[test]
fn zero_noise_sweep_is_within_three_sigma() {
    let zero = configs().join("noise_zero.toml");
    let args = [
        "sweep", "--p", "11", "--k", "3,5,7", "--scheme", "opt-rz", "--max-length", "22", "--noise",
        zero.to_str().unwrap(), "--shots", "8192", "--seed", "1",
    ];
    let rows = parse_csv(&ok(&args));
    assert_eq!(rows.len(), 23);
    for r in &rows {
        let p = r.ideal_prob;
        let sigma = (p * (1.0 - p) / 8192.0).sqrt();
        let noisy = r.noisy_prob.unwrap();
        // the slack covers the 12-digit rounding of both columns
        assert!((noisy - p).abs() <= 3.0 * sigma + 1e-11, "row {}: {noisy} vs {p}", r.length);
        assert!((r.fidelity.unwrap() - 1.0).abs() < 1e-9);
    }
}

#[test]
fn sweep_is_byte_identical_and_thread_independent() {
    let noise = configs().join("noise_example.toml");
    let args = [
        "sweep", "--p", "11", "--k", "1", "--scheme", "rz", "--max-length", "12", "--noise", noise.to_str().unwrap(),
        "--shots", "4096", "--seed", "9",
    ];
    let a = ok(&args);
    let b = ok(&args);
    assert_eq!(a, b);
    let single = Command::new(env!("CARGO_BIN_EXE_modfa"))
        .args(args)
        .env("MODFA_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(stdout(&single), a);
    assert!(parse_csv(&a).iter().all(|r| r.sx == 2));
}

#[test]
fn sweep_json_lines() {
    let out = ok(&["sweep", "--p", "7", "--k", "2", "--scheme", "ry", "--max-length", "3", "--format", "json"]);
    let rows: Vec<serde_json::Value> = out.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(rows.len(), 4);
    for (l, r) in rows.iter().enumerate() {
        assert_eq!(r["length"], l);
        assert!(r["noisy_prob"].is_null() && r["fidelity"].is_null());
        let oracle = (4.0 * PI * l as f64 / 7.0).cos().powi(2);
        assert!((r["ideal_prob"].as_f64().unwrap() - oracle).abs() < 1e-12);
    }
}

#[test]
fn search_exhaustive_matches_hand_enumeration() {
    let v = json(&["search-k", "--p", "5", "--d", "2", "--mode", "exhaustive"]);
    let mut best: Option<(f64, Vec<u32>)> = None;
    for a in 1..5u32 {
        for b in a + 1..5 {
            let worst = (1..5)
                .map(|l| {
                    let m = ((2.0 * PI * (a * l) as f64 / 5.0).cos() + (2.0 * PI * (b * l) as f64 / 5.0).cos()) / 2.0;
                    m * m
                })
                .fold(0.0, f64::max);
            if best.as_ref().is_none_or(|(w, _)| worst < *w - 1e-15) {
                best = Some((worst, vec![a, b]));
            }
        }
    }
    let (worst, k) = best.unwrap();
    assert_eq!(v["k_set"], serde_json::json!(k));
    assert!((v["worst_case"].as_f64().unwrap() - worst).abs() < 1e-12);
}

#[test]
fn search_random_is_deterministic() {
    let args = ["search-k", "--p", "11", "--d", "4", "--mode", "random", "--trials", "500", "--seed", "9"];
    assert_eq!(ok(&args), ok(&args));
    let v = json(&args);
    assert_eq!(v["k_set"].as_array().unwrap().len(), 4);
}

#[test]
fn usage_errors_exit_2() {
    let cases: &[&[&str]] = &[
        &["compile", "--p", "11", "--k", "1", "--scheme", "opt-rz", "--length", "3"],
        &["compile", "--p", "12", "--k", "1", "--scheme", "rz", "--length", "3"],
        &["compile", "--p", "11", "--k", "11", "--scheme", "rz", "--length", "3"],
        &["compile", "--p", "11", "--k", "1", "--scheme", "qq", "--length", "3"],
        &["sweep", "--p", "11", "--k", "3,5,7", "--scheme", "opt-rz", "--max-length", "-1"],
        &["sweep", "--p", "11", "--k", "1", "--scheme", "rz", "--max-length", "2", "--shots", "10"],
        &["search-k", "--p", "11", "--d", "3", "--mode", "exhaustive"],
        &["search-k", "--p", "11", "--d", "4", "--mode", "random", "--trials", "5"],
        &["search-k", "--p", "11", "--d", "4", "--mode", "exhaustive", "--trials", "5"],
        &["accept", "--p", "11", "--k", "1,2", "--construction", "ry2", "--length", "1"],
        &["frobnicate"],
        &[],
    ];
    for args in cases {
        let o = modfa(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
        assert!(o.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn runtime_errors_exit_1() {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let bad_circuit = dir.join("cli_bad_circuit.txt");
    std::fs::write(&bad_circuit, "qubits 1\nfoo 0\n").unwrap();
    let bad_noise = dir.join("cli_bad_noise.toml");
    std::fs::write(&bad_noise, "depol_1q = 2.0\n").unwrap();
    let cases: Vec<Vec<String>> = vec![
        vec!["simulate".into(), "/nonexistent/circuit.txt".into()],
        vec!["simulate".into(), bad_circuit.display().to_string()],
        vec![
            "sweep".into(), "--p".into(), "11".into(), "--k".into(), "1".into(), "--scheme".into(), "rz".into(),
            "--max-length".into(), "1".into(), "--noise".into(), bad_noise.display().to_string(),
        ],
        // over the exhaustive budget
        vec!["search-k".into(), "--p".into(), "101".into(), "--d".into(), "8".into(), "--mode".into(), "exhaustive".into()],
    ];
    for args in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let o = modfa(&refs);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn bad_thread_cap_is_usage_error() {
    let o = Command::new(env!("CARGO_BIN_EXE_modfa"))
        .args(["sweep", "--p", "5", "--k", "1", "--scheme", "rz", "--max-length", "2"])
        .env("MODFA_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_with_noise_and_shots() {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join("cli_bell.txt");
    std::fs::write(&path, "qubits 2\nh 0\ncx 0 1\nmeasure 0 0\nmeasure 1 1\n").unwrap();
    let noise = configs().join("noise_thermal.toml");
    let args = [
        "simulate", path.to_str().unwrap(), "--noise", noise.to_str().unwrap(), "--shots", "1000", "--seed", "4",
    ];
    let v = json(&args);
    assert!((v["outcome_probs"]["00"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((v["outcome_probs"]["11"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let f = v["fidelity"].as_f64().unwrap();
    assert!(f < 1.0 && f > 0.9);
    let counts = v["counts"]["counts"].as_object().unwrap();
    assert_eq!(counts.values().map(|c| c.as_u64().unwrap()).sum::<u64>(), 1000);
    assert_eq!(ok(&args), ok(&args));
}

#[test]
fn accept_reports_closed_form() {
    for construction in ["ry2", "rz2"] {
        let v = json(&["accept", "--p", "11", "--k", "1", "--construction", construction, "--length", "3"]);
        assert!((v["acceptance"].as_f64().unwrap() - (6.0 * PI / 11.0).cos().powi(2)).abs() < 1e-12);
    }
    let v = json(&["accept", "--p", "11", "--k", "1,2,3,4", "--construction", "parallel-rz", "--length", "11"]);
    assert!((v["acceptance"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}
