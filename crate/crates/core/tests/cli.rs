// Copyright 2026 The photon-distill Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

//! Command-line behaviour: golden reports, replay, exit codes.

use std::path::PathBuf;
use std::process::Command;

use clap::Parser;
use photon_distill::cli::{execute, Cli, Format, Outcome, SimulateArgs};
use serde_json::Value;

fn run(args: &[&str]) -> Outcome {
    let cli =
        Cli::try_parse_from(std::iter::once("photon-distill").chain(args.iter().copied())).unwrap();
    execute(&cli).unwrap()
}

fn golden(name: &str, outcome: &Outcome) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"));
    let text = outcome.render(Format::Json).unwrap();
    if std::env::var_os("UPDATE_GOLDEN").is_some() || !path.exists() {
        std::fs::write(&path, &text).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path).unwrap();
    assert_eq!(
        text, expected,
        "{name} drifted from its golden report; rerun with UPDATE_GOLDEN=1 after review"
    );
}

fn at<'a>(v: &'a Value, path: &str) -> &'a Value {
    path.split('.').fold(v, |v, k| match k.parse::<usize>() {
        Ok(i) => &v[i],
        Err(_) => &v[k],
    })
}

fn f(v: &Value, path: &str) -> f64 {
    at(v, path)
        .as_f64()
        .unwrap_or_else(|| panic!("{path} is not a number"))
}

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_photon-distill"));
    c.current_dir(env!("CARGO_MANIFEST_DIR"));
    c
}

#[test]
fn simulate_fourier_three() {
    let o = run(&[
        "simulate",
        "--n",
        "3",
        "--unitary",
        "fourier",
        "--model",
        "obb",
        "--eps",
        "0.0759",
    ]);
    assert!((f(&o.report.results, "points.0.eps_out") - 0.0335).abs() < 5e-4);
    golden("simulate_fourier3", &o);
}

#[test]
fn simulate_perfect_photons() {
    let o = run(&["simulate", "--n", "3", "--eps", "0"]);
    assert_eq!(f(&o.report.results, "points.0.eps_out"), 0.0);
}

#[test]
fn simulate_optimality_scan() {
    let o = run(&[
        "simulate",
        "--scan-optimality",
        "--n",
        "3",
        "--trials",
        "200",
        "--seed",
        "7",
    ]);
    assert!(f(&o.report.results, "optimality_scan.min_ratio") >= 0.99);
    golden("simulate_scan", &o);
}

#[test]
fn simulate_report_replays() {
    let o = run(&[
        "simulate",
        "--n",
        "4",
        "--eps",
        "0.01,0.05",
        "--model",
        "sbb",
        "--scan-optimality",
        "--trials",
        "20",
        "--seed",
        "3",
    ]);
    let flags: SimulateArgs = serde_json::from_value(o.report.parameters["flags"].clone()).unwrap();
    let seed = o.report.parameters["seed"].as_u64().unwrap();
    let again = photon_distill::cli::simulate(&flags, seed).unwrap();
    assert_eq!(again.report, o.report);
}

#[test]
fn simulate_lossy_and_custom_unitary() {
    let dir = tempfile::tempdir().unwrap();
    let u = dir.path().join("u.csv");
    std::fs::write(&u, "# hadamard\n0.7071067811865476,0.7071067811865476\n0.7071067811865476,-0.7071067811865476\n").unwrap();
    let loss = dir.path().join("loss.csv");
    std::fs::write(&loss, "0.9, 0.8\n").unwrap();
    let args = [
        "simulate",
        "--n",
        "2",
        "--unitary",
        "file",
        "--unitary-file",
        u.to_str().unwrap(),
        "--loss-in",
        loss.to_str().unwrap(),
        "--herald-modes",
        "0",
        "--eps",
        "0.1",
    ];
    let o = run(&args);
    assert_eq!(o.report.input_digests.len(), 2);
    assert!((f(&o.report.results, "points.0.eps_out") - 1.0 / 1.9).abs() < 1e-9);
}

#[test]
fn characterize_chip() {
    let o = run(&[
        "characterize",
        "data/s_recorded.csv",
        "data/s_recorded_ref.csv",
        "--gauge",
        "anchor:0:0.3568",
    ]);
    let r = &o.report.results;
    assert!((f(r, "0.characterization.fidelity_full") - 0.9982).abs() < 5e-4);
    assert!((f(r, "0.characterization.r_fit") - 0.517).abs() < 2e-3);
    assert!((f(r, "1.characterization.r_fit") - 0.497).abs() < 2e-3);
    assert_eq!(o.report.input_digests.len(), 2);
    golden("characterize_chip", &o);
}

#[test]
fn characterize_identity_counts() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("id.csv");
    std::fs::write(&p, "# s_norm=1000\n1000,0,0\n0,1000,0\n0,0,1000\n").unwrap();
    let o = run(&[
        "characterize",
        p.to_str().unwrap(),
        "--phases",
        "false",
        "--fit-model",
        "false",
    ]);
    let c = &o.report.results[0]["characterization"];
    for i in 0..3 {
        assert!((f(c, &format!("d_in.amplitudes.{i}")) - 1.0).abs() < 1e-12);
        assert!((f(c, &format!("d_out.amplitudes.{i}")) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn characterize_writes_eta_map() {
    let dir = tempfile::tempdir().unwrap();
    let eta = dir.path().join("eta.csv");
    run(&[
        "characterize",
        "data/s_recorded.csv",
        "--eta-csv",
        eta.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(eta).unwrap();
    assert_eq!(text.lines().count(), 17);
    assert!(text.starts_with("file,input,output,eta,loss_db"));
}

#[test]
fn extract_table_values() {
    let o = run(&["extract", "data/correlator_summary.csv", "--model", "both"]);
    let r = &o.report.results;
    for (path, want) in [
        ("obb.v0.value", 0.745),
        ("obb.eps_multi.value", 0.030),
        ("obb.eps_multi_out.value", 0.052),
        ("obb.eps_tot.value", 0.103),
        ("obb.eps_tot_out.value", 0.084),
        ("obb.eps_indist.value", 0.076),
        ("obb.eps_indist_out.value", 0.034),
    ] {
        assert!((f(r, path) - want).abs() <= 1e-3, "{path}");
    }
    assert!((f(r, "sbb.eps_indist") - 0.0793).abs() < 2e-4);
    assert!((f(r, "sbb.eps_indist_out") - 0.0329).abs() < 5e-4);
    assert!(!o.report.warnings.is_empty());
    golden("extract_summary", &o);
}

#[test]
fn extract_from_samples_is_seeded() {
    let a = run(&[
        "extract",
        "data/correlator_samples.csv",
        "--mc-draws",
        "500",
        "--seed",
        "9",
    ]);
    let b = run(&[
        "extract",
        "data/correlator_samples.csv",
        "--mc-draws",
        "500",
        "--seed",
        "9",
    ]);
    assert_eq!(a, b);
    assert_eq!(at(&a.report.results, "statistics.C.n").as_u64(), Some(80));
}

#[test]
fn resources_source_a() {
    let o = run(&["resources", "--source", "A"]);
    let t = &o.report.results["targets"][0];
    assert_eq!(at(t, "optimum.n_star").as_u64(), Some(12));
    assert!((f(t, "optimum.ratio") - 0.25).abs() < 0.01);
    golden("resources_source_a", &o);
}

#[test]
fn resources_tiny_error() {
    let o = run(&["resources", "--eps", "1e-12"]);
    assert_eq!(
        at(&o.report.results, "targets.0.optimum.n_star").as_u64(),
        Some(1)
    );
}

#[test]
fn resources_boundaries() {
    let o = run(&["resources", "--boundaries"]);
    assert!((f(&o.report.results, "boundaries.p_cross_over_pth") - 0.39).abs() < 0.01);
    golden("resources_boundaries", &o);
}

#[test]
fn resources_isoline_csv() {
    let o = run(&[
        "resources",
        "--isolines",
        "--isoline-points",
        "11",
        "--format",
        "csv",
    ]);
    let csv = o.render(Format::Csv).unwrap();
    assert!(csv.starts_with("N,p_over_pth,cost_ratio,valid_linear\n"));
    assert!(csv.lines().count() > 11);
}

#[test]
fn binary_writes_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("r.json");
    let status = bin()
        .args([
            "resources",
            "--source",
            "A",
            "--output",
            out.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(v["command"], "resources");
}

#[test]
fn binary_exit_codes() {
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code();
    assert_eq!(code(&["simulate", "--n", "3"]), Some(0));
    assert_eq!(code(&["simulate", "--n", "2"]), Some(3));
    assert_eq!(code(&["simulate", "--eps", "1.5"]), Some(2));
    assert_eq!(code(&["simulate", "--bogus"]), Some(2));
    assert_eq!(code(&["resources", "--eps", "0.5"]), Some(5));
    assert_eq!(code(&["characterize", "data/missing.csv"]), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let one = dir.path().join("one.csv");
    std::fs::write(&one, "timestamp,protocol,value\n0,A,0.05\n30,A,0.06\n").unwrap();
    assert_eq!(code(&["extract", one.to_str().unwrap()]), Some(2));
}
