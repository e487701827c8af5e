//! End-to-end tests of the `charkern` binary: exit-code contract, JSON
//! outputs, self-verifying counterexamples, and deterministic seeding.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_charkern"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("valid JSON on stdout")
}

fn write_json(path: &Path, value: &Value) {
    std::fs::write(path, serde_json::to_string_pretty(value).unwrap()).unwrap();
}

fn z2_kernel_file(dir: &Path, l0: f64, l1: f64) -> std::path::PathBuf {
    let path = dir.join("kernel.json");
    write_json(
        &path,
        &json!({
            "space": {"points": ["0", "1"], "nu": [0.5, 0.5]},
            "gram": [[l0 + l1, l0 - l1], [l0 - l1, l0 + l1]],
        }),
    );
    path
}

#[test]
fn unknown_subcommand_exits_one() {
    let output = run(&["frobnicate"]);
    assert_eq!(output.status.code(), Some(1));
}

#[test]
fn parse_error_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let kernel = z2_kernel_file(dir.path(), 1.0, 0.5);
    let output = run(&[
        "score",
        "--kernel",
        kernel.to_str().unwrap(),
        "--forecasts",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn space_mismatch_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let kernel = z2_kernel_file(dir.path(), 1.0, 0.5);
    let forecasts = dir.path().join("forecasts.json");
    write_json(
        &forecasts,
        &json!({
            "space": {"points": ["a", "b", "c"], "nu": [0.3, 0.3, 0.4]},
            "records": [{"observation": "a", "mass": [0.2, 0.3, 0.5]}],
        }),
    );
    let output = run(&[
        "score",
        "--kernel",
        kernel.to_str().unwrap(),
        "--forecasts",
        forecasts.to_str().unwrap(),
    ]);
    assert_eq!(output.status.code(), Some(3));
}

#[test]
fn constant_kernel_verdict_names_the_dirac_witness() {
    let output = run(&["--json", "verdict", "--group", "2", "--gram", "[[1,1],[1,1]]"]);
    let value = stdout_json(&output);
    assert_eq!(value["characteristic"], "no");
    assert_eq!(value["universal"], "no");
    let witness = value["witnesses"][0].as_array().unwrap();
    assert!((witness[0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((witness[1].as_f64().unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn dirac_forecast_scores_match_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let (l0, l1) = (1.0, 0.5);
    let kernel = z2_kernel_file(dir.path(), l0, l1);
    let forecasts = dir.path().join("forecasts.json");
    write_json(
        &forecasts,
        &json!({
            "records": [
                {"id": "r0", "observation": "1", "mass": [1.0, 0.0]},
            ],
        }),
    );
    let output = run(&[
        "--json",
        "score",
        "--kernel",
        kernel.to_str().unwrap(),
        "--forecasts",
        forecasts.to_str().unwrap(),
    ]);
    let value = stdout_json(&output);
    // S(δ_0, 1) = −k(0,1) + k(0,0)/2
    let want = -(l0 - l1) + 0.5 * (l0 + l1);
    let got = value["records"][0]["score"].as_f64().unwrap();
    assert!((got - want).abs() < 1e-12);
}

#[test]
fn kronecker_kernel_reproduces_brier_scores() {
    let dir = tempfile::tempdir().unwrap();
    let kernel = dir.path().join("kernel.json");
    write_json(
        &kernel,
        &json!({
            "space": {"points": ["1", "2", "3"], "nu": [1.0, 1.0, 1.0]},
            "gram": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }),
    );
    let p = [0.2, 0.5, 0.3];
    let forecasts = dir.path().join("forecasts.json");
    write_json(
        &forecasts,
        &json!({
            "records": [
                {"observation": "1", "mass": p},
                {"observation": "2", "mass": p},
                {"observation": "3", "mass": p},
            ],
        }),
    );
    let output = run(&[
        "--json",
        "score",
        "--kernel",
        kernel.to_str().unwrap(),
        "--forecasts",
        forecasts.to_str().unwrap(),
    ]);
    let value = stdout_json(&output);
    let sum_sq: f64 = p.iter().map(|v| v * v).sum();
    for (i, record) in value["records"].as_array().unwrap().iter().enumerate() {
        let score = record["score"].as_f64().unwrap();
        let brier = sum_sq + 1.0 - 2.0 * p[i];
        assert!((2.0 * score + 1.0 - brier).abs() < 1e-12, "record {i}");
    }
}

#[test]
fn simulated_scoring_is_deterministic_and_truth_telling_wins() {
    let dir = tempfile::tempdir().unwrap();
    let kernel = z2_kernel_file(dir.path(), 1.0, 0.5);
    let truth = dir.path().join("truth.json");
    write_json(
        &truth,
        &json!({"points": ["0", "1"], "nu": [0.5, 0.5], "mass": [0.7, 0.3]}),
    );
    let other = dir.path().join("other.json");
    write_json(
        &other,
        &json!({"points": ["0", "1"], "nu": [0.5, 0.5], "mass": [0.4, 0.6]}),
    );
    let args = [
        "--json",
        "score",
        "--kernel",
        kernel.to_str().unwrap(),
        "--forecasts",
        truth.to_str().unwrap(),
        "--compare",
        other.to_str().unwrap(),
        "--simulate",
        "20000",
        "--truth",
        truth.to_str().unwrap(),
        "--seed",
        "7",
    ];
    let output = run(&args);
    let rerun = run(&args);
    assert_eq!(output.stdout, rerun.stdout, "same seed, same output");

    let value = stdout_json(&output);
    let mean_diff = value["summary"]["mean_diff"].as_f64().unwrap();
    let half_mmd = value["summary"]["mean_half_mmd_sq"].as_f64().unwrap();
    // Observations follow the first forecaster, so the mean score gap
    // estimates half the squared kernel mean distance.
    assert!(mean_diff > 0.0, "truth-telling must win: {mean_diff}");
    let records = value["records"].as_array().unwrap();
    let n = records.len() as f64;
    let diffs: Vec<f64> = records
        .iter()
        .map(|r| r["diff"].as_f64().unwrap())
        .collect();
    let var = diffs
        .iter()
        .map(|d| (d - mean_diff).powi(2))
        .sum::<f64>()
        / (n - 1.0);
    let three_sigma = 3.0 * (var / n).sqrt();
    assert!(
        (mean_diff - half_mmd).abs() <= three_sigma,
        "gap {mean_diff} vs {half_mmd} (3σ = {three_sigma})"
    );
}

#[test]
fn near_zero_counterexample_is_self_certifying() {
    let output = run(&[
        "--json",
        "counterexample",
        "--group",
        "16",
        "--decay",
        "0.5",
        "--eps",
        "0.05",
    ]);
    let value = stdout_json(&output);
    let v = &value["verification"];
    assert_eq!(v["tv_ok"], true);
    assert_eq!(v["mmd_ok"], true);
    assert!((v["tv"].as_f64().unwrap() - 2.0).abs() <= 1e-10);
    assert!(v["mmd_sq"].as_f64().unwrap().sqrt() <= 0.05);
}

#[test]
fn mixed_counterexample_respects_delta() {
    let output = run(&[
        "--json",
        "counterexample",
        "--group",
        "16",
        "--decay",
        "0.5",
        "--eps",
        "0.05",
        "--delta",
        "0.3",
    ]);
    let value = stdout_json(&output);
    let v = &value["verification"];
    assert_eq!(v["tv_ok"], true);
    assert_eq!(v["base_distance_ok"], true);
    assert!((v["tv"].as_f64().unwrap() - 0.3).abs() <= 1e-10);
}

#[test]
fn zero_mmd_counterexample_from_rank_deficient_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let kernel = dir.path().join("kernel.json");
    // K = AᵀA with rows orthogonal to (1, -1, 0).
    write_json(
        &kernel,
        &json!({
            "space": {"points": ["a", "b", "c"], "nu": [1.0/3.0, 1.0/3.0, 1.0/3.0]},
            "gram": [[2.0, 2.0, 1.0], [2.0, 2.0, 1.0], [1.0, 1.0, 2.0]],
        }),
    );
    let output = run(&[
        "--json",
        "counterexample",
        "--kind",
        "zero-mmd",
        "--kernel",
        kernel.to_str().unwrap(),
        "--eps-tv",
        "0.5",
    ]);
    let value = stdout_json(&output);
    let v = &value["verification"];
    assert_eq!(v["tv_ok"], true);
    assert_eq!(v["mmd_ok"], true);
    assert_eq!(v["base_distance_ok"], true);
    assert!(v["mmd_sq"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn no_uniform_counterexample_reports_exact_distance() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("coeffs.json");
    write_json(&coeffs, &json!([1.0, 0.5, 0.25, 0.125, 0.0625, 0.125, 0.25, 0.5]));
    let output = run(&[
        "--json",
        "counterexample",
        "--kind",
        "no-uniform",
        "--group",
        "8",
        "--coeffs",
        coeffs.to_str().unwrap(),
        "--j",
        "3",
    ]);
    let value = stdout_json(&output);
    assert_eq!(value["ok"], true);
    assert!((value["total_mass"].as_f64().unwrap() - 1.0).abs() <= 1e-12);
    assert!(value["tv"].as_f64().unwrap() >= value["tv_lower"].as_f64().unwrap() - 1e-12);
}

#[test]
fn sphere_verdict_all_positive_is_universal() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("allpos.json");
    write_json(&coeffs, &json!({"d": 2, "b": [0.5, 0.3, 0.2, 0.1], "tail": "positive"}));
    let output = run(&[
        "--json",
        "sphere-verdict",
        "--d",
        "2",
        "--coeffs",
        coeffs.to_str().unwrap(),
        "--tail",
        "positive",
    ]);
    let value = stdout_json(&output);
    assert_eq!(value["verdict"]["universal"], "yes");
    assert_eq!(value["verdict"]["characteristic"], "yes");
    assert_eq!(value["strictly_pd"], "yes");
}

#[test]
fn sphere_verdict_zero_origin_is_characteristic_only() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("b.json");
    write_json(&coeffs, &json!({"d": 2, "b": [0.0, 0.3, 0.2], "tail": "positive"}));
    let output = run(&[
        "--json",
        "sphere-verdict",
        "--coeffs",
        coeffs.to_str().unwrap(),
    ]);
    let value = stdout_json(&output);
    assert_eq!(value["verdict"]["characteristic"], "yes");
    assert_eq!(value["verdict"]["universal"], "no");
}

#[test]
fn spectrum_dumps_sorted_eigenvalues() {
    let dir = tempfile::tempdir().unwrap();
    let kernel = z2_kernel_file(dir.path(), 1.0, 0.5);
    let output = run(&["--json", "spectrum", "--kernel", kernel.to_str().unwrap()]);
    let value = stdout_json(&output);
    let lambdas = value["lambdas"].as_array().unwrap();
    assert!((lambdas[0].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!((lambdas[1].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(value["index_of_one"], 0);
}

#[test]
fn group_verdict_reads_coefficients_and_kappa() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("coeffs.json");
    write_json(&coeffs, &json!([1.0, 0.5]));
    let output = run(&[
        "--json",
        "group-verdict",
        "--moduli",
        "2",
        "--coeffs",
        coeffs.to_str().unwrap(),
    ]);
    let value = stdout_json(&output);
    assert_eq!(value["verdict"]["universal"], "yes");

    // A kappa that is not positive definite is reported, not an error.
    let kappa = dir.path().join("kappa.json");
    write_json(&kappa, &json!({"kappa": [1.0, 2.0]}));
    let output = run(&[
        "--json",
        "group-verdict",
        "--moduli",
        "2",
        "--kappa",
        kappa.to_str().unwrap(),
    ]);
    let value = stdout_json(&output);
    assert_eq!(value["is_kernel"], false);
    assert!(value["negative_coefficients"].as_array().unwrap().len() == 1);
}

#[test]
fn sphere_embed_detects_constant_embeddings() {
    let dir = tempfile::tempdir().unwrap();
    let coeffs = dir.path().join("b.json");
    // Power basis, all even coefficients >= 4 vanish.
    write_json(
        &coeffs,
        &json!({
            "d": 2,
            "b": [0.4, 0.35, 0.3, 0.25, 0.0, 0.15, 0.0, 0.08, 0.0, 0.04],
            "tail": "zero",
            "basis": "power",
        }),
    );
    let output = run(&[
        "--json",
        "sphere-embed",
        "--coeffs",
        coeffs.to_str().unwrap(),
        "--n",
        "4",
        "--a",
        "0.5",
    ]);
    let value = stdout_json(&output);
    assert_eq!(value["constant_embedding"], true);

    // A universal sequence keeps the degree-n block alive.
    let universal = dir.path().join("u.json");
    write_json(
        &universal,
        &json!({"d": 2, "b": [1.0, 1.0, 0.5, 0.1667], "tail": "positive", "basis": "power"}),
    );
    let output = run(&[
        "--json",
        "sphere-embed",
        "--coeffs",
        universal.to_str().unwrap(),
        "--n",
        "2",
        "--a",
        "0.5",
    ]);
    let value = stdout_json(&output);
    assert_eq!(value["constant_embedding"], false);
}

#[test]
fn thread_cap_env_var_is_accepted() {
    let dir = tempfile::tempdir().unwrap();
    let kernel = z2_kernel_file(dir.path(), 1.0, 0.5);
    let forecasts = dir.path().join("forecasts.json");
    write_json(
        &forecasts,
        &json!({"records": [{"observation": "0", "mass": [0.6, 0.4]}]}),
    );
    let output = bin()
        .env("CHARKERN_THREADS", "2")
        .args([
            "--json",
            "score",
            "--kernel",
            kernel.to_str().unwrap(),
            "--forecasts",
            forecasts.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(output.status.success());
}
