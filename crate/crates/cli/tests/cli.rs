use std::process::{Command, Output};

use serde_json::Value;

fn qgauss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qgauss"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn build_is_byte_for_byte_reproducible() {
    let a = qgauss(&["build", "--group", "sl_q", "--n", "3"]);
    let b = qgauss(&["build", "--group", "sl_q", "--n", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn build_contains_triple_and_assembled_t() {
    let doc = json(&qgauss(&["build", "--n", "2"]));
    assert_eq!(doc["t"]["display"][0][1], "(f1)*[K1^-1 ⊗ X1+]");
    assert_eq!(doc["factors"]["t_plus"]["display"][0][0], "[1 ⊗ K1]");
    assert_eq!(doc["factors"]["t_minus"]["display"][1][0], "(g1)*[X1- ⊗ 1]");
    assert!(doc["t"]["normal_form"]["entries"].is_array());
}

#[test]
fn rank_one_is_a_usage_error() {
    let out = qgauss(&["build", "--group", "sl_q", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_binding_is_a_usage_error() {
    assert_eq!(qgauss(&["build", "--f", "q^^2"]).status.code(), Some(2));
    assert_eq!(qgauss(&["build", "--bind", "c_plus=1"]).status.code(), Some(2));
    assert_eq!(qgauss(&["build", "--bind", "nonsense"]).status.code(), Some(2));
}

#[test]
fn unknown_check_exits_two() {
    assert_eq!(qgauss(&["verify", "--checks", "nonsense"]).status.code(), Some(2));
}

#[test]
fn verify_all_at_rank_three() {
    let out = qgauss(&["verify", "--group", "sl_q", "--n", "3", "--checks", "all"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json(&out);
    assert_eq!(reports.as_array().unwrap().len(), 5);
    assert!(reports[0].get("wall_time_us").is_none());
}

#[test]
fn perturbed_corner_exits_one_with_location() {
    let out = qgauss(&["verify", "--group", "sl_q", "--n", "2", "--perturb", "t11"]);
    assert_eq!(out.status.code(), Some(1));
    let reports = json(&out);
    let rtt = &reports[0];
    assert_eq!(rtt["check"], "rtt");
    assert_eq!(rtt["pass"], false);
    assert!(rtt["relations"][0]["first_nonzero"]["residual"].is_string());
}

#[test]
fn timings_are_opt_in() {
    let doc = json(&qgauss(&["verify", "--checks", "qdet", "--timings"]));
    assert!(doc[0]["wall_time_us"].is_u64());
}

#[test]
fn thread_count_does_not_change_output() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_qgauss"))
            .args(["verify", "--n", "3"])
            .env("QGAUSS_THREADS", threads)
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn output_file_and_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.json");
    let dest = dir.path().join("out.json");
    std::fs::write(&cfg, r#"{"group": "gl_pq_2", "c_plus": "formal"}"#).unwrap();
    let out = qgauss(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        dest.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&dest).unwrap()).unwrap();
    assert_eq!(doc[0]["group"], "gl_pq_2");
    assert_eq!(doc[0]["pass"], true);
}

#[test]
fn config_with_unknown_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("job.json");
    std::fs::write(&cfg, r#"{"n": 2, "verbose": true}"#).unwrap();
    let out = qgauss(&["build", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("verbose"));
}

#[test]
fn unit_element_is_the_identity() {
    let doc = json(&qgauss(&["rep", "--n", "2", "--element", "one"]));
    let m = &doc["matrices"][0]["matrix"];
    for i in 0..4 {
        for j in 0..4 {
            assert_eq!(m[i][j], if i == j { "1" } else { "0" });
        }
    }
}

#[test]
fn calibration_alias_is_accepted() {
    let a = qgauss(&["rep", "--n", "2", "--calibrate"]);
    let b = qgauss(&["rep", "--n", "2", "--calibrate-section5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn limit_needs_a_bound_lambda_parameter() {
    let out = qgauss(&[
        "limit",
        "--n",
        "2",
        "--f",
        "q^-1*lambda",
        "--g",
        "-q*lambda",
        "--lambda",
        "lambda",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let out = qgauss(&["limit", "--n", "2", "--f", "q^-1*lambda", "--g", "-q*lambda"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["m"][0][1], "(2)*[1 ⊗ X1+]");
}

#[test]
fn other_groups_reject_gauss_checks() {
    assert_eq!(
        qgauss(&["verify", "--group", "dual_sl2", "--checks", "gauss"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(qgauss(&["verify", "--group", "dual_sl2"]).status.code(), Some(0));
}
