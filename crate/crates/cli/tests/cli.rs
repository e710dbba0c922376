//! End-to-end runs of the `qsem` binary: output documents, exit codes,
//! and agreement with the library on small oracles.

use qsem_core::modelcheck::Universe;
use qsem_core::qcat::QMorphism;
use qsem_core::qlc::{denote_type, QlcType};
use std::path::Path;
use std::process::{Command, Output};

fn qsem(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qsem"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn small_config(dir: &Path) -> std::path::PathBuf {
    let mut u = Universe::default();
    u.finset_max = 2;
    u.max_family = 2;
    u.samples = 6;
    u.seed = 3;
    let path = dir.join("small.json");
    std::fs::write(&path, serde_json::to_string(&u).unwrap()).unwrap();
    path
}

#[test]
fn enumerate_hom_matches_the_completion_counts() {
    let out = qsem(&["enumerate-hom", "--src", "(A,A)", "--dst", "(A)"]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["count"], 2);
    assert_eq!(doc["morphisms"].as_array().unwrap().len(), 2);

    // families: two ways to pick the member plus none at all
    let out = qsem(&["enumerate-hom", "--src", "{(A)}", "--dst", "{(A),(A)}"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["count"], 2);

    let out = qsem(&["enumerate-hom", "--src", "(A)", "--dst", "(B)"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["count"], 0);
}

#[test]
fn denote_emits_the_identity_channel_for_teleport() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("channel.json");
    let program = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../programs/teleport.qlc");
    let out = qsem(&[
        "denote",
        program.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["type"], "qubit");
    assert_eq!(doc["source_dims"], serde_json::json!([2]));

    let expected = QMorphism::identity(&denote_type(&QlcType::Qubit));
    let want = expected.entry(0, 0).choi();
    let got = doc["entries"][0]["choi"].as_array().unwrap();
    for i in 0..4 {
        for j in 0..4 {
            let cell = got[i][j].as_array().unwrap();
            let (re, im) = (cell[0].as_f64().unwrap(), cell[1].as_f64().unwrap());
            let w = want.get(i, j);
            assert!(
                (re - w.re).abs() <= 1e-9 && (im - w.im).abs() <= 1e-9,
                "Choi entry ({i},{j}) is {re}+{im}i, expected {w}"
            );
        }
    }
}

#[test]
fn denote_rejects_ill_typed_programs_with_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.qlc");
    std::fs::write(&bad, "let x = new_qubit(0) in (x, x)").unwrap();
    let out = qsem(&["denote", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("more than once"), "stderr: {msg}");
}

#[test]
fn exit_codes_follow_the_contract() {
    // unknown flag: usage error
    let out = qsem(&["check-model", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
    // unreadable config: IO error
    let out = qsem(&["check-model", "--config", "/nonexistent/universe.json"]);
    assert_eq!(out.status.code(), Some(3));
    // malformed object expression: usage error
    let out = qsem(&["enumerate-hom", "--src", "(A", "--dst", "(A)"]);
    assert_eq!(out.status.code(), Some(2));
    // mixing a sequence with a family: usage error
    let out = qsem(&["enumerate-hom", "--src", "(A)", "--dst", "{(A)}"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn filter_narrows_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let config = small_config(dir.path());
    let out_path = dir.path().join("report.json");
    let out = qsem(&[
        "check-model",
        "--config",
        config.to_str().unwrap(),
        "--filter",
        "phi-*",
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{out:?}");
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let checks = doc["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for check in checks {
        let name = check["name"].as_str().unwrap();
        assert!(name.starts_with("phi-"), "unexpected check {name}");
    }
    assert_eq!(doc["tool"], "qsem");
    assert_eq!(doc["schema_version"], 1);
    assert!(doc["config_hash"].as_str().unwrap().len() == 64);
}

#[test]
fn check_presheaf_passes_and_reports_every_law() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("lab.json");
    let out = qsem(&["check-presheaf", "--out", out_path.to_str().unwrap()]);
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(doc["checks"].as_array().unwrap().len(), 7);
    assert_eq!(doc["all_pass"], true);
}
