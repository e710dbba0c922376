//! End-to-end verifier runs over a mid-size universe.

use qsem_core::cpm::HObject;
use qsem_core::linalg::Tolerance;
use qsem_core::modelcheck::{
    check_concrete_embedding, check_hypotheses, run_negative_controls, CheckStatus, Universe,
};

fn mid() -> Universe {
    Universe {
        finset_max: 2,
        k_objects: vec![
            HObject::new("A", 1).unwrap(),
            HObject::new("B", 2).unwrap(),
            HObject::new("C", 3).unwrap(),
        ],
        max_seq_len: 2,
        max_family: 2,
        samples: 8,
        seed: 3,
        tol: Tolerance::default(),
        dim_cap: 16,
    }
}

#[test]
fn mid_universe_hypotheses_all_pass() {
    let report = check_hypotheses(&mid());
    assert_eq!(report.records.len(), 17);
    for r in &report.records {
        assert_eq!(r.status, CheckStatus::Pass, "{}: {}", r.name, r.evidence);
    }
}

#[test]
fn mid_universe_embedding_all_pass() {
    let report = check_concrete_embedding(&mid());
    for r in &report.records {
        assert_eq!(r.status, CheckStatus::Pass, "{}: {}", r.name, r.evidence);
    }
}

#[test]
fn mid_universe_controls_behave() {
    for outcome in run_negative_controls(&mid()) {
        assert!(
            outcome.ok,
            "{}: expected {:?}, observed {:?}",
            outcome.control, outcome.expected_failures, outcome.observed_failures
        );
    }
}

#[test]
fn reports_are_deterministic_across_runs() {
    let a = serde_json::to_string(&check_hypotheses(&mid())).unwrap();
    let b = serde_json::to_string(&check_hypotheses(&mid())).unwrap();
    assert_eq!(a, b);
}

#[test]
fn seed_changes_evidence_but_not_verdicts() {
    let mut other = mid();
    other.seed = 4;
    let a = check_hypotheses(&mid());
    let b = check_hypotheses(&other);
    for (ra, rb) in a.records.iter().zip(&b.records) {
        assert_eq!(ra.name, rb.name);
        assert_eq!(ra.status, rb.status);
    }
}
