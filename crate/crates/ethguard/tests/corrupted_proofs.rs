mod common;

use std::collections::BTreeSet;

use common::corrupt::{corruptions, Case};
use ethguard_core::prover::{Rule, VerifyError};
use ethguard_core::Proof;

#[test]
fn every_corruption_is_rejected() {
    let all = corruptions();
    let accepted: Vec<_> = all
        .iter()
        .filter(|(_, r)| r.is_ok())
        .map(|(l, _)| *l)
        .collect();
    assert!(accepted.is_empty(), "accepted: {accepted:?}");
}

#[test]
fn there_are_at_least_twenty_distinct_corruptions() {
    let all = corruptions();
    let labels: BTreeSet<_> = all.iter().map(|(l, _)| *l).collect();
    assert_eq!(labels.len(), all.len());
    assert!(all.len() >= 20, "{}", all.len());
}

#[test]
fn step_errors_point_at_the_corrupted_step() {
    let mp = Case::new("(P) (implies (P) (Q))", "(Q)");
    let r = mp.idx(Rule::Resolve);
    let bad = mp.mutate(|s| s[r].rule = Rule::Factor);
    match mp.check(&bad) {
        Err(VerifyError::Step { step, .. }) => assert_eq!(step, r + 1),
        other => panic!("{other:?}"),
    }
    assert_eq!(mp.check(&Proof::default()), Err(VerifyError::Empty));
}
