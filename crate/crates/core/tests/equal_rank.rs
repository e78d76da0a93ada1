use std::collections::BTreeSet;

use nhf::equal_rank::{
    classify_equal_rank, classify_equal_rank_with, evaluate, lemma1_part1, lemma1_part2, pruned_survivors,
    EqualRankCandidate, FilterRule,
};
use nhf::par::Exec;
use nhf::root_systems::{RootSet, RootSystem, TypeLabel};
use TypeLabel::*;

fn survivors(l: TypeLabel, n: usize) -> BTreeSet<String> {
    classify_equal_rank(l, n)
        .unwrap()
        .survivors()
        .iter()
        .map(|c| c.h_type.clone())
        .collect()
}

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

#[test]
fn survivor_sets() {
    assert_eq!(survivors(A, 1), set(&["ℝ"]));
    assert_eq!(survivors(A, 2), set(&["A1⊕ℝ"]));
    assert_eq!(survivors(A, 3), set(&["A2⊕ℝ"]));
    assert_eq!(survivors(A, 4), set(&["A3⊕ℝ"]));
    assert_eq!(survivors(B, 2), set(&["A1⊕ℝ", "A1⊕A1"]));
    assert_eq!(survivors(B, 3), set(&["A3"]), "D3 is reported as A3");
    assert_eq!(survivors(B, 4), set(&["D4"]));
    assert_eq!(survivors(C, 3), set(&["B2⊕ℝ", "B2⊕A1"]));
    assert_eq!(survivors(C, 4), set(&["C3⊕ℝ", "C3⊕A1"]));
    assert!(survivors(D, 4).is_empty());
    assert_eq!(survivors(G2, 2), set(&["A2"]));
    assert_eq!(survivors(F4, 4), set(&["B4"]));
}

#[test]
fn pruned_descent_matches_full_filter() {
    for (l, n) in [(A, 3), (A, 4), (B, 3), (B, 4), (C, 3), (C, 4), (D, 4), (G2, 2), (F4, 4)] {
        let rs = RootSystem::build(l, n).unwrap();
        let pruned: BTreeSet<String> = pruned_survivors(&rs)
            .unwrap()
            .into_iter()
            .map(|s| rs.identify_type(&s).unwrap().to_string())
            .collect();
        assert_eq!(pruned, survivors(l, n), "{l}{n}");
    }
}

#[test]
fn exec_paths_agree() {
    let a = classify_equal_rank_with(C, 4, 8, Exec::Sequential).unwrap();
    let b = classify_equal_rank_with(C, 4, 8, Exec::Parallel).unwrap();
    assert_eq!(a, b);
}

#[test]
fn torus_of_a2_fails_the_hexagon_filter_but_not_the_commuting_pair_filter() {
    let rs = RootSystem::build(A, 2).unwrap();
    let cand = EqualRankCandidate::new(&rs, RootSet::empty(rs.len())).unwrap();
    assert!(lemma1_part1(&cand).passed());
    let v = lemma1_part2(&cand);
    assert_eq!(v.failing_rule, Some(FilterRule::HexagonInM));
    assert!(!evaluate(&cand).passed());
}

#[test]
fn every_rejection_has_a_witness() {
    let rep = classify_equal_rank(B, 4).unwrap();
    for c in &rep.candidates {
        if c.failing_rule.is_some() {
            assert!(!c.witness.is_empty(), "{}", c.h_type);
        }
    }
}

#[test]
fn survivors_are_named() {
    for (l, n) in [(A, 3), (B, 2), (C, 3), (G2, 2), (F4, 4)] {
        for c in classify_equal_rank(l, n).unwrap().survivors() {
            assert!(c.space.is_some(), "{l}{n} {}", c.h_type);
        }
    }
}
