use nhf::corank_engine::{enumerate_seeds, run_seed, seed_key_for, CaseStatus};
use nhf::exact_arith::ExactVector;
use nhf::explicit_models::oracle::{resolve, OracleOutcome, OracleReport};
use nhf::explicit_models::span_dim;
use nhf::par::Exec;
use nhf::root_systems::{RootSystem, TypeLabel};
use TypeLabel::*;

fn resolve_pair(l: TypeLabel, n: usize, a: &[i64], b: &[i64]) -> OracleReport {
    let rs = RootSystem::build(l, n).unwrap();
    let key = seed_key_for(&rs, &ExactVector::from_ints(a), &ExactVector::from_ints(b)).unwrap();
    let seed = enumerate_seeds(&rs).unwrap().into_iter().find(|s| s.key == key).unwrap();
    let (verdict, st) = run_seed(seed).unwrap();
    assert_eq!(verdict.status, CaseStatus::Saturated);
    resolve(&st, &verdict, Exec::default())
}

fn check_witness(rep: &OracleReport) {
    let w = rep.witness.as_ref().expect("refutation carries a witness");
    assert!(w.u.bracket(&w.v).is_zero());
    assert!(span_dim(&w.s0_basis) >= 2);
    for x in &w.s0_basis {
        for y in &w.s0_basis {
            assert!(x.bracket(y).is_zero());
        }
    }
}

#[test]
fn berger_seed_is_confirmed() {
    let rep = resolve_pair(B, 2, &[1, 0], &[-1, 1]);
    assert_eq!(rep.outcome, OracleOutcome::Confirmed, "{}", rep.detail);
}

#[test]
fn b2_quarter_and_half_pi_seeds_are_refuted() {
    for (a, b) in [(&[1, 0], &[1, 1]), (&[1, 1], &[1, -1])] {
        let rep = resolve_pair(B, 2, a, b);
        assert_eq!(rep.outcome, OracleOutcome::Refuted, "{a:?} {b:?}: {}", rep.detail);
        check_witness(&rep);
    }
}

#[test]
fn c3_three_quarter_pi_seed_is_refuted() {
    let rs = RootSystem::build(C, 3).unwrap();
    let mut refuted = 0;
    for seed in enumerate_seeds(&rs).unwrap() {
        if seed.angle() != Some("3π/4") {
            continue;
        }
        let (verdict, st) = run_seed(seed).unwrap();
        if verdict.status == CaseStatus::Saturated {
            let rep = resolve(&st, &verdict, Exec::default());
            assert_eq!(rep.outcome, OracleOutcome::Refuted, "{}", rep.detail);
            check_witness(&rep);
            refuted += 1;
        }
    }
    assert_eq!(refuted, 1);
}

#[test]
fn b_series_short_long_seeds_are_refuted_by_conjugation() {
    for n in [3usize, 4] {
        let pad = |xs: &[i64]| {
            let mut v = xs.to_vec();
            v.resize(n, 0);
            v
        };
        for (a, b) in [([1, 0], [1, 1]), ([1, 1], [1, -1])] {
            let rep = resolve_pair(B, n, &pad(&a), &pad(&b));
            assert_eq!(rep.outcome, OracleOutcome::Refuted, "B{n} {a:?} {b:?}: {}", rep.detail);
            check_witness(&rep);
        }
    }
}

#[test]
fn genuine_survivors_are_not_refuted() {
    for (l, n, a, b) in [
        (D, 4, vec![1, 1, 0, 0], vec![-1, 1, 0, 0]),
        (B, 3, vec![1, 1, 0], vec![0, 0, -1]),
        (B, 4, vec![1, 1, 0, 0], vec![0, 0, -1, -1]),
    ] {
        let rep = resolve_pair(l, n, &a, &b);
        assert_ne!(rep.outcome, OracleOutcome::Refuted, "{l}{n}: {}", rep.detail);
    }
}
