use nhf::corank_engine::{enumerate_seeds, run_corank_one, run_seed, seed_key_for, CaseKind, CaseStatus, SeedOutcome};
use nhf::exact_arith::ExactVector;
use nhf::par::Exec;
use nhf::root_systems::{RootSystem, SimpleType, TypeLabel};
use proptest::prelude::*;
use TypeLabel::*;

fn v(xs: &[i64]) -> ExactVector {
    ExactVector::from_ints(xs)
}

fn seed_outcome(rs: &RootSystem, a: &[i64], b: &[i64]) -> SeedOutcome {
    let key = seed_key_for(rs, &v(a), &v(b)).unwrap();
    let rep = run_corank_one(rs, Exec::default()).unwrap();
    rep.seeds.into_iter().find(|s| s.key == key).expect("seed class present")
}

fn h_of(s: &SeedOutcome) -> String {
    assert_eq!(s.verdict.status, CaseStatus::Saturated, "{}: {}", s.id, s.verdict.detail);
    s.verdict.h_label.clone().unwrap()
}

#[test]
fn f4_and_g2_have_no_survivors() {
    for (l, n) in [(F4, 4), (G2, 2)] {
        let rs = RootSystem::build(l, n).unwrap();
        let rep = run_corank_one(&rs, Exec::default()).unwrap();
        assert!(!rep.seeds.is_empty());
        for s in &rep.seeds {
            assert_eq!(s.verdict.status, CaseStatus::Contradiction, "{}", s.id);
            assert!(s.verdict.rule.is_some());
        }
    }
}

#[test]
fn classical_survivors() {
    let d4 = RootSystem::build(D, 4).unwrap();
    assert_eq!(h_of(&seed_outcome(&d4, &[1, 1, 0, 0], &[-1, 1, 0, 0])), "B3");
    let b4 = RootSystem::build(B, 4).unwrap();
    assert_eq!(h_of(&seed_outcome(&b4, &[1, 1, 0, 0], &[0, 0, -1, -1])), "B3");
    let b3 = RootSystem::build(B, 3).unwrap();
    assert_eq!(h_of(&seed_outcome(&b3, &[1, 1, 0], &[0, 0, -1])), "G2");
    let b2 = RootSystem::build(B, 2).unwrap();
    assert_eq!(h_of(&seed_outcome(&b2, &[1, 1], &[0, -1])), "A1");
}

#[test]
fn a4_pair_gives_b2_plus_line() {
    let rs = RootSystem::build(A, 4).unwrap();
    let rep = run_corank_one(&rs, Exec::default()).unwrap();
    let sat: Vec<String> = rep
        .seeds
        .iter()
        .filter(|s| s.case == CaseKind::III && s.verdict.status == CaseStatus::Saturated)
        .map(|s| s.verdict.h_label.clone().unwrap())
        .collect();
    assert_eq!(sat, vec!["B2⊕ℝ".to_string()]);
}

#[test]
fn case_one_seeds_reproduce_spheres() {
    for n in 1..=4 {
        let rs = RootSystem::build(A, n).unwrap();
        let rep = run_corank_one(&rs, Exec::default()).unwrap();
        let case_i: Vec<&SeedOutcome> = rep.seeds.iter().filter(|s| s.case == CaseKind::I).collect();
        assert_eq!(case_i.len(), 1, "A{n}");
        assert_eq!(case_i[0].verdict.status, CaseStatus::Saturated);
    }
}

#[test]
fn c_series_closes_except_the_three_quarter_pi_endgame() {
    let rs = RootSystem::build(C, 4).unwrap();
    let rep = run_corank_one(&rs, Exec::default()).unwrap();
    for s in rep.seeds.iter().filter(|s| s.case == CaseKind::III) {
        assert_eq!(s.verdict.status, CaseStatus::Contradiction, "{}", s.id);
    }
    let rs = RootSystem::build(C, 3).unwrap();
    let rep = run_corank_one(&rs, Exec::default()).unwrap();
    let open: Vec<&SeedOutcome> = rep
        .seeds
        .iter()
        .filter(|s| s.case == CaseKind::III && s.verdict.status == CaseStatus::Saturated)
        .collect();
    assert_eq!(open.len(), 1);
    assert_eq!(open[0].angle.as_deref(), Some("3π/4"));
}

#[test]
fn exceptional_e_reductions() {
    for (l, n, want) in [(E6, 6, "D5⊕ℝ"), (E7, 7, "D6⊕A1"), (E8, 8, "D8")] {
        let rs = RootSystem::build(l, n).unwrap();
        let rep = run_corank_one(&rs, Exec::default()).unwrap();
        let pairs: Vec<&SeedOutcome> = rep.seeds.iter().filter(|s| s.case == CaseKind::III).collect();
        assert_eq!(pairs.len(), 1, "{l}");
        let s = pairs[0];
        assert_eq!(s.angle.as_deref(), Some("π/2"));
        assert_eq!(s.verdict.status, CaseStatus::Contradiction);
        assert_eq!(s.verdict.k_bound.as_ref().unwrap().to_string(), want, "{l}");
    }
}

#[test]
fn case_two_with_a1() {
    let rs = RootSystem::direct_sum(&[SimpleType::new(A, 1), SimpleType::new(A, 1)]).unwrap();
    let rep = run_corank_one(&rs, Exec::default()).unwrap();
    let sat: Vec<String> = rep
        .seeds
        .iter()
        .filter(|s| s.case == CaseKind::II && s.verdict.status == CaseStatus::Saturated)
        .map(|s| s.verdict.h_label.clone().unwrap())
        .collect();
    assert_eq!(sat, vec!["Δ(A1)".to_string()]);
    let rs = RootSystem::direct_sum(&[SimpleType::new(A, 2), SimpleType::new(A, 2)]).unwrap();
    let rep = run_corank_one(&rs, Exec::default()).unwrap();
    assert!(rep
        .seeds
        .iter()
        .filter(|s| s.case == CaseKind::II)
        .all(|s| s.verdict.status == CaseStatus::Contradiction));
}

#[test]
fn traces_end_in_the_verdict() {
    let rs = RootSystem::build(B, 3).unwrap();
    for seed in enumerate_seeds(&rs).unwrap() {
        let (verdict, st) = run_seed(seed).unwrap();
        assert!(!st.trace.is_empty());
        if verdict.status == CaseStatus::Contradiction {
            assert_eq!(st.trace.last().unwrap().rule, verdict.rule.unwrap());
        }
    }
}

#[test]
fn sequential_and_parallel_agree() {
    let rs = RootSystem::build(B, 4).unwrap();
    let a = serde_json::to_string(&run_corank_one(&rs, Exec::Sequential).unwrap()).unwrap();
    let b = serde_json::to_string(&run_corank_one(&rs, Exec::Parallel).unwrap()).unwrap();
    assert_eq!(a, b);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]
    #[test]
    fn seed_keys_are_weyl_invariant(i in 0usize..48, j in 0usize..48, w in 0usize..48) {
        let rs = RootSystem::build(B, 4).unwrap();
        let n = rs.len();
        let (i, j, w) = (i % n, j % n, w % n);
        prop_assume!(i != j && rs.neg(i) != j);
        let a = rs.root(i);
        let b = rs.root(j);
        let k1 = seed_key_for(&rs, a, b);
        let wa = rs.reflect(rs.root(w), a).unwrap();
        let wb = rs.reflect(rs.root(w), b).unwrap();
        let k2 = seed_key_for(&rs, &wa, &wb);
        match (k1, k2) {
            (Ok(x), Ok(y)) => prop_assert_eq!(x, y),
            (Err(_), Err(_)) => {}
            _ => prop_assert!(false, "validity differs under reflection"),
        }
    }
}
