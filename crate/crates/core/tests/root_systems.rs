use nhf::exact_arith::{rat, ExactVector, QExt};
use nhf::root_systems::{
    brute_force_closed, Decomposition, RootSet, RootSystem, SimpleType, SumDiff, TypeLabel,
};
use TypeLabel::*;

fn v(xs: &[i64]) -> ExactVector {
    ExactVector::from_ints(xs)
}

fn half(xs: &[i64]) -> ExactVector {
    ExactVector::new(xs.iter().map(|&x| QExt::from_ratio(x, 2)).collect())
}

fn all_types() -> Vec<(TypeLabel, usize)> {
    let mut t = Vec::new();
    for n in 1..=5 {
        t.push((A, n));
        t.push((B, n));
        t.push((C, n));
    }
    for n in 2..=5 {
        t.push((D, n));
    }
    t.extend([(G2, 2), (F4, 4), (E6, 6), (E7, 7), (E8, 8)]);
    t
}

#[test]
fn root_counts_match_classical_values() {
    for (l, n) in all_types() {
        let rs = RootSystem::build(l, n).unwrap();
        assert_eq!(rs.len(), SimpleType::new(l, n).root_count(), "{l}{n}");
        for i in 0..rs.len() {
            assert_eq!(rs.root(rs.neg(i)), &(-rs.root(i)));
        }
    }
}

#[test]
fn identify_type_recovers_every_full_system() {
    for (l, n) in all_types() {
        let rs = RootSystem::build(l, n).unwrap();
        let d = rs.identify_type(&rs.all()).unwrap();
        let expected = Decomposition::new(vec![SimpleType::new(l, n)], 0).normalized();
        if l == D && n == 2 {
            assert_eq!(d.normalized(), Decomposition::parse("A1+A1").unwrap());
        } else {
            assert_eq!(d.normalized(), expected, "{l}{n}");
        }
    }
}

#[test]
fn reflections_preserve_roots() {
    for (l, n) in all_types().into_iter().filter(|t| t.1 <= 4) {
        let rs = RootSystem::build(l, n).unwrap();
        for a in 0..rs.len() {
            for b in 0..rs.len() {
                let w = rs.reflect(rs.root(a), rs.root(b)).unwrap();
                assert!(rs.is_root(&w));
                assert_eq!(rs.index_of(&w), Some(rs.reflect_idx(a, b)));
            }
        }
    }
}

#[test]
fn crystallographic_menu() {
    for (l, n) in all_types() {
        let rs = RootSystem::build(l, n).unwrap();
        for a in 0..rs.len() {
            for b in 0..rs.len() {
                let c = rs.angle_class_idx(a, b);
                assert!(c.four_cos_sq.is_integer() && c.four_cos_sq <= rat(4, 1));
                let ok = [rat(1, 1), rat(2, 1), rat(3, 1), rat(1, 2), rat(1, 3)];
                assert!(ok.contains(&c.len_ratio_sq), "{l}{n}");
            }
        }
    }
}

#[test]
fn membership_examples() {
    let f4 = RootSystem::build(F4, 4).unwrap();
    assert!(f4.is_root(&v(&[1, 1, 0, 0])));
    assert!(!f4.is_root(&v(&[2, 1, 0, 0])));
    let c3 = RootSystem::build(C, 3).unwrap();
    assert!(c3.is_root(&v(&[1, 0, 1])));
    let a2 = RootSystem::build(A, 2).unwrap();
    assert_eq!(a2.len(), 6);
    assert_eq!(a2.ambient_dim, 3);
    let g2 = RootSystem::build(G2, 2).unwrap();
    assert!(g2.is_root(&ExactVector::new(vec![QExt::sqrt3_times(rat(1, 1)), QExt::zero()])));
    assert!(g2.is_root(&v(&[0, -1])));
}

#[test]
fn sum_diff_examples() {
    let b2 = RootSystem::build(B, 2).unwrap();
    assert_eq!(b2.sum_diff_status(&v(&[1, 1]), &v(&[1, -1])).unwrap(), SumDiff::Neither);
    let a2 = RootSystem::build(A, 2).unwrap();
    assert_eq!(
        a2.sum_diff_status(&v(&[1, -1, 0]), &v(&[0, 1, -1])).unwrap(),
        SumDiff::SumOnly
    );
    let f4 = RootSystem::build(F4, 4).unwrap();
    // e1 ± ½(e1+e2+e3+e4) = ½(±e1+e2+e3+e4) up to sign, both half-integer roots
    let h = half(&[1, 1, 1, 1]);
    let e1 = v(&[1, 0, 0, 0]);
    let s = &e1 + &h;
    let d = &e1 - &h;
    let oracle = (f4.is_root(&s), f4.is_root(&d));
    assert_eq!(oracle, (false, true));
    assert_eq!(f4.sum_diff_status(&e1, &h).unwrap(), SumDiff::DiffOnly);
}

#[test]
fn reflection_examples() {
    let a2 = RootSystem::build(A, 2).unwrap();
    assert_eq!(
        a2.reflect(&v(&[1, -1, 0]), &v(&[1, 0, -1])).unwrap(),
        v(&[0, 1, -1])
    );
    let b2 = RootSystem::build(B, 2).unwrap();
    assert_eq!(b2.reflect(&v(&[0, 1]), &v(&[1, 1])).unwrap(), v(&[1, -1]));
}

fn subset(rs: &RootSystem, pred: impl Fn(&ExactVector) -> bool) -> RootSet {
    RootSet::from_indices(rs.len(), (0..rs.len()).filter(|&i| pred(rs.root(i))))
}

#[test]
fn identify_type_examples() {
    let b2 = RootSystem::build(B, 2).unwrap();
    let long = subset(&b2, |r| r.norm_sq() == QExt::from_int(2));
    assert_eq!(
        b2.identify_type(&long).unwrap(),
        Decomposition::parse("A1+A1").unwrap()
    );
    let g2 = RootSystem::build(G2, 2).unwrap();
    let long = subset(&g2, |r| r.norm_sq() == QExt::from_int(3));
    assert_eq!(g2.identify_type(&long).unwrap(), Decomposition::parse("A2").unwrap());
    let short = subset(&g2, |r| r.norm_sq() == QExt::from_int(1));
    assert_eq!(g2.identify_type(&short).unwrap(), Decomposition::parse("A2").unwrap());
}

/// Independent oracle: enumerate all symmetric subsets and keep the closed
/// ones by direct vector arithmetic, then count distinct signatures.
fn oracle_closed_count(rs: &RootSystem) -> usize {
    let pos: Vec<usize> = (0..rs.len()).filter(|&i| rs.is_positive(i)).collect();
    let mut sigs = std::collections::BTreeSet::new();
    for mask in 0u32..(1 << pos.len()) {
        let mut members = Vec::new();
        for (b, &i) in pos.iter().enumerate() {
            if mask >> b & 1 == 1 {
                members.push(rs.root(i).clone());
                members.push(-rs.root(i));
            }
        }
        let closed = members.iter().all(|a| {
            members.iter().all(|b| {
                let s = a + b;
                s.is_zero() || !rs.is_root(&s) || members.contains(&s)
            })
        });
        if closed {
            let set = subset(rs, |r| members.contains(r));
            sigs.insert(rs.signature(&set).unwrap());
        }
    }
    sigs.len()
}

#[test]
fn closed_subsystems_small_examples() {
    let b2 = RootSystem::build(B, 2).unwrap();
    let cs = b2.closed_subsystems().unwrap();
    assert_eq!(cs.len(), 5, "torus, short A1, long A1, A1+A1, B2");
    let a2 = RootSystem::build(A, 2).unwrap();
    assert_eq!(a2.closed_subsystems().unwrap().len(), 3, "torus, A1, A2");
    let g2 = RootSystem::build(G2, 2).unwrap();
    let names: Vec<String> = g2
        .closed_subsystems()
        .unwrap()
        .iter()
        .map(|c| c.signature.h_type.to_string())
        .collect();
    for want in ["ℝ^2", "A1⊕ℝ", "A1⊕A1", "A2", "G2"] {
        assert!(names.iter().any(|n| n == want), "{want} in {names:?}");
    }
}

#[test]
fn closed_subsystems_match_brute_force() {
    for (l, n) in [(A, 1), (A, 2), (A, 3), (B, 2), (B, 3), (C, 3), (G2, 2), (D, 3)] {
        let rs = RootSystem::build(l, n).unwrap();
        let fast: Vec<_> = rs.closed_subsystems_capped(8).unwrap();
        let brute = brute_force_closed(&rs).unwrap();
        let fs: Vec<_> = fast.iter().map(|c| c.signature.clone()).collect();
        let bs: Vec<_> = brute.iter().map(|c| c.signature.clone()).collect();
        assert_eq!(fs, bs, "{l}{n}");
        assert_eq!(bs.len(), oracle_closed_count(&rs), "{l}{n}");
        for c in &fast {
            assert!(rs.is_closed_symmetric(&c.roots));
        }
    }
}

#[test]
fn descent_alone_matches_brute_force() {
    // rank-3 systems would union in brute force; check the descent on its own
    for (l, n) in [(B, 3), (C, 3), (A, 3)] {
        let rs = RootSystem::build(l, n).unwrap();
        let brute = brute_force_closed(&rs).unwrap().len();
        let rs4 = RootSystem::direct_sum(&[SimpleType::new(l, n), SimpleType::new(A, 1)]).unwrap();
        // product with A1 doubles every class
        assert_eq!(rs4.closed_subsystems().unwrap().len(), 2 * brute, "{l}{n}");
    }
}

#[test]
fn json_round_trip() {
    let rs = RootSystem::build(G2, 2).unwrap();
    let doc = rs.to_document();
    let s = serde_json::to_string(&doc).unwrap();
    let back: nhf::root_systems::RootSystemDoc = serde_json::from_str(&s).unwrap();
    assert_eq!(back, doc);
}
