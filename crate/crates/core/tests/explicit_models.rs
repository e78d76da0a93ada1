use nhf::equal_rank::{lemma1_part2, EqualRankCandidate};
use nhf::exact_arith::{rat, rat_int, Rational};
use nhf::explicit_models::oracle::ClassicalAmbient;
use nhf::explicit_models::*;
use nhf::par::Exec;
use nhf::root_systems::{RootSet, RootSystem, TypeLabel};

fn dims(name: ModelName) -> (usize, usize) {
    match name {
        ModelName::SuSu(n) => (n * n - 1, (n - 1) * (n - 1) - 1),
        ModelName::SuSu1(n) => (n * n - 1, (n - 1) * (n - 1)),
        ModelName::UU(n) => (n * n, (n - 1) * (n - 1)),
        ModelName::SpSp(n) => (n * (2 * n + 1), (n - 1) * (2 * n - 1)),
        ModelName::SoSo(n) => (n * (n - 1) / 2, (n - 1) * (n - 2) / 2),
        ModelName::Berger => (10, 3),
        ModelName::Su5Sp2 => (24, 11),
        ModelName::Su3Torus => (8, 2),
        ModelName::Spin9Family => (36, 0),
    }
}

#[test]
fn catalog_models_are_closed_subalgebras_of_the_right_dimension() {
    for name in catalog() {
        let m = build_model(name).unwrap();
        m.validate().unwrap();
        let (g, h) = dims(name);
        assert_eq!(m.dim_g(), g, "{}", name.label());
        if m.h_known {
            assert_eq!(m.dim_h(), h, "{}", name.label());
            assert_eq!(orth_complement(&m).unwrap().len(), g - h);
            for x in &m.h_basis {
                for y in &m.h_basis {
                    assert!(m.contains(&x.bracket(y)));
                }
            }
        }
        if m.form.is_none() {
            for x in &m.g_basis {
                assert!(x.is_anti_hermitian(), "{}", name.label());
            }
        }
    }
}

#[test]
fn special_unitary_bases_are_traceless() {
    for n in 2..=5 {
        for x in su_basis(n) {
            assert_eq!(x.trace(), gq_int(0, 0));
        }
    }
}

#[test]
fn root_planes_carry_their_roots() {
    for (l, n) in [(TypeLabel::B, 2), (TypeLabel::B, 3), (TypeLabel::C, 3), (TypeLabel::D, 4)] {
        let amb = ClassicalAmbient::new(l, n).unwrap();
        let rs = RootSystem::build(l, n).unwrap();
        for i in 0..rs.len() {
            let r: Vec<i64> = rs
                .root(i)
                .coords
                .iter()
                .map(|c| c.as_rational().unwrap().to_integer().try_into().unwrap())
                .collect();
            let p = amb.plane(&r).unwrap_or_else(|| panic!("{l}{n} {r:?}"));
            assert!(amb.algebra.g_basis.iter().any(|b| b.inner(&p[0]) != Rational::from_integer(0.into())));
        }
    }
}

#[test]
fn eigenvalue_sequences_are_conjugation_invariant() {
    let so5 = so_basis(5);
    let x = CMatrix::combination(&so5, &(1..=10).map(|k| rat_int(k % 4 - 1)).collect::<Vec<_>>());
    // a signed permutation matrix is orthogonal with rational entries
    let p = CMatrix::from_ints(&[
        &[0, 1, 0, 0, 0],
        &[0, 0, 0, -1, 0],
        &[1, 0, 0, 0, 0],
        &[0, 0, 0, 0, 1],
        &[0, 0, 1, 0, 0],
    ]);
    let y = &(&p * &x) * &p.adjoint();
    assert!(seq_dependent(&x, &y).unwrap());
    assert!(seq_dependent(&x, &y.scale(&rat(3, 2))).unwrap());
    let a = so_torus(5, &[rat_int(1), rat_int(0)]);
    let b = so_torus(5, &[rat_int(1), rat_int(1)]);
    assert!(!seq_dependent(&a, &b).unwrap());
    let ea = eigenvalue_sequence(&a).unwrap();
    assert_eq!(ea.values.len(), 5);
}

#[test]
fn su3_torus_flat_is_found_and_the_hexagon_filter_agrees() {
    let model = build_model(ModelName::Su3Torus).unwrap();
    let (u, v) = lemma_pair_su3();
    let w = flat_splitting_test(&model, &u, &v).unwrap().expect("flat witness");
    assert!(w.split_ok);
    assert!(w.dim_m_part >= 2);
    assert!(w.check(&model));
    let rs = RootSystem::build(TypeLabel::A, 2).unwrap();
    let torus = EqualRankCandidate::new(&rs, RootSet::empty(rs.len())).unwrap();
    assert!(!lemma1_part2(&torus).passed());
}

#[test]
fn flat_test_rejects_bad_inputs() {
    let model = build_model(ModelName::Su3Torus).unwrap();
    let (u, _) = lemma_pair_su3();
    assert!(flat_splitting_test(&model, &u, &u).is_err());
    let spin9 = build_model(ModelName::Spin9Family).unwrap();
    assert!(flat_splitting_test(&spin9, &u, &u).is_err());
}

#[test]
fn commuting_pairs_in_m() {
    let cfg = SearchConfig::default();
    let berger = build_model(ModelName::Berger).unwrap();
    let r = commuting_pair_search(&berger, &cfg, Exec::default()).unwrap();
    assert!(r.pair.is_none());
    assert!(r.numeric_min > 1e-3);
    let torus = build_model(ModelName::Su3Torus).unwrap();
    let r = commuting_pair_search(&torus, &cfg, Exec::default()).unwrap();
    let (x, y) = r.pair.expect("su(3)/t has a commuting pair in m");
    assert!(x.bracket(&y).is_zero());
    let sphere = build_model(ModelName::SoSo(5)).unwrap();
    assert!(commuting_pair_search(&sphere, &cfg, Exec::default()).unwrap().pair.is_none());
}

#[test]
fn condition_r_survey() {
    let fails = [
        ModelName::SuSu(3),
        ModelName::SuSu(4),
        ModelName::SpSp(2),
        ModelName::SpSp(3),
        ModelName::Berger,
        ModelName::Su5Sp2,
        ModelName::Spin9Family,
    ];
    for name in fails {
        let r = condition_r_report(name, &default_t_samples(), 20, 1).unwrap();
        assert!(r.fails_condition_r, "{}", r.space);
    }
    for name in [ModelName::SoSo(4), ModelName::SoSo(5)] {
        let r = condition_r_report(name, &default_t_samples(), 100, 1).unwrap();
        assert!(!r.fails_condition_r, "{}", r.space);
        assert_eq!(r.dependent_pairs, r.pairs.len());
        assert!(r.pairs.len() >= 100);
    }
}

#[test]
fn model_names_round_trip() {
    for name in catalog() {
        assert_eq!(ModelName::parse(&name.label()), Some(name));
    }
    assert_eq!(ModelName::parse("sp(2)/su(2)"), Some(ModelName::Berger));
    assert_eq!(ModelName::parse("su(4)/su(2)"), None);
}
