use nhf::exact_arith::{cartan_pair, crystallographic, rat, ExactVector, QExt, Rational};
use proptest::prelude::*;

fn q() -> impl Strategy<Value = Rational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
}

fn qext() -> impl Strategy<Value = QExt> {
    (q(), q(), q(), q()).prop_map(|(a, b, c, d)| QExt::new(a, b, c, d))
}

proptest! {
    #[test]
    fn field_axioms(a in qext(), b in qext(), c in qext()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn inverse_is_exact(a in qext()) {
        prop_assume!(!a.is_zero());
        let inv = a.inv().unwrap();
        prop_assert_eq!(&a * &inv, QExt::one());
        prop_assert_eq!(&(&QExt::one() / &a), &inv);
    }

    #[test]
    fn sign_agrees_with_float(a in qext()) {
        let f = a.to_f64();
        if f.abs() > 1e-9 {
            prop_assert_eq!(a.signum(), f.signum() as i32);
        }
        let (lo, hi) = a.enclose(40);
        prop_assert!(lo <= hi);
    }

    #[test]
    fn ordering_is_translation_invariant(a in qext(), b in qext(), c in qext()) {
        prop_assert_eq!(a.cmp_exact(&b), (&a + &c).cmp_exact(&(&b + &c)));
    }

    #[test]
    fn string_round_trip(a in qext()) {
        prop_assert_eq!(QExt::from_strings(&a.to_strings()).unwrap(), a);
    }
}

#[test]
fn surd_products() {
    let s2 = QExt::sqrt2_times(rat(1, 1));
    let s3 = QExt::sqrt3_times(rat(1, 1));
    assert_eq!(&s2 * &s2, QExt::from_int(2));
    assert_eq!(&s2 * &s3, QExt::sqrt6_times(rat(1, 1)));
    assert_eq!(&s3 * &s3, QExt::from_int(3));
    assert!(s2.cmp_exact(&QExt::from_ratio(141421, 100000)).is_gt());
    assert!(s2.cmp_exact(&QExt::from_ratio(141422, 100000)).is_lt());
}

#[test]
fn cartan_integers_of_standard_pairs() {
    let a = ExactVector::from_ints(&[1, 0]);
    let b = ExactVector::from_ints(&[-1, 1]);
    let p = cartan_pair(&a, &b).unwrap();
    assert!(crystallographic(&p.n1, &p.n2));
    assert!(p.compatible);
    let x = ExactVector::from_ints(&[1, 0]);
    let y = ExactVector::from_rationals(&[rat(1, 3), rat(1, 1)]);
    let p = cartan_pair(&x, &y).unwrap();
    assert!(!crystallographic(&p.n1, &p.n2));
}
