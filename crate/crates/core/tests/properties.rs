use proptest::prelude::*;
use regrep_core::powers::{mat_pow, pow_matrix};
use regrep_core::regrep::{build, entries_via_formula};
use regrep_core::{Polynomial, Weights};
use rug::Rational;

fn poly_and_weights() -> impl Strategy<Value = (Vec<i64>, Vec<i64>, Vec<i64>)> {
    (2usize..=4).prop_flat_map(|m| {
        (
            prop::collection::vec(-4i64..=4, m),
            prop::collection::vec(-3i64..=3, m),
            prop::collection::vec(-3i64..=3, m),
        )
    })
}

fn nonzero(x: &[i64]) -> bool {
    x.iter().any(|&v| v != 0)
}

fn rat(v: i64) -> Rational {
    Rational::from(v)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn both_constructions_agree((u, x, _) in poly_and_weights()) {
        prop_assume!(nonzero(&x));
        let f = Polynomial::from_u_i64(&u).unwrap();
        let w = Weights::from_i64(&x).unwrap();
        prop_assert_eq!(build(&f, &w).unwrap().entries, entries_via_formula(&f, &w).unwrap().entries);
    }

    #[test]
    fn multiplication_matches_field_product((u, x, y) in poly_and_weights()) {
        prop_assume!(nonzero(&x) && nonzero(&y));
        let f = Polynomial::from_u_i64(&u).unwrap();
        let wx = Weights::from_i64(&x).unwrap();
        let wy = Weights::from_i64(&y).unwrap();
        let lhs = build(&f, &wx).unwrap().entries.mul(&build(&f, &wy).unwrap().entries);
        // zero divisors exist when f is reducible
        match wx.product_mod(&wy, &f) {
            Ok(xy) => prop_assert_eq!(lhs, build(&f, &xy).unwrap().entries),
            Err(_) => prop_assert!(lhs.rows().flatten().all(|v| *v == 0)),
        }
    }

    #[test]
    fn powers_add((u, x, _) in poly_and_weights(), a in 0u64..12, b in 0u64..12) {
        prop_assume!(nonzero(&x));
        let f = Polynomial::from_u_i64(&u).unwrap();
        let m = build(&f, &Weights::from_i64(&x).unwrap()).unwrap();
        let lhs = mat_pow(&m, a + b).entries;
        let rhs = mat_pow(&m, a).entries.mul(&mat_pow(&m, b).entries);
        prop_assert_eq!(&lhs, &rhs);
        prop_assert_eq!(lhs, m.entries.pow_naive(a + b));
    }

    #[test]
    fn determinant_is_multiplicative((u, x, _) in poly_and_weights(), n in 1u64..8) {
        prop_assume!(nonzero(&x));
        let f = Polynomial::from_u_i64(&u).unwrap();
        let m = build(&f, &Weights::from_i64(&x).unwrap()).unwrap().entries;
        let d = m.det();
        let expected = (0..n).fold(rat(1), |acc, _| acc * &d);
        prop_assert_eq!(pow_matrix(&m, n).det(), expected);
    }

    #[test]
    fn shift_moves_roots((u, _, _) in poly_and_weights(), c in -5i64..=5, t in -6i64..=6) {
        let f = Polynomial::from_u_i64(&u).unwrap();
        let g = f.shift(&rat(c));
        prop_assert_eq!(g.eval(&rat(t + c)), f.eval(&rat(t)));
        prop_assert_eq!(g.shift(&rat(-c)), f);
    }

    #[test]
    fn reflect_twice_is_identity((u, _, _) in poly_and_weights()) {
        prop_assume!(*u.last().unwrap() != 0);
        let f = Polynomial::from_u_i64(&u).unwrap();
        prop_assert_eq!(f.reflect().unwrap().reflect().unwrap(), f);
    }
}
