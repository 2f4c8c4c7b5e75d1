use dwork::zeta::{
    functional_sign, newton_poly, quadratic_split_check, weil_check, IntPoly, PowerSumSeries,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn series(p: &IntPoly, k: usize) -> PowerSumSeries {
    PowerSumSeries {
        values: p
            .power_sums(k)
            .into_iter()
            .enumerate()
            .map(|(i, v)| (i as u32 + 1, BigRational::from_integer(v)))
            .collect(),
        divisor: 1,
    }
}

/// `1 - a t + q^w t^2`, a Weil polynomial when `a^2 <= 4 q^w`.
fn weil_quadratic(a: i128, qw: i128) -> IntPoly {
    IntPoly::new(vec![1, -a, qw]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, rng_seed: proptest::test_runner::RngSeed::Fixed(0x2e7a), ..ProptestConfig::default() })]

    #[test]
    fn newton_inverts_power_sums(c in proptest::collection::vec(-50i128..50, 1..7)) {
        let mut coeffs = vec![1];
        coeffs.extend(c);
        let p = IntPoly::new(coeffs).unwrap();
        prop_assert_eq!(newton_poly(&series(&p, p.degree()), p.degree()).unwrap(), p);
    }

    #[test]
    fn scaled_power_sums_divide_back(c in proptest::collection::vec(-20i128..20, 1..5), k in 1u64..6) {
        let mut coeffs = vec![1];
        coeffs.extend(c);
        let p = IntPoly::new(coeffs).unwrap();
        let mut s = series(&p, p.degree());
        for v in s.values.iter_mut() {
            v.1 = &v.1 * BigRational::from_integer(BigInt::from(k));
        }
        s.divisor = k;
        prop_assert_eq!(newton_poly(&s, p.degree()).unwrap(), p);
    }

    #[test]
    fn products_of_weil_quadratics_pass(q in prop::sample::select(vec![5u32, 7, 11, 13]), xs in proptest::collection::vec(0.0f64..1.0, 1..4)) {
        let bound = 2.0 * (q as f64).sqrt();
        let mut p = IntPoly::one();
        for x in xs {
            let a = ((x * 2.0 - 1.0) * bound).trunc() as i128;
            p = p.mul(&weil_quadratic(a, q as i128)).unwrap();
        }
        prop_assert!(weil_check(&p, 1, q).passed);
        prop_assert_eq!(functional_sign(&p, 1, q), Some(1));
    }

    #[test]
    fn rational_square_always_splits(a in -4i128..=4, m in prop::sample::select(vec![-7i64, -3, -1, 2, 5, 13])) {
        let base = weil_quadratic(a, 5);
        let sq = base.mul(&base).unwrap();
        let split = quadratic_split_check(&sq, m, 2);
        prop_assert!(split.is_some());
    }

    #[test]
    fn off_circle_roots_fail_weil(a in 2i128..20) {
        // Reciprocal roots a and 1, neither of modulus sqrt(a^2).
        let p = IntPoly::new(vec![1, -(a + 1), a]).unwrap();
        prop_assert!(!weil_check(&p, 2, a as u32).passed);
    }
}

#[test]
fn golden_split_is_conjugate() {
    // (1 - phi t)(1 - phibar t)(1 - 2 phi t)(1 - 2 phibar t)
    let p = IntPoly::new(vec![1, -1, -1])
        .unwrap()
        .mul(&IntPoly::new(vec![1, -2, -4]).unwrap())
        .unwrap();
    let s = quadratic_split_check(&p, 5, 2).unwrap();
    assert_eq!(s.first.len(), 3);
    assert!(s
        .first
        .iter()
        .zip(&s.second)
        .any(|(x, y)| x.sqrt_coeff != "0" && x.sqrt_coeff != y.sqrt_coeff));
}
