use dwork::ffield::{build_field, Embedding, FieldTable, FqElem};
use proptest::prelude::*;

fn field(idx: usize) -> FieldTable {
    let (p, r) = [(2, 4), (3, 3), (5, 2), (7, 1), (13, 2), (11, 3)][idx];
    build_field(p, r).unwrap()
}

fn elem(f: &FieldTable, code: u32) -> FqElem {
    f.from_encoding(code % f.size()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, rng_seed: proptest::test_runner::RngSeed::Fixed(0xf1e1d), ..ProptestConfig::default() })]

    #[test]
    fn ring_axioms(idx in 0usize..6, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = field(idx);
        let (a, b, c) = (elem(&f, a), elem(&f, b), elem(&f, c));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.add(a, f.add(b, c)), f.add(f.add(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        prop_assert_eq!(f.add(a, f.neg(a)), FqElem::ZERO);
    }

    #[test]
    fn inverses_and_powers(idx in 0usize..6, a in any::<u32>(), e in 0u64..10_000) {
        let f = field(idx);
        let a = elem(&f, a);
        match f.inv(a) {
            Some(i) => prop_assert_eq!(f.mul(a, i), f.from_int(1)),
            None => prop_assert!(a.is_zero()),
        }
        if !a.is_zero() {
            prop_assert_eq!(f.pow(a, f.order() as u64), f.from_int(1));
            prop_assert_eq!(f.pow(a, e), f.pow(a, e % f.order() as u64));
        }
    }

    #[test]
    fn frobenius_is_additive(idx in 0usize..6, a in any::<u32>(), b in any::<u32>()) {
        let f = field(idx);
        let (a, b) = (elem(&f, a), elem(&f, b));
        let p = f.p() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
    }

    #[test]
    fn encoding_roundtrip(idx in 0usize..6, code in any::<u32>()) {
        let f = field(idx);
        let code = code % f.size();
        prop_assert_eq!(f.encoding(f.from_encoding(code).unwrap()), code);
    }

    #[test]
    fn embedding_is_a_homomorphism(a in 0u32..169, b in 0u32..169) {
        let small = build_field(13, 1).unwrap();
        let big = build_field(13, 2).unwrap();
        let e = Embedding::new(&small, &big).unwrap();
        let (x, y) = (elem(&small, a), elem(&small, b));
        prop_assert_eq!(e.apply(small.mul(x, y)), big.mul(e.apply(x), e.apply(y)));
        prop_assert_eq!(e.apply(small.add(x, y)), big.add(e.apply(x), e.apply(y)));
        prop_assert_eq!(e.restrict(e.apply(x)), Some(x));
    }
}

#[test]
fn roots_of_unity_have_exact_order() {
    let f = build_field(13, 2).unwrap();
    for n in [1u32, 2, 3, 4, 6, 8, 12, 168] {
        let roots = f.nth_roots(n).unwrap();
        assert_eq!(roots.len(), n as usize);
        for z in roots {
            assert_eq!(f.pow(z, n as u64), f.from_int(1));
        }
    }
    assert!(f.nth_roots(5).is_err());
}
