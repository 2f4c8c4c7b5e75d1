use dwork::chars::CharClass;
use dwork::counting::{count_points, DworkInstance};
use dwork::zeta::{self, functional_completion, omega_split, orbit_factor, IntPoly, ZetaMode};
use dwork::Parallelism;
use num_bigint::BigInt;
use num_rational::BigRational;

const MODE: Parallelism = Parallelism::Parallel;

fn class(n: u32, v: &[i64]) -> CharClass {
    CharClass::new(n, v).unwrap()
}

/// Numerator of a cubic curve's zeta function from `N_1` alone.
fn numerator_from_n1(inst: &DworkInstance) -> IntPoly {
    let n1 = count_points(inst, 1, MODE).unwrap() as i128;
    let a = inst.q() as i128 + 1 - n1;
    functional_completion(
        &[BigRational::from_integer(BigInt::from(a))],
        2,
        1,
        inst.q(),
    )
    .unwrap()
}

#[test]
fn cubic_orbit_factor_is_full_numerator() {
    for (q, psi) in [(7, 3), (13, 2)] {
        let inst = DworkInstance::new(3, q, psi).unwrap();
        let f = orbit_factor(&inst, &class(3, &[0, 0, 0]), MODE).unwrap();
        assert_eq!(f.factor, numerator_from_n1(&inst));
        assert_eq!(f.exponent, 1);
        assert!(f.certificate.passed());
        let n2 = count_points(&inst, 2, MODE).unwrap() as i128;
        let p2 = f.factor.power_sums(2)[1].clone();
        assert_eq!(BigInt::from(q as i128 * q as i128 + 1 - n2), p2);
    }
}

#[test]
fn quartic_0022_factors() {
    let inst = DworkInstance::new(4, 13, 2).unwrap();
    let a = class(4, &[0, 0, 2, 2]);
    let f = orbit_factor(&inst, &a, MODE).unwrap();
    assert_eq!(f.factor.coeffs(), &[1, 0, -169]);
    assert_eq!(f.exponent, 3);
    let split = omega_split(&inst, &a, MODE).unwrap();
    let got: Vec<Vec<i128>> = split.iter().map(|r| r.factor.coeffs().to_vec()).collect();
    assert_eq!(got, vec![vec![1, -13], vec![1, 13]]);
}

#[test]
fn quartic_0013_factor() {
    let inst = DworkInstance::new(4, 13, 2).unwrap();
    let f = orbit_factor(&inst, &class(4, &[0, 0, 1, 3]), MODE).unwrap();
    assert_eq!(f.degree, 1);
    assert_eq!(f.exponent, 12);
    assert_eq!(f.factor.coeffs()[1].abs(), 13);
}

#[test]
fn omega_split_rejects_trivial_d() {
    let inst = DworkInstance::new(4, 13, 2).unwrap();
    assert!(omega_split(&inst, &class(4, &[0, 0, 1, 3]), MODE).is_err());
}

#[test]
fn quartic_report_consistency() {
    let inst = DworkInstance::new(4, 13, 2).unwrap();
    let report = zeta::zeta_report(&inst, ZetaMode::Check, None, MODE).unwrap();
    assert!(report.passed(), "{}", report.to_markdown());
    assert_eq!(report.consistency.len(), zeta::CONSISTENCY_MAX_R as usize);
    assert!(report.consistency.iter().all(|c| c.passed));
    let mut degrees: Vec<(usize, u64)> = report
        .factors
        .iter()
        .map(|f| (f.degree, f.exponent))
        .collect();
    degrees.sort();
    assert_eq!(degrees, vec![(1, 3), (1, 3), (1, 12), (2, 3), (3, 1)]);
}

#[test]
fn prediction_only_for_n7() {
    let inst = DworkInstance::new(7, 29, 2).unwrap();
    let report = zeta::zeta_report(&inst, ZetaMode::Predict, None, MODE).unwrap();
    assert_eq!(report.predictions.len(), 11);
    assert!(zeta::zeta_report(&inst, ZetaMode::Extract, None, MODE).is_err());
}
