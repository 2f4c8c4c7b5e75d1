use dwork::chars::{self, CharClass};
use dwork::group::{all_group_elements, Perm};
use dwork::reptheory::{self, ProjectorTarget};
use num_rational::BigRational;

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

#[test]
fn fourier_recovers_multiplicities() {
    for n in 3..=6u32 {
        for (a, m) in reptheory::fourier_multiplicities(n).unwrap() {
            assert_eq!(m, reptheory::multiplicity(&a) as i64, "n = {n}, {a}");
        }
    }
}

#[test]
fn resynthesis_matches_closed_form() {
    for n in 3..=5u32 {
        let classes = chars::enumerate_classes(n).unwrap();
        for g in all_group_elements(n) {
            let Ok(t) = reptheory::trace_closed_form(n, &g) else {
                continue;
            };
            let r = reptheory::trace_resynthesis(n, &g, &classes).unwrap();
            assert_eq!(r.as_rational(), Some(int(t as i64)), "n = {n}, {g}");
        }
    }
}

#[test]
fn transposition_identity() {
    for n in 3..=8u32 {
        let (lhs, rhs) = reptheory::transposition_sum_identity(n).unwrap();
        assert_eq!(lhs, rhs, "n = {n}");
    }
}

#[test]
fn lemma_identity_small_grid() {
    for n in [3u32, 4, 5, 6] {
        for nprime in (1..=n).filter(|d| n % d == 0) {
            for r in 1..=3u32 {
                let mut mus = vec![0u32; r as usize];
                loop {
                    let (l, rr) = reptheory::lemma_sum_check(n, nprime, r, &mus).unwrap();
                    assert_eq!(l, rr, "n = {n}, n' = {nprime}, mus = {mus:?}");
                    let mut i = 0;
                    while i < mus.len() {
                        mus[i] += 1;
                        if mus[i] < n {
                            break;
                        }
                        mus[i] = 0;
                        i += 1;
                    }
                    if i == mus.len() {
                        break;
                    }
                }
            }
        }
    }
}

#[test]
fn isotypic_projector_ranks() {
    for n in [3u32, 4] {
        let classes = chars::enumerate_classes(n).unwrap();
        for o in chars::full_orbits(n)
            .unwrap()
            .iter()
            .filter(|o| !o.excluded)
        {
            let inv = &o.invariants;
            for j in 0..inv.d_a {
                let w = reptheory::omega_exponent(&o.rep, j);
                let target = ProjectorTarget::Isotypic {
                    a: o.rep.clone(),
                    omega_exp: w,
                };
                let weights = reptheory::projector_weights(&target, n).unwrap();
                let rank = weights
                    .pair_with(|g| {
                        Ok(reptheory::trace_resynthesis(n, g, &classes)?
                            .as_rational()
                            .expect("rational trace"))
                    })
                    .unwrap();
                assert_eq!(
                    rank,
                    int(inv.deg_q as i64 * inv.exponent as i64),
                    "n = {n}, {} omega {j}",
                    o.rep
                );
            }
        }
    }
}

#[test]
fn orbit_projector_rank() {
    let n = 5;
    let classes = chars::enumerate_classes(n).unwrap();
    for o in chars::full_orbits(n).unwrap() {
        let weights =
            reptheory::projector_weights(&ProjectorTarget::Orbit(o.rep.clone()), n).unwrap();
        let rank = weights
            .pair_with(|g| {
                Ok(reptheory::trace_resynthesis(n, g, &classes)?
                    .as_rational()
                    .unwrap())
            })
            .unwrap();
        let i = &o.invariants;
        assert_eq!(rank, int((o.size * i.m_a as u64) as i64), "{}", o.rep);
    }
}

#[test]
fn xi_is_a_character_of_the_right_degree() {
    let n = 4;
    let order = all_group_elements(n).len() as i64;
    for o in chars::full_orbits(n)
        .unwrap()
        .iter()
        .filter(|o| !o.excluded)
    {
        let inv = &o.invariants;
        let a = &o.rep;
        let w = reptheory::omega_exponent(a, inv.d_a - 1);
        let deg = reptheory::xi_character(a, w, &dwork::group::GroupElement::identity(n)).unwrap();
        assert_eq!(deg as u64, inv.exponent * inv.d_a_degree as u64);
        let norm: i64 = all_group_elements(n)
            .iter()
            .map(|g| {
                let x = reptheory::xi_character(a, w, g).unwrap();
                x * x
            })
            .sum();
        assert_eq!(norm % order, 0, "{a}");
    }
}

#[test]
fn regular_structure_all_small_orbits() {
    for n in 3..=6u32 {
        for o in chars::full_orbits(n)
            .unwrap()
            .iter()
            .filter(|o| !o.excluded)
        {
            let check = reptheory::verify_regular_structure(&o.rep).unwrap();
            assert!(check.passed, "n = {n}: {:?}", check.witnesses);
        }
    }
}

#[test]
fn stabilizer_splitting_realizes_image() {
    for n in 3..=7u32 {
        for o in chars::full_orbits(n)
            .unwrap()
            .iter()
            .filter(|o| !o.excluded)
        {
            let st = reptheory::stabilizer_structure(&o.rep);
            for ((u, v), p) in &st.splitting {
                assert_eq!(reptheory::u_v_of(&o.rep, p).unwrap(), (*u, *v));
            }
            let vs: std::collections::BTreeSet<u32> =
                st.splitting.iter().map(|((_, v), _)| *v).collect();
            assert_eq!(
                vs.into_iter().collect::<Vec<_>>(),
                o.invariants.im_k,
                "n = {n}, {}",
                o.rep
            );
        }
    }
}

#[test]
fn traces_on_h_a() {
    let a = CharClass::new(4, &[0, 0, 2, 2]).unwrap();
    let sigma_a = Perm::from_cycles(4, "1 3,2 4").unwrap();
    assert_eq!(reptheory::trace_on_isotypic(&a, &sigma_a).unwrap(), int(0));
    assert_eq!(
        reptheory::trace_on_isotypic(&a, &Perm::identity(4)).unwrap(),
        int(2)
    );
}

#[test]
fn mu_is_multiplicative_on_random_pairs() {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    let mut rng = StdRng::seed_from_u64(0x6d75);
    for n in 3..=6u32 {
        for o in chars::full_orbits(n)
            .unwrap()
            .iter()
            .filter(|o| !o.excluded)
        {
            let a = &o.rep;
            let perms = reptheory::s_a_elements(a);
            let random = |rng: &mut StdRng| {
                let mut t: Vec<i64> = (0..n).map(|_| rng.gen_range(0..n as i64)).collect();
                let total: i64 = t[1..].iter().sum();
                t[0] = (-total).rem_euclid(n as i64);
                let s = perms[rng.gen_range(0..perms.len())].clone();
                dwork::group::GroupElement::new(n, &t, s).unwrap()
            };
            for j in 0..o.invariants.d_a {
                let w = reptheory::omega_exponent(a, j);
                for _ in 0..1000 {
                    let (g, h) = (random(&mut rng), random(&mut rng));
                    let lhs = reptheory::mu_matrix(a, w, &g.mul(&h)).unwrap();
                    let rhs = reptheory::mat_mul(
                        &reptheory::mu_matrix(a, w, &g).unwrap(),
                        &reptheory::mu_matrix(a, w, &h).unwrap(),
                    );
                    assert_eq!(lhs, rhs, "n = {n}, {a}, omega^{w}, g = {g}, h = {h}");
                }
            }
        }
    }
}
