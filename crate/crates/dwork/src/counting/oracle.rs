//! Brute-force fixed-point oracle in polynomial arithmetic.
//!
//! Works in one field `E = F_{Q^L}` holding every coordinate of every fixed
//! point for a suitable choice of the projective scalar `lambda`, seeds each
//! cycle with `{0} u beta F_{Q^d}^x`, propagates the coordinates and
//! evaluates the defining polynomial literally.

use crate::arith::lcm;
use crate::error::{check_failed, invalid, Error, Result};
use crate::ffield::{digits, poly, prime_factors};
use crate::group::GroupElement;
use crate::limits::ensure_ops;

use super::DworkInstance;

/// Largest oracle field `|E|`.
pub const ORACLE_FIELD_CAP: u128 = 1 << 40;

struct PolyField {
    p: u64,
    modulus: Vec<u64>,
    order: u128,
    generator: Vec<u64>,
}

impl PolyField {
    fn new(p: u64, degree: u32) -> PolyField {
        let modulus = (0u64..)
            .map(|enc| {
                let mut m = digits(enc, p, degree);
                m.resize(degree as usize, 0);
                m.push(1);
                m
            })
            .find(|m| m[0] != 0 && (degree == 1 || poly::is_irreducible(m, p)))
            .expect("irreducible polynomials exist in every degree");
        let order = (p as u128).pow(degree) - 1;
        let factors = prime_factors(order as u64);
        let generator = (1u64..)
            .map(|enc| digits(enc, p, degree))
            .find(|g| {
                factors
                    .iter()
                    .all(|&l| poly::powmod(g, order / l as u128, &modulus, p) != vec![1u64])
            })
            .expect("cyclic group has a generator");
        PolyField {
            p,
            modulus,
            order,
            generator,
        }
    }

    fn gen_pow(&self, e: u128) -> Vec<u64> {
        poly::powmod(&self.generator, e % self.order, &self.modulus, self.p)
    }

    fn mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        poly::mulmod(a, b, &self.modulus, self.p)
    }
}

fn mulmod(a: u128, b: u128, m: u128) -> u128 {
    // Operands stay below 2^40, so the product fits.
    a * b % m
}

fn least_primitive_root(q: u64) -> u64 {
    let factors = prime_factors(q - 1);
    (2..q)
        .find(|&g| {
            factors
                .iter()
                .all(|&l| super::pow_mod(g, (q - 1) / l, q) != 1)
        })
        .unwrap_or(1)
}

/// `Fix_r(g)` by direct enumeration; independent of the reduction used by
/// [`super::fixed_count_general`].
pub fn oracle_fixed_count(inst: &DworkInstance, g: &GroupElement, r: u32) -> Result<u64> {
    let n = inst.n();
    let q = inst.q() as u64;
    if g.n() != n {
        return Err(invalid("group element does not match n"));
    }
    let t = g.twist();
    let inv = g.sigma().inverse();
    let cycles: Vec<Vec<usize>> = g
        .sigma()
        .cycles()
        .into_iter()
        .map(|c| {
            let mut pts = vec![c[0]];
            for _ in 1..c.len() {
                pts.push(inv.apply(*pts.last().expect("nonempty")));
            }
            pts
        })
        .collect();
    let zs: Vec<u64> = cycles
        .iter()
        .map(|c| c.iter().map(|&i| t[i] as u64).sum::<u64>() % n as u64)
        .collect();
    let big_l = cycles.iter().fold(1u64, |acc, c| lcm(acc, c.len() as u64));
    let ext = (1..=n as u64)
        .map(|m| big_l * m)
        .find(|&l| {
            let vals: Vec<u64> = cycles
                .iter()
                .zip(&zs)
                .map(|(c, &z)| z * (l / c.len() as u64) % n as u64)
                .collect();
            vals.iter().all(|&v| v == vals[0])
        })
        .expect("L n always balances the cycle twists");

    let qq = (q as u128).pow(r);
    let degree = r as u64 * ext;
    let size = (q as u128).checked_pow(degree as u32).unwrap_or(u128::MAX);
    if size > ORACLE_FIELD_CAP {
        return Err(Error::CostCap {
            what: format!("oracle field {q}^{degree}"),
            value: size,
            cap: ORACLE_FIELD_CAP,
        });
    }
    let tuples: u128 = cycles.iter().map(|c| qq.pow(c.len() as u32)).product();
    ensure_ops("oracle enumeration", tuples)?;

    let e = PolyField::new(q, degree as u32);
    let m = e.order;
    let n_e = m / (q as u128 - 1);
    let c0 = e.gen_pow(n_e);
    let c0 = c0.first().copied().unwrap_or(0);
    let dlog_q = |x: u64| -> u128 {
        let mut cur = 1u64;
        for k in 0..q - 1 {
            if cur == x {
                return k as u128;
            }
            cur = cur * c0 % q;
        }
        unreachable!("c0 generates F_q^x")
    };
    let zeta = super::pow_mod(least_primitive_root(q), (q - 1) / n as u64, q);
    let e_zeta = dlog_q(zeta);
    let qm1 = q as u128 - 1;
    let tau_exp = {
        let c = &cycles[0];
        let k = zs[0] as u128 * (ext as u128 / c.len() as u128) % n as u128;
        (qm1 - (e_zeta * k) % qm1) % qm1
    };
    let ell = tau_exp * ((qq - 1) / qm1) % m;
    let zeta_step = mulmod(n_e % m, e_zeta, m);

    // Per cycle: seeds' power sum sum_k x_k^n and product exponent.
    let mut per_cycle: Vec<Vec<(Vec<u64>, Option<u128>)>> = Vec::with_capacity(cycles.len());
    for (c, &z) in cycles.iter().zip(&zs) {
        let d = c.len() as u32;
        let qd = qq.pow(d) - 1;
        let norm = qd / (qq - 1);
        let alpha = (mulmod(ell, norm, m) + mulmod(zeta_step, z as u128, m)) % m;
        if !alpha.is_multiple_of(qd) {
            return Err(check_failed("oracle seed equation has no solution in E"));
        }
        let beta = alpha / qd;
        let step = m / qd;
        let mut seeds = vec![(Vec::new(), None)];
        for s in 0..qd {
            let e0 = (beta + mulmod(step, s, m)) % m;
            let mut exps = Vec::with_capacity(c.len());
            let mut cur = e0;
            for &i in c {
                exps.push(cur);
                let shift = (ell + mulmod(zeta_step, t[i] as u128, m)) % m;
                cur = (mulmod(cur, qq % m, m) + m - shift) % m;
            }
            if cur != e0 {
                return Err(check_failed("oracle cycle failed to close"));
            }
            let sum = exps.iter().fold(Vec::new(), |acc, &x| {
                poly::add(&acc, &e.gen_pow(mulmod(x, n as u128, m)), q)
            });
            let prod = exps.iter().fold(0u128, |acc, &x| (acc + x) % m);
            seeds.push((sum, Some(prod)));
        }
        per_cycle.push(seeds);
    }

    let npsi = n as u64 * inst.psi() as u64 % q;
    let mut idx = vec![0usize; per_cycle.len()];
    let mut solutions: u128 = 0;
    loop {
        let mut sum = Vec::new();
        let mut prod = Some(0u128);
        for (seeds, &k) in per_cycle.iter().zip(&idx) {
            let (s, p) = &seeds[k];
            sum = poly::add(&sum, s, q);
            prod = match (prod, p) {
                (Some(a), Some(b)) => Some((a + b) % m),
                _ => None,
            };
        }
        let value = match prod {
            Some(pe) => poly::sub(&sum, &e.mul(&e.gen_pow(pe), &[npsi]), q),
            None => sum,
        };
        if value.is_empty() && idx.iter().any(|&k| k != 0) {
            solutions += 1;
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                if !solutions.is_multiple_of(qq - 1) {
                    return Err(check_failed(format!(
                        "oracle count {solutions} not divisible by {}",
                        qq - 1
                    )));
                }
                return Ok((solutions / (qq - 1)) as u64);
            }
            idx[pos] += 1;
            if idx[pos] < per_cycle[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}
