//! Exact arithmetic in `Q(mu_m) = Q[x] / Phi_m(x)` on the power basis.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::arith::{divisors, euler_phi};

/// Integer coefficients of `Phi_m`, low degree first, by exact division of
/// `x^m - 1` by `Phi_d` for the proper divisors `d` of `m`.
pub fn cyclotomic_poly(m: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().expect("cache lock").get(&m) {
        return p.clone();
    }
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in divisors(m).into_iter().filter(|&d| d < m) {
        num = exact_div(&num, &cyclotomic_poly(d));
    }
    let p = Arc::new(num);
    cache.lock().expect("cache lock").insert(m, p.clone());
    p
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = *den.last().expect("nonempty");
    let mut q = vec![0i64; num.len() - dd];
    for k in (0..q.len()).rev() {
        let c = rem[k + dd] / lead;
        q[k] = c;
        for (j, &dj) in den.iter().enumerate() {
            rem[k + j] -= c * dj;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CyclotomicElement {
    m: u32,
    coeffs: Vec<BigRational>,
}

impl CyclotomicElement {
    pub fn zero(m: u32) -> Self {
        CyclotomicElement {
            m,
            coeffs: vec![BigRational::zero(); euler_phi(m) as usize],
        }
    }

    pub fn from_rational(m: u32, r: BigRational) -> Self {
        let mut e = Self::zero(m);
        e.coeffs[0] = r;
        e
    }

    pub fn from_int(m: u32, v: i64) -> Self {
        Self::from_rational(m, BigRational::from_integer(BigInt::from(v)))
    }

    pub fn one(m: u32) -> Self {
        Self::from_int(m, 1)
    }

    /// `x^k` where `x` is the chosen primitive `m`-th root of unity.
    pub fn root_power(m: u32, k: i64) -> Self {
        let mut hist = vec![0i64; m as usize];
        hist[k.rem_euclid(m as i64) as usize] = 1;
        Self::from_exponent_counts(m, &hist)
    }

    /// `sum_k counts[k] x^k` for `k` in `0..m`.
    pub fn from_exponent_counts(m: u32, counts: &[i64]) -> Self {
        let raw: Vec<BigRational> = counts
            .iter()
            .map(|&c| BigRational::from_integer(BigInt::from(c)))
            .collect();
        Self::reduce(m, raw)
    }

    fn reduce(m: u32, mut raw: Vec<BigRational>) -> Self {
        let phi_poly = cyclotomic_poly(m);
        let deg = phi_poly.len() - 1;
        while raw.len() > deg {
            let top = raw.len() - 1;
            let c = raw.pop().expect("nonempty");
            if c.is_zero() {
                continue;
            }
            let shift = top - deg;
            for (j, &pj) in phi_poly.iter().enumerate().take(deg) {
                raw[shift + j] -= &c * BigRational::from_integer(BigInt::from(pj));
            }
        }
        raw.resize(deg, BigRational::zero());
        CyclotomicElement { m, coeffs: raw }
    }

    pub fn conductor(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The value as a rational number, if it lies in `Q`.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        CyclotomicElement {
            m: self.m,
            coeffs: self.coeffs.iter().map(|c| c * r).collect(),
        }
    }

    /// Galois action `x -> x^v` for `v` coprime to `m`.
    pub fn galois(&self, v: u32) -> Self {
        let mut raw = vec![BigRational::zero(); self.m as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            let e = (k as u64 * v as u64 % self.m as u64) as usize;
            raw[e] += c;
        }
        Self::reduce(self.m, raw)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(self.m);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }
}

impl Add for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn add(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        assert_eq!(self.m, rhs.m, "conductor mismatch");
        CyclotomicElement {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn sub(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        assert_eq!(self.m, rhs.m, "conductor mismatch");
        CyclotomicElement {
            m: self.m,
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Neg for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn neg(self) -> CyclotomicElement {
        CyclotomicElement {
            m: self.m,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &CyclotomicElement {
    type Output = CyclotomicElement;
    fn mul(self, rhs: &CyclotomicElement) -> CyclotomicElement {
        assert_eq!(self.m, rhs.m, "conductor mismatch");
        let n = self.coeffs.len() + rhs.coeffs.len() - 1;
        let mut raw = vec![BigRational::zero(); n];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                raw[i + j] += a * b;
            }
        }
        CyclotomicElement::reduce(self.m, raw)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cyclotomic_polys() {
        assert_eq!(*cyclotomic_poly(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_poly(2), vec![1, 1]);
        assert_eq!(*cyclotomic_poly(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_poly(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_poly(12), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn root_of_unity_relations() {
        for m in 1..=12u32 {
            let x = CyclotomicElement::root_power(m, 1);
            assert_eq!(x.pow(m as u64), CyclotomicElement::one(m));
            let sum = (0..m as i64).fold(CyclotomicElement::zero(m), |acc, k| {
                &acc + &CyclotomicElement::root_power(m, k)
            });
            let expected = if m == 1 { 1 } else { 0 };
            assert_eq!(
                sum.as_rational().unwrap(),
                BigRational::from_integer(expected.into())
            );
        }
    }

    #[test]
    fn galois_is_multiplicative() {
        let a = &CyclotomicElement::root_power(7, 2) + &CyclotomicElement::from_int(7, 3);
        let b = &CyclotomicElement::root_power(7, 5) - &CyclotomicElement::root_power(7, 1);
        assert_eq!((&a * &b).galois(3), &a.galois(3) * &b.galois(3));
    }
}
