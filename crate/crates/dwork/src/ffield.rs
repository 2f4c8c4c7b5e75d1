//! Finite fields `F_{p^r}` realized through discrete-log and Zech-log tables.
//!
//! Elements are stored as discrete-log indices with respect to a fixed
//! primitive element, so multiplication is index addition and addition goes
//! through the Zech table `zech[i] = log(1 + g^i)`.

use crate::error::{invalid, Error, Result};
use crate::limits::FIELD_CAP;

/// A field element: either zero or `g^index` with `index < Q - 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FqElem(u32);

impl FqElem {
    pub const ZERO: FqElem = FqElem(u32::MAX);
    pub const ONE: FqElem = FqElem(0);

    pub fn from_index(i: u32) -> Self {
        FqElem(i)
    }

    pub fn index(self) -> Option<u32> {
        if self.is_zero() {
            None
        } else {
            Some(self.0)
        }
    }

    pub fn is_zero(self) -> bool {
        self.0 == u32::MAX
    }

    /// Dense code in `0..Q`: zero maps to 0 and `g^i` to `i + 1`.
    #[inline]
    pub fn code(self) -> usize {
        if self.is_zero() {
            0
        } else {
            self.0 as usize + 1
        }
    }

    #[inline]
    pub fn from_code(c: usize) -> Self {
        if c == 0 {
            FqElem::ZERO
        } else {
            FqElem((c - 1) as u32)
        }
    }
}

#[derive(Clone, Debug)]
pub struct FieldTable {
    p: u32,
    r: u32,
    size: u32,
    modulus: Vec<u32>,
    generator: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    zech: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Dense polynomial arithmetic over `F_p`, coefficients low degree first.
pub(crate) mod poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        trim(&mut out);
        out
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * b % p;
            }
            b = b * b % p;
            e >>= 1;
        }
        r
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        trim(&mut a);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while a.len() > dm {
            let top = a.len() - 1;
            let c = a[top] * lead_inv % p;
            let shift = top - dm;
            for (k, &mk) in m.iter().enumerate() {
                a[shift + k] = (a[shift + k] + p - c * mk % p) % p;
            }
            trim(&mut a);
        }
        a
    }

    pub fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        rem(&mul(a, b, p), m, p)
    }

    pub fn powmod(base: &[u64], mut e: u128, m: &[u64], p: u64) -> Vec<u64> {
        let mut result = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(&result, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        result
    }

    pub fn add(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p)
            .collect();
        trim(&mut out);
        out
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out: Vec<u64> = (0..n)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// Rabin's irreducibility test for a monic polynomial of degree `r`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let r = (f.len() - 1) as u32;
        let x = vec![0u64, 1];
        let frob = |k: u32| powmod(&x, (p as u128).pow(k), f, p);
        if !sub(&frob(r), &x, p).is_empty() {
            return false;
        }
        for l in super::prime_factors(r as u64) {
            let h = sub(&frob(r / l as u32), &x, p);
            let g = gcd(f, &h, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

pub(crate) fn digits(mut enc: u64, p: u64, r: u32) -> Vec<u64> {
    let mut out = Vec::with_capacity(r as usize);
    for _ in 0..r {
        out.push(enc % p);
        enc /= p;
    }
    poly::trim(&mut out);
    out
}

pub(crate) fn encode(poly: &[u64], p: u64) -> u64 {
    poly.iter().rev().fold(0u64, |acc, &c| acc * p + c)
}

/// Builds `F_{p^r}` over the lexicographically least monic irreducible
/// modulus, with the primitive element of least encoding as generator.
///
/// An element `c_0 + c_1 x + ... + c_{r-1} x^{r-1}` is encoded as
/// `c_0 + c_1 p + ... + c_{r-1} p^{r-1}`.
pub fn build_field(p: u32, r: u32) -> Result<FieldTable> {
    if !is_prime(p as u64) {
        return Err(invalid(format!("p = {p} is not prime")));
    }
    if r == 0 {
        return Err(invalid("extension degree must be at least 1"));
    }
    let size = (p as u64).checked_pow(r).filter(|&s| s <= FIELD_CAP);
    let Some(size) = size else {
        return Err(Error::CostCap {
            what: format!("field size {p}^{r}"),
            value: (p as u128).saturating_pow(r),
            cap: FIELD_CAP as u128,
        });
    };
    let pp = p as u64;
    let modulus = least_irreducible(pp, r);
    let order = size - 1;
    let factors = prime_factors(order);
    let generator = (1..size)
        .find(|&enc| {
            let g = digits(enc, pp, r);
            factors
                .iter()
                .all(|&l| poly::powmod(&g, (order / l) as u128, &modulus, pp) != vec![1u64])
        })
        .expect("multiplicative group of a finite field is cyclic");

    let mut exp = vec![0u32; order as usize];
    let mut log = vec![u32::MAX; size as usize];
    let gpoly = digits(generator, pp, r);
    let mut cur = vec![1u64];
    for i in 0..order as usize {
        let enc = encode(&cur, pp) as u32;
        exp[i] = enc;
        log[enc as usize] = i as u32;
        cur = poly::mulmod(&cur, &gpoly, &modulus, pp);
    }
    debug_assert_eq!(cur, vec![1u64]);

    let zech = exp
        .iter()
        .map(|&enc| {
            let c0 = enc % p;
            let one_plus = enc - c0 + (c0 + 1) % p;
            if one_plus == 0 {
                u32::MAX
            } else {
                log[one_plus as usize]
            }
        })
        .collect();

    Ok(FieldTable {
        p,
        r,
        size: size as u32,
        modulus: modulus.iter().map(|&c| c as u32).collect(),
        generator: generator as u32,
        exp,
        log,
        zech,
    })
}

pub(crate) fn least_irreducible(p: u64, r: u32) -> Vec<u64> {
    let count = p.pow(r);
    for idx in 0..count {
        // c_0 is the most significant position of the ordering tuple.
        let mut coeffs = vec![0u64; r as usize + 1];
        let mut rest = idx;
        for k in (0..r as usize).rev() {
            coeffs[k] = rest % p;
            rest /= p;
        }
        coeffs[r as usize] = 1;
        if r == 1 || poly::is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}

impl FieldTable {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    /// Number of elements `Q = p^r`.
    pub fn size(&self) -> u32 {
        self.size
    }

    /// Order `Q - 1` of the multiplicative group.
    pub fn order(&self) -> u32 {
        self.size - 1
    }

    /// Modulus coefficients `c_0, ..., c_r` (monic).
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Encoding of the primitive element.
    pub fn generator_encoding(&self) -> u32 {
        self.generator
    }

    pub fn generator(&self) -> FqElem {
        if self.order() == 1 {
            FqElem::ONE
        } else {
            FqElem::from_index(1)
        }
    }

    pub fn encoding(&self, x: FqElem) -> u32 {
        match x.index() {
            None => 0,
            Some(i) => self.exp[i as usize],
        }
    }

    pub fn from_encoding(&self, enc: u32) -> Result<FqElem> {
        if enc >= self.size {
            return Err(invalid(format!(
                "encoding {enc} outside field of size {}",
                self.size
            )));
        }
        Ok(if enc == 0 {
            FqElem::ZERO
        } else {
            FqElem(self.log[enc as usize])
        })
    }

    /// Image of an integer under `Z -> F_p -> F_{p^r}`.
    pub fn from_int(&self, v: i64) -> FqElem {
        let enc = v.rem_euclid(self.p as i64) as u32;
        if enc == 0 {
            FqElem::ZERO
        } else {
            FqElem(self.log[enc as usize])
        }
    }

    #[inline]
    pub fn mul(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.is_zero() || b.is_zero() {
            return FqElem::ZERO;
        }
        let s = a.0 as u64 + b.0 as u64;
        let o = self.order() as u64;
        FqElem((if s >= o { s - o } else { s }) as u32)
    }

    pub fn inv(&self, a: FqElem) -> Option<FqElem> {
        a.index()
            .map(|i| FqElem(if i == 0 { 0 } else { self.order() - i }))
    }

    pub fn div(&self, a: FqElem, b: FqElem) -> Option<FqElem> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: FqElem, e: u64) -> FqElem {
        match a.index() {
            None if e == 0 => FqElem::ONE,
            None => FqElem::ZERO,
            Some(i) => FqElem(((i as u128 * e as u128) % self.order() as u128) as u32),
        }
    }

    /// `g^k` for an arbitrary (possibly large or negative) exponent.
    pub fn gen_pow(&self, k: i128) -> FqElem {
        FqElem(k.rem_euclid(self.order() as i128) as u32)
    }

    #[inline]
    pub fn add(&self, a: FqElem, b: FqElem) -> FqElem {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let o = self.order();
        let d = if b.0 >= a.0 { b.0 - a.0 } else { b.0 + o - a.0 };
        let z = self.zech[d as usize];
        if z == u32::MAX {
            return FqElem::ZERO;
        }
        let s = a.0 as u64 + z as u64;
        FqElem((if s >= o as u64 { s - o as u64 } else { s }) as u32)
    }

    pub fn minus_one(&self) -> FqElem {
        if self.p == 2 {
            FqElem::ONE
        } else {
            FqElem(self.order() / 2)
        }
    }

    #[inline]
    pub fn neg(&self, a: FqElem) -> FqElem {
        self.mul(a, self.minus_one())
    }

    #[inline]
    pub fn sub(&self, a: FqElem, b: FqElem) -> FqElem {
        self.add(a, self.neg(b))
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: FqElem) -> Option<u64> {
        a.index()
            .map(|i| self.order() as u64 / gcd(i as u64, self.order() as u64))
    }

    /// The `n` elements of `mu_n`, sorted by discrete-log index.
    pub fn nth_roots(&self, n: u32) -> Result<Vec<FqElem>> {
        if n == 0 || !self.order().is_multiple_of(n) {
            return Err(invalid(format!(
                "{n} does not divide Q - 1 = {}",
                self.order()
            )));
        }
        let step = self.order() / n;
        Ok((0..n).map(|k| FqElem(k * step)).collect())
    }

    /// Least-index `beta` with `beta^((Q-1)/n) = zeta`.
    pub fn coset_root(&self, n: u32, zeta: FqElem) -> Result<FqElem> {
        if n == 0 || !self.order().is_multiple_of(n) {
            return Err(invalid(format!(
                "{n} does not divide Q - 1 = {}",
                self.order()
            )));
        }
        let step = self.order() / n;
        match zeta.index() {
            Some(z) if z % step == 0 => Ok(FqElem(z / step)),
            _ => Err(invalid("zeta is not an n-th root of unity")),
        }
    }

    /// Every element of the field, zero first, then by index.
    pub fn elements(&self) -> impl Iterator<Item = FqElem> + '_ {
        std::iter::once(FqElem::ZERO).chain((0..self.order()).map(FqElem))
    }
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// A field embedding `F_{p^r} -> F_{p^{rs}}`, stored as the image index of
/// the small generator.
#[derive(Clone, Debug)]
pub struct Embedding {
    small_order: u32,
    big_order: u32,
    scale: u64,
}

impl Embedding {
    /// Sends the small modulus' variable to the least-index root of the
    /// small modulus in the big field.
    pub fn new(small: &FieldTable, big: &FieldTable) -> Result<Embedding> {
        if small.p != big.p || !big.r.is_multiple_of(small.r) {
            return Err(invalid(format!(
                "cannot embed F_{}^{} into F_{}^{}",
                small.p, small.r, big.p, big.r
            )));
        }
        let eval = |theta: FqElem, coeffs: &[u32]| {
            coeffs.iter().rev().fold(FqElem::ZERO, |acc, &c| {
                big.add(big.mul(acc, theta), big.from_int(c as i64))
            })
        };
        let theta = big
            .elements()
            .find(|&t| eval(t, &small.modulus).is_zero())
            .ok_or_else(|| invalid("small modulus has no root in the big field"))?;
        let gdigits: Vec<u32> = digits(small.generator as u64, small.p as u64, small.r)
            .into_iter()
            .map(|c| c as u32)
            .collect();
        let image = eval(theta, &gdigits);
        let scale = image.index().expect("generator maps to a unit") as u64;
        let m = (big.order() / small.order().max(1)) as u64;
        debug_assert!(small.order() == 1 || scale.is_multiple_of(m));
        Ok(Embedding {
            small_order: small.order(),
            big_order: big.order(),
            scale,
        })
    }

    pub fn apply(&self, x: FqElem) -> FqElem {
        match x.index() {
            None => FqElem::ZERO,
            Some(i) => FqElem(((i as u64 * self.scale) % self.big_order as u64) as u32),
        }
    }

    /// Inverse on the image; `None` if `y` is not in the subfield.
    pub fn restrict(&self, y: FqElem) -> Option<FqElem> {
        let Some(j) = y.index() else {
            return Some(FqElem::ZERO);
        };
        let m = (self.big_order / self.small_order) as u64;
        if !(j as u64).is_multiple_of(m) {
            return None;
        }
        let k = self.scale / m;
        let kinv = mod_inverse(k, self.small_order as u64)?;
        Some(FqElem(
            ((j as u64 / m) * kinv % self.small_order as u64) as u32,
        ))
    }

    /// `k` with `embed(g_small) = g_big^(M k)`, `M = (Q_big - 1)/(Q_small - 1)`.
    pub fn multiplier(&self) -> u64 {
        self.scale / (self.big_order / self.small_order) as u64
    }
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

/// Convenience form of [`Embedding`] for a single element.
pub fn embed(x: FqElem, small: &FieldTable, big: &FieldTable) -> Result<FqElem> {
    Ok(Embedding::new(small, big)?.apply(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn least_primitive_root_mod_7() {
        let f = build_field(7, 1).unwrap();
        assert_eq!(f.generator_encoding(), 3);
    }

    #[test]
    fn modulus_for_49() {
        let f = build_field(7, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 0, 1]);
    }

    #[test]
    fn rabin_agrees_with_root_search_for_quadratics() {
        for p in [3u64, 5, 7, 11] {
            for c0 in 0..p {
                for c1 in 0..p {
                    let has_root = (0..p).any(|x| (x * x + c1 * x + c0) % p == 0);
                    assert_eq!(poly::is_irreducible(&[c0, c1, 1], p), !has_root);
                }
            }
        }
    }

    #[test]
    fn size_cap() {
        assert!(matches!(build_field(3, 17), Err(Error::CostCap { .. })));
        assert!(matches!(build_field(9, 1), Err(Error::InvalidInput(_))));
    }
}
