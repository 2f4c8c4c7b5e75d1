//! Permutations and elements of `G = A x| S_n`.
//!
//! A pair `(t, sigma)` stands for `zeta^t . sigma`, where `sigma` moves
//! coordinate `i` to position `sigma(i)` and `zeta^t` scales coordinate `i`
//! by `zeta^(t_i)`. Conjugation gives `sigma zeta^t sigma^-1 = zeta^(sigma.t)`
//! with `(sigma.t)_(sigma(i)) = t_i`, hence the product
//! `(t, s)(t', s') = (t + s.t', s s')`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A permutation of `0..n`, stored as the image vector.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Perm(Vec<u8>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u8).collect())
    }

    pub fn from_images(images: Vec<u8>) -> Result<Perm> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i as usize >= images.len() || seen[i as usize] {
                return Err(invalid(format!("{images:?} is not a permutation")));
            }
            seen[i as usize] = true;
        }
        Ok(Perm(images))
    }

    /// Parses 1-based cycle notation such as `"1 3,2 4"`.
    pub fn from_cycles(n: usize, text: &str) -> Result<Perm> {
        let mut images: Vec<u8> = (0..n as u8).collect();
        let mut used = vec![false; n];
        for cycle in text.split(',').map(str::trim).filter(|c| !c.is_empty()) {
            let pts: Vec<usize> = cycle
                .split_whitespace()
                .map(|s| {
                    s.parse::<usize>()
                        .map_err(|_| invalid(format!("bad cycle entry {s:?}")))
                })
                .collect::<Result<_>>()?;
            for &p in &pts {
                if p == 0 || p > n || used[p - 1] {
                    return Err(invalid(format!(
                        "bad or repeated point {p} in cycles {text:?}"
                    )));
                }
                used[p - 1] = true;
            }
            for (k, &p) in pts.iter().enumerate() {
                images[p - 1] = (pts[(k + 1) % pts.len()] - 1) as u8;
            }
        }
        Ok(Perm(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[u8] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j as usize)
    }

    /// `self o other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        Perm(other.0.iter().map(|&j| self.0[j as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u8; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j as usize] = i as u8;
        }
        Perm(inv)
    }

    pub fn pow(&self, k: u32) -> Perm {
        (0..k).fold(Perm::identity(self.len()), |acc, _| acc.compose(self))
    }

    /// Cycles listed from their least point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut cur = self.apply(start);
            while cur != start {
                seen[cur] = true;
                cyc.push(cur);
                cur = self.apply(cur);
            }
            out.push(cyc);
        }
        out
    }

    pub fn sign(&self) -> i64 {
        let swaps: usize = self.cycles().iter().map(|c| c.len() - 1).sum();
        if swaps.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// `Some(d)` when every cycle has length `d`.
    pub fn uniform_cycle_length(&self) -> Option<usize> {
        let cycles = self.cycles();
        let d = cycles[0].len();
        cycles.iter().all(|c| c.len() == d).then_some(d)
    }

    pub fn is_transposition(&self) -> bool {
        let lens: Vec<usize> = self
            .cycles()
            .iter()
            .map(|c| c.len())
            .filter(|&l| l > 1)
            .collect();
        lens == [2]
    }

    pub fn to_cycle_string(&self) -> String {
        let parts: Vec<String> = self
            .cycles()
            .into_iter()
            .filter(|c| c.len() > 1)
            .map(|c| {
                c.iter()
                    .map(|i| (i + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect();
        parts.join(",")
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.to_cycle_string();
        if s.is_empty() {
            f.write_str("()")
        } else {
            write!(f, "({})", s.replace(',', ")("))
        }
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut cur: Vec<u8> = (0..n as u8).collect();
    let mut out = vec![Perm(cur.clone())];
    loop {
        let Some(i) = (0..n.saturating_sub(1))
            .rev()
            .find(|&i| cur[i] < cur[i + 1])
        else {
            return out;
        };
        let j = (i + 1..n)
            .rev()
            .find(|&j| cur[j] > cur[i])
            .expect("successor exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(Perm(cur.clone()));
    }
}

/// An element `zeta^t . sigma` of `A x| S_n`; `t` is normalized so `t_0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    n: u32,
    t: Vec<u8>,
    sigma: Perm,
}

fn normalize(t: &mut [u8], n: u32) {
    let base = t[0] as u32;
    for x in t.iter_mut() {
        *x = ((*x as u32 + n - base) % n) as u8;
    }
}

impl GroupElement {
    pub fn new(n: u32, t: &[i64], sigma: Perm) -> Result<GroupElement> {
        if t.len() != n as usize || sigma.len() != n as usize {
            return Err(invalid("twist and permutation must have length n"));
        }
        let mut v: Vec<u8> = t.iter().map(|&x| x.rem_euclid(n as i64) as u8).collect();
        if v.iter().map(|&x| x as u32).sum::<u32>() % n != 0 {
            return Err(invalid("twist exponents must sum to 0 mod n"));
        }
        normalize(&mut v, n);
        Ok(GroupElement { n, t: v, sigma })
    }

    pub(crate) fn from_parts(n: u32, mut t: Vec<u8>, sigma: Perm) -> GroupElement {
        normalize(&mut t, n);
        GroupElement { n, t, sigma }
    }

    pub fn identity(n: u32) -> GroupElement {
        GroupElement {
            n,
            t: vec![0; n as usize],
            sigma: Perm::identity(n as usize),
        }
    }

    pub fn from_twist(n: u32, t: &[i64]) -> Result<GroupElement> {
        Self::new(n, t, Perm::identity(n as usize))
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn twist(&self) -> &[u8] {
        &self.t
    }

    pub fn sigma(&self) -> &Perm {
        &self.sigma
    }

    pub fn in_a(&self) -> bool {
        self.sigma.is_identity()
    }

    /// `(sigma.t)_(sigma(i)) = t_i`.
    pub fn permute_twist(sigma: &Perm, t: &[u8]) -> Vec<u8> {
        let mut out = vec![0u8; t.len()];
        for (i, &x) in t.iter().enumerate() {
            out[sigma.apply(i)] = x;
        }
        out
    }

    pub fn mul(&self, other: &GroupElement) -> GroupElement {
        let moved = Self::permute_twist(&self.sigma, &other.t);
        let t: Vec<u8> = self
            .t
            .iter()
            .zip(&moved)
            .map(|(&a, &b)| ((a as u32 + b as u32) % self.n) as u8)
            .collect();
        GroupElement::from_parts(self.n, t, self.sigma.compose(&other.sigma))
    }

    pub fn inverse(&self) -> GroupElement {
        let inv = self.sigma.inverse();
        let moved = Self::permute_twist(&inv, &self.t);
        let t: Vec<u8> = moved
            .iter()
            .map(|&x| ((self.n - x as u32) % self.n) as u8)
            .collect();
        GroupElement::from_parts(self.n, t, inv)
    }

    /// `h g h^-1`.
    pub fn conjugate_by(&self, h: &GroupElement) -> GroupElement {
        h.mul(self).mul(&h.inverse())
    }

    pub fn order(&self) -> u32 {
        let id = GroupElement::identity(self.n);
        let mut cur = self.clone();
        let mut k = 1;
        while cur != id {
            cur = cur.mul(self);
            k += 1;
        }
        k
    }

    /// Label of the class of `self` under conjugation by `S_n`.
    pub fn symmetry_key(&self) -> (Vec<u8>, Vec<u8>) {
        if self.in_a() {
            let sorted = crate::chars::sorted_canonical(&self.t, self.n);
            return (self.sigma.images().to_vec(), sorted);
        }
        all_perms(self.n as usize)
            .iter()
            .map(|p| {
                let h = GroupElement::identity(self.n).with_sigma(p.clone());
                let c = self.conjugate_by(&h);
                (c.sigma.images().to_vec(), c.t)
            })
            .min()
            .expect("S_n is nonempty")
    }

    fn with_sigma(mut self, sigma: Perm) -> GroupElement {
        self.sigma = sigma;
        self
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", crate::chars::format_vec(&self.t), self.sigma)
    }
}

/// Every element of `A`, as exponent vectors with `t_0 = 0`.
pub fn all_a_elements(n: u32) -> Vec<GroupElement> {
    crate::chars::enumerate_classes(n)
        .map(|cs| {
            cs.into_iter()
                .map(|c| GroupElement::from_parts(n, c.rep().to_vec(), Perm::identity(n as usize)))
                .collect()
        })
        .unwrap_or_default()
}

/// Every element of `G`.
pub fn all_group_elements(n: u32) -> Vec<GroupElement> {
    let a = all_a_elements(n);
    let perms = all_perms(n as usize);
    let mut out = Vec::with_capacity(a.len() * perms.len());
    for z in &a {
        for p in &perms {
            out.push(GroupElement::from_parts(n, z.t.clone(), p.clone()));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perm_basics() {
        assert_eq!(all_perms(4).len(), 24);
        let p = Perm::from_cycles(4, "1 3,2 4").unwrap();
        assert_eq!(p.images(), &[2, 3, 0, 1]);
        assert_eq!(p.sign(), 1);
        assert_eq!(p.uniform_cycle_length(), Some(2));
        assert_eq!(p.to_cycle_string(), "1 3,2 4");
        assert!(Perm::from_cycles(4, "1 2,2 3").is_err());
    }

    #[test]
    fn group_law() {
        let n = 3;
        let all = all_group_elements(n);
        assert_eq!(all.len(), 18);
        let id = GroupElement::identity(n);
        for g in &all {
            assert_eq!(g.mul(&g.inverse()), id);
            assert_eq!(g.inverse().mul(g), id);
            for h in all.iter().take(6) {
                for k in all.iter().skip(5).take(6) {
                    assert_eq!(g.mul(h).mul(k), g.mul(&h.mul(k)));
                }
            }
        }
    }
}
