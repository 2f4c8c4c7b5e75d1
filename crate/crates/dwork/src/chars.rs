//! Characters of `A`, their orbits under `(Z/nZ)^x . S_n`, and the
//! combinatorial invariants that predict the zeta factorization.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{euler_phi, factorial, gcd, unit_residue, units};
use crate::error::{invalid, Result};

pub const MIN_N: u32 = 3;
pub const MAX_N: u32 = 9;

pub(crate) fn check_range(n: u32) -> Result<()> {
    if !(MIN_N..=MAX_N).contains(&n) {
        return Err(invalid(format!("n = {n} outside {MIN_N}..={MAX_N}")));
    }
    Ok(())
}

/// An element of `A^ = {a : sum a_i = 0} / diagonal`, stored as the
/// lexicographically least representative under diagonal shifts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CharClass {
    n: u32,
    rep: Vec<u8>,
}

impl CharClass {
    pub fn new(n: u32, values: &[i64]) -> Result<CharClass> {
        if values.len() != n as usize {
            return Err(invalid(format!(
                "expected {n} entries, got {}",
                values.len()
            )));
        }
        let v: Vec<u8> = values
            .iter()
            .map(|&x| x.rem_euclid(n as i64) as u8)
            .collect();
        if v.iter().map(|&x| x as u32).sum::<u32>() % n != 0 {
            return Err(invalid("entries must sum to 0 mod n"));
        }
        Ok(CharClass {
            n,
            rep: min_shift(&v, n),
        })
    }

    pub(crate) fn from_raw(n: u32, v: &[u8]) -> CharClass {
        CharClass {
            n,
            rep: min_shift(v, n),
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn rep(&self) -> &[u8] {
        &self.rep
    }

    /// Sorted, shift-minimized form: the canonical label of the `S_n`-orbit.
    pub fn sorted_rep(&self) -> Vec<u8> {
        sorted_canonical(&self.rep, self.n)
    }

    /// Canonical label of the `(Z/nZ)^x . S_n`-orbit.
    pub fn orbit_rep(&self) -> Vec<u8> {
        orbit_key(&self.rep, self.n)
    }

    pub fn scale(&self, k: u32) -> CharClass {
        let v: Vec<u8> = self
            .rep
            .iter()
            .map(|&x| ((x as u32 * k) % self.n) as u8)
            .collect();
        CharClass::from_raw(self.n, &v)
    }

    /// `a(t) = sum a_i t_i mod n` for an exponent vector `t` with `sum t_i = 0`.
    pub fn pair(&self, t: &[u8]) -> u32 {
        self.rep
            .iter()
            .zip(t)
            .map(|(&a, &b)| a as u32 * b as u32)
            .sum::<u32>()
            % self.n
    }
}

impl fmt::Display for CharClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_vec(&self.rep))
    }
}

pub fn format_vec(v: &[u8]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(","))
}

fn min_shift(v: &[u8], n: u32) -> Vec<u8> {
    (0..n)
        .map(|j| {
            v.iter()
                .map(|&x| ((x as u32 + j) % n) as u8)
                .collect::<Vec<u8>>()
        })
        .min()
        .expect("n >= 1")
}

pub(crate) fn sorted_canonical(v: &[u8], n: u32) -> Vec<u8> {
    (0..n)
        .map(|j| {
            let mut w: Vec<u8> = v.iter().map(|&x| ((x as u32 + j) % n) as u8).collect();
            w.sort_unstable();
            w
        })
        .min()
        .expect("n >= 1")
}

pub(crate) fn orbit_key(v: &[u8], n: u32) -> Vec<u8> {
    units(n)
        .into_iter()
        .map(|k| {
            let w: Vec<u8> = v.iter().map(|&x| ((x as u32 * k) % n) as u8).collect();
            sorted_canonical(&w, n)
        })
        .min()
        .expect("units are nonempty")
}

/// Every class of `A^` with first entry 0, in lexicographic order.
pub fn enumerate_classes(n: u32) -> Result<Vec<CharClass>> {
    check_range(n)?;
    let free = n as usize - 2;
    let total = (n as usize).pow(free as u32);
    let mut out = Vec::with_capacity(total);
    let mut v = vec![0u8; n as usize];
    for code in 0..total {
        let mut c = code;
        for k in (1..=free).rev() {
            v[k] = (c % n as usize) as u8;
            c /= n as usize;
        }
        let s: u32 = v[1..=free].iter().map(|&x| x as u32).sum();
        v[n as usize - 1] = ((n - s % n) % n) as u8;
        out.push(CharClass::from_raw(n, &v));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitInvariants {
    pub m_a: u32,
    pub nprime_a: u32,
    pub d_a: u32,
    pub f_a: u32,
    pub n_a: u32,
    pub e_a: u32,
    pub gamma_a: u64,
    pub mprime_a: u32,
    pub im_k: Vec<u32>,
    pub deg_q: u32,
    pub exponent: u64,
    /// `[D_a : Q] = phi(n_a) / |Im k_a|`.
    pub d_a_degree: u32,
    pub d_a_label: String,
    pub size_s_prime: u64,
    pub size_s_bar: u64,
    pub size_s: u64,
}

pub fn invariants(a: &CharClass) -> OrbitInvariants {
    let n = a.n;
    let rep = &a.rep;
    let counts = level_counts(rep, n);
    let distinct = counts.iter().filter(|&&c| c > 0).count() as u32;
    let m_a = n - distinct;
    let nprime_a = (1..=n)
        .find(|&j| (0..n).all(|b| counts[((b + j) % n) as usize] == counts[b as usize]))
        .expect("j = n always works");
    let d_a = n / nprime_a;
    let f_a = rep.iter().fold(n as u64, |g, &x| {
        gcd(g, (x as u64 + n as u64 - rep[0] as u64) % n as u64)
    }) as u32;
    let n_a = n / f_a;
    let e_a = nprime_a / f_a;
    let size_s_prime: u64 = counts.iter().map(|&c| factorial(c)).product();
    let gamma_a = factorial(n) / size_s_prime;
    let mprime_a = m_a / d_a;
    let im_k = image_k(rep, n, n_a, &counts);
    let phi = euler_phi(n_a);
    let d_a_degree = phi / im_k.len() as u32;
    let deg_q = mprime_a * d_a_degree;
    let exponent = gamma_a / d_a as u64;
    let d_a_label = field_label(n_a, &im_k).expect("Im k_a is a subgroup");
    let size_s_bar = size_s_prime * d_a as u64;
    let size_s = size_s_bar * im_k.len() as u64;
    OrbitInvariants {
        m_a,
        nprime_a,
        d_a,
        f_a,
        n_a,
        e_a,
        gamma_a,
        mprime_a,
        im_k,
        deg_q,
        exponent,
        d_a_degree,
        d_a_label,
        size_s_prime,
        size_s_bar,
        size_s,
    }
}

pub(crate) fn level_counts(rep: &[u8], n: u32) -> Vec<u32> {
    let mut counts = vec![0u32; n as usize];
    for &x in rep {
        counts[x as usize] += 1;
    }
    counts
}

fn image_k(rep: &[u8], n: u32, n_a: u32, counts: &[u32]) -> Vec<u32> {
    let mut out: Vec<u32> = units(n)
        .into_iter()
        .filter(|&k| {
            let scaled: Vec<u8> = rep.iter().map(|&x| ((x as u32 * k) % n) as u8).collect();
            let sc = level_counts(&scaled, n);
            (0..n).any(|j| (0..n).all(|b| sc[((b + j) % n) as usize] == counts[b as usize]))
        })
        .map(|k| unit_residue(k as u64, n_a))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn is_subgroup(n_a: u32, im_k: &[u32]) -> bool {
    let all = units(n_a);
    !im_k.is_empty()
        && im_k.iter().all(|k| all.contains(k))
        && im_k.contains(&unit_residue(1, n_a))
        && im_k.iter().all(|&x| {
            im_k.iter()
                .all(|&y| im_k.contains(&unit_residue(x as u64 * y as u64, n_a)))
        })
}

/// Human-readable name of the fixed field `D_a` of `Im k_a` in `Q(mu_{n_a})`.
pub fn field_label(n_a: u32, im_k: &[u32]) -> Result<String> {
    if n_a == 0 || !is_subgroup(n_a, im_k) {
        return Err(invalid(format!(
            "{im_k:?} is not a subgroup of (Z/{n_a}Z)^x"
        )));
    }
    let phi = euler_phi(n_a) as usize;
    if im_k.len() == phi {
        return Ok("Q".to_string());
    }
    if crate::ffield::is_prime(n_a as u64) && n_a > 2 && im_k.len() * 2 == phi {
        let mut squares: Vec<u32> = (1..n_a).map(|x| x * x % n_a).collect();
        squares.sort_unstable();
        squares.dedup();
        if squares == im_k {
            let sign = if ((n_a - 1) / 2).is_multiple_of(2) {
                1
            } else {
                -1
            };
            return Ok(format!("Q(sqrt({}))", sign * n_a as i64));
        }
    }
    if im_k == [1] {
        return Ok(format!("Q(mu_{n_a})"));
    }
    if im_k == [1, n_a - 1] {
        return Ok(format!("Q(mu_{n_a})+"));
    }
    let ks: Vec<String> = im_k.iter().map(|k| k.to_string()).collect();
    Ok(format!("({n_a}; {})", ks.join(",")))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Orbit {
    /// Canonical representative: sorted, then least under shifts and units.
    pub rep: CharClass,
    /// Number of classes of `A^` in the orbit.
    pub size: u64,
    /// `m_a = 0`: the orbit contributes nothing to the cohomology.
    pub excluded: bool,
    pub invariants: OrbitInvariants,
}

/// Partition of `A^` into `(Z/nZ)^x . S_n`-orbits, sorted by representative.
pub fn full_orbits(n: u32) -> Result<Vec<Orbit>> {
    check_range(n)?;
    let mut sizes: BTreeMap<Vec<u8>, u64> = BTreeMap::new();
    for class in enumerate_classes(n)? {
        *sizes.entry(class.orbit_rep()).or_default() += 1;
    }
    Ok(sizes
        .into_iter()
        .map(|(key, size)| {
            let rep = CharClass::from_raw(n, &key);
            let invariants = invariants(&rep);
            Orbit {
                rep,
                size,
                excluded: invariants.m_a == 0,
                invariants,
            }
        })
        .collect())
}

/// `((n-1)^n + (-1)^n (n-1)) / n`, the dimension of primitive cohomology.
pub fn primitive_dimension(n: u32) -> u64 {
    let n1 = (n - 1) as i128;
    let sign = if n.is_multiple_of(2) { 1 } else { -1 };
    ((n1.pow(n) + sign * n1) / n as i128) as u64
}

pub fn omega_set_label(d_a: u32) -> String {
    match d_a {
        1 => "{1}".to_string(),
        2 => "{1,-1}".to_string(),
        d => format!("mu_{d}"),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionRow {
    pub class: String,
    pub m_a: u32,
    pub deg_q: u32,
    pub exponent: u64,
    pub d_a: String,
    pub omega_set: String,
    pub orbit_size: u64,
    pub excluded: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictionReport {
    pub n: u32,
    pub rows: Vec<PredictionRow>,
    pub excluded: Vec<PredictionRow>,
    /// Sum over rows of `d_a * deg_Q * exponent`.
    pub total_dimension: u64,
    pub expected_dimension: u64,
}

pub fn predict_report(n: u32) -> Result<PredictionReport> {
    let orbits = full_orbits(n)?;
    let mut rows = Vec::new();
    let mut excluded = Vec::new();
    let mut total = 0u64;
    for o in &orbits {
        let inv = &o.invariants;
        let row = PredictionRow {
            class: o.rep.to_string(),
            m_a: inv.m_a,
            deg_q: inv.deg_q,
            exponent: inv.exponent,
            d_a: inv.d_a_label.clone(),
            omega_set: omega_set_label(inv.d_a),
            orbit_size: o.size,
            excluded: o.excluded,
        };
        if o.excluded {
            excluded.push(row);
        } else {
            total += inv.d_a as u64 * inv.deg_q as u64 * inv.exponent;
            rows.push(row);
        }
    }
    Ok(PredictionReport {
        n,
        rows,
        excluded,
        total_dimension: total,
        expected_dimension: primitive_dimension(n),
    })
}

impl PredictionReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "class",
            "m_a",
            "deg_Q",
            "exponent",
            "D_a",
            "omega-set",
            "orbit_size",
            "excluded",
        ])
        .expect("in-memory write");
        for r in self.rows.iter().chain(&self.excluded) {
            w.write_record([
                r.class.clone(),
                r.m_a.to_string(),
                r.deg_q.to_string(),
                r.exponent.to_string(),
                r.d_a.clone(),
                r.omega_set.clone(),
                r.orbit_size.to_string(),
                r.excluded.to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    pub fn to_markdown(&self) -> String {
        let header = ["class", "m_a", "deg_Q", "exponent", "D_a", "omega-set"];
        let body: Vec<[String; 6]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.class.clone(),
                    r.m_a.to_string(),
                    r.deg_q.to_string(),
                    r.exponent.to_string(),
                    r.d_a.clone(),
                    r.omega_set.clone(),
                ]
            })
            .collect();
        let mut out = markdown_table(&header, &body);
        for r in &self.excluded {
            out.push_str(&format!("\nexcluded: {} (m_a = 0)", r.class));
        }
        out.push_str(&format!(
            "\ntotal dimension: {} (expected {})\n",
            self.total_dimension, self.expected_dimension
        ));
        out
    }
}

/// Aligned-text markdown table.
pub fn markdown_table<const K: usize>(header: &[&str; K], rows: &[[String; K]]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        format!("| {} |\n", padded.join(" | "))
    };
    let mut out = line(header.to_vec());
    let rule: Vec<String> = widths.iter().map(|&w| "-".repeat(w)).collect();
    out.push_str(&format!("|-{}-|\n", rule.join("-|-")));
    for row in rows {
        out.push_str(&line(row.iter().map(|s| s.as_str()).collect()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(n: u32, v: &[i64]) -> CharClass {
        CharClass::new(n, v).unwrap()
    }

    #[test]
    fn canonical_form_is_idempotent() {
        let a = class(5, &[3, 3, 4, 0, 0]);
        assert_eq!(
            CharClass::new(5, &a.rep().iter().map(|&x| x as i64).collect::<Vec<_>>()).unwrap(),
            a
        );
        assert_eq!(a.rep()[0], 0);
    }

    #[test]
    fn class_counts() {
        assert_eq!(enumerate_classes(3).unwrap().len(), 3);
        assert_eq!(enumerate_classes(4).unwrap().len(), 16);
        assert_eq!(enumerate_classes(5).unwrap().len(), 125);
    }

    #[test]
    fn invariants_of_0022() {
        let inv = invariants(&class(4, &[0, 0, 2, 2]));
        assert_eq!(
            (
                inv.m_a,
                inv.nprime_a,
                inv.d_a,
                inv.f_a,
                inv.n_a,
                inv.e_a,
                inv.gamma_a,
                inv.mprime_a
            ),
            (2, 2, 2, 2, 2, 1, 6, 1)
        );
        assert_eq!(inv.im_k, vec![1]);
        assert_eq!((inv.deg_q, inv.exponent), (1, 3));
    }

    #[test]
    fn invariants_of_00014() {
        let inv = invariants(&class(5, &[0, 0, 0, 1, 4]));
        assert_eq!(
            (
                inv.m_a,
                inv.d_a,
                inv.f_a,
                inv.n_a,
                inv.e_a,
                inv.gamma_a,
                inv.mprime_a
            ),
            (2, 1, 1, 5, 5, 20, 2)
        );
        assert_eq!(inv.im_k, vec![1, 4]);
        assert_eq!((inv.deg_q, inv.exponent), (4, 20));
        assert_eq!(inv.d_a_label, "Q(sqrt(5))");
        assert_eq!(inv.size_s, 12);
    }

    #[test]
    fn two_not_in_image_for_00113() {
        let inv = invariants(&class(5, &[0, 0, 1, 1, 3]));
        assert!(!inv.im_k.contains(&2));
    }

    #[test]
    fn zero_class() {
        for n in 3..=7 {
            let inv = invariants(&class(n, &vec![0; n as usize]));
            assert_eq!(
                (inv.m_a, inv.nprime_a, inv.d_a, inv.f_a, inv.n_a, inv.e_a),
                (n - 1, n, 1, n, 1, 1)
            );
            assert_eq!((inv.gamma_a, inv.deg_q, inv.exponent), (1, n - 1, 1));
            assert_eq!(inv.d_a_label, "Q");
        }
    }

    #[test]
    fn labels() {
        assert_eq!(field_label(7, &[1, 2, 4]).unwrap(), "Q(sqrt(-7))");
        assert_eq!(field_label(7, &[1, 6]).unwrap(), "Q(mu_7)+");
        assert_eq!(field_label(1, &[1]).unwrap(), "Q");
        assert!(field_label(7, &[1, 3]).is_err());
    }

    #[test]
    fn range_errors() {
        assert!(enumerate_classes(2).is_err());
        assert!(enumerate_classes(10).is_err());
    }
}
