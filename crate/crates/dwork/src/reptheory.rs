//! Exact character theory of `G = A x| S_n` acting on primitive cohomology:
//! closed-form traces, Fourier multiplicities, stabilizer structure, the
//! rational representations `W_{a,omega}` and the isotypic projectors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{euler_phi, factorial, unit_residue, units};
use crate::chars::{self, CharClass};
use crate::cyclo::CyclotomicElement;
use crate::error::{check_failed, invalid, Error, Result};
use crate::group::{all_a_elements, all_group_elements, all_perms, GroupElement, Perm};

fn rat(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Euler characteristic of a smooth degree-`d` hypersurface in `P^(k-1)`.
pub fn hirzebruch_chi(k: u32, d: u32) -> i128 {
    let d = d as i128;
    let num = (1 - d).pow(k) + (d - 1);
    debug_assert_eq!(num % d, 0);
    (k as i128 - 1) + num / d
}

/// Trace of `g^*` on primitive cohomology when `sigma` is a product of
/// equal-length cycles, or a bare transposition.
pub fn trace_closed_form(n: u32, g: &GroupElement) -> Result<i128> {
    let sign: i128 = if n.is_multiple_of(2) { 1 } else { -1 };
    let sigma = g.sigma();
    if sigma.is_transposition() && n > 2 {
        if g.twist().iter().any(|&x| x != g.twist()[0]) {
            return Err(invalid(
                "closed form for a transposition needs a trivial twist",
            ));
        }
        let n1 = n as i128 - 1;
        let delta = if n.is_multiple_of(2) { 1 } else { 0 };
        return Ok(sign * (((-n1).pow(n - 1) + n1) / n as i128 - delta));
    }
    let Some(d) = sigma.uniform_cycle_length() else {
        return Err(invalid(format!("{sigma} does not have uniform cycle type")));
    };
    let nprime = n as usize / d;
    let mut k = vec![0u32; n as usize];
    for cyc in sigma.cycles() {
        let z: u32 = cyc.iter().map(|&i| g.twist()[i] as u32).sum::<u32>() % n;
        k[z as usize] += 1;
    }
    let one_minus_n = 1 - n as i128;
    let total: i128 = (0..nprime).map(|j| one_minus_n.pow(k[j * d])).sum();
    debug_assert_eq!(total % nprime as i128, 0);
    Ok(sign * total / nprime as i128)
}

/// `m_a = n - #{distinct a_i}`.
pub fn multiplicity(a: &CharClass) -> u32 {
    let counts = chars::level_counts(a.rep(), a.n());
    counts.iter().filter(|&&c| c == 0).count() as u32
}

fn trace_table_a(n: u32) -> Vec<(GroupElement, i128)> {
    all_a_elements(n)
        .into_iter()
        .map(|g| {
            let t = trace_closed_form(n, &g).expect("A elements have uniform cycle type");
            (g, t)
        })
        .collect()
}

/// `(1/|A|) sum_t f(t) conj(a(t))` for integer-valued `f` on `A`.
fn fourier_coefficient(a: &CharClass, table: &[(GroupElement, i128)]) -> Result<BigRational> {
    let n = a.n();
    let mut hist = vec![0i64; n as usize];
    for (g, v) in table {
        let k = (n - a.pair(g.twist())) % n;
        hist[k as usize] += *v as i64;
    }
    let value = CyclotomicElement::from_exponent_counts(n, &hist)
        .as_rational()
        .ok_or_else(|| check_failed(format!("Fourier coefficient at {a} is not rational")))?;
    Ok(value / rat(table.len() as i128))
}

/// Multiplicities recovered from the closed-form traces on `A` by Fourier
/// inversion in exact cyclotomic arithmetic.
pub fn fourier_multiplicities(n: u32) -> Result<BTreeMap<CharClass, i64>> {
    if n > 7 {
        return Err(invalid("Fourier multiplicities are limited to n <= 7"));
    }
    let table = trace_table_a(n);
    chars::enumerate_classes(n)?
        .into_iter()
        .map(|a| {
            let m = fourier_coefficient(&a, &table)?;
            Ok((a, integer(&m)?))
        })
        .collect()
}

/// Fourier multiplicity of a single class.
pub fn fourier_multiplicity(a: &CharClass) -> Result<i64> {
    let table = trace_table_a(a.n());
    integer(&fourier_coefficient(a, &table)?)
}

fn integer(r: &BigRational) -> Result<i64> {
    if !r.is_integer() {
        return Err(check_failed(format!("{r} is not an integer")));
    }
    r.to_integer()
        .to_i64()
        .ok_or_else(|| check_failed("integer overflow"))
}

/// Brute-force and closed-form sides of the restricted sum of
/// `mu_1^c_1 ... mu_r^c_r` over `c_i != 0` with `sum c_i` in `n' Z/nZ`.
/// `mus` are exponents of a fixed primitive `n`-th root of unity.
pub fn lemma_sum_check(
    n: u32,
    nprime: u32,
    r: u32,
    mus: &[u32],
) -> Result<(BigRational, BigRational)> {
    if nprime == 0 || !n.is_multiple_of(nprime) || r == 0 || mus.len() != r as usize {
        return Err(invalid("need n' | n, r >= 1 and r roots"));
    }
    let cost = (n as u128 - 1).pow(r);
    if cost > 100_000_000 {
        return Err(Error::CostCap {
            what: "lemma brute force".into(),
            value: cost,
            cap: 100_000_000,
        });
    }
    let step = n / nprime;
    let mut hist = vec![0i64; n as usize];
    let mut c = vec![1u32; r as usize];
    loop {
        let s: u32 = c.iter().sum::<u32>() % n;
        if s.is_multiple_of(nprime) {
            let e: u64 = c
                .iter()
                .zip(mus)
                .map(|(&ci, &m)| ci as u64 * m as u64)
                .sum::<u64>()
                % n as u64;
            hist[e as usize] += 1;
        }
        let mut pos = 0;
        loop {
            if pos == c.len() {
                let lhs = CyclotomicElement::from_exponent_counts(n, &hist)
                    .as_rational()
                    .ok_or_else(|| check_failed("lemma sum is not rational"))?;
                let mut total = 0i128;
                for j in 0..nprime {
                    let zeta = j * step;
                    let k = mus.iter().filter(|&&m| m % n == zeta).count() as u32;
                    total += (1 - n as i128).pow(k);
                }
                let sign = if r.is_multiple_of(2) { 1 } else { -1 };
                let rhs = rat(sign * total) / rat(nprime as i128);
                return Ok((lhs, rhs));
            }
            c[pos] += 1;
            if c[pos] < n {
                break;
            }
            c[pos] = 1;
            pos += 1;
        }
    }
}

/// `sum of m_a over classes fixed by a transposition`, and the closed form
/// `(-1)^(n-1) (((1-n)^(n-1) + (n-1))/n - delta_n)`.
pub fn transposition_sum_identity(n: u32) -> Result<(i128, i128)> {
    let tau = Perm::from_cycles(n as usize, "1 2")?;
    let lhs: i128 = chars::enumerate_classes(n)?
        .iter()
        .filter(|a| fixes_exactly(a, &tau))
        .map(|a| multiplicity(a) as i128)
        .sum();
    let n1 = n as i128 - 1;
    let delta = if n.is_multiple_of(2) { 1 } else { 0 };
    let sign = if n.is_multiple_of(2) { -1 } else { 1 };
    Ok((lhs, sign * (((-n1).pow(n - 1) + n1) / n as i128 - delta)))
}

/// `a_(sigma(i)) = a_i` for the shift-normalized representative.
fn fixes_exactly(a: &CharClass, sigma: &Perm) -> bool {
    let rep = a.rep();
    (0..rep.len()).all(|i| rep[sigma.apply(i)] == rep[i])
}

/// `sum over a fixed by sigma (as vectors) of eps(sigma) m_a a(zeta)`: the
/// trace of `zeta sigma` assuming traces vanish on `S_bar_a \ S'_a`.
pub fn trace_resynthesis(
    n: u32,
    g: &GroupElement,
    classes: &[CharClass],
) -> Result<CyclotomicElement> {
    let mut hist = vec![0i64; n as usize];
    for a in classes.iter().filter(|a| fixes_exactly(a, g.sigma())) {
        hist[a.pair(g.twist()) as usize] += multiplicity(a) as i64;
    }
    let v = CyclotomicElement::from_exponent_counts(n, &hist);
    Ok(v.scale(&rat(g.sigma().sign() as i128)))
}

/// Trace of `sigma` on `H_a`, extracted by Fourier inversion from the closed
/// form of `zeta sigma` over all `zeta` in `A`.
pub fn trace_on_isotypic(a: &CharClass, sigma: &Perm) -> Result<BigRational> {
    let n = a.n();
    let table: Vec<(GroupElement, i128)> = all_a_elements(n)
        .into_iter()
        .map(|z| {
            let g = GroupElement::new(n, &to_i64(z.twist()), sigma.clone())?;
            Ok((z, trace_closed_form(n, &g)?))
        })
        .collect::<Result<_>>()?;
    fourier_coefficient(a, &table)
}

fn to_i64(v: &[u8]) -> Vec<i64> {
    v.iter().map(|&x| x as i64).collect()
}

/// Structure of the stabilizer of a class in `S_n`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StabilizerStructure {
    /// Representative with every entry divisible by `f_a`.
    pub rep: Vec<u8>,
    /// Transpositions inside the level sets `I(b)`; they generate `S'_a`.
    pub s_prime_generators: Vec<Perm>,
    /// `i_l(b) -> i_l(b + n'_a)`, numbering each `I(b)` in increasing order.
    pub sigma_a: Perm,
    /// `sigma_{u,v} : i_l(b) -> i_l(v b + u f_a)` for each `(u, v)` in the image.
    pub splitting: Vec<((u32, u32), Perm)>,
}

fn level_sets(rep: &[u8], n: u32) -> Vec<Vec<usize>> {
    let mut sets = vec![Vec::new(); n as usize];
    for (i, &x) in rep.iter().enumerate() {
        sets[x as usize].push(i);
    }
    sets
}

pub fn stabilizer_structure(a: &CharClass) -> StabilizerStructure {
    let n = a.n();
    let inv = chars::invariants(a);
    let rep = a.rep().to_vec();
    let sets = level_sets(&rep, n);
    let mut gens = Vec::new();
    for set in &sets {
        for w in set.windows(2) {
            let mut images: Vec<u8> = (0..n as u8).collect();
            images.swap(w[0], w[1]);
            gens.push(Perm::from_images(images).expect("transposition"));
        }
    }
    let level_map = |f: &dyn Fn(u32) -> u32| {
        let mut images = vec![0u8; n as usize];
        for (b, set) in sets.iter().enumerate() {
            let target = &sets[f(b as u32) as usize];
            for (l, &i) in set.iter().enumerate() {
                images[i] = target[l] as u8;
            }
        }
        Perm::from_images(images).expect("level sets of equal size")
    };
    let sigma_a = level_map(&|b| (b + inv.nprime_a) % n);
    let mut splitting = Vec::new();
    for v in units(inv.n_a) {
        for u in 0..inv.n_a {
            let f = |b: u32| ((b / inv.f_a * v + u) % inv.n_a) * inv.f_a;
            let ok = (0..n)
                .filter(|b| b % inv.f_a == 0)
                .all(|b| sets[b as usize].len() == sets[f(b) as usize].len());
            if ok {
                splitting.push((
                    (u, unit_residue(v as u64, inv.n_a)),
                    level_map(&|b| if b % inv.f_a == 0 { f(b) } else { b }),
                ));
            }
        }
    }
    StabilizerStructure {
        rep,
        s_prime_generators: gens,
        sigma_a,
        splitting,
    }
}

/// `(u, v)` with `a_(sigma(i)) = v a_i + u f_a`, reduced mod `n_a`.
pub fn u_v_of(a: &CharClass, sigma: &Perm) -> Result<(u32, u32)> {
    let n = a.n();
    let inv = chars::invariants(a);
    let na = inv.n_a;
    let reduced: Vec<u32> = a.rep().iter().map(|&x| x as u32 / inv.f_a).collect();
    for v in units(na) {
        let u = (reduced[sigma.apply(0)] + na * na - (v * reduced[0]) % na) % na;
        let ok = (0..n as usize).all(|i| reduced[sigma.apply(i)] % na == (v * reduced[i] + u) % na);
        if ok {
            return Ok((u % na.max(1), unit_residue(v as u64, na)));
        }
    }
    Err(invalid(format!("{sigma} is not in S_a for {a}")))
}

pub fn in_s_a(a: &CharClass, sigma: &Perm) -> bool {
    u_v_of(a, sigma).is_ok()
}

pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn mat_mul(x: &RatMatrix, y: &RatMatrix) -> RatMatrix {
    let n = x.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).fold(BigRational::zero(), |acc, k| acc + &x[i][k] * &y[k][j]))
                .collect()
        })
        .collect()
}

/// The scalar `chi_a(zeta) eps(sigma) omega^u` in `K_a` and `v`.
fn mu_scalar(a: &CharClass, omega_exp: u32, g: &GroupElement) -> Result<(CyclotomicElement, u32)> {
    let inv = chars::invariants(a);
    let na = inv.n_a;
    let (u, v) = u_v_of(a, g.sigma())?;
    let chi: u32 = a
        .rep()
        .iter()
        .zip(g.twist())
        .map(|(&ai, &ti)| (ai as u32 / inv.f_a) * ti as u32)
        .sum::<u32>()
        % na;
    let k = (chi + omega_exp * u) % na;
    let c = CyclotomicElement::root_power(na, k as i64).scale(&rat(g.sigma().sign() as i128));
    Ok((c, v))
}

/// Matrix of `k -> chi_a(zeta) eps(sigma) omega^(u_sigma) theta_(v_sigma)(k)`
/// on the power basis of `K_a = Q(mu_(n_a))`; column `j` is the image of `x^j`.
pub fn mu_matrix(a: &CharClass, omega_exp: u32, g: &GroupElement) -> Result<RatMatrix> {
    let na = chars::invariants(a).n_a;
    let (c, v) = mu_scalar(a, omega_exp, g)?;
    let phi = euler_phi(na) as usize;
    let mut m = vec![vec![BigRational::zero(); phi]; phi];
    for j in 0..phi {
        let img = &c * &CyclotomicElement::root_power(na, (j as u64 * v as u64) as i64);
        for (i, coeff) in img.coeffs().iter().enumerate() {
            m[i][j] = coeff.clone();
        }
    }
    Ok(m)
}

fn mu_trace(a: &CharClass, omega_exp: u32, g: &GroupElement) -> Result<BigRational> {
    let m = mu_matrix(a, omega_exp, g)?;
    Ok((0..m.len()).fold(BigRational::zero(), |acc, i| acc + &m[i][i]))
}

/// Character of `W_{a,omega} = Ind_{A x| S_a}^G M_{a,omega}` at `g`.
pub fn xi_character(a: &CharClass, omega_exp: u32, g: &GroupElement) -> Result<i64> {
    let n = a.n();
    let inv = chars::invariants(a);
    let mut total = BigRational::zero();
    for s in all_perms(n as usize) {
        let h = GroupElement::from_parts(n, vec![0; n as usize], s);
        let c = g.conjugate_by(&h.inverse());
        if in_s_a(a, c.sigma()) {
            total += mu_trace(a, omega_exp, &c)?;
        }
    }
    integer(&(total / rat(inv.size_s as i128)))
}

/// Exponent `w` of `omega(eta) = x^w` in `Q(mu_(n_a))` for the `j`-th element
/// `eta = x^(e_a j)` of `mu_(d_a)`: the least `w` with `w e_a = e_a j mod n_a`.
pub fn omega_exponent(a: &CharClass, j: u32) -> u32 {
    let inv = chars::invariants(a);
    (0..inv.n_a)
        .find(|w| (w * inv.e_a) % inv.n_a == (inv.e_a * j) % inv.n_a)
        .unwrap_or(0)
}

/// A class function on `G` (or on `A`), stored per `S_n`-conjugacy label.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassFunction {
    pub n: u32,
    pub a_only: bool,
    pub entries: Vec<ClassEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassEntry {
    pub rep: GroupElement,
    /// Number of group elements carrying this label.
    pub count: u64,
    /// Value at each of those elements.
    #[serde(with = "rational_string")]
    pub value: BigRational,
}

mod rational_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl ClassFunction {
    fn from_elements(
        n: u32,
        a_only: bool,
        elems: Vec<GroupElement>,
        f: impl Fn(&GroupElement) -> Result<BigRational>,
    ) -> Result<ClassFunction> {
        let mut groups: BTreeMap<(Vec<u8>, Vec<u8>), (GroupElement, u64)> = BTreeMap::new();
        for g in elems {
            let key = g.symmetry_key();
            groups.entry(key).or_insert_with(|| (g, 0)).1 += 1;
        }
        let entries = groups
            .into_values()
            .map(|(rep, count)| {
                Ok(ClassEntry {
                    value: f(&rep)?,
                    rep,
                    count,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ClassFunction { n, a_only, entries })
    }

    /// `sum_g w(g) f(g)` for a function `f` constant on the stored labels.
    pub fn pair_with(
        &self,
        f: impl Fn(&GroupElement) -> Result<BigRational>,
    ) -> Result<BigRational> {
        self.entries.iter().try_fold(BigRational::zero(), |acc, e| {
            if e.value.is_zero() {
                return Ok(acc);
            }
            Ok(acc + &e.value * rat(e.count as i128) * f(&e.rep)?)
        })
    }

    pub fn total_elements(&self) -> u64 {
        self.entries.iter().map(|e| e.count).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProjectorTarget {
    /// Sum of the `A`-isotypic projectors over a `(Z/nZ)^x . S_n`-orbit.
    Orbit(CharClass),
    /// Central idempotent of `W_{a, omega}` with `omega = x^omega_exp`.
    Isotypic { a: CharClass, omega_exp: u32 },
}

/// Weights `w` with `e = sum_g w(g) g^*` the projector for `target`.
pub fn projector_weights(target: &ProjectorTarget, n: u32) -> Result<ClassFunction> {
    match target {
        ProjectorTarget::Orbit(a) => {
            if a.n() != n {
                return Err(invalid("class does not match n"));
            }
            let key = a.orbit_rep();
            let orbit: Vec<CharClass> = chars::enumerate_classes(n)?
                .into_iter()
                .filter(|c| c.orbit_rep() == key)
                .collect();
            let size_a = (n as i128).pow(n - 2);
            ClassFunction::from_elements(n, true, all_a_elements(n), |g| {
                let mut hist = vec![0i64; n as usize];
                for c in &orbit {
                    hist[((n - c.pair(g.twist())) % n) as usize] += 1;
                }
                let v = CyclotomicElement::from_exponent_counts(n, &hist)
                    .as_rational()
                    .ok_or_else(|| check_failed("orbit projector weight is not rational"))?;
                Ok(v / rat(size_a))
            })
        }
        ProjectorTarget::Isotypic { a, omega_exp } => {
            let inv = chars::invariants(a);
            if inv.d_a == 1 && omega_exp % inv.n_a.max(1) != 0 {
                return Err(invalid("omega must be trivial when d_a = 1"));
            }
            let lambda = rat(inv.exponent as i128);
            let order_g = rat((n as i128).pow(n - 2) * factorial(n) as i128);
            ClassFunction::from_elements(n, false, all_group_elements(n), |g| {
                let xi = xi_character(a, *omega_exp, &g.inverse())?;
                Ok(&lambda * rat(xi as i128) / &order_g)
            })
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RegularCheck {
    pub class: String,
    pub passed: bool,
    pub witnesses: Vec<String>,
}

/// Checks that `<sigma_a>` acts through `m'_a` copies of the regular
/// representation: the `omega`-sums equal `d_a` on `S'_a` and vanish
/// elsewhere, and Fourier-extracted traces of `sigma_a^i` on `H_a` are
/// `eps m_a` or `0` accordingly.
pub fn verify_regular_structure(a: &CharClass) -> Result<RegularCheck> {
    let inv = chars::invariants(a);
    let mut witnesses = Vec::new();
    if inv.d_a > 1 {
        let st = stabilizer_structure(a);
        let na = inv.n_a;
        for i in 0..inv.d_a {
            let s = st.sigma_a.pow(i);
            let (u, _) = u_v_of(a, &s)?;
            let sum = (0..inv.d_a).fold(CyclotomicElement::zero(na), |acc, j| {
                let w = omega_exponent(a, j);
                &acc + &CyclotomicElement::root_power(na, (w as u64 * u as u64 % na as u64) as i64)
            });
            let in_prime = fixes_exactly(a, &s);
            let expected = if in_prime { inv.d_a as i64 } else { 0 };
            if sum != CyclotomicElement::from_int(na, expected) {
                witnesses.push(format!(
                    "omega sum at sigma_a^{i} is {:?}, expected {expected}",
                    sum.coeffs()
                ));
            }
            let tr = trace_on_isotypic(a, &s)?;
            let expected_tr = if in_prime {
                s.sign() * inv.m_a as i64
            } else {
                0
            };
            if tr != rat(expected_tr as i128) {
                witnesses.push(format!(
                    "trace of sigma_a^{i} on H_a is {tr}, expected {expected_tr}"
                ));
            }
        }
    }
    Ok(RegularCheck {
        class: a.to_string(),
        passed: witnesses.is_empty(),
        witnesses,
    })
}

/// `sigma` ranges over `S_a` (all permutations with `^sigma a = k a`).
pub fn s_a_elements(a: &CharClass) -> Vec<Perm> {
    all_perms(a.n() as usize)
        .into_iter()
        .filter(|s| in_s_a(a, s))
        .collect()
}

/// One named check of `verify-rep`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedCheck {
    pub name: String,
    pub passed: bool,
    pub witnesses: Vec<String>,
}

impl NamedCheck {
    fn new(name: impl Into<String>, witnesses: Vec<String>) -> NamedCheck {
        NamedCheck {
            name: name.into(),
            passed: witnesses.is_empty(),
            witnesses,
        }
    }
}

/// Representation-theoretic self-checks for `n`, optionally restricted to one
/// orbit: Fourier multiplicities, the transposition identity, regular
/// structure, `xi` degrees and the dimension count.
pub fn verify_rep(n: u32, orbit: Option<&CharClass>) -> Result<Vec<NamedCheck>> {
    if !(3..=7).contains(&n) {
        return Err(invalid("verify-rep supports 3 <= n <= 7"));
    }
    let orbits: Vec<chars::Orbit> = chars::full_orbits(n)?
        .into_iter()
        .filter(|o| orbit.is_none_or(|a| a.orbit_rep() == o.rep.orbit_rep()))
        .collect();
    if orbits.is_empty() {
        return Err(invalid("orbit not found"));
    }
    let mut out = Vec::new();
    let mut w = Vec::new();
    for o in &orbits {
        let m = fourier_multiplicity(&o.rep)?;
        if m != multiplicity(&o.rep) as i64 {
            w.push(format!(
                "{}: Fourier {m}, formula {}",
                o.rep,
                multiplicity(&o.rep)
            ));
        }
    }
    out.push(NamedCheck::new("fourier-multiplicity", w));
    let (lhs, rhs) = transposition_sum_identity(n)?;
    let w = if lhs == rhs {
        Vec::new()
    } else {
        vec![format!("{lhs} vs {rhs}")]
    };
    out.push(NamedCheck::new("transposition-sum", w));
    let mut w = Vec::new();
    for o in orbits.iter().filter(|o| !o.excluded) {
        let check = verify_regular_structure(&o.rep)?;
        w.extend(
            check
                .witnesses
                .into_iter()
                .map(|x| format!("{}: {x}", o.rep)),
        );
    }
    out.push(NamedCheck::new("regular-structure", w));
    let mut w = Vec::new();
    let id = GroupElement::identity(n);
    for o in orbits.iter().filter(|o| !o.excluded) {
        let inv = &o.invariants;
        for j in 0..inv.d_a {
            let deg = xi_character(&o.rep, omega_exponent(&o.rep, j), &id)?;
            let expected = inv.exponent as i64 * inv.d_a_degree as i64;
            if deg != expected {
                w.push(format!("{} (eta index {j}): {deg} vs {expected}", o.rep));
            }
        }
    }
    out.push(NamedCheck::new("xi-degree", w));
    if orbit.is_none() {
        let report = chars::predict_report(n)?;
        let w = if report.total_dimension == report.expected_dimension {
            Vec::new()
        } else {
            vec![format!(
                "{} vs {}",
                report.total_dimension, report.expected_dimension
            )]
        };
        out.push(NamedCheck::new("primitive-dimension", w));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(n: u32, v: &[i64]) -> CharClass {
        CharClass::new(n, v).unwrap()
    }

    #[test]
    fn chi_values() {
        assert_eq!(hirzebruch_chi(3, 3), 0);
        for d in 1..6 {
            assert_eq!(hirzebruch_chi(2, d), d as i128);
            assert_eq!(hirzebruch_chi(1, d), 0);
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(trace_closed_form(3, &GroupElement::identity(3)).unwrap(), 2);
        let tau =
            GroupElement::new(4, &[0, 0, 0, 0], Perm::from_cycles(4, "1 2").unwrap()).unwrap();
        assert_eq!(trace_closed_form(4, &tau).unwrap(), -7);
        let z = GroupElement::from_twist(3, &[0, 1, 2]).unwrap();
        assert_eq!(trace_closed_form(3, &z).unwrap(), 2);
        let mixed = GroupElement::new(5, &[0; 5], Perm::from_cycles(5, "1 2 3").unwrap()).unwrap();
        assert!(trace_closed_form(5, &mixed).is_err());
    }

    #[test]
    fn sigma_a_for_0022() {
        let st = stabilizer_structure(&class(4, &[0, 0, 2, 2]));
        assert_eq!(st.sigma_a, Perm::from_cycles(4, "1 3,2 4").unwrap());
        let zero = stabilizer_structure(&class(4, &[0, 0, 0, 0]));
        assert!(zero.sigma_a.is_identity());
    }

    #[test]
    fn u_v_examples() {
        let a = class(4, &[0, 0, 2, 2]);
        assert_eq!(u_v_of(&a, &Perm::identity(4)).unwrap(), (0, 1));
        assert_eq!(
            u_v_of(&a, &Perm::from_cycles(4, "1 3,2 4").unwrap()).unwrap(),
            (1, 1)
        );
        let b = class(5, &[0, 0, 0, 1, 4]);
        assert_eq!(
            u_v_of(&b, &Perm::from_cycles(5, "4 5").unwrap()).unwrap(),
            (0, 4)
        );
        assert!(u_v_of(&b, &Perm::from_cycles(5, "1 4").unwrap()).is_err());
    }

    #[test]
    fn mu_matrix_0022() {
        let a = class(4, &[0, 0, 2, 2]);
        let g = GroupElement::new(4, &[0; 4], Perm::from_cycles(4, "1 3,2 4").unwrap()).unwrap();
        assert_eq!(mu_matrix(&a, 1, &g).unwrap(), vec![vec![rat(-1)]]);
        let id = GroupElement::identity(4);
        assert_eq!(mu_matrix(&a, 1, &id).unwrap(), vec![vec![rat(1)]]);
    }

    #[test]
    fn xi_degrees() {
        assert_eq!(
            xi_character(&class(3, &[0, 0, 0]), 0, &GroupElement::identity(3)).unwrap(),
            1
        );
        assert_eq!(
            xi_character(&class(4, &[0, 0, 2, 2]), 1, &GroupElement::identity(4)).unwrap(),
            3
        );
        assert_eq!(
            xi_character(&class(5, &[0, 0, 0, 1, 4]), 0, &GroupElement::identity(5)).unwrap(),
            40
        );
    }

    #[test]
    fn lemma_examples() {
        let (l, r) = lemma_sum_check(3, 3, 1, &[0]).unwrap();
        assert_eq!((l.clone(), r), (rat(0), rat(0)));
        let (l, r) = lemma_sum_check(3, 1, 1, &[0]).unwrap();
        assert_eq!((l, r), (rat(2), rat(2)));
        let (l, r) = lemma_sum_check(5, 5, 3, &[0, 1, 2]).unwrap();
        assert_eq!(l, r);
    }

    #[test]
    fn regular_structure_0022() {
        assert!(
            verify_regular_structure(&class(4, &[0, 0, 2, 2]))
                .unwrap()
                .passed
        );
        assert!(
            verify_regular_structure(&class(4, &[0, 0, 0, 0]))
                .unwrap()
                .passed
        );
    }
}
