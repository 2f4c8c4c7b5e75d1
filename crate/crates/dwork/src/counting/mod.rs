//! Point counts and Frobenius-twisted fixed-point counts on Dwork
//! hypersurfaces over finite fields.
//!
//! A group element `g = zeta^t sigma` acts by `(g x)_(sigma(i)) = zeta^(t_i) x_i`
//! with `zeta = g_q^((q-1)/n)` for the least primitive root `g_q` mod `q`.
//! `Fix_r(g)` counts projective points with `Frob^r(P) = g(P)`.

mod fields;
mod oracle;

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::chars;
use crate::error::{check_failed, invalid, Result};
use crate::ffield::{is_prime, FieldTable, FqElem};
use crate::group::GroupElement;
use crate::limits::ensure_ops;
use crate::par::{map_vec, sum_u64, Parallelism};
use crate::reptheory::ClassFunction;

pub use fields::{ExtensionData, FieldCache};
pub use oracle::oracle_fixed_count;

/// Parameters of `X_psi : sum x_i^n - n psi prod x_i = 0` over `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InstanceParams {
    pub n: u32,
    pub q: u32,
    /// `psi` as an integer in `0..q`.
    pub psi: u32,
}

#[derive(Clone, Debug)]
pub struct DworkInstance {
    params: InstanceParams,
    cache: Arc<FieldCache>,
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

impl DworkInstance {
    pub fn new(n: u32, q: u32, psi: i64) -> Result<DworkInstance> {
        chars::check_range(n)?;
        if !is_prime(q as u64) {
            return Err(invalid(format!("q = {q} is not prime")));
        }
        if q == 2 || n.is_multiple_of(q) {
            return Err(invalid(format!("q = {q} must be odd and prime to n = {n}")));
        }
        if q % n != 1 {
            return Err(invalid(format!("q = {q} is not 1 mod n = {n}")));
        }
        let psi = psi.rem_euclid(q as i64) as u32;
        if psi == 0 {
            return Err(invalid("psi must be nonzero"));
        }
        if pow_mod(psi as u64, n as u64, q as u64) == 1 {
            return Err(invalid(format!(
                "psi^n = 1 for psi = {psi}: the fibre is singular"
            )));
        }
        let params = InstanceParams { n, q, psi };
        Ok(DworkInstance {
            params,
            cache: Arc::new(FieldCache::new(q)),
        })
    }

    pub fn params(&self) -> InstanceParams {
        self.params
    }

    pub fn n(&self) -> u32 {
        self.params.n
    }

    pub fn q(&self) -> u32 {
        self.params.q
    }

    pub fn psi(&self) -> u32 {
        self.params.psi
    }

    pub fn cache(&self) -> &FieldCache {
        &self.cache
    }

    /// `sum_{j=0}^{n-2} Q^j` for `Q = q^r`.
    pub fn ambient_sum(&self, r: u32) -> i128 {
        let qr = (self.q() as i128).pow(r);
        (0..self.n() - 1).map(|j| qr.pow(j)).sum()
    }

    /// `dim H_prim`.
    pub fn primitive_dimension(&self) -> u64 {
        chars::primitive_dimension(self.n())
    }
}

/// `R[b][s] = #{x in F : x^n - b x + s = 0}`, indexed by dense codes.
#[derive(Clone, Debug)]
pub struct RootCountTable {
    size: usize,
    data: Vec<u32>,
}

impl RootCountTable {
    pub fn build(field: &FieldTable, n: u32) -> Result<RootCountTable> {
        let size = field.size() as usize;
        ensure_ops("root table", (size as u128).pow(2))?;
        let mut data = vec![0u32; size * size];
        for x in (0..size).map(FqElem::from_code) {
            let xn = field.pow(x, n as u64);
            for bc in 0..size {
                let s = field.sub(field.mul(FqElem::from_code(bc), x), xn);
                data[bc * size + s.code()] += 1;
            }
        }
        Ok(RootCountTable { size, data })
    }

    #[inline]
    pub fn get(&self, b: FqElem, s: FqElem) -> u32 {
        self.data[b.code() * self.size + s.code()]
    }

    pub fn size(&self) -> usize {
        self.size
    }
}

/// `#X(F_{q^r})`.
pub fn count_points(inst: &DworkInstance, r: u32, mode: Parallelism) -> Result<u64> {
    fixed_count_a(inst, &vec![0; inst.n() as usize], r, mode)
}

/// `Fix_r(zeta^t)` by reduction to `sum beta_i y_i^n = c prod y_i` over
/// `F_{q^r}` with `beta_i = h^(t'_i)`, `c = n psi h^(sum t'_i / n)`, where
/// `h` generates `F_{q^r}^x` and `zeta = h^((Q-1) t' / n)`.
pub fn fixed_count_a(inst: &DworkInstance, t: &[u8], r: u32, mode: Parallelism) -> Result<u64> {
    let n = inst.n();
    if t.len() != n as usize || t.iter().map(|&x| x as u32).sum::<u32>() % n != 0 {
        return Err(invalid("twist must have n entries summing to 0 mod n"));
    }
    let field = inst.cache.field(r)?;
    let qsize = field.size() as usize;
    ensure_ops(
        "A-twisted count",
        (qsize as u128).pow(n - 2) + (qsize as u128).pow(2),
    )?;
    let table = inst.cache.root_table(r, n)?;
    let j = inst.cache.zeta_multiplier(r, n)?;
    let tp: Vec<u32> = t.iter().map(|&x| (x as u32 * j) % n).collect();
    let beta: Vec<FqElem> = tp.iter().map(|&x| FqElem::from_index(x)).collect();
    let npsi = field.from_int(n as i64 * inst.psi() as i64);
    let c = field.mul(npsi, FqElem::from_index(tp.iter().sum::<u32>() / n));
    Ok(count_reduced(&field, &table, &beta, c, mode))
}

/// `#{y in F^k \ 0 : sum beta_i y_i^k = c prod y_i} / (Q - 1)`, counting
/// vectors whose first nonzero entry is 1.
fn count_reduced(
    field: &FieldTable,
    table: &RootCountTable,
    beta: &[FqElem],
    c: FqElem,
    mode: Parallelism,
) -> u64 {
    let k = beta.len();
    let q = field.size() as usize;
    let n = k as u64;
    let powers: Vec<FqElem> = (0..q)
        .map(|code| field.pow(FqElem::from_code(code), n))
        .collect();
    let last_inv = field.inv(beta[k - 1]).expect("beta is a unit");

    // y_0 = 1: enumerate y_1..y_(k-2), eliminate y_(k-1).
    let lead = |y1: usize| -> u64 {
        let mut codes = vec![0usize; k - 2];
        if k > 2 {
            codes[0] = y1;
        }
        let mut total = 0u64;
        loop {
            let mut s = beta[0];
            let mut p = FqElem::ONE;
            for (i, &code) in codes.iter().enumerate() {
                let y = FqElem::from_code(code);
                s = field.add(s, field.mul(beta[i + 1], powers[code]));
                p = field.mul(p, y);
            }
            let b = field.mul(field.mul(c, p), last_inv);
            total += table.get(b, field.mul(s, last_inv)) as u64;
            let mut pos = 1;
            loop {
                if pos >= codes.len() {
                    return total;
                }
                codes[pos] += 1;
                if codes[pos] < q {
                    break;
                }
                codes[pos] = 0;
                pos += 1;
            }
        }
    };
    let mut total = if k > 2 {
        sum_u64(mode, 0..q, lead)
    } else {
        lead(0)
    };

    // First nonzero coordinate at position m >= 1: the product vanishes.
    let mut value_hists: Vec<Vec<u64>> = Vec::with_capacity(k);
    for &b in beta {
        let mut h = vec![0u64; q];
        for &pw in &powers {
            h[field.mul(b, pw).code()] += 1;
        }
        value_hists.push(h);
    }
    for m in 1..k {
        let mut dist = vec![0u64; q];
        dist[beta[m].code()] = 1;
        for hist in &value_hists[m + 1..] {
            let support: Vec<(FqElem, u64)> = hist
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(v, &c)| (FqElem::from_code(v), c))
                .collect();
            let mut next = vec![0u64; q];
            for (a, &da) in dist.iter().enumerate().filter(|(_, &d)| d > 0) {
                let a = FqElem::from_code(a);
                for &(v, cv) in &support {
                    next[field.add(a, v).code()] += da * cv;
                }
            }
            dist = next;
        }
        total += dist[0];
    }
    total
}

/// Per-cycle data of `sigma` read along `i0, sigma^-1(i0), ...`.
#[derive(Clone, Debug)]
struct CycleData {
    d: u32,
    /// `sum of t over the cycle`.
    z: u32,
    /// `sum_{j=0}^{d-2} (d-1-j) t_(sigma^-j(i0))`.
    c_exp: u32,
}

fn cycle_data(g: &GroupElement) -> Vec<CycleData> {
    let n = g.n();
    let inv = g.sigma().inverse();
    let t = g.twist();
    g.sigma()
        .cycles()
        .into_iter()
        .map(|cyc| {
            let d = cyc.len() as u32;
            let mut pts = Vec::with_capacity(cyc.len());
            let mut cur = cyc[0];
            for _ in 0..d {
                pts.push(cur);
                cur = inv.apply(cur);
            }
            let z = pts.iter().map(|&i| t[i] as u32).sum::<u32>() % n;
            let c_exp = (0..d.saturating_sub(1))
                .map(|j| (d - 1 - j) * t[pts[j as usize]] as u32)
                .sum::<u32>()
                % n;
            CycleData { d, z, c_exp }
        })
        .collect()
}

/// `Fix_r(g)` for arbitrary `g`. Each `sigma`-cycle of length `d` is
/// parametrized by one seed `u` in `F_{Q^d}`; the residual equation
/// `sum_c Tr(Gamma_d^(z'_c) u_c^n) = kappa prod_c Nm(u_c)` over `F_Q` is
/// counted by enumerating the distinct `(Tr, Nm)` pairs of all but the
/// longest cycle and eliminating the longest one through a table.
pub fn fixed_count_general(
    inst: &DworkInstance,
    g: &GroupElement,
    r: u32,
    mode: Parallelism,
) -> Result<u64> {
    let n = inst.n();
    if g.n() != n {
        return Err(invalid("group element does not match n"));
    }
    if g.in_a() {
        return fixed_count_a(inst, g.twist(), r, mode);
    }
    let field = inst.cache.field(r)?;
    let qsize = field.size() as usize;
    let order = field.order() as u64;
    let j = inst.cache.zeta_multiplier(r, n)?;
    let mut cycles = cycle_data(g);
    cycles.sort_by_key(|c| c.d);
    let zeta_index = |e: u64| {
        FqElem::from_index(((order / n as u64) * ((j as u64 * e) % n as u64) % order) as u32)
    };
    let zp: Vec<u32> = cycles.iter().map(|c| (c.z * j) % n).collect();
    let w = zp.iter().sum::<u32>() / n;
    let c_total: u64 = cycles.iter().map(|c| c.c_exp as u64).sum();
    let npsi = field.from_int(n as i64 * inst.psi() as i64);
    let kappa = field
        .div(field.mul(npsi, FqElem::from_index(w)), zeta_index(c_total))
        .expect("roots of unity are units");

    let mut pair_lists = Vec::with_capacity(cycles.len());
    for (c, &z) in cycles.iter().zip(&zp) {
        pair_lists.push(cycle_pairs(inst, &field, r, c.d, z)?);
    }
    let last = pair_lists.pop().expect("at least one cycle");
    let cost: u128 = pair_lists.iter().map(|l| l.len() as u128).product();
    ensure_ops(
        "cycle enumeration",
        cost + (last.len() as u128) * qsize as u128,
    )?;

    let mut table = vec![0u64; qsize * qsize];
    for &(t, nm, cnt) in &last {
        for bc in 0..qsize {
            let s = field.sub(field.mul(FqElem::from_code(bc), nm), t);
            table[bc * qsize + s.code()] += cnt;
        }
    }
    let lookup = |s: FqElem, p: FqElem| table[field.mul(kappa, p).code() * qsize + s.code()];

    let total = if pair_lists.is_empty() {
        lookup(FqElem::ZERO, FqElem::ONE)
    } else {
        let rest = &pair_lists[1..];
        sum_u64(mode, 0..pair_lists[0].len(), |i| {
            let (t0, n0, c0) = pair_lists[0][i];
            enumerate_rest(&field, rest, t0, n0, c0, &lookup)
        })
    };
    let affine = total
        .checked_sub(1)
        .ok_or_else(|| check_failed("origin missing from affine count"))?;
    if affine % order != 0 {
        return Err(check_failed(format!(
            "affine count {affine} not divisible by {order}"
        )));
    }
    Ok(affine / order)
}

fn enumerate_rest(
    field: &FieldTable,
    rest: &[Vec<(FqElem, FqElem, u64)>],
    s: FqElem,
    p: FqElem,
    weight: u64,
    lookup: &impl Fn(FqElem, FqElem) -> u64,
) -> u64 {
    match rest.split_first() {
        None => weight * lookup(s, p),
        Some((head, tail)) => head
            .iter()
            .map(|&(t, nm, c)| {
                enumerate_rest(
                    field,
                    tail,
                    field.add(s, t),
                    field.mul(p, nm),
                    weight * c,
                    lookup,
                )
            })
            .sum(),
    }
}

/// Distinct `(Tr(Gamma^z' u^n), Nm(u))` pairs over `u in F_{Q^d}`, with multiplicities.
fn cycle_pairs(
    inst: &DworkInstance,
    small: &FieldTable,
    r: u32,
    d: u32,
    zp: u32,
) -> Result<Vec<(FqElem, FqElem, u64)>> {
    let n = inst.n() as u64;
    let qsize = small.size() as usize;
    let mut counts = vec![0u64; qsize * qsize];
    if d == 1 {
        for code in 0..qsize {
            let u = FqElem::from_code(code);
            let t = small.mul(FqElem::from_index(zp), small.pow(u, n));
            counts[t.code() * qsize + code] += 1;
        }
    } else {
        let ext = inst.cache.extension(r, d)?;
        let big = &ext.big;
        ensure_ops("cycle seeds", big.size() as u128 * d as u128)?;
        let border = big.order() as u64;
        let qpow: Vec<u64> = (0..d)
            .map(|k| (small.size() as u64).pow(k) % border)
            .collect();
        counts[0] += 1;
        for i in 0..border {
            let x = (ext.gamma_exp * zp as u64 + n * i) % border;
            let t = qpow.iter().fold(FqElem::ZERO, |acc, &qk| {
                big.add(
                    acc,
                    FqElem::from_index(((x as u128 * qk as u128) % border as u128) as u32),
                )
            });
            let t_small = ext.restrict(t)?;
            let nm = ext.restrict(FqElem::from_index(
                ((i as u128 * ext.norm_exp as u128) % border as u128) as u32,
            ))?;
            counts[t_small.code() * qsize + nm.code()] += 1;
        }
    }
    Ok(counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| {
            (
                FqElem::from_code(k / qsize),
                FqElem::from_code(k % qsize),
                c,
            )
        })
        .collect())
}

/// `T_r(g) = (-1)^n (Fix_r(g) - sum_{j=0}^{n-2} q^(rj))`, the trace of
/// `g^* o Frob^r` on primitive cohomology. Asserts the Weil bound.
pub fn frobenius_trace(
    inst: &DworkInstance,
    g: &GroupElement,
    r: u32,
    mode: Parallelism,
) -> Result<i128> {
    let fix = fixed_count_general(inst, g, r, mode)? as i128;
    let sign = if inst.n().is_multiple_of(2) { 1 } else { -1 };
    let t = sign * (fix - inst.ambient_sum(r));
    let dim = inst.primitive_dimension() as u128;
    let qw = (inst.q() as u128).pow(r * (inst.n() - 2));
    if (t.unsigned_abs()).pow(2) > dim * dim * qw {
        return Err(check_failed(format!(
            "trace {t} of {g} at r = {r} violates the Weil bound"
        )));
    }
    Ok(t)
}

/// `sum_g w(g) T_r(g)` over a class function, one count per stored class.
pub fn weighted_trace(
    inst: &DworkInstance,
    weights: &ClassFunction,
    r: u32,
    mode: Parallelism,
) -> Result<BigRational> {
    if weights.n != inst.n() {
        return Err(invalid("weights do not match n"));
    }
    let active: Vec<_> = weights
        .entries
        .iter()
        .filter(|e| !e.value.is_zero())
        .collect();
    let traces = map_vec(mode, &active, |e| frobenius_trace(inst, &e.rep, r, mode));
    let mut total = BigRational::zero();
    for (e, t) in active.iter().zip(traces) {
        let t = t?;
        total += &e.value * BigRational::from_integer(BigInt::from(e.count) * BigInt::from(t));
    }
    Ok(total)
}

/// Direct primitive power sum `(-1)^n (N_r - sum_j q^(rj))`.
pub fn primitive_power_sum(inst: &DworkInstance, r: u32, mode: Parallelism) -> Result<i128> {
    frobenius_trace(inst, &GroupElement::identity(inst.n()), r, mode)
}
