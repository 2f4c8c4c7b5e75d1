//! Zeta factors from isotypic power sums: Newton assembly, completion by the
//! functional equation, Weil and duality certificates, the split over
//! `mu_(d_a)` and the factorization test over quadratic `D_a`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::chars::{self, CharClass, PredictionRow};
use crate::counting::{self, DworkInstance, InstanceParams};
use crate::error::{check_failed, invalid, Error, Result};
use crate::par::Parallelism;
use crate::reptheory::{self, ProjectorTarget};

fn rat(v: i128) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

fn to_i128(r: &BigRational) -> Result<i128> {
    if !r.is_integer() {
        return Err(check_failed(format!("{r} is not an integer")));
    }
    r.to_integer()
        .to_i128()
        .ok_or_else(|| check_failed("coefficient exceeds 128 bits"))
}

/// Integer polynomial with constant term 1, low degree first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IntPoly {
    coeffs: Vec<i128>,
}

impl IntPoly {
    pub fn new(mut coeffs: Vec<i128>) -> Result<IntPoly> {
        while coeffs.len() > 1 && coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.first() != Some(&1) {
            return Err(invalid("constant term must be 1"));
        }
        Ok(IntPoly { coeffs })
    }

    pub fn one() -> IntPoly {
        IntPoly { coeffs: vec![1] }
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn mul(&self, other: &IntPoly) -> Result<IntPoly> {
        let mut out = vec![0i128; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                let p = a
                    .checked_mul(b)
                    .ok_or_else(|| check_failed("product overflow"))?;
                out[i + j] = out[i + j]
                    .checked_add(p)
                    .ok_or_else(|| check_failed("product overflow"))?;
            }
        }
        IntPoly::new(out)
    }

    pub fn pow(&self, e: u64) -> Result<IntPoly> {
        (0..e).try_fold(IntPoly::one(), |acc, _| acc.mul(self))
    }

    /// Power sums `p_1..p_k` of the reciprocal roots.
    pub fn power_sums(&self, k: usize) -> Vec<BigInt> {
        let c = |i: usize| BigInt::from(self.coeffs.get(i).copied().unwrap_or(0));
        let mut p: Vec<BigInt> = Vec::with_capacity(k);
        for m in 1..=k {
            let mut v = -BigInt::from(m as u64) * c(m);
            for i in 1..m {
                v -= c(i) * &p[m - i - 1];
            }
            p.push(v);
        }
        p
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, &c) in self.coeffs.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let sign = if c < 0 { "-" } else { "+" };
            if first {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.unsigned_abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if a != 1 {
                        write!(f, "{a}")?;
                    }
                    f.write_str("t")?;
                    if k > 1 {
                        write!(f, "^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

/// Isotypic power sums `(r, value)` before division by `divisor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumSeries {
    pub values: Vec<(u32, BigRational)>,
    pub divisor: u64,
}

impl PowerSumSeries {
    /// `p_1, p_2, ...` after division, for the leading run of consecutive `r`.
    pub fn normalized(&self) -> Result<Vec<BigRational>> {
        let mut vals = self.values.clone();
        vals.sort_by_key(|(r, _)| *r);
        let mut out = Vec::new();
        for (k, (r, v)) in vals.iter().enumerate() {
            if *r as usize != k + 1 {
                break;
            }
            let p = v / rat(self.divisor as i128);
            if !p.is_integer() {
                return Err(check_failed(format!(
                    "power sum {p} at r = {r} is not integral"
                )));
            }
            out.push(p);
        }
        Ok(out)
    }
}

fn newton_coeffs(sums: &[BigRational], d: usize) -> Vec<BigRational> {
    let mut c = vec![BigRational::one()];
    for k in 1..=d {
        let mut acc = BigRational::zero();
        for i in 1..=k {
            acc += &sums[i - 1] * &c[k - i];
        }
        c.push(-acc / rat(k as i128));
    }
    c
}

/// The degree-`d` polynomial with constant term 1 whose reciprocal roots have
/// the given power sums.
pub fn newton_poly(sums: &PowerSumSeries, d: usize) -> Result<IntPoly> {
    let p = sums.normalized()?;
    if p.len() < d {
        return Err(invalid(format!("need {d} power sums, have {}", p.len())));
    }
    let c = newton_coeffs(&p, d);
    IntPoly::new(c.iter().map(to_i128).collect::<Result<_>>()?)
}

fn q_power(q: u32, e: i64) -> Result<i128> {
    if e < 0 {
        return Err(invalid("negative exponent"));
    }
    (q as i128)
        .checked_pow(e as u32)
        .ok_or_else(|| check_failed("q power overflow"))
}

/// `eps` with `t^D q^(Dw/2) P(1/(q^w t)) = eps P(t)`, i.e.
/// `c_(D-k) = eps q^(w(D/2-k)) c_k`, if either sign holds.
pub fn functional_sign(p: &IntPoly, w: u32, q: u32) -> Option<i32> {
    let d = p.degree() as i64;
    if (d * w as i64) % 2 != 0 {
        return None;
    }
    [1i32, -1].into_iter().find(|&eps| {
        (0..=d).all(|k| {
            let e = w as i64 * (d - 2 * k) / 2;
            let (ck, cdk) = (p.coeffs[k as usize], p.coeffs[(d - k) as usize]);
            if e >= 0 {
                q_power(q, e)
                    .ok()
                    .and_then(|s| s.checked_mul(ck))
                    .map(|v| cdk == eps as i128 * v)
                    .unwrap_or(false)
            } else {
                q_power(q, -e)
                    .ok()
                    .and_then(|s| s.checked_mul(cdk))
                    .map(|v| ck == eps as i128 * v)
                    .unwrap_or(false)
            }
        })
    })
}

/// Relative deviation of the reciprocal-root moduli from `q^(w/2)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeilCheck {
    pub passed: bool,
    pub max_relative_error: f64,
    pub moduli: Vec<f64>,
}

pub const WEIL_TOLERANCE: f64 = 1e-9;

fn poly_trim(a: &mut Vec<BigRational>) {
    while a.last().is_some_and(|c| c.is_zero()) {
        a.pop();
    }
}

fn poly_rem(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    poly_trim(&mut r);
    let lead = b.last().expect("nonzero divisor").clone();
    while r.len() >= b.len() {
        let c = r.last().expect("nonempty") / &lead;
        let shift = r.len() - b.len();
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] -= &c * bk;
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn poly_divexact(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut r = a.to_vec();
    let lead = b.last().expect("nonzero divisor").clone();
    let mut q = vec![BigRational::zero(); a.len() + 1 - b.len()];
    for k in (0..q.len()).rev() {
        let c = &r[k + b.len() - 1] / &lead;
        for (j, bj) in b.iter().enumerate() {
            r[k + j] -= &c * bj;
        }
        q[k] = c;
    }
    q
}

fn squarefree(f: &[BigRational]) -> Vec<BigRational> {
    let deriv: Vec<BigRational> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * rat(k as i128))
        .collect();
    let mut a = f.to_vec();
    let mut b = deriv;
    poly_trim(&mut b);
    if b.is_empty() {
        return a;
    }
    while !b.is_empty() {
        let r = poly_rem(&a, &b);
        a = b;
        b = r;
    }
    if a.len() <= 1 {
        return f.to_vec();
    }
    poly_divexact(f, &a)
}

/// Roots of a monic complex polynomial (low degree first) by the
/// Aberth-Ehrlich iteration followed by Newton polishing.
pub fn complex_roots(coeffs: &[Complex64]) -> Vec<Complex64> {
    let d = coeffs.len() - 1;
    if d == 0 {
        return Vec::new();
    }
    let eval = |z: Complex64| {
        let mut f = Complex64::new(0.0, 0.0);
        let mut df = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            df = df * z + f;
            f = f * z + c;
        }
        (f, df)
    };
    let radius = 1.0
        + coeffs[..d]
            .iter()
            .map(|c| c.norm())
            .fold(0.0f64, f64::max)
            .min(1.0);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            Complex64::from_polar(
                radius * 0.9,
                2.0 * std::f64::consts::PI * k as f64 / d as f64 + 0.4,
            )
        })
        .collect();
    for _ in 0..2000 {
        let mut max_step = 0.0f64;
        for i in 0..d {
            let (f, df) = eval(z[i]);
            if f.norm() == 0.0 {
                continue;
            }
            let ratio = f / df;
            let s: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| Complex64::new(1.0, 0.0) / (z[i] - z[j]))
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * s);
            if step.is_finite() {
                z[i] -= step;
                max_step = max_step.max(step.norm() / z[i].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            break;
        }
    }
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (f, df) = eval(*zi);
            if df.norm() > 0.0 {
                *zi -= f / df;
            }
        }
    }
    z
}

/// Checks `|alpha| = q^(w/2)` for every reciprocal root of `p`, after exact
/// square-free reduction and rescaling by `q^(w/2)`.
pub fn weil_check(p: &IntPoly, w: u32, q: u32) -> WeilCheck {
    let d = p.degree();
    if d == 0 {
        return WeilCheck {
            passed: true,
            max_relative_error: 0.0,
            moduli: Vec::new(),
        };
    }
    // t^D P(1/t), low degree first.
    let reversed: Vec<BigRational> = p.coeffs.iter().rev().map(|&c| rat(c)).collect();
    let sf = squarefree(&reversed);
    let lead = sf.last().expect("nonzero").clone();
    let s = (q as f64).powf(w as f64 / 2.0);
    let m = sf.len() - 1;
    let scaled: Vec<Complex64> = sf
        .iter()
        .enumerate()
        .map(|(k, c)| {
            let v = (c / &lead).to_f64().unwrap_or(f64::NAN);
            Complex64::new(v / s.powi((m - k) as i32), 0.0)
        })
        .collect();
    let roots = complex_roots(&scaled);
    let moduli: Vec<f64> = roots.iter().map(|z| z.norm() * s).collect();
    let max_relative_error = roots
        .iter()
        .map(|z| (z.norm() - 1.0).abs())
        .fold(0.0, f64::max);
    WeilCheck {
        passed: max_relative_error <= WEIL_TOLERANCE,
        max_relative_error,
        moduli,
    }
}

fn candidates(sums: &[BigRational], d: usize, w: u32, q: u32) -> Result<Vec<IntPoly>> {
    if !(d as u64 * w as u64).is_multiple_of(2) {
        return Err(invalid(format!(
            "degree {d} and weight {w} admit no functional equation"
        )));
    }
    let h = d.div_ceil(2);
    if sums.len() < h {
        return Err(invalid(format!("need {h} power sums, have {}", sums.len())));
    }
    let low = newton_coeffs(&sums[..h], h);
    let low: Vec<i128> = match low.iter().map(to_i128).collect::<Result<Vec<_>>>() {
        Ok(v) => v,
        Err(_) => return Ok(Vec::new()),
    };
    let mut out = Vec::new();
    'sign: for eps in [1i128, -1] {
        let mut c = vec![0i128; d + 1];
        c[..=h].copy_from_slice(&low[..=h.min(d)]);
        for k in 0..=d / 2 {
            let e = w as i64 * (d as i64 - 2 * k as i64) / 2;
            let Some(v) = q_power(q, e).ok().and_then(|s| s.checked_mul(c[k])) else {
                continue 'sign;
            };
            let target = eps * v;
            if d - k <= h && k != d - k {
                if c[d - k] != target {
                    continue 'sign;
                }
            } else if k == d - k {
                if c[k] != target {
                    continue 'sign;
                }
            } else {
                c[d - k] = target;
            }
        }
        let Ok(p) = IntPoly::new(c) else { continue };
        if p.degree() != d || !weil_check(&p, w, q).passed {
            continue;
        }
        let check = p.power_sums(sums.len());
        if check
            .iter()
            .zip(sums)
            .all(|(a, b)| BigRational::from_integer(a.clone()) == *b)
            && !out.contains(&p)
        {
            out.push(p);
        }
    }
    Ok(out)
}

/// Completes a self-dual factor of degree `d` and weight `w` from its first
/// `ceil(d/2)` power sums; further sums act as filters. Exactly one
/// candidate must survive integrality, duality and the Weil check.
pub fn functional_completion(sums: &[BigRational], d: usize, w: u32, q: u32) -> Result<IntPoly> {
    let mut c = candidates(sums, d, w, q)?;
    match c.len() {
        1 => Ok(c.pop().expect("one candidate")),
        0 => Err(check_failed("no self-dual candidate survives")),
        k => Err(Error::CheckFailed(format!(
            "{k} candidates survive; more power sums needed"
        ))),
    }
}

/// `a + b sqrt(m)` with `a, b` rational, rendered exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticCoeff {
    pub rational: String,
    pub sqrt_coeff: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticSplit {
    pub m: i64,
    pub first: Vec<QuadraticCoeff>,
    pub second: Vec<QuadraticCoeff>,
}

fn binom(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

fn isqrt(v: i128) -> Option<i128> {
    if v < 0 {
        return None;
    }
    let r = (v as f64).sqrt() as i128;
    (r.saturating_sub(2)..=r + 2).find(|x| x * x == v)
}

/// Searches `Q = P Pbar` with `P = 1 + sum (A_k + B_k sqrt(m))/2 t^k` of
/// degree `mprime` over `Q(sqrt(m))`. Integer pairs `(A_k, B_k)` cover the
/// ring of integers: `A_k = B_k mod 2` when `m = 1 mod 4`, both even otherwise.
pub fn quadratic_split_check(qa: &IntPoly, m: i64, mprime: usize) -> Option<QuadraticSplit> {
    if qa.degree() != 2 * mprime || mprime == 0 || m == 0 || m == 1 {
        return None;
    }
    let c = qa.coeffs();
    let reversed: Vec<Complex64> = {
        let lead = c[2 * mprime] as f64;
        c.iter()
            .rev()
            .map(|&x| Complex64::new(x as f64 / lead, 0.0))
            .collect()
    };
    let rmax = complex_roots(&reversed)
        .iter()
        .map(|z| z.norm())
        .fold(0.0, f64::max)
        * 1.01
        + 1e-9;
    let half_integral = m.rem_euclid(4) == 1;
    let bound = |k: usize| {
        (2.0 * binom(mprime as u64, k as u64) * rmax.powi(k as i32)
            / (m.unsigned_abs() as f64).sqrt())
        .ceil() as i128
            + 1
    };
    let mm = m as i128;
    let valid = |a: i128, b: i128| {
        if half_integral {
            (a - b).rem_euclid(2) == 0
        } else {
            a % 2 == 0 && b % 2 == 0
        }
    };

    // 4 Q_s = sum_{i+j=s} (A_i A_j - m B_i B_j) with A_0 = 2, B_0 = 0.
    let solve_a = |bs: &[i128], avec: &mut Vec<i128>, s: usize| -> bool {
        let mid: i128 = (1..s)
            .map(|i| avec[i] * avec[s - i] - mm * bs[i] * bs[s - i])
            .sum();
        let num = 4 * c[s] - mid;
        if num % 4 != 0 {
            return false;
        }
        avec[s] = num / 4;
        true
    };
    let check_full = |avec: &[i128], bs: &[i128]| -> bool {
        (0..=2 * mprime).all(|s| {
            let lo = s.saturating_sub(mprime);
            let hi = s.min(mprime);
            let v: i128 = (lo..=hi)
                .map(|i| avec[i] * avec[s - i] - mm * bs[i] * bs[s - i])
                .sum();
            v == 4 * c[s]
        }) && (1..=mprime).all(|k| valid(avec[k], bs[k]))
    };

    let mut bs = vec![0i128; mprime + 1];
    let ranges: Vec<i128> = (1..mprime).map(bound).collect();
    let mut idx: Vec<i128> = ranges.iter().map(|&b| -b).collect();
    loop {
        for (k, &v) in idx.iter().enumerate() {
            bs[k + 1] = v;
        }
        let mut avec = vec![0i128; mprime + 1];
        avec[0] = 2;
        let mut ok = true;
        for s in 1..mprime {
            ok &= solve_a(&bs, &mut avec, s);
        }
        if ok {
            // A_m' does not involve B_m'.
            bs[mprime] = 0;
            if solve_a(&bs, &mut avec, mprime) {
                let mut options = Vec::new();
                if mprime >= 2 && bs[1] != 0 {
                    let s = mprime + 1;
                    let rest: i128 = (2..mprime)
                        .map(|i| avec[i] * avec[s - i] - mm * bs[i] * bs[s - i])
                        .sum::<i128>()
                        + 2 * avec[1] * avec[mprime];
                    let num = rest - 4 * c[s];
                    let den = 2 * mm * bs[1];
                    if num % den == 0 {
                        options.push(num / den);
                    }
                } else {
                    let diff = avec[mprime] * avec[mprime] - 4 * c[2 * mprime];
                    if diff % mm == 0 {
                        if let Some(r) = isqrt(diff / mm) {
                            options.push(r);
                            options.push(-r);
                        }
                    }
                }
                for b in options {
                    bs[mprime] = b;
                    if check_full(&avec, &bs) {
                        let render = |sign: i128| -> Vec<QuadraticCoeff> {
                            (0..=mprime)
                                .map(|k| QuadraticCoeff {
                                    rational: (BigRational::new(avec[k].into(), 2.into()))
                                        .to_string(),
                                    sqrt_coeff: (BigRational::new((sign * bs[k]).into(), 2.into()))
                                        .to_string(),
                                })
                                .collect()
                        };
                        return Some(QuadraticSplit {
                            m,
                            first: render(1),
                            second: render(-1),
                        });
                    }
                }
            }
        }
        let mut pos = 0;
        loop {
            if pos == idx.len() {
                return None;
            }
            idx[pos] += 1;
            if idx[pos] <= ranges[pos] {
                break;
            }
            idx[pos] = -ranges[pos];
            pos += 1;
        }
    }
}

/// Squarefree `m` with `D_a = Q(sqrt(m))` when `[D_a : Q] = 2`.
pub fn quadratic_field_m(n_a: u32, im_k: &[u32]) -> Option<i64> {
    let units = crate::arith::units(n_a);
    if units.len() != 2 * im_k.len() {
        return None;
    }
    let conductor = crate::arith::divisors(n_a)
        .into_iter()
        .find(|&f| {
            units
                .iter()
                .filter(|&&k| k % f == 1 % f)
                .all(|k| im_k.contains(k))
        })
        .unwrap_or(n_a);
    let sign = if im_k.contains(&(n_a - 1)) { 1 } else { -1 };
    let mut m = sign * conductor as i64;
    while m % 4 == 0 {
        m /= 4;
    }
    Some(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorKind {
    /// `R_a = prod over omega of Q_(a,omega)`.
    Orbit,
    /// One `Q_(a,omega)`; the collection over omega is a multiset.
    Omega,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub integrality: bool,
    pub degree_match: bool,
    pub functional_sign: Option<i32>,
    pub weil_pass: bool,
    pub weil_max_relative_error: f64,
    /// Agreement with one power sum not used in the extraction, when affordable.
    pub oracle_consistency: Option<bool>,
    pub quadratic_split: Option<QuadraticSplit>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.integrality
            && self.degree_match
            && self.weil_pass
            && self.oracle_consistency != Some(false)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorReport {
    pub orbit: String,
    pub kind: FactorKind,
    pub factor: IntPoly,
    pub factor_text: String,
    pub degree: usize,
    pub exponent: u64,
    /// Normalized power sums `p_1, p_2, ...` used for the extraction.
    pub power_sums: Vec<String>,
    pub certificate: Certificate,
}

fn power_sum_strings(p: &[BigRational]) -> Vec<String> {
    p.iter().map(|x| x.to_string()).collect()
}

fn weight(inst: &DworkInstance) -> u32 {
    inst.n() - 2
}

fn isotypic_sum(
    inst: &DworkInstance,
    weights: &reptheory::ClassFunction,
    r: u32,
    divisor: u64,
    mode: Parallelism,
) -> Result<BigRational> {
    let raw = counting::weighted_trace(inst, weights, r, mode)?;
    let p = raw / rat(divisor as i128);
    if !p.is_integer() {
        return Err(check_failed(format!(
            "isotypic power sum {p} at r = {r} is not integral"
        )));
    }
    Ok(p)
}

fn extra_consistency(
    inst: &DworkInstance,
    weights: &reptheory::ClassFunction,
    factor: &IntPoly,
    r: u32,
    divisor: u64,
    mode: Parallelism,
) -> Result<Option<bool>> {
    match isotypic_sum(inst, weights, r, divisor, mode) {
        Ok(p) => {
            let predicted = factor.power_sums(r as usize).pop().expect("r >= 1");
            Ok(Some(BigRational::from_integer(predicted) == p))
        }
        Err(Error::CostCap { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Extracts `R_a` through the orbit projector, completing it by the
/// functional equation from `ceil(D/2)` power sums and fetching more when
/// the completion is ambiguous.
pub fn orbit_factor(
    inst: &DworkInstance,
    orbit: &CharClass,
    mode: Parallelism,
) -> Result<FactorReport> {
    let n = inst.n();
    if orbit.n() != n {
        return Err(invalid("class does not match n"));
    }
    let inv = chars::invariants(orbit);
    if inv.m_a == 0 {
        return Err(invalid(format!(
            "{orbit} has m_a = 0 and contributes nothing"
        )));
    }
    let d = (inv.d_a * inv.deg_q) as usize;
    let w = weight(inst);
    let q = inst.q();
    let weights = reptheory::projector_weights(&ProjectorTarget::Orbit(orbit.clone()), n)?;
    let mut sums = Vec::new();
    let h = d.div_ceil(2).max(1);
    for r in 1..=h as u32 {
        sums.push(isotypic_sum(inst, &weights, r, inv.exponent, mode)?);
    }
    let factor = loop {
        let c = candidates(&sums, d, w, q)?;
        match c.len() {
            1 => break c.into_iter().next().expect("one candidate"),
            0 => {
                return Err(check_failed(format!(
                    "no candidate for the factor of {orbit}"
                )))
            }
            _ if sums.len() < d => {
                let r = sums.len() as u32 + 1;
                sums.push(isotypic_sum(inst, &weights, r, inv.exponent, mode)?);
            }
            k => {
                return Err(check_failed(format!(
                    "{k} candidates for {orbit} with all {d} power sums"
                )))
            }
        }
    };
    let consistency = extra_consistency(
        inst,
        &weights,
        &factor,
        sums.len() as u32 + 1,
        inv.exponent,
        mode,
    )?;
    let weil = weil_check(&factor, w, q);
    let split = if inv.d_a == 1 && inv.d_a_degree == 2 && inv.mprime_a <= 3 {
        quadratic_field_m(inv.n_a, &inv.im_k)
            .and_then(|m| quadratic_split_check(&factor, m, inv.mprime_a as usize))
    } else {
        None
    };
    Ok(FactorReport {
        orbit: orbit.to_string(),
        kind: FactorKind::Orbit,
        factor_text: factor.to_string(),
        degree: factor.degree(),
        exponent: inv.exponent,
        power_sums: power_sum_strings(&sums),
        certificate: Certificate {
            integrality: true,
            degree_match: factor.degree() == d,
            functional_sign: functional_sign(&factor, w, q),
            weil_pass: weil.passed,
            weil_max_relative_error: weil.max_relative_error,
            oracle_consistency: consistency,
            quadratic_split: split,
        },
        factor,
    })
}

/// The factors `Q_(a,omega)` for `omega` over `mu_(d_a)`, from full-length
/// power sums of the isotypic projectors. Their product must equal `R_a`.
pub fn omega_split(
    inst: &DworkInstance,
    a: &CharClass,
    mode: Parallelism,
) -> Result<Vec<FactorReport>> {
    let n = inst.n();
    let inv = chars::invariants(a);
    if inv.d_a <= 1 {
        return Err(invalid(format!(
            "{a} has d_a = 1; there is nothing to split"
        )));
    }
    let d = inv.deg_q as usize;
    let w = weight(inst);
    let q = inst.q();
    let mut out = Vec::new();
    for j in 0..inv.d_a {
        let target = ProjectorTarget::Isotypic {
            a: a.clone(),
            omega_exp: reptheory::omega_exponent(a, j),
        };
        let weights = reptheory::projector_weights(&target, n)?;
        let mut values = Vec::new();
        for r in 1..=d as u32 {
            values.push((r, counting::weighted_trace(inst, &weights, r, mode)?));
        }
        let series = PowerSumSeries {
            values,
            divisor: inv.exponent,
        };
        let sums = series.normalized()?;
        let factor = newton_poly(&series, d)?;
        let consistency =
            extra_consistency(inst, &weights, &factor, d as u32 + 1, inv.exponent, mode)?;
        let weil = weil_check(&factor, w, q);
        let split = if inv.d_a_degree == 2 && inv.mprime_a <= 3 {
            quadratic_field_m(inv.n_a, &inv.im_k)
                .and_then(|m| quadratic_split_check(&factor, m, inv.mprime_a as usize))
        } else {
            None
        };
        out.push(FactorReport {
            orbit: a.to_string(),
            kind: FactorKind::Omega,
            factor_text: factor.to_string(),
            degree: factor.degree(),
            exponent: inv.exponent,
            power_sums: power_sum_strings(&sums),
            certificate: Certificate {
                integrality: true,
                degree_match: factor.degree() == d,
                functional_sign: functional_sign(&factor, w, q),
                weil_pass: weil.passed,
                weil_max_relative_error: weil.max_relative_error,
                oracle_consistency: consistency,
                quadratic_split: split,
            },
            factor,
        });
    }
    out.sort_by(|x, y| x.factor.cmp(&y.factor));
    let orbit = orbit_factor(inst, a, mode)?;
    let product = out
        .iter()
        .try_fold(IntPoly::one(), |acc, f| acc.mul(&f.factor))?;
    if product != orbit.factor {
        return Err(check_failed(format!(
            "omega factors multiply to {product}, orbit factor is {}",
            orbit.factor
        )));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZetaMode {
    Predict,
    Extract,
    Check,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateEntry {
    pub subject: String,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConsistencyRow {
    pub r: u32,
    pub direct: String,
    pub assembled: String,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaReport {
    pub instance: InstanceParams,
    pub mode: ZetaMode,
    pub predictions: Vec<PredictionRow>,
    pub factors: Vec<FactorReport>,
    pub certificates: Vec<CertificateEntry>,
    pub consistency: Vec<ConsistencyRow>,
    /// Orbits whose extraction exceeded a cost cap.
    pub skipped: Vec<String>,
}

impl ZetaReport {
    pub fn passed(&self) -> bool {
        self.certificates.iter().all(|c| c.passed) && self.consistency.iter().all(|c| c.passed)
    }
}

pub const MAX_EXTRACT_N: u32 = 5;

/// Global consistency runs for `r = 1..=CONSISTENCY_MAX_R` while counts stay under the cost cap.
pub const CONSISTENCY_MAX_R: u32 = 3;

fn certificate_entries(f: &FactorReport) -> Vec<CertificateEntry> {
    let subject = match f.kind {
        FactorKind::Orbit => format!("R_{}", f.orbit),
        FactorKind::Omega => format!("Q_{}: {}", f.orbit, f.factor_text),
    };
    let c = &f.certificate;
    let mut out = vec![
        CertificateEntry {
            subject: subject.clone(),
            check: "integrality".into(),
            passed: c.integrality,
            detail: f.factor_text.clone(),
        },
        CertificateEntry {
            subject: subject.clone(),
            check: "degree".into(),
            passed: c.degree_match,
            detail: format!("degree {}", f.degree),
        },
        CertificateEntry {
            subject: subject.clone(),
            check: "weil".into(),
            passed: c.weil_pass,
            detail: format!("max relative error {:.3e}", c.weil_max_relative_error),
        },
    ];
    if f.kind == FactorKind::Orbit {
        out.push(CertificateEntry {
            subject: subject.clone(),
            check: "functional-equation".into(),
            passed: c.functional_sign.is_some(),
            detail: format!("sign {:?}", c.functional_sign),
        });
    }
    if let Some(ok) = c.oracle_consistency {
        out.push(CertificateEntry {
            subject,
            check: "extra-power-sum".into(),
            passed: ok,
            detail: String::new(),
        });
    }
    out
}

/// Predictions, extracted factors where affordable, certificates and the
/// global power-sum consistency against direct point counts.
pub fn zeta_report(
    inst: &DworkInstance,
    mode: ZetaMode,
    orbit: Option<&CharClass>,
    parallel: Parallelism,
) -> Result<ZetaReport> {
    let n = inst.n();
    let prediction = chars::predict_report(n)?;
    let mut report = ZetaReport {
        instance: inst.params(),
        mode,
        predictions: prediction.rows.clone(),
        factors: Vec::new(),
        certificates: Vec::new(),
        consistency: Vec::new(),
        skipped: Vec::new(),
    };
    if mode == ZetaMode::Predict {
        return Ok(report);
    }
    if n > MAX_EXTRACT_N {
        return Err(invalid(format!(
            "extraction is limited to n <= {MAX_EXTRACT_N}; use predict mode"
        )));
    }
    let orbits: Vec<CharClass> = match orbit {
        Some(a) => {
            let key = a.orbit_rep();
            vec![CharClass::new(
                n,
                &key.iter().map(|&x| x as i64).collect::<Vec<_>>(),
            )?]
        }
        None => chars::full_orbits(n)?
            .into_iter()
            .filter(|o| !o.excluded)
            .map(|o| o.rep)
            .collect(),
    };
    let mut assembled: Option<Vec<(IntPoly, u64)>> = Some(Vec::new());
    for a in &orbits {
        let inv = chars::invariants(a);
        match orbit_factor(inst, a, parallel) {
            Ok(f) => {
                if let Some(list) = assembled.as_mut() {
                    list.push((f.factor.clone(), inv.exponent));
                }
                report.certificates.extend(certificate_entries(&f));
                report.factors.push(f);
            }
            Err(Error::CostCap { what, .. }) => {
                report.skipped.push(format!("{a}: {what}"));
                assembled = None;
                continue;
            }
            Err(e) => return Err(e),
        }
        if inv.d_a > 1 && n <= 4 {
            match omega_split(inst, a, parallel) {
                Ok(fs) => {
                    for f in fs {
                        report.certificates.extend(certificate_entries(&f));
                        report.factors.push(f);
                    }
                }
                Err(Error::CostCap { what, .. }) => {
                    report.skipped.push(format!("{a} omega split: {what}"))
                }
                Err(e) => return Err(e),
            }
        }
    }
    if mode == ZetaMode::Check && orbit.is_none() {
        if let Some(list) = assembled {
            // Power sums of the product are exponent-weighted sums of the factors' power sums.
            let sums: Vec<Vec<BigInt>> = list
                .iter()
                .map(|(p, _)| p.power_sums(CONSISTENCY_MAX_R as usize))
                .collect();
            for r in 1..=CONSISTENCY_MAX_R {
                match counting::primitive_power_sum(inst, r, parallel) {
                    Ok(direct) => {
                        let mine: BigInt = list
                            .iter()
                            .zip(&sums)
                            .map(|((_, e), s)| BigInt::from(*e) * &s[r as usize - 1])
                            .sum();
                        report.consistency.push(ConsistencyRow {
                            r,
                            direct: direct.to_string(),
                            assembled: mine.to_string(),
                            passed: BigInt::from(direct) == mine,
                        });
                    }
                    Err(Error::CostCap { .. }) => break,
                    Err(e) => return Err(e),
                }
            }
        }
    }
    Ok(report)
}

impl ZetaReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "orbit",
            "kind",
            "factor",
            "degree",
            "exponent",
            "functional_sign",
            "weil",
            "passed",
        ])
        .expect("in-memory write");
        for f in &self.factors {
            w.write_record([
                f.orbit.clone(),
                format!("{:?}", f.kind).to_lowercase(),
                f.factor_text.clone(),
                f.degree.to_string(),
                f.exponent.to_string(),
                f.certificate
                    .functional_sign
                    .map(|s| s.to_string())
                    .unwrap_or_default(),
                f.certificate.weil_pass.to_string(),
                f.certificate.passed().to_string(),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
    }

    pub fn to_markdown(&self) -> String {
        let header = ["orbit", "kind", "factor", "exponent", "certificate"];
        let rows: Vec<[String; 5]> = self
            .factors
            .iter()
            .map(|f| {
                [
                    f.orbit.clone(),
                    format!("{:?}", f.kind).to_lowercase(),
                    f.factor_text.clone(),
                    f.exponent.to_string(),
                    if f.certificate.passed() {
                        "pass".into()
                    } else {
                        "FAIL".into()
                    },
                ]
            })
            .collect();
        let p = self.instance;
        let mut out = format!("n = {}, q = {}, psi = {}\n\n", p.n, p.q, p.psi);
        if self.mode == ZetaMode::Predict || self.factors.is_empty() {
            let body: Vec<[String; 6]> = self
                .predictions
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
            out.push_str(&chars::markdown_table(
                &["class", "m_a", "deg_Q", "exponent", "D_a", "omega-set"],
                &body,
            ));
        } else {
            out.push_str(&chars::markdown_table(&header, &rows));
        }
        for c in &self.consistency {
            out.push_str(&format!(
                "\nr = {}: direct {} assembled {} {}",
                c.r,
                c.direct,
                c.assembled,
                if c.passed { "pass" } else { "FAIL" }
            ));
        }
        for s in &self.skipped {
            out.push_str(&format!("\nskipped: {s}"));
        }
        out.push('\n');
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(vals: &[i128]) -> PowerSumSeries {
        PowerSumSeries {
            values: vals
                .iter()
                .enumerate()
                .map(|(k, &v)| (k as u32 + 1, rat(v)))
                .collect(),
            divisor: 1,
        }
    }

    #[test]
    fn newton_examples() {
        assert_eq!(
            newton_poly(&series(&[5, 13]), 2).unwrap().coeffs(),
            &[1, -5, 6]
        );
        assert_eq!(newton_poly(&series(&[0, 0, 0]), 3).unwrap().coeffs(), &[1]);
        assert!(newton_poly(&series(&[1, 0]), 2).is_err());
    }

    #[test]
    fn power_sums_roundtrip() {
        let p = IntPoly::new(vec![1, -3, 5, -7]).unwrap();
        let sums: Vec<i128> = p
            .power_sums(3)
            .iter()
            .map(|x| x.to_i128().unwrap())
            .collect();
        assert_eq!(newton_poly(&series(&sums), 3).unwrap(), p);
    }

    #[test]
    fn completion_elliptic() {
        let p = functional_completion(&[rat(2)], 2, 1, 7).unwrap();
        assert_eq!(p.coeffs(), &[1, -2, 7]);
    }

    #[test]
    fn completion_needs_more_sums_for_0022() {
        assert!(functional_completion(&[rat(0)], 2, 2, 13).is_err());
        let p = functional_completion(&[rat(0), rat(338)], 2, 2, 13).unwrap();
        assert_eq!(p.coeffs(), &[1, 0, -169]);
    }

    #[test]
    fn weil_detects_bad_modulus() {
        assert!(weil_check(&IntPoly::new(vec![1, 0, -169]).unwrap(), 2, 13).passed);
        assert!(!weil_check(&IntPoly::new(vec![1, -5, 6]).unwrap(), 2, 13).passed);
        assert!(weil_check(&IntPoly::new(vec![1, -26, 169]).unwrap(), 2, 13).passed);
    }

    #[test]
    fn signs() {
        assert_eq!(
            functional_sign(&IntPoly::new(vec![1, -13]).unwrap(), 2, 13),
            Some(-1)
        );
        assert_eq!(
            functional_sign(&IntPoly::new(vec![1, 13]).unwrap(), 2, 13),
            Some(1)
        );
        assert_eq!(
            functional_sign(&IntPoly::new(vec![1, -2, 7]).unwrap(), 1, 7),
            Some(1)
        );
    }

    #[test]
    fn split_examples() {
        let trivial = IntPoly::new(vec![1, -1])
            .unwrap()
            .mul(&IntPoly::new(vec![1, -2]).unwrap())
            .unwrap();
        let trivial = trivial.mul(&trivial).unwrap();
        assert!(quadratic_split_check(&trivial, 5, 2).is_some());
        let bad = IntPoly::new(vec![1, 1, 2])
            .unwrap()
            .mul(&IntPoly::new(vec![1, 3, 5]).unwrap())
            .unwrap();
        assert!(quadratic_split_check(&bad, 5, 2).is_none());
        // (1 + phi t)(1 + phibar t) = 1 + t - t^2 with phi = (1 + sqrt 5)/2.
        let golden = IntPoly::new(vec![1, 1, -1]).unwrap();
        let s = quadratic_split_check(&golden, 5, 1).unwrap();
        assert_eq!(s.first[1].rational, "1/2");
    }

    #[test]
    fn quadratic_fields() {
        assert_eq!(quadratic_field_m(5, &[1, 4]), Some(5));
        assert_eq!(quadratic_field_m(7, &[1, 2, 4]), Some(-7));
        assert_eq!(quadratic_field_m(4, &[1]), Some(-1));
        assert_eq!(quadratic_field_m(8, &[1, 7]), Some(2));
        assert_eq!(quadratic_field_m(7, &[1]), None);
    }
}
