//! Small integer helpers.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

/// Residue of `k` mod `m`, written as `1` when `m = 1` so that units print
/// uniformly.
pub fn unit_residue(k: u64, m: u32) -> u32 {
    if m == 1 {
        1
    } else {
        (k % m as u64) as u32
    }
}

/// Units of `Z/mZ` as residues in `0..m`; for `m = 1` the single unit is
/// written `1`.
pub fn units(m: u32) -> Vec<u32> {
    if m == 1 {
        return vec![1];
    }
    (1..m).filter(|&k| gcd(k as u64, m as u64) == 1).collect()
}

pub fn euler_phi(m: u32) -> u32 {
    units(m).len() as u32
}

pub fn factorial(n: u32) -> u64 {
    (1..=n as u64).product()
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

pub fn moebius(mut n: u32) -> i64 {
    let mut result = 1i64;
    let mut p = 2u32;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

pub fn ipow(base: i128, e: u32) -> i128 {
    base.pow(e)
}
