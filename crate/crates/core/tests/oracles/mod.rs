//! Independent reference computations shared by the integration and
//! acceptance tests.
#![allow(dead_code)]

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow};

use modform_core::{Rational, SpaceKind};

/// `floor(n^(p/q) 2^bits)` and whether the root is exact.
fn fixed_root(n: u64, p: u32, q: u32, bits: u32) -> (BigUint, bool) {
    let radicand = Pow::pow(BigUint::from(n), p) << (bits * q) as usize;
    let root = radicand.nth_root(q);
    let exact = Pow::pow(&root, q) == radicand;
    (root, exact)
}

/// Interval `[lo, hi]` around the exact bound, from 200-bit roots.
pub fn bound_interval(kind: SpaceKind, k: u64, n: u64) -> (Rational, Rational) {
    const BITS: u32 = 200;
    let scale = Rational::from_integer(BigInt::one() << BITS as usize);
    let c = Rational::new(4862.into(), 1000.into());
    let rat = |a: i64, b: i64| Rational::new(a.into(), b.into());
    let (lead, lead_exp, negatives, offset) = match kind {
        SpaceKind::Full => (rat(2 * k as i64 - 1, 12), (1, 1), vec![(rat(1, 2) * &c, 3, 4), (rat(5, 6) * &c, 1, 4)], rat(0, 1)),
        SpaceKind::New => (
            rat(2 * k as i64 - 1, 12) / rat(9930, 1000),
            (31, 32),
            vec![(rat(1, 2), 1, 2), (rat(5, 6) * &c, 1, 4)],
            rat(1, 1),
        ),
    };
    let enclose = |p, q| {
        let (root, exact) = fixed_root(n, p, q, BITS);
        let lo = Rational::from_integer(BigInt::from(root)) / &scale;
        let hi = if exact { lo.clone() } else { &lo + Rational::one() / &scale };
        (lo, hi)
    };
    let (l_lo, l_hi) = enclose(lead_exp.0, lead_exp.1);
    let (mut lo, mut hi) = (&lead * l_lo - &offset, &lead * l_hi - &offset);
    for (coef, p, q) in negatives {
        let (t_lo, t_hi) = enclose(p, q);
        lo -= &coef * t_hi;
        hi -= &coef * t_lo;
    }
    (lo, hi)
}

/// Smallest-prime-factor table.
fn spf_table(limit: usize) -> Vec<u32> {
    let mut spf = vec![0u32; limit + 1];
    for i in 2..=limit {
        if spf[i] == 0 {
            for j in (i..=limit).step_by(i) {
                if spf[j] == 0 {
                    spf[j] = i as u32;
                }
            }
        }
    }
    spf
}

/// First `N <= limit` violating `2^omega(N) <= 4.862 N^(1/4)` or
/// `prod_{p|N} p^2/(p^2-p-1) <= 9.930 N^(1/32)`, in exact integers.
pub fn first_mult_bound_failure(limit: u64) -> Option<u64> {
    let spf = spf_table(limit as usize);
    let c4 = 4862u128.pow(4);
    let d32 = Pow::pow(BigUint::from(9930u32), 32u32);
    let thousand32 = Pow::pow(BigUint::from(1000u32), 32u32);
    for n in 1..=limit {
        let mut primes = Vec::new();
        let mut m = n;
        while m > 1 {
            let p = spf[m as usize] as u64;
            primes.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        if (1u128 << (4 * primes.len())) * 1000u128.pow(4) > c4 * n as u128 {
            return Some(n);
        }
        let (num, den) = primes.iter().fold((BigUint::one(), BigUint::one()), |(a, b), &p| (a * (p * p), b * (p * p - p - 1)));
        if Pow::pow(num, 32u32) * &thousand32 > Pow::pow(den, 32u32) * &d32 * n {
            return Some(n);
        }
    }
    None
}

/// `k - 1 + (-1)^k + [k = 1]`, `k - 1 - (-1)^k` and `k - 1`.
pub fn pattern_closed_forms(k: u64) -> [u64; 3] {
    let k = k as i64;
    let alt = if k % 2 == 0 { 1 } else { -1 };
    [(k - 1 + alt + i64::from(k == 1)) as u64, (k - 1 - alt) as u64, (k - 1) as u64]
}

/// Least `N` with `N^3 > (6C)^4` (full) or `N^23 > (6CD)^32` (new).
pub fn density_cutoff(kind: SpaceKind) -> u64 {
    let (num, den, p, q): (BigUint, BigUint, u32, u32) = match kind {
        SpaceKind::Full => (BigUint::from(6u32 * 4862), BigUint::from(1000u32), 3, 4),
        SpaceKind::New => (BigUint::from(6u64 * 4862 * 9930), BigUint::from(1_000_000u32), 23, 32),
    };
    let rhs = Pow::pow(&num, q);
    let dq = Pow::pow(&den, q);
    (1u64..).find(|&n| Pow::pow(BigUint::from(n), p) * &dq > rhs).unwrap()
}
