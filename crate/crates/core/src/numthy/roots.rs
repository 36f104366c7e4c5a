//! Exact integer roots, used to bracket irrational powers `n^(p/q)`.

use num_bigint::BigUint;
use num_traits::{One, Pow, Zero};

/// Floor of the `q`-th root of `x`, by Newton iteration from above.
pub fn iroot_floor(x: &BigUint, q: u32) -> BigUint {
    assert!(q >= 1, "root index must be positive");
    if q == 1 || x.is_zero() || x.is_one() {
        return x.clone();
    }
    let bits = x.bits();
    // 2^ceil(bits/q) is strictly larger than the root.
    let mut cur = BigUint::one() << bits.div_ceil(u64::from(q));
    let qm1 = q - 1;
    let qb = BigUint::from(q);
    loop {
        let next = (&cur * qm1 + x / Pow::pow(&cur, qm1)) / &qb;
        if next >= cur {
            return cur;
        }
        cur = next;
    }
}

/// `(floor(n^(p/q)), ceil(n^(p/q)))`, computed from the integer `q`-th root of `n^p`.
pub fn nth_root_bounds(n: u64, p: u32, q: u32) -> (BigUint, BigUint) {
    root_bracket_scaled(n, p, q, 0)
}

/// Brackets `n^(p/q) * 2^frac_bits` by consecutive integers (equal when exact).
///
/// Dividing both ends by `2^frac_bits` gives a rational enclosure of width
/// at most `2^-frac_bits`.
pub fn root_bracket_scaled(n: u64, p: u32, q: u32, frac_bits: u32) -> (BigUint, BigUint) {
    assert!(q >= 1, "root index must be positive");
    let radicand: BigUint = Pow::pow(BigUint::from(n), p) << (u64::from(frac_bits) * u64::from(q));
    let lo = iroot_floor(&radicand, q);
    let hi = if Pow::pow(&lo, q) == radicand {
        lo.clone()
    } else {
        &lo + 1u32
    };
    (lo, hi)
}

/// True when `x` is a perfect `q`-th power.
pub fn is_perfect_power(x: &BigUint, q: u32) -> bool {
    let r = iroot_floor(x, q);
    Pow::pow(&r, q) == *x
}

/// Integer square root of a `u64`, exact.
pub fn isqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bracket_examples() {
        assert_eq!(nth_root_bounds(16, 1, 4), (2u32.into(), 2u32.into()));
        assert_eq!(nth_root_bounds(2, 1, 4), (1u32.into(), 2u32.into()));
        // 10^18 has fourth root 31622.77...
        assert_eq!(
            nth_root_bounds(1_000_000, 3, 4),
            (31622u32.into(), 31623u32.into())
        );
        assert_eq!(nth_root_bounds(0, 3, 4), (0u32.into(), 0u32.into()));
    }

    #[test]
    fn isqrt_edges() {
        assert_eq!(isqrt(0), 0);
        assert_eq!(isqrt(15), 3);
        assert_eq!(isqrt(16), 4);
        assert_eq!(isqrt(u64::MAX), u32::MAX as u64);
    }

    proptest! {
        #[test]
        fn floor_root_brackets(n in 0u64..1_000_000_000_000, p in 1u32..8, q in 1u32..40) {
            let (lo, hi) = nth_root_bounds(n, p, q);
            let np: BigUint = Pow::pow(BigUint::from(n), p);
            prop_assert!(Pow::pow(&lo, q) <= np);
            prop_assert!(Pow::pow(&(&lo + 1u32), q) > np);
            prop_assert!(hi == lo || hi == &lo + 1u32);
            // num-bigint's own root is an independent reference.
            prop_assert_eq!(lo, np.nth_root(q));
        }
    }
}
