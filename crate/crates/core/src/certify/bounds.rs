//! Explicit lower bounds for the level-indexed dimension sequences.
//!
//! Full space:
//!   `B_k(N) = (2k-1)/12 N - 1/2 C N^(3/4) - 5/6 C N^(1/4)`
//! Newspace:
//!   `B'_k(N) = (2k-1)/12 / D N^(31/32) - 1/2 N^(1/2) - 5/6 C N^(1/4) - 1`
//! with `C = 4.862` bounding `2^omega(N) / N^(1/4)` and `D = 9.930`
//! bounding `prod_{p|N} p^2/(p^2-p-1) / N^(1/32)`.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use super::CertifyError;
use crate::dimension::{SpaceKind, Weight};
use crate::numthy::{nth_root_bounds, root_bracket_scaled, Rational};

/// `4.862`, exactly.
pub const OMEGA_CONSTANT: (u64, u64) = (4862, 1000);
/// `9.930`, exactly.
pub const PI_CONSTANT: (u64, u64) = (9930, 1000);

/// Level from which `B_k` is increasing, for every `k`.
pub const FULL_THRESHOLD: u64 = 240_000;
/// Level from which `B'_k` is increasing, for every `k`.
pub const NEW_THRESHOLD: u64 = 4_000;

/// Fractional bits used when bracketing roots in the slope comparison.
const SLOPE_FRAC_BITS: u32 = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BoundSpec {
    pub kind: SpaceKind,
    pub k: Weight,
}

fn r(n: u64, d: u64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

fn ri(x: BigUint) -> Rational {
    Rational::from_integer(BigInt::from(x))
}

impl BoundSpec {
    pub fn new(kind: SpaceKind, k: Weight) -> Self {
        BoundSpec { kind, k }
    }

    pub fn omega_constant() -> Rational {
        r(OMEGA_CONSTANT.0, OMEGA_CONSTANT.1)
    }

    pub fn pi_constant() -> Rational {
        r(PI_CONSTANT.0, PI_CONSTANT.1)
    }

    /// Coefficient of the growing term: `(2k-1)/12`, divided by `D` for the newspace.
    pub fn leading_coefficient(&self) -> Rational {
        let base = r(2 * self.k.k() - 1, 12);
        match self.kind {
            SpaceKind::Full => base,
            SpaceKind::New => base / Self::pi_constant(),
        }
    }

    /// `(p, q)` of the growing term `N^(p/q)`.
    pub fn leading_exponent(&self) -> (u32, u32) {
        match self.kind {
            SpaceKind::Full => (1, 1),
            SpaceKind::New => (31, 32),
        }
    }

    /// Negative terms as `(coefficient, p, q)` for `coefficient * N^(p/q)`,
    /// plus the constant offset.
    fn negative_terms(&self) -> (Vec<(Rational, u32, u32)>, Rational) {
        let c = Self::omega_constant();
        let tail = r(5, 6) * &c;
        match self.kind {
            SpaceKind::Full => (vec![(r(1, 2) * c, 3, 4), (tail, 1, 4)], Rational::zero()),
            SpaceKind::New => (vec![(r(1, 2), 1, 2), (tail, 1, 4)], Rational::one()),
        }
    }

    pub fn threshold(&self) -> u64 {
        match self.kind {
            SpaceKind::Full => FULL_THRESHOLD,
            SpaceKind::New => NEW_THRESHOLD,
        }
    }
}

/// A rational `<= B(N)`: the positive term uses the floor of its root and
/// every subtracted term uses the ceiling.
pub fn bound_lower(spec: &BoundSpec, n: u64) -> Rational {
    let (p, q) = spec.leading_exponent();
    let (lead_lo, _) = nth_root_bounds(n, p, q);
    let mut acc = spec.leading_coefficient() * ri(lead_lo);
    let (terms, offset) = spec.negative_terms();
    for (coef, p, q) in terms {
        let (_, hi) = nth_root_bounds(n, p, q);
        acc -= coef * ri(hi);
    }
    acc - offset
}

/// Whether `bound_lower(spec, n) > value`.
pub fn bound_exceeds(spec: &BoundSpec, n: u64, value: u64) -> bool {
    bound_lower(spec, n) > Rational::from_integer(BigInt::from(value))
}

/// Floating-point estimate of `B(N)`; only used to narrow searches, never to
/// decide a certified fact.
pub fn bound_estimate(spec: &BoundSpec, n: u64) -> f64 {
    let x = n as f64;
    let k = spec.k.k() as f64;
    let c = 4.862;
    match spec.kind {
        SpaceKind::Full => (2.0 * k - 1.0) / 12.0 * x - 0.5 * c * x.powf(0.75) - 5.0 / 6.0 * c * x.powf(0.25),
        SpaceKind::New => {
            (2.0 * k - 1.0) / 12.0 / 9.930 * x.powf(31.0 / 32.0)
                - 0.5 * x.sqrt()
                - 5.0 / 6.0 * c * x.powf(0.25)
                - 1.0
        }
    }
}

/// Certifies that `B` is strictly increasing for `N >= threshold` and
/// returns the threshold.
///
/// After multiplying the derivative by `N^(1 - p/q)` for the leading
/// exponent `p/q`, the positive part is constant and every negative part is
/// `c * N^(-s)` with `s > 0`, so checking the inequality at the threshold,
/// with each `N^s` rounded down, covers all larger `N`.
pub fn verify_monotone(spec: &BoundSpec) -> Result<u64, CertifyError> {
    let t = spec.threshold();
    let (lp, lq) = spec.leading_exponent();
    let positive = spec.leading_coefficient() * r(u64::from(lp), u64::from(lq));
    let (terms, _) = spec.negative_terms();
    let mut negative = Rational::zero();
    for (coef, p, q) in terms {
        // d/dN c N^(p/q) = c (p/q) N^(p/q - 1); times N^(1 - lp/lq) gives
        // c (p/q) N^(-s) with s = lp/lq - p/q.
        let s_num = lp * q - p * lq;
        let s_den = lq * q;
        if s_num == 0 {
            return Err(CertifyError::MonotonicityFailed(format!(
                "term N^({p}/{q}) grows as fast as the leading term"
            )));
        }
        let (lo, _) = root_bracket_scaled(t, s_num, s_den, SLOPE_FRAC_BITS);
        if lo.is_zero() {
            return Err(CertifyError::MonotonicityFailed("degenerate root bracket".into()));
        }
        // N^s >= lo / 2^bits, so N^(-s) <= 2^bits / lo.
        let inv_upper = Rational::new(BigInt::one() << SLOPE_FRAC_BITS, BigInt::from(lo));
        negative += coef * r(u64::from(p), u64::from(q)) * inv_upper;
    }
    if positive > negative {
        Ok(t)
    } else {
        Err(CertifyError::MonotonicityFailed(format!(
            "{} bound for k={}: slope {} does not dominate {} at N={}",
            spec.kind, spec.k, positive, negative, t
        )))
    }
}

/// Least `n` in `[lo, hi]` with `pred(n)`, assuming `pred(hi)` holds and
/// `pred` is monotone up to rounding; the result is then walked down while
/// the predicate keeps holding.
pub(crate) fn least_satisfying(lo: u64, hi: u64, pred: impl Fn(u64) -> bool) -> u64 {
    debug_assert!(pred(hi));
    let (mut a, mut b) = (lo, hi);
    while a < b {
        let mid = a + (b - a) / 2;
        if pred(mid) {
            b = mid;
        } else {
            a = mid + 1;
        }
    }
    while b > lo && pred(b - 1) {
        b -= 1;
    }
    b
}

/// Least level `N >= threshold` at which the certified bound exceeds
/// `value`, searching no further than `limit`.
pub fn first_clearing_level(spec: &BoundSpec, value: u64, limit: u64) -> Result<u64, CertifyError> {
    let t = spec.threshold();
    if limit < t {
        return Err(CertifyError::LimitReached { limit, value });
    }
    let mut hi = t;
    while !bound_exceeds(spec, hi, value) {
        if hi >= limit {
            return Err(CertifyError::LimitReached { limit, value });
        }
        hi = hi.saturating_mul(2).min(limit);
    }
    Ok(least_satisfying(t, hi, |n| bound_exceeds(spec, n, value)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(kind: SpaceKind, k: u64) -> BoundSpec {
        BoundSpec::new(kind, Weight::new(k).unwrap())
    }

    fn int(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn bound_examples() {
        let b = bound_lower(&spec(SpaceKind::Full, 1), 1_000_000);
        assert!(b >= int(6000) && b <= int(6460), "{b}");
        assert!(bound_lower(&spec(SpaceKind::Full, 1), 1) < int(0));
        assert!(bound_lower(&spec(SpaceKind::New, 1), 4000) < int(0));
    }

    #[test]
    fn thresholds() {
        for k in 1..=40 {
            assert_eq!(verify_monotone(&spec(SpaceKind::Full, k)).unwrap(), 240_000);
            assert_eq!(verify_monotone(&spec(SpaceKind::New, k)).unwrap(), 4_000);
        }
    }

    #[test]
    fn estimate_tracks_exact() {
        for kind in SpaceKind::ALL {
            for n in [1u64, 17, 4000, 240_000, 1_000_000, 14_000_000] {
                let s = spec(kind, 3);
                let exact: f64 = num_traits::ToPrimitive::to_f64(&bound_lower(&s, n)).unwrap();
                let est = bound_estimate(&s, n);
                // Integer root brackets cost at most one unit per root term.
                assert!(exact <= est + 1e-6 && est - exact < 8.0, "{kind} {n}: {exact} vs {est}");
            }
        }
    }

    #[test]
    fn least_satisfying_walks_down() {
        assert_eq!(least_satisfying(0, 100, |n| n >= 37), 37);
        assert_eq!(least_satisfying(5, 5, |_| true), 5);
    }

    #[test]
    fn clearing_level_is_minimal() {
        let s = spec(SpaceKind::Full, 1);
        let n0 = first_clearing_level(&s, 150, 10_000_000).unwrap();
        assert!(bound_exceeds(&s, n0, 150));
        assert!(!bound_exceeds(&s, n0 - 1, 150));
        assert!(matches!(
            first_clearing_level(&s, 150, 300_000),
            Err(CertifyError::LimitReached { .. })
        ));
    }
}
