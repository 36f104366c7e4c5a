use std::fmt;
use std::sync::OnceLock;

use super::NumthyError;

/// Primes below this bound are cached for trial division.
const SMALL_PRIME_BOUND: u64 = 1 << 16;

/// Canonical prime-power decomposition of a positive integer.
///
/// Primes are strictly ascending and exponents are at least one; the empty
/// list represents 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factorization {
    value: u64,
    pairs: Vec<(u64, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization { value: 1, pairs: Vec::new() }
    }

    /// Builds a factorization from explicit `(prime, exponent)` pairs,
    /// checking every invariant.
    pub fn from_pairs(pairs: Vec<(u64, u32)>) -> Result<Self, NumthyError> {
        let mut value: u64 = 1;
        let mut prev = 1u64;
        for &(p, e) in &pairs {
            if p <= prev {
                return Err(NumthyError::InvalidFactorization(format!(
                    "primes must be strictly ascending, got {p} after {prev}"
                )));
            }
            if e == 0 {
                return Err(NumthyError::InvalidFactorization(format!("zero exponent on {p}")));
            }
            if !is_prime(p) {
                return Err(NumthyError::InvalidFactorization(format!("{p} is not prime")));
            }
            let pe = p.checked_pow(e).ok_or(NumthyError::Overflow)?;
            value = value.checked_mul(pe).ok_or(NumthyError::Overflow)?;
            prev = p;
        }
        Ok(Factorization { value, pairs })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn pairs(&self) -> &[(u64, u32)] {
        &self.pairs
    }

    /// Number of distinct prime divisors.
    pub fn omega(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_squarefree(&self) -> bool {
        self.pairs.iter().all(|&(_, e)| e == 1)
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.pairs.iter().map(|&(p, _)| p)
    }

    /// Number of divisors, `prod (e_i + 1)`.
    pub fn divisor_count(&self) -> u64 {
        self.pairs.iter().map(|&(_, e)| u64::from(e) + 1).product()
    }

    /// All divisors in ascending order.
    pub fn divisors(&self) -> Vec<Factorization> {
        let mut out = vec![Factorization::one()];
        for &(p, e) in &self.pairs {
            let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
            for d in &out {
                let mut pe = 1u64;
                for j in 0..=e {
                    let mut pairs = d.pairs.clone();
                    if j > 0 {
                        pairs.push((p, j));
                    }
                    next.push(Factorization { value: d.value * pe, pairs });
                    pe *= p;
                }
            }
            out = next;
        }
        out.sort_by_key(|d| d.value);
        out
    }

    /// The cofactor `self / d`; `d` must divide `self`.
    pub fn quotient(&self, d: &Factorization) -> Factorization {
        let mut pairs = Vec::with_capacity(self.pairs.len());
        let mut it = d.pairs.iter().peekable();
        for &(p, e) in &self.pairs {
            let sub = match it.peek() {
                Some(&&(q, f)) if q == p => {
                    it.next();
                    f
                }
                _ => 0,
            };
            assert!(sub <= e, "{} does not divide {}", d.value, self.value);
            if e > sub {
                pairs.push((p, e - sub));
            }
        }
        assert!(it.next().is_none(), "{} does not divide {}", d.value, self.value);
        Factorization { value: self.value / d.value, pairs }
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pairs.is_empty() {
            return write!(f, "1");
        }
        for (i, &(p, e)) in self.pairs.iter().enumerate() {
            if i > 0 {
                write!(f, "*")?;
            }
            if e == 1 {
                write!(f, "{p}")?;
            } else {
                write!(f, "{p}^{e}")?;
            }
        }
        Ok(())
    }
}

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| primes_up_to(SMALL_PRIME_BOUND))
}

/// Primes `p <= bound`, by the sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        out.push(i as u64);
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality test for all `u64` (Miller-Rabin with the
/// first twelve prime bases, which has no pseudoprimes below 2^64).
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Factors `n` by trial division.
///
/// Once the cofactor is prime (checked deterministically) the search stops,
/// so only products of two large primes are slow.
pub fn factorize(n: u64) -> Result<Factorization, NumthyError> {
    if n == 0 {
        return Err(NumthyError::Zero);
    }
    let mut rem = n;
    let mut pairs = Vec::new();
    let mut push = |rem: &mut u64, p: u64| {
        let mut e = 0;
        while (*rem).is_multiple_of(p) {
            *rem /= p;
            e += 1;
        }
        if e > 0 {
            pairs.push((p, e));
        }
    };
    for &p in small_primes() {
        if p * p > rem {
            break;
        }
        push(&mut rem, p);
    }
    if rem >= SMALL_PRIME_BOUND * SMALL_PRIME_BOUND && !is_prime(rem) {
        let mut d = SMALL_PRIME_BOUND + 1;
        while d.checked_mul(d).is_some_and(|sq| sq <= rem) {
            push(&mut rem, d);
            if rem > 1 && is_prime(rem) {
                break;
            }
            d += 2;
        }
    }
    if rem > 1 {
        pairs.push((rem, 1));
    }
    Ok(Factorization { value: n, pairs })
}
