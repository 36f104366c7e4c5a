use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use super::{Factorization, NumthyError};

/// Exact rational number; always kept in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

#[derive(Clone, Copy)]
enum LocalRule {
    Integer(fn(u64, u32) -> i64),
    Rational(fn(u64, u32) -> Rational),
}

/// A multiplicative arithmetic function given by its values on prime powers.
#[derive(Clone, Copy)]
pub struct MultiplicativeFunction {
    name: &'static str,
    rule: LocalRule,
}

impl std::fmt::Debug for MultiplicativeFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_tuple("MultiplicativeFunction").field(&self.name).finish()
    }
}

impl MultiplicativeFunction {
    /// An integer-valued function; `rule(p, e)` is the value at `p^e`, `e >= 1`.
    pub const fn integer(name: &'static str, rule: fn(u64, u32) -> i64) -> Self {
        MultiplicativeFunction { name, rule: LocalRule::Integer(rule) }
    }

    pub const fn rational(name: &'static str, rule: fn(u64, u32) -> Rational) -> Self {
        MultiplicativeFunction { name, rule: LocalRule::Rational(rule) }
    }

    pub fn name(&self) -> &'static str {
        self.name
    }

    pub fn is_integer_valued(&self) -> bool {
        matches!(self.rule, LocalRule::Integer(_))
    }

    pub fn local(&self, p: u64, e: u32) -> Rational {
        match self.rule {
            LocalRule::Integer(f) => Rational::from_integer(BigInt::from(f(p, e))),
            LocalRule::Rational(f) => f(p, e),
        }
    }

    pub fn local_int(&self, p: u64, e: u32) -> Option<i64> {
        match self.rule {
            LocalRule::Integer(f) => Some(f(p, e)),
            LocalRule::Rational(_) => None,
        }
    }

    /// Exact value at `n`: the product of the rule over the prime powers of `n`.
    pub fn eval(&self, n: &Factorization) -> Rational {
        match self.rule {
            LocalRule::Integer(_) => match self.eval_integer(n) {
                Ok(v) => Rational::from_integer(v.into()),
                Err(_) => n.pairs().iter().fold(Rational::one(), |acc, &(p, e)| acc * self.local(p, e)),
            },
            LocalRule::Rational(f) => n.pairs().iter().fold(Rational::one(), |acc, &(p, e)| acc * f(p, e)),
        }
    }

    /// Fast path for integer-valued functions.
    pub fn eval_integer(&self, n: &Factorization) -> Result<i128, NumthyError> {
        let LocalRule::Integer(f) = self.rule else {
            return Err(NumthyError::NotIntegerValued { name: self.name });
        };
        n.pairs().iter().try_fold(1i128, |acc, &(p, e)| {
            acc.checked_mul(i128::from(f(p, e))).ok_or(NumthyError::Overflow)
        })
    }

    /// Value at `n` when it is an integer fitting `i64`.
    pub fn eval_i64(&self, n: &Factorization) -> Result<i64, NumthyError> {
        self.eval_integer(n)?.to_i64().ok_or(NumthyError::Overflow)
    }
}

fn pow(p: u64, e: u32) -> i64 {
    (p as i64).pow(e)
}

/// `psi(N) = N prod_{p|N} (1 + 1/p)`, the index of Gamma0(N).
pub const PSI: MultiplicativeFunction =
    MultiplicativeFunction::integer("psi", |p, e| pow(p, e - 1) * (p as i64 + 1));

/// Leading coefficient of the newspace dimension.
pub const PSI_NEW: MultiplicativeFunction = MultiplicativeFunction::integer("psi_new", |p, e| {
    let p = p as i64;
    match e {
        1 => p - 1,
        2 => p * p - p - 1,
        _ => (p * p - 1) * (p - 1) * p.pow(e - 3),
    }
});

/// Number of cusps.
pub const NU_INF: MultiplicativeFunction = MultiplicativeFunction::integer("nu_inf", |p, e| {
    if e % 2 == 1 {
        2 * pow(p, (e - 1) / 2)
    } else {
        (p as i64 + 1) * pow(p, e / 2 - 1)
    }
});

pub const NU_INF_NEW: MultiplicativeFunction =
    MultiplicativeFunction::integer("nu_inf_new", |p, e| {
        let p = p as i64;
        match e {
            _ if e % 2 == 1 => 0,
            2 => p - 2,
            _ => (p - 1) * (p - 1) * p.pow(e / 2 - 2),
        }
    });

/// Number of elliptic points of order 2.
pub const NU2: MultiplicativeFunction = MultiplicativeFunction::integer("nu2", |p, e| match p {
    2 => i64::from(e == 1),
    _ if p % 4 == 1 => 2,
    _ => 0,
});

pub const NU2_NEW: MultiplicativeFunction =
    MultiplicativeFunction::integer("nu2_new", |p, e| match (p, e) {
        (2, 1) | (2, 2) => -1,
        (2, 3) => 1,
        (2, _) => 0,
        (_, 1) if p % 4 == 1 => 0,
        (_, 1) => -2,
        (_, 2) if p % 4 == 1 => -1,
        (_, 2) => 1,
        _ => 0,
    });

/// Number of elliptic points of order 3.
pub const NU3: MultiplicativeFunction = MultiplicativeFunction::integer("nu3", |p, e| match p {
    3 => i64::from(e == 1),
    _ if p % 3 == 1 => 2,
    _ => 0,
});

pub const NU3_NEW: MultiplicativeFunction =
    MultiplicativeFunction::integer("nu3_new", |p, e| match (p, e) {
        (3, 1) | (3, 2) => -1,
        (3, 3) => 1,
        (3, _) => 0,
        (_, 1) if p % 3 == 1 => 0,
        (_, 1) => -2,
        (_, 2) if p % 3 == 1 => -1,
        (_, 2) => 1,
        _ => 0,
    });

pub const MOBIUS: MultiplicativeFunction =
    MultiplicativeFunction::integer("mu", |_, e| if e == 1 { -1 } else { 0 });

/// Convolving `beta` with the full-space dimension gives the newspace dimension.
/// `beta = mu * mu`, so `beta(p) = -2` and `beta(p^2) = 1`.
pub const BETA: MultiplicativeFunction = MultiplicativeFunction::integer("beta", |_, e| match e {
    1 => -2,
    2 => 1,
    _ => 0,
});

pub const TWO_POW_OMEGA: MultiplicativeFunction =
    MultiplicativeFunction::integer("two_pow_omega", |_, _| 2);

/// `prod_{p|N} p^2 / (p^2 - p - 1)`, the ratio `psi(rad N) / psi_new(rad N)` up to `N`.
pub const PI_RATIO: MultiplicativeFunction = MultiplicativeFunction::rational("pi_ratio", |p, _| {
    let p = BigInt::from(p);
    let p2 = &p * &p;
    Rational::new(p2.clone(), p2 - &p - 1)
});

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numthy::factorize;
    use num_integer::Integer;
    use proptest::prelude::*;

    const ALL: [MultiplicativeFunction; 12] = [
        PSI, PSI_NEW, NU_INF, NU_INF_NEW, NU2, NU2_NEW, NU3, NU3_NEW, MOBIUS, BETA, TWO_POW_OMEGA,
        PI_RATIO,
    ];

    fn at(f: &MultiplicativeFunction, n: u64) -> Rational {
        f.eval(&factorize(n).unwrap())
    }

    fn int(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    #[test]
    fn examples() {
        assert_eq!(at(&PSI, 1), int(1));
        assert_eq!(at(&PSI, 11), int(12));
        assert_eq!(at(&NU2_NEW, 22), int(2));
        assert_eq!(at(&BETA, 8), int(0));
        assert_eq!(at(&PSI_NEW, 4), int(1));
        assert_eq!(at(&PI_RATIO, 6), Rational::new(4.into(), 1.into()) * Rational::new(9.into(), 5.into()));
    }

    #[test]
    fn psi_matches_definition() {
        // psi(N) = N prod (1 + 1/p), computed with rationals directly.
        for n in 1..2000u64 {
            let f = factorize(n).unwrap();
            let direct = f
                .primes()
                .fold(int(n as i64), |acc, p| acc * Rational::new((p + 1).into(), p.into()));
            assert_eq!(at(&PSI, n), direct);
        }
    }

    #[test]
    fn beta_divisor_sums() {
        // sum_{d | p^r} beta(d) is 1, -1, 0, 0, ... : beta * 1 = mu.
        for p in [2u64, 3, 5, 7] {
            for r in 0..=5u32 {
                let s: i64 = (0..=r).map(|j| if j == 0 { 1 } else { BETA.local_int(p, j).unwrap() }).sum();
                let expected = match r {
                    0 => 1,
                    1 => -1,
                    _ => 0,
                };
                assert_eq!(s, expected);
                let pr = factorize(p.pow(r)).unwrap();
                let via_divisors: Rational = pr.divisors().iter().map(|d| BETA.eval(d)).sum();
                assert_eq!(via_divisors, int(expected));
            }
        }
    }

    #[test]
    fn beta_is_mobius_squared() {
        for n in 1..3000u64 {
            let f = factorize(n).unwrap();
            let conv: Rational = f.divisors().iter().map(|d| at(&MOBIUS, d.value()) * MOBIUS.eval(&f.quotient(d))).sum();
            assert_eq!(BETA.eval(&f), conv, "{n}");
        }
    }

    #[test]
    fn integer_path_rejects_rational_functions() {
        assert!(matches!(
            PI_RATIO.eval_integer(&factorize(6).unwrap()),
            Err(NumthyError::NotIntegerValued { .. })
        ));
    }

    proptest! {
        #[test]
        fn multiplicative_on_coprime_pairs(m in 1u64..1_000_000, n in 1u64..1_000_000) {
            prop_assume!(m.gcd(&n) == 1);
            let mn = m * n;
            for f in &ALL {
                prop_assert_eq!(at(f, mn), at(f, m) * at(f, n), "{}", f.name());
            }
        }
    }
}
