//! Exact verification of the two multiplicative bounds
//! `2^omega(N) <= 4.862 N^(1/4)` and `prod_{p|N} p^2/(p^2-p-1) <= 9.930 N^(1/32)`.

use num_bigint::BigUint;
use num_traits::{One, Pow};
use rayon::prelude::*;

use super::bounds::{OMEGA_CONSTANT, PI_CONSTANT};
use super::CertifyError;
use crate::numthy::{factorize, primes_up_to, Factorization};

/// Primes at which the per-prime factors still exceed 1.
const SMALL_PRIMES: [u64; 6] = [2, 3, 5, 7, 11, 13];
/// First prime where both per-prime factors drop to at most 1.
const CROSSOVER_PRIME: u64 = 17;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultBoundReport {
    /// `prod_{p<=13} 2/p^(1/4) <= 4.862`.
    pub omega_product: bool,
    /// `prod_{p<=13} (p^2/(p^2-p-1)) / p^(1/32) <= 9.930`.
    pub pi_product: bool,
    /// Every small prime has factor `>= 1`, so dropping primes only shrinks the product.
    pub small_factors_at_least_one: bool,
    /// `2 <= p^(1/4)` and `p^2/(p^2-p-1) <= p^(1/32)` at the crossover prime,
    /// and hence for all larger primes.
    pub crossover: bool,
    /// Levels `1..=spot_limit` checked directly.
    pub spot_checked: u64,
}

fn big(x: u64) -> BigUint {
    BigUint::from(x)
}

/// `2^omega(N) <= 4.862 N^(1/4)`, i.e. `2^(4 omega) 1000^4 <= 4862^4 N`.
pub fn omega_bound_holds(n: &Factorization) -> bool {
    let lhs: u128 = (1u128 << (4 * n.omega())) * 1000u128.pow(4);
    let rhs = BigUint::from(4862u32).pow(4u32) * big(n.value());
    BigUint::from(lhs) <= rhs
}

/// `pi(N) <= 9.930 N^(1/32)`, i.e. `(1000 P)^32 <= (9930 Q)^32 N` with
/// `pi(N) = P/Q`.
pub fn pi_bound_holds(n: &Factorization) -> bool {
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for p in n.primes() {
        num *= big(p * p);
        den *= big(p * p - p - 1);
    }
    let lhs = Pow::pow(num * big(PI_CONSTANT.1), 32u32);
    let rhs = Pow::pow(den * big(PI_CONSTANT.0), 32u32) * big(n.value());
    lhs <= rhs
}

pub fn verify_mult_bound_constants(spot_limit: u64) -> Result<MultBoundReport, CertifyError> {
    let (cn, cd) = (big(OMEGA_CONSTANT.0), big(OMEGA_CONSTANT.1));
    let (dn, dd) = (big(PI_CONSTANT.0), big(PI_CONSTANT.1));
    let radical: u64 = SMALL_PRIMES.iter().product();
    debug_assert_eq!(primes_up_to(13), SMALL_PRIMES);

    // prod 2/p^(1/4) <= C  <=>  2^24 <= C^4 * 30030
    let omega_product = Pow::pow(big(2), 4 * SMALL_PRIMES.len() as u32) * Pow::pow(&cd, 4u32)
        <= Pow::pow(&cn, 4u32) * big(radical);
    // prod (p^2/(p^2-p-1))^32 / p <= D^32
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for &p in &SMALL_PRIMES {
        num *= big(p * p);
        den *= big(p * p - p - 1);
    }
    let pi_product = Pow::pow(&num, 32u32) * Pow::pow(&dd, 32u32)
        <= Pow::pow(&den, 32u32) * Pow::pow(&dn, 32u32) * big(radical);

    let small_factors_at_least_one = SMALL_PRIMES.iter().all(|&p| {
        // 2 >= p^(1/4) and (p^2/(p^2-p-1))^32 >= p
        big(16) >= big(p)
            && Pow::pow(big(p * p), 32u32) >= Pow::pow(big(p * p - p - 1), 32u32) * big(p)
    });
    let q = CROSSOVER_PRIME;
    let crossover = big(16) <= big(q)
        && Pow::pow(big(q * q), 32u32) <= Pow::pow(big(q * q - q - 1), 32u32) * big(q);

    for (ok, what) in [
        (omega_product, "prod_{p<=13} 2/p^(1/4) <= 4.862"),
        (pi_product, "prod_{p<=13} p^2/(p^2-p-1)/p^(1/32) <= 9.930"),
        (small_factors_at_least_one, "per-prime factors >= 1 for p <= 13"),
        (crossover, "per-prime factors <= 1 at p = 17"),
    ] {
        if !ok {
            return Err(CertifyError::LemmaViolation(what.to_string()));
        }
    }

    let failure = (1..=spot_limit)
        .into_par_iter()
        .find_first(|&n| {
            let f = factorize(n).expect("n >= 1");
            !(omega_bound_holds(&f) && pi_bound_holds(&f))
        });
    if let Some(n) = failure {
        return Err(CertifyError::LemmaViolation(format!("bound fails at N={n}")));
    }
    Ok(MultBoundReport {
        omega_product,
        pi_product,
        small_factors_at_least_one,
        crossover,
        spot_checked: spot_limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert!(omega_bound_holds(&factorize(1).unwrap()));
        assert!(omega_bound_holds(&factorize(2).unwrap()));
        assert!(omega_bound_holds(&factorize(30030).unwrap()));
        assert!(pi_bound_holds(&factorize(30030).unwrap()));
        // The constant is nearly tight at the primorial 30030.
        let f = factorize(30030).unwrap();
        let lhs = BigUint::from(1u32 << 24) * Pow::pow(big(1000), 4u32);
        let slack = Pow::pow(big(4862), 4u32) * big(30030) - &lhs;
        assert!(slack < lhs / 1000u32, "{f}");
    }

    #[test]
    fn constants_verify() {
        let rep = verify_mult_bound_constants(20_000).unwrap();
        assert!(rep.omega_product && rep.pi_product && rep.crossover);
        assert_eq!(rep.spot_checked, 20_000);
    }
}
