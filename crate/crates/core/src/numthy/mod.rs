//! Exact integer and rational arithmetic: factorization, multiplicative
//! functions and their sieved evaluation over level ranges.

mod factor;
mod multiplicative;
mod roots;
mod sieve;

pub use factor::{factorize, is_prime, primes_up_to, Factorization};
pub use multiplicative::{
    MultiplicativeFunction, Rational, BETA, MOBIUS, NU2, NU2_NEW, NU3, NU3_NEW, NU_INF,
    NU_INF_NEW, PI_RATIO, PSI, PSI_NEW, TWO_POW_OMEGA,
};
pub use roots::{iroot_floor, is_perfect_power, isqrt, nth_root_bounds, root_bracket_scaled};
pub use sieve::{par_map_blocks, sieve_eval, sieve_eval_int, IntSieve, SieveBlock, SieveConfig};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NumthyError {
    #[error("zero has no factorization")]
    Zero,
    #[error("invalid factorization: {0}")]
    InvalidFactorization(String),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("{name} is not integer-valued")]
    NotIntegerValued { name: &'static str },
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("memory budget exceeded: {requested} entries requested, budget is {budget}")]
    MemoryBudget { requested: u64, budget: u64 },
}
