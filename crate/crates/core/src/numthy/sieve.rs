//! Segmented evaluation of multiplicative functions over integer ranges.
//!
//! Each block keeps a residual `rem[n]`; dividing out every base prime
//! `p <= sqrt(hi)` visits the prime powers of `n` in ascending order, and a
//! residual above 1 is the single prime factor exceeding `sqrt(hi)`.

use rayon::prelude::*;

use super::{primes_up_to, roots::isqrt, MultiplicativeFunction, NumthyError, Rational};

/// Largest base prime the sieve will generate (bounds `hi` by `2^52`).
const MAX_BASE_PRIME: u64 = 1 << 26;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveConfig {
    /// Entries per block handed to a worker.
    pub block_size: usize,
    /// Upper bound on the number of entries a single call may materialize.
    pub max_entries: u64,
}

impl Default for SieveConfig {
    fn default() -> Self {
        SieveConfig { block_size: 1 << 20, max_entries: 1 << 26 }
    }
}

/// Visits `(index, p, e)` for every prime power `p^e || n`, `n = lo + index`,
/// in ascending order of `p` for each `n`.
fn for_each_prime_power(lo: u64, hi: u64, base: &[u64], mut visit: impl FnMut(usize, u64, u32)) {
    let mut rem: Vec<u64> = (lo..=hi).collect();
    for &p in base {
        if p * p > hi {
            break;
        }
        let first = lo.div_ceil(p) * p;
        let mut n = first;
        while n <= hi {
            let idx = (n - lo) as usize;
            let mut e = 0;
            while rem[idx].is_multiple_of(p) {
                rem[idx] /= p;
                e += 1;
            }
            visit(idx, p, e);
            n += p;
        }
    }
    for (idx, &r) in rem.iter().enumerate() {
        if r > 1 {
            visit(idx, r, 1);
        }
    }
}

/// Simultaneous sieve for several integer-valued multiplicative functions.
pub struct IntSieve<'a> {
    fns: Vec<&'a MultiplicativeFunction>,
    base: Vec<u64>,
    hi_max: u64,
}

/// Values of each sieved function on `[lo, lo + len)`, one column per function.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveBlock {
    pub lo: u64,
    pub columns: Vec<Vec<i64>>,
}

impl SieveBlock {
    pub fn len(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl<'a> IntSieve<'a> {
    /// Prepares base primes for blocks with upper end at most `hi_max`.
    pub fn new(fns: &[&'a MultiplicativeFunction], hi_max: u64) -> Result<Self, NumthyError> {
        if let Some(f) = fns.iter().find(|f| !f.is_integer_valued()) {
            return Err(NumthyError::NotIntegerValued { name: f.name() });
        }
        let root = isqrt(hi_max);
        if root > MAX_BASE_PRIME {
            return Err(NumthyError::MemoryBudget { requested: root, budget: MAX_BASE_PRIME });
        }
        Ok(IntSieve { fns: fns.to_vec(), base: primes_up_to(root), hi_max })
    }

    pub fn block(&self, lo: u64, hi: u64) -> Result<SieveBlock, NumthyError> {
        if lo == 0 || hi < lo || hi > self.hi_max {
            return Err(NumthyError::InvalidRange { lo, hi });
        }
        let len = (hi - lo + 1) as usize;
        let mut columns = vec![vec![1i64; len]; self.fns.len()];
        let mut overflow = false;
        for_each_prime_power(lo, hi, &self.base, |idx, p, e| {
            for (col, f) in columns.iter_mut().zip(&self.fns) {
                let v = f.local_int(p, e).expect("checked integer-valued");
                match col[idx].checked_mul(v) {
                    Some(x) => col[idx] = x,
                    None => overflow = true,
                }
            }
        });
        if overflow {
            return Err(NumthyError::Overflow);
        }
        Ok(SieveBlock { lo, columns })
    }
}

/// Splits `[lo, hi]` into consecutive blocks of `block_size`, maps them in
/// parallel, and returns the results in ascending order.
pub fn par_map_blocks<T, E, F>(lo: u64, hi: u64, block_size: usize, f: F) -> Result<Vec<T>, E>
where
    T: Send,
    E: Send,
    F: Fn(u64, u64) -> Result<T, E> + Sync,
{
    if hi < lo {
        return Ok(Vec::new());
    }
    let bs = block_size.max(1) as u64;
    let count = (hi - lo) / bs + 1;
    (0..count)
        .into_par_iter()
        .map(|i| {
            let a = lo + i * bs;
            let b = hi.min(a + bs - 1);
            f(a, b)
        })
        .collect()
}

fn check_range(lo: u64, hi: u64, cfg: &SieveConfig) -> Result<(), NumthyError> {
    if lo == 0 || hi < lo {
        return Err(NumthyError::InvalidRange { lo, hi });
    }
    let requested = hi - lo + 1;
    if requested > cfg.max_entries {
        return Err(NumthyError::MemoryBudget { requested, budget: cfg.max_entries });
    }
    Ok(())
}

/// Values of an integer-valued function on `[lo, hi]`.
pub fn sieve_eval_int(
    f: &MultiplicativeFunction,
    lo: u64,
    hi: u64,
    cfg: &SieveConfig,
) -> Result<Vec<i64>, NumthyError> {
    check_range(lo, hi, cfg)?;
    let sieve = IntSieve::new(&[f], hi)?;
    let blocks = par_map_blocks(lo, hi, cfg.block_size, |a, b| sieve.block(a, b))?;
    Ok(blocks.into_iter().flat_map(|mut b| b.columns.pop().unwrap()).collect())
}

/// Exact values of `f` on `[lo, hi]`; element `i` equals `f.eval(lo + i)`.
pub fn sieve_eval(
    f: &MultiplicativeFunction,
    lo: u64,
    hi: u64,
    cfg: &SieveConfig,
) -> Result<Vec<Rational>, NumthyError> {
    if f.is_integer_valued() {
        return Ok(sieve_eval_int(f, lo, hi, cfg)?
            .into_iter()
            .map(|v| Rational::from_integer(v.into()))
            .collect());
    }
    check_range(lo, hi, cfg)?;
    let root = isqrt(hi);
    if root > MAX_BASE_PRIME {
        return Err(NumthyError::MemoryBudget { requested: root, budget: MAX_BASE_PRIME });
    }
    let base = primes_up_to(root);
    let blocks = par_map_blocks(lo, hi, cfg.block_size, |a, b| {
        let mut vals = vec![num_traits::One::one(); (b - a + 1) as usize];
        for_each_prime_power(a, b, &base, |idx, p, e| {
            let v: &mut Rational = &mut vals[idx];
            *v *= f.local(p, e);
        });
        Ok::<_, NumthyError>(vals)
    })?;
    Ok(blocks.into_iter().flatten().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numthy::{factorize, MOBIUS, PI_RATIO, PSI, PSI_NEW};
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| Rational::from_integer(x.into())).collect()
    }

    #[test]
    fn examples() {
        let cfg = SieveConfig::default();
        assert_eq!(sieve_eval(&PSI, 1, 5, &cfg).unwrap(), ints(&[1, 3, 4, 6, 6]));
        assert_eq!(sieve_eval(&MOBIUS, 1, 4, &cfg).unwrap(), ints(&[1, -1, -1, 0]));
        assert_eq!(sieve_eval(&PSI_NEW, 11, 11, &cfg).unwrap(), ints(&[10]));
    }

    #[test]
    fn budget_and_range_errors() {
        let cfg = SieveConfig { block_size: 16, max_entries: 100 };
        assert!(matches!(
            sieve_eval(&PSI, 1, 1000, &cfg),
            Err(NumthyError::MemoryBudget { requested: 1000, budget: 100 })
        ));
        assert!(matches!(sieve_eval(&PSI, 0, 10, &cfg), Err(NumthyError::InvalidRange { .. })));
        assert!(matches!(sieve_eval(&PSI, 5, 4, &cfg), Err(NumthyError::InvalidRange { .. })));
    }

    #[test]
    fn rational_function_sieve() {
        let cfg = SieveConfig { block_size: 7, max_entries: 1000 };
        let got = sieve_eval(&PI_RATIO, 1, 300, &cfg).unwrap();
        for (i, v) in got.iter().enumerate() {
            assert_eq!(*v, PI_RATIO.eval(&factorize(i as u64 + 1).unwrap()));
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn sieve_matches_pointwise(lo in 1u64..50_000_000, len in 1u64..3000, bs in 1usize..2000) {
            let hi = lo + len - 1;
            let cfg = SieveConfig { block_size: bs, max_entries: 1 << 20 };
            let sieve = IntSieve::new(&[&PSI, &PSI_NEW, &MOBIUS], hi).unwrap();
            let blocks = par_map_blocks(lo, hi, bs, |a, b| sieve.block(a, b)).unwrap();
            let mut n = lo;
            for block in &blocks {
                prop_assert_eq!(block.lo, n);
                for i in 0..block.len() {
                    let f = factorize(n).unwrap();
                    prop_assert_eq!(block.columns[0][i] as i128, PSI.eval_integer(&f).unwrap());
                    prop_assert_eq!(block.columns[1][i] as i128, PSI_NEW.eval_integer(&f).unwrap());
                    prop_assert_eq!(block.columns[2][i] as i128, MOBIUS.eval_integer(&f).unwrap());
                    n += 1;
                }
            }
            prop_assert_eq!(n, hi + 1);
            let single = sieve_eval(&PSI, lo, hi, &cfg).unwrap();
            prop_assert_eq!(single.len() as u64, len);
        }
    }
}
