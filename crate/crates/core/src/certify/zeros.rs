//! Certified enumeration of every `(N, k)` with `dim = 0`.
//!
//! The `(N, k)` quadrant is covered by three regions:
//! * `k < k_floor`: levels are scanned up to a bound past the threshold
//!   where the certified level bound is positive;
//! * `k >= k_floor`, `N >= threshold`: the level bound is already positive
//!   at the threshold, and grows with both `N` and `k`;
//! * `k >= k_floor`, `N < threshold`: per level, weights are scanned until
//!   the leading term beats the worst case of all other terms.

use super::bounds::{bound_exceeds, first_clearing_level, verify_monotone, BoundSpec};
use super::scan::{DimensionScanner, ScanConfig};
use super::CertifyError;
use crate::dimension::{LocalTerms, SpaceKind, Weight};
use crate::numthy::{par_map_blocks, IntSieve};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroTable {
    pub kind: SpaceKind,
    /// All `(N, k)` with zero dimension, sorted.
    pub pairs: Vec<(u64, u64)>,
    pub threshold: u64,
    /// Least `k` whose level bound is positive at the threshold.
    pub k_floor: u64,
    /// For each `k < k_floor`, the level up to which it was scanned.
    pub level_bounds: Vec<(u64, u64)>,
}

impl ZeroTable {
    /// Distinct levels appearing in the table.
    pub fn levels(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.pairs.iter().map(|&(n, _)| n).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Distinct weights `k` appearing in the table.
    pub fn weights(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.pairs.iter().map(|&(_, k)| k).collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    pub fn contains(&self, n: u64, k: u64) -> bool {
        self.pairs.binary_search(&(n, k)).is_ok()
    }
}

/// Least `k` with `(2k - 1) * lead > rest`, for `lead > 0`.
fn weight_clearing(lead: i128, rest: i128) -> u64 {
    debug_assert!(lead > 0);
    let mut m = rest.div_euclid(lead) + 1;
    if m % 2 == 0 {
        m += 1;
    }
    (m.max(1) as u64).div_ceil(2)
}

pub fn zero_pairs(kind: SpaceKind, cfg: &ScanConfig) -> Result<ZeroTable, CertifyError> {
    let w = |k| Weight::new(k).expect("k >= 1");
    let threshold = verify_monotone(&BoundSpec::new(kind, w(1)))?;
    let mut k_floor = 1;
    while !bound_exceeds(&BoundSpec::new(kind, w(k_floor)), threshold, 0) {
        k_floor += 1;
    }
    verify_monotone(&BoundSpec::new(kind, w(k_floor)))?;

    let mut pairs = Vec::new();
    let mut level_bounds = Vec::new();
    for k in 1..k_floor {
        let spec = BoundSpec::new(kind, w(k));
        verify_monotone(&spec)?;
        let n0 = first_clearing_level(&spec, 0, cfg.limit)?;
        let scanner = DimensionScanner::new(kind, w(k), n0)?;
        let mut lo = 1;
        while lo <= n0 {
            let hi = n0.min(lo + cfg.block_size.max(1) as u64 - 1);
            let dims = scanner.dims(lo, hi)?;
            pairs.extend(dims.iter().enumerate().filter(|(_, &d)| d == 0).map(|(i, _)| (lo + i as u64, k)));
            lo = hi + 1;
        }
        level_bounds.push((k, n0));
    }

    let below = threshold - 1;
    let sieve = IntSieve::new(&kind.functions(), below)?;
    let low_levels = par_map_blocks(1, below, cfg.block_size, |a, b| {
        let block = sieve.block(a, b)?;
        let c = &block.columns;
        let mut found = Vec::new();
        #[allow(clippy::needless_range_loop)]
        for i in 0..block.len() {
            let n = a + i as u64;
            let terms = LocalTerms {
                leading: c[0][i].into(),
                cusps: c[1][i].into(),
                order2: c[2][i].into(),
                order3: c[3][i].into(),
                weight2: c[4][i].into(),
            };
            let rest = 6 * terms.cusps.abs() + 3 * terms.order2.abs() + 4 * terms.order3.abs() + 12 * terms.weight2.abs();
            for k in k_floor..weight_clearing(terms.leading, rest) {
                if terms.assemble(n, w(k))? == 0 {
                    found.push((n, k));
                }
            }
        }
        Ok::<_, CertifyError>(found)
    })?;
    pairs.extend(low_levels.into_iter().flatten());
    pairs.sort_unstable();
    pairs.dedup();
    Ok(ZeroTable { kind, pairs, threshold, k_floor, level_bounds })
}
