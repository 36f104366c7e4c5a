//! Level-indexed dimension streams, sieved or pointwise.

use super::CertifyError;
use crate::dimension::{dim, LocalTerms, SpaceKind, Weight};
use crate::numthy::{factorize, par_map_blocks, IntSieve};

/// Entries per parallel work item inside a scan block.
const SUB_BLOCK: usize = 1 << 15;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanConfig {
    /// Levels processed between termination checks.
    pub block_size: usize,
    /// Largest level a scan may reach.
    pub limit: u64,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig { block_size: 1 << 20, limit: 20_000_000 }
    }
}

/// `dim(N, k)` for consecutive levels, via the block sieve.
pub struct DimensionScanner {
    kind: SpaceKind,
    k: Weight,
    sieve: IntSieve<'static>,
}

impl DimensionScanner {
    pub fn new(kind: SpaceKind, k: Weight, hi_max: u64) -> Result<Self, CertifyError> {
        let sieve = IntSieve::new(&kind.functions(), hi_max)?;
        Ok(DimensionScanner { kind, k, sieve })
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    /// Dimensions for levels `lo..=hi`.
    pub fn dims(&self, lo: u64, hi: u64) -> Result<Vec<u64>, CertifyError> {
        let parts = par_map_blocks(lo, hi, SUB_BLOCK, |a, b| {
            let block = self.sieve.block(a, b)?;
            let c = &block.columns;
            (0..block.len())
                .map(|i| {
                    let terms = LocalTerms {
                        leading: c[0][i].into(),
                        cusps: c[1][i].into(),
                        order2: c[2][i].into(),
                        order3: c[3][i].into(),
                        weight2: c[4][i].into(),
                    };
                    terms.assemble(a + i as u64, self.k).map_err(CertifyError::from)
                })
                .collect::<Result<Vec<u64>, CertifyError>>()
        })?;
        Ok(parts.concat())
    }
}

/// Dimensions for levels `lo..=hi` by factoring each level separately.
pub fn pointwise_dims(kind: SpaceKind, k: Weight, lo: u64, hi: u64) -> Result<Vec<u64>, CertifyError> {
    let parts = par_map_blocks(lo, hi, SUB_BLOCK, |a, b| {
        (a..=b)
            .map(|n| Ok(dim(kind, &factorize(n)?, k)?))
            .collect::<Result<Vec<u64>, CertifyError>>()
    })?;
    Ok(parts.concat())
}

/// Running count and FNV-1a checksum of a dimension stream (each value fed
/// as 8 little-endian bytes, ascending level).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScanDigest {
    count: u64,
    state: u64,
}

const FNV_OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
const FNV_PRIME: u64 = 0x0100_0000_01b3;

impl Default for ScanDigest {
    fn default() -> Self {
        ScanDigest { count: 0, state: FNV_OFFSET }
    }
}

impl ScanDigest {
    pub fn feed(&mut self, dims: &[u64]) {
        for d in dims {
            for b in d.to_le_bytes() {
                self.state = (self.state ^ u64::from(b)).wrapping_mul(FNV_PRIME);
            }
        }
        self.count += dims.len() as u64;
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn checksum(&self) -> u64 {
        self.state
    }
}

/// Membership bitmap for attained values below a fixed cap.
#[derive(Clone, Debug)]
pub(crate) struct AttainedSet {
    bits: Vec<u64>,
    cap: u64,
    least_missing: u64,
}

impl AttainedSet {
    pub(crate) fn new(cap: u64) -> Self {
        AttainedSet { bits: vec![0; (cap as usize).div_ceil(64)], cap, least_missing: 0 }
    }

    pub(crate) fn insert(&mut self, v: u64) {
        if v < self.cap {
            self.bits[(v / 64) as usize] |= 1 << (v % 64);
        }
    }

    pub(crate) fn contains(&self, v: u64) -> bool {
        v < self.cap && self.bits[(v / 64) as usize] >> (v % 64) & 1 == 1
    }

    /// Least value not inserted; `None` once every value below the cap is present.
    pub(crate) fn least_missing(&mut self) -> Option<u64> {
        while self.least_missing < self.cap && self.contains(self.least_missing) {
            self.least_missing += 1;
        }
        (self.least_missing < self.cap).then_some(self.least_missing)
    }

    pub(crate) fn count_below(&self, bound: u64) -> u64 {
        (0..bound.min(self.cap)).filter(|&v| self.contains(v)).count() as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sieved_and_pointwise_streams_agree() {
        for kind in SpaceKind::ALL {
            for k in [1, 2, 7] {
                let w = Weight::new(k).unwrap();
                let s = DimensionScanner::new(kind, w, 200_000).unwrap();
                assert_eq!(
                    s.dims(1, 200_000).unwrap(),
                    pointwise_dims(kind, w, 1, 200_000).unwrap()
                );
                assert_eq!(s.dims(99_991, 100_100).unwrap(), pointwise_dims(kind, w, 99_991, 100_100).unwrap());
            }
        }
    }

    fn fnv_bytes(bytes: &[u8]) -> u64 {
        bytes.iter().fold(0xcbf2_9ce4_8422_2325u64, |h, &b| (h ^ u64::from(b)).wrapping_mul(0x100_0000_01b3))
    }

    #[test]
    fn digest_is_fnv1a_over_le_bytes() {
        let mut d = ScanDigest::default();
        d.feed(&[]);
        assert_eq!(d.checksum(), 0xcbf2_9ce4_8422_2325);
        // Published FNV-1a 64 test vectors.
        assert_eq!(fnv_bytes(b"a"), 0xaf63_dc4c_8601_ec8c);
        assert_eq!(fnv_bytes(b"foobar"), 0x8594_4171_f739_67e8);
        let vals = [0u64, 1, 2, 67846, u64::MAX];
        let bytes: Vec<u8> = vals.iter().flat_map(|v| v.to_le_bytes()).collect();
        let h = fnv_bytes(&bytes);
        d.feed(&vals[..2]);
        d.feed(&vals[2..]);
        assert_eq!(d.checksum(), h);
        assert_eq!(d.count(), 5);
    }

    #[test]
    fn attained_set() {
        let mut s = AttainedSet::new(100);
        assert_eq!(s.least_missing(), Some(0));
        for v in [0, 1, 2, 4, 500] {
            s.insert(v);
        }
        assert_eq!(s.least_missing(), Some(3));
        assert!(s.contains(4) && !s.contains(500));
        assert_eq!(s.count_below(5), 4);
    }
}
