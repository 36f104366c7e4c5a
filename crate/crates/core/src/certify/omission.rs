//! Bound-terminated searches proving that a dimension sequence `N -> dim(N, k)`
//! never takes a given value.

use serde::{Deserialize, Serialize};

use super::bounds::{bound_exceeds, least_satisfying, verify_monotone, BoundSpec};
use super::scan::{pointwise_dims, AttainedSet, DimensionScanner, ScanConfig, ScanDigest};
use super::CertifyError;
use crate::dimension::{SpaceKind, Weight};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Largest attained-value bitmap an automatic search will allocate.
const MAX_VALUE_CAP: u64 = 1 << 30;
/// Levels re-derived per chunk during replay.
const REPLAY_CHUNK: u64 = 1 << 22;

/// Proof that `dim(N, k) != omitted` for every level `N`.
///
/// The scan covers `1..=scan_bound`; beyond it the certified lower bound,
/// increasing from `threshold` on, already exceeds `omitted`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmissionCertificate {
    pub kind: SpaceKind,
    pub k: u64,
    pub omitted: u64,
    pub scan_bound: u64,
    pub threshold: u64,
    pub scan_count: u64,
    #[serde(with = "hex_u64")]
    pub checksum: u64,
    pub tool_version: String,
}

mod hex_u64 {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &u64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format!("{v:016x}"))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<u64, D::Error> {
        let s = String::deserialize(d)?;
        u64::from_str_radix(&s, 16).map_err(D::Error::custom)
    }
}

impl OmissionCertificate {
    /// Canonical single-line JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("certificate serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, CertifyError> {
        serde_json::from_str(s).map_err(|e| CertifyError::Malformed(e.to_string()))
    }

    pub fn weight(&self) -> Result<Weight, CertifyError> {
        Ok(Weight::new(self.k)?)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Candidate {
    /// The least value not attained up to the certified bound.
    Auto,
    Value(u64),
}

/// Known least omitted value of `N -> dim(N, k)`; 0 for every weight
/// whose sequence never vanishes.
pub fn reference_omitted_value(kind: SpaceKind, k: Weight) -> u64 {
    const FULL: [(u64, u64); 6] = [(1, 150), (2, 23), (3, 2), (4, 4), (5, 4), (7, 1)];
    const NEW: [(u64, u64); 7] = [(1, 67846), (2, 101), (3, 31), (4, 16), (5, 19), (6, 7), (7, 4)];
    let table: &[(u64, u64)] = match kind {
        SpaceKind::Full => &FULL,
        SpaceKind::New => &NEW,
    };
    table.iter().find(|&&(kk, _)| kk == k.k()).map_or(0, |&(_, v)| v)
}

/// Scans levels upward until the certified bound rules out the target.
///
/// With [`Candidate::Auto`] the target is the least value not yet seen and
/// may grow as the scan proceeds; the result is then checked against
/// [`reference_omitted_value`].
pub fn find_omission(
    kind: SpaceKind,
    k: Weight,
    candidate: Candidate,
    cfg: &ScanConfig,
) -> Result<OmissionCertificate, CertifyError> {
    let spec = BoundSpec::new(kind, k);
    let threshold = verify_monotone(&spec)?;
    let limit = cfg.limit;
    let cap = match candidate {
        // Every bound is at most (2k-1)/12 * N, so no target can exceed this.
        Candidate::Auto => ((2 * k.k() - 1) as u128 * limit as u128 / 12 + 2).min(MAX_VALUE_CAP as u128) as u64,
        Candidate::Value(v) => v + 1,
    };
    let scanner = DimensionScanner::new(kind, k, limit.max(1))?;
    let mut attained = AttainedSet::new(cap);
    let mut digest = ScanDigest::default();
    let mut lo = 1u64;
    loop {
        if lo > limit {
            let value = match candidate {
                Candidate::Auto => attained.least_missing().unwrap_or(cap),
                Candidate::Value(v) => v,
            };
            return Err(CertifyError::LimitReached { limit, value });
        }
        let hi = limit.min(lo + cfg.block_size.max(1) as u64 - 1);
        let dims = scanner.dims(lo, hi)?;
        dims.iter().for_each(|&d| attained.insert(d));
        let target = match candidate {
            Candidate::Auto => attained.least_missing().ok_or_else(|| {
                CertifyError::ResourceExhausted(format!("every value below {cap} is attained"))
            })?,
            Candidate::Value(v) => {
                if let Some(i) = dims.iter().position(|&d| d == v) {
                    return Err(CertifyError::ValueAttained { value: v, level: lo + i as u64 });
                }
                v
            }
        };
        if hi >= threshold && bound_exceeds(&spec, hi, target) {
            let n0 = least_satisfying(threshold.max(lo), hi, |n| bound_exceeds(&spec, n, target));
            digest.feed(&dims[..(n0 - lo + 1) as usize]);
            if candidate == Candidate::Auto {
                let expected = reference_omitted_value(kind, k);
                if expected != target {
                    return Err(CertifyError::ReferenceMismatch { kind, k: k.k(), expected, found: target });
                }
            }
            return Ok(OmissionCertificate {
                kind,
                k: k.k(),
                omitted: target,
                scan_bound: n0,
                threshold,
                scan_count: digest.count(),
                checksum: digest.checksum(),
                tool_version: TOOL_VERSION.to_string(),
            });
        }
        digest.feed(&dims);
        lo = hi + 1;
    }
}

/// Re-establishes every claim of a certificate from scratch, evaluating
/// each level by direct factorization rather than the sieve.
pub fn replay(cert: &OmissionCertificate) -> Result<(), CertifyError> {
    let k = cert.weight()?;
    let spec = BoundSpec::new(cert.kind, k);
    let threshold = verify_monotone(&spec)?;
    let fail = |msg: String| Err(CertifyError::ReplayMismatch(msg));
    if threshold != cert.threshold {
        return fail(format!("threshold {} does not match verified {threshold}", cert.threshold));
    }
    if cert.scan_bound < threshold {
        return fail(format!("scan bound {} is below the threshold", cert.scan_bound));
    }
    if cert.scan_count != cert.scan_bound {
        return fail(format!("scan count {} != scan bound {}", cert.scan_count, cert.scan_bound));
    }
    if !bound_exceeds(&spec, cert.scan_bound, cert.omitted) {
        return fail(format!("bound at N={} does not exceed {}", cert.scan_bound, cert.omitted));
    }
    let mut digest = ScanDigest::default();
    let mut lo = 1;
    while lo <= cert.scan_bound {
        let hi = cert.scan_bound.min(lo + REPLAY_CHUNK - 1);
        let dims = pointwise_dims(cert.kind, k, lo, hi)?;
        if let Some(i) = dims.iter().position(|&d| d == cert.omitted) {
            return Err(CertifyError::ValueAttained { value: cert.omitted, level: lo + i as u64 });
        }
        digest.feed(&dims);
        lo = hi + 1;
    }
    if digest.checksum() != cert.checksum {
        return fail(format!(
            "checksum {:016x} != recorded {:016x}",
            digest.checksum(),
            cert.checksum
        ));
    }
    Ok(())
}
