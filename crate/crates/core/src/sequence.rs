//! Weight-indexed dimension sequences `k -> alpha_k` of the shape
//! `alpha_k = a/(12b) k + c(k)` for `k >= 2`, with `c` 12-periodic and
//! `alpha_1` free.
//!
//! Shifting `k` by `12b` adds exactly `a`, which reduces "takes every
//! natural number" to a finite check over the first `24b + 1` terms.

use num_bigint::{BigInt, BigUint};
use num_traits::{Pow, ToPrimitive, Zero};
use thiserror::Error;

use crate::certify::{
    bound_exceeds, verify_monotone, zero_pairs, AttainedSet, BoundSpec, CertifyError, DimensionScanner,
    ScanConfig, OMEGA_CONSTANT, PI_CONSTANT,
};
use crate::dimension::{dim, SpaceKind, Weight};
use crate::numthy::{factorize, Factorization, NumthyError, Rational, TWO_POW_OMEGA};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SequenceError {
    #[error("need at least {needed} terms, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("sequence not of lemma form: term k={k} breaks the period-12 pattern for a={a}, b={b}")]
    NotLemmaForm { k: u64, a: u64, b: u64 },
    #[error("form parameters must be positive")]
    ZeroParameter,
    #[error("finite criterion inapplicable: spread {spread} in a window of {window} terms is not below {limit}")]
    FiniteCriterionInapplicable { spread: u64, window: u64, limit: u64 },
    #[error("level {0} is not squarefree")]
    NotSquarefree(u64),
    #[error(transparent)]
    Numthy(#[from] NumthyError),
    #[error(transparent)]
    Dimension(#[from] crate::dimension::DimensionError),
    #[error(transparent)]
    Certify(#[from] CertifyError),
}

/// Number of leading terms [`extract_form`] needs for parameter `b`.
pub fn witness_window(b: u64) -> usize {
    (25 + 24 * b) as usize
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodicLinearForm {
    a: u64,
    b: u64,
    /// `c(k)` indexed by `k mod 12`.
    offsets: Vec<Rational>,
    first_term: u64,
    /// `alpha_2 ..= alpha_{12b+1}`; every later term is one of these plus a multiple of `a`.
    base: Vec<u64>,
}

impl PeriodicLinearForm {
    pub fn a(&self) -> u64 {
        self.a
    }

    pub fn b(&self) -> u64 {
        self.b
    }

    /// `a / (12 b)`, reduced.
    pub fn slope(&self) -> Rational {
        Rational::new(self.a.into(), (12 * self.b).into())
    }

    pub fn offset(&self, k: u64) -> &Rational {
        &self.offsets[(k % 12) as usize]
    }

    pub fn first_term(&self) -> u64 {
        self.first_term
    }

    /// `12b`, the index shift that adds `a`.
    pub fn period(&self) -> u64 {
        12 * self.b
    }

    /// `alpha_k` for any `k >= 1`.
    pub fn value(&self, k: u64) -> u64 {
        assert!(k >= 1, "sequence is indexed from k = 1");
        if k == 1 {
            return self.first_term;
        }
        let (t, r) = ((k - 2) / self.period(), (k - 2) % self.period());
        self.base[r as usize] + t * self.a
    }

    /// `a/(12b) k + c(k)` evaluated in rationals; agrees with [`Self::value`] for `k >= 2`.
    pub fn linear_value(&self, k: u64) -> Rational {
        self.slope() * Rational::from_integer(k.into()) + self.offset(k)
    }
}

/// Fits `values` (`values[0] = alpha_1`) to the periodic linear form with parameters `(a, b)`.
pub fn extract_form(values: &[u64], a: u64, b: u64) -> Result<PeriodicLinearForm, SequenceError> {
    if a == 0 || b == 0 {
        return Err(SequenceError::ZeroParameter);
    }
    let needed = witness_window(b);
    if values.len() < needed {
        return Err(SequenceError::TooShort { needed, got: values.len() });
    }
    let slope = Rational::new(a.into(), (12 * b).into());
    let alpha = |k: u64| Rational::from_integer(values[(k - 1) as usize].into());
    let mut offsets = vec![Rational::zero(); 12];
    for k in 2..=13u64 {
        offsets[(k % 12) as usize] = alpha(k) - &slope * Rational::from_integer(k.into());
    }
    for k in 2..=needed as u64 {
        if alpha(k) != &slope * Rational::from_integer(k.into()) + &offsets[(k % 12) as usize] {
            return Err(SequenceError::NotLemmaForm { k, a, b });
        }
    }
    let base = values[1..=(12 * b) as usize].to_vec();
    Ok(PeriodicLinearForm { a, b, offsets, first_term: values[0], base })
}

/// Outcome of the finite surjectivity check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coverage {
    /// `hits[n]` is an index `k <= 24b + 1` with `alpha_k = n`, for each `n < 2a`.
    Covers { hits: Vec<u64> },
    /// Least value in `[0, 2a)` missed by the first `24b + 1` terms.
    Misses { value: u64 },
}

impl Coverage {
    pub fn is_surjective(&self) -> bool {
        matches!(self, Coverage::Covers { .. })
    }
}

/// Decides whether the sequence takes every natural number, by checking
/// that `alpha_1, ..., alpha_{24b+1}` cover `[0, 2a)`.
pub fn hits_all_naturals(form: &PeriodicLinearForm) -> Coverage {
    let span = 2 * form.a;
    let mut hits = vec![0u64; span as usize];
    for k in 1..=24 * form.b + 1 {
        let v = form.value(k);
        if v < span && hits[v as usize] == 0 {
            hits[v as usize] = k;
        }
    }
    match hits.iter().position(|&k| k == 0) {
        Some(n) => Coverage::Misses { value: n as u64 },
        None => Coverage::Covers { hits },
    }
}

/// An index `k` with `alpha_k = n`, built by shifting a covering index by
/// multiples of `12b`. `hits` must come from [`Coverage::Covers`].
pub fn preimage(form: &PeriodicLinearForm, hits: &[u64], n: u64) -> u64 {
    let a = form.a;
    // Pick the half of [0, 2a) that alpha_1 does not fall in, so every
    // value there is hit by some k >= 2 and can be shifted.
    let start = if form.first_term < a { a } else { 0 };
    if n < start {
        return hits[n as usize];
    }
    let t = (n - start) / a;
    let residue = start + (n - start) % a;
    let k = hits[residue as usize];
    debug_assert!(k >= 2);
    k + t * form.period()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactlyOnce {
    Bijective,
    /// Fails to take the value at all.
    Misses { value: u64 },
    /// Multiset density differs from 1, so some value repeats or is skipped.
    SlopeNotOne,
    Collision { first: u64, second: u64, value: u64 },
}

impl ExactlyOnce {
    pub fn holds(&self) -> bool {
        matches!(self, ExactlyOnce::Bijective)
    }
}

/// Decides whether the sequence takes every natural number exactly once.
///
/// With slope 1 and spread below `2a` inside every window of `12b`
/// consecutive terms (`k >= 2`), two equal terms at indices `i < j`
/// (`i >= 2`) can be shifted down to a pair inside `[2, 36b + 1]`, so
/// distinctness there settles injectivity on `k >= 2`; `alpha_1` is
/// compared against every residue progression directly.
pub fn exactly_once(form: &PeriodicLinearForm) -> Result<ExactlyOnce, SequenceError> {
    let hits = match hits_all_naturals(form) {
        Coverage::Misses { value } => return Ok(ExactlyOnce::Misses { value }),
        Coverage::Covers { hits } => hits,
    };
    drop(hits);
    let (a, b) = (form.a, form.b);
    if a != 12 * b {
        return Ok(ExactlyOnce::SlopeNotOne);
    }
    let window = 12 * b;
    for start in 2..=(24 * b + 13 - window + 1) {
        let vals = (start..start + window).map(|k| form.value(k));
        let (lo, hi) = vals.fold((u64::MAX, 0), |(lo, hi), v| (lo.min(v), hi.max(v)));
        if hi - lo >= 2 * a {
            return Err(SequenceError::FiniteCriterionInapplicable { spread: hi - lo, window, limit: 2 * a });
        }
    }
    let mut seen = std::collections::HashMap::new();
    for k in 1..=36 * b + 1 {
        if let Some(first) = seen.insert(form.value(k), k) {
            return Ok(ExactlyOnce::Collision { first, second: k, value: form.value(k) });
        }
    }
    let alpha1 = form.first_term;
    for r in 2..2 + window {
        let v = form.value(r);
        if alpha1 >= v && (alpha1 - v).is_multiple_of(a) {
            let second = r + (alpha1 - v) / a * form.period();
            return Ok(ExactlyOnce::Collision { first: 1, second, value: alpha1 });
        }
    }
    Ok(ExactlyOnce::Bijective)
}

/// Multiset density of `k -> dim(N, k)`, or of a sign-pattern subsequence
/// when `with_sigma` is set: the reciprocal of the slope `psi(N) / (6 * 2^omega)`.
pub fn multiset_density(n: &Factorization, kind: SpaceKind, with_sigma: bool) -> Result<Rational, SequenceError> {
    if with_sigma && !n.is_squarefree() {
        return Err(SequenceError::NotSquarefree(n.value()));
    }
    let lead = kind.leading().eval_integer(n)?;
    let parts = if with_sigma { TWO_POW_OMEGA.eval_integer(n)? } else { 1 };
    Ok(Rational::new(BigInt::from(6 * parts), BigInt::from(lead)))
}

/// Squarefree levels whose sign-pattern sequences have density at least 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prefilter {
    pub kind: SpaceKind,
    pub levels: Vec<u64>,
    /// Density is certified below 1 for every level `>= cutoff`.
    pub cutoff: u64,
}

/// Least `N` from which the density is provably below 1.
///
/// Full: `6 2^omega / psi <= 6 C N^(-3/4)`, below 1 once `N^3 > (6C)^4`.
/// New: `psi_new(N) >= N / pi(N)` for squarefree `N`, so the density is at
/// most `6 C D N^(-23/32)`, below 1 once `N^23 > (6CD)^32`.
fn density_cutoff(kind: SpaceKind) -> u64 {
    let (c_num, c_den) = (BigUint::from(6 * OMEGA_CONSTANT.0), BigUint::from(OMEGA_CONSTANT.1));
    let clears = |n: u64| -> bool {
        let n = BigUint::from(n);
        match kind {
            SpaceKind::Full => Pow::pow(&n, 3u32) * Pow::pow(&c_den, 4u32) > Pow::pow(&c_num, 4u32),
            SpaceKind::New => {
                let num = &c_num * PI_CONSTANT.0;
                let den = &c_den * PI_CONSTANT.1;
                Pow::pow(&n, 23u32) * Pow::pow(&den, 32u32) > Pow::pow(&num, 32u32)
            }
        }
    };
    let mut hi = 1;
    while !clears(hi) {
        hi *= 2;
    }
    let (mut lo, mut hi) = (1, hi);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if clears(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

pub fn density_prefilter(kind: SpaceKind) -> Result<Prefilter, SequenceError> {
    let cutoff = density_cutoff(kind);
    let mut levels = Vec::new();
    for n in 1..cutoff {
        let f = factorize(n)?;
        if !f.is_squarefree() {
            continue;
        }
        let lead = kind.leading().eval_integer(&f)?;
        if 6 * TWO_POW_OMEGA.eval_integer(&f)? >= lead {
            levels.push(n);
        }
    }
    Ok(Prefilter { kind, levels, cutoff })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmpiricalDensity {
    pub x: u64,
    /// Distinct values in `[0, x]` taken by `N -> dim(N, k)`.
    pub attained: u64,
    /// Levels scanned; past this the certified bound exceeds `x`.
    pub scan_bound: u64,
    pub density: Rational,
}

/// `#({dim(N, k) : N >= 1} ∩ [0, x]) / x`, from a scan that provably saw
/// every level whose dimension is at most `x`.
pub fn empirical_set_density(kind: SpaceKind, k: Weight, x: u64, cfg: &ScanConfig) -> Result<EmpiricalDensity, SequenceError> {
    if x == 0 {
        return Err(SequenceError::ZeroParameter);
    }
    let spec = BoundSpec::new(kind, k);
    let threshold = verify_monotone(&spec)?;
    let scanner = DimensionScanner::new(kind, k, cfg.limit)?;
    let mut seen = AttainedSet::new(x + 1);
    let mut lo = 1u64;
    loop {
        if lo > cfg.limit {
            return Err(CertifyError::LimitReached { limit: cfg.limit, value: x }.into());
        }
        let hi = cfg.limit.min(lo + cfg.block_size.max(1) as u64 - 1);
        for d in scanner.dims(lo, hi)? {
            seen.insert(d);
        }
        if hi >= threshold && bound_exceeds(&spec, hi, x) {
            let attained = seen.count_below(x + 1);
            return Ok(EmpiricalDensity {
                x,
                attained,
                scan_bound: hi,
                density: Rational::new(attained.into(), x.into()),
            });
        }
        lo = hi + 1;
    }
}

/// The weight sequence `k -> dim(N, k)` as a periodic linear form with `a = 2 psi(N)`
/// (or `2 psi'(N)`) and `b = 1`.
pub fn weight_form(kind: SpaceKind, n: &Factorization) -> Result<PeriodicLinearForm, SequenceError> {
    let a = 2 * kind.leading().eval_integer(n)? as u64;
    let values = (1..=witness_window(1) as u64)
        .map(|k| dim(kind, n, Weight::new(k).expect("k >= 1")))
        .collect::<Result<Vec<_>, _>>()?;
    extract_form(&values, a, 1)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightClassification {
    pub kind: SpaceKind,
    /// Every level whose weight sequence takes the value 0; no other level
    /// can take every natural number.
    pub candidates: Vec<(u64, Coverage)>,
}

impl WeightClassification {
    pub fn surjective_levels(&self) -> Vec<u64> {
        self.candidates.iter().filter(|(_, c)| c.is_surjective()).map(|&(n, _)| n).collect()
    }
}

/// Levels `N` for which `k -> dim(N, k)` takes every natural number.
pub fn classify_weight(kind: SpaceKind, cfg: &ScanConfig) -> Result<WeightClassification, SequenceError> {
    let zeros = zero_pairs(kind, cfg)?;
    let candidates = zeros
        .levels()
        .into_iter()
        .map(|n| Ok((n, hits_all_naturals(&weight_form(kind, &factorize(n)?)?))))
        .collect::<Result<Vec<_>, SequenceError>>()?;
    Ok(WeightClassification { kind, candidates })
}

/// Non-authoritative float view of a density, for display.
pub fn approx(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dimension::dim;

    fn seq(kind: SpaceKind, n: u64, len: usize) -> Vec<u64> {
        let f = factorize(n).unwrap();
        (1..=len as u64).map(|k| dim(kind, &f, Weight::new(k).unwrap()).unwrap()).collect()
    }

    fn form(kind: SpaceKind, n: u64) -> PeriodicLinearForm {
        weight_form(kind, &factorize(n).unwrap()).unwrap()
    }

    fn closed(kind: u8, k: u64) -> u64 {
        let k = k as i64;
        let sign = if k % 2 == 0 { 1 } else { -1 };
        (match kind {
            0 => k - 1 + sign + i64::from(k == 1),
            1 => k - 1 - sign,
            _ => k - 1,
        }) as u64
    }

    fn closed_form(kind: u8) -> PeriodicLinearForm {
        let v: Vec<u64> = (1..=witness_window(2) as u64).map(|k| closed(kind, k)).collect();
        extract_form(&v, 24, 2).unwrap()
    }

    #[test]
    fn level_one_form_reproduces_sequence() {
        let f = form(SpaceKind::Full, 1);
        let direct = seq(SpaceKind::Full, 1, 300);
        for k in 1..=300u64 {
            assert_eq!(f.value(k), direct[(k - 1) as usize]);
            if k >= 2 {
                assert_eq!(f.linear_value(k), Rational::from_integer(direct[(k - 1) as usize].into()));
            }
        }
        assert_eq!(form(SpaceKind::New, 4).a(), 2);
    }

    #[test]
    fn wrong_parameters_are_rejected() {
        let v = seq(SpaceKind::Full, 5, witness_window(1));
        assert!(matches!(extract_form(&v, 2, 1), Err(SequenceError::NotLemmaForm { .. })));
        assert!(matches!(extract_form(&v[..10], 12, 1), Err(SequenceError::TooShort { .. })));
    }

    #[test]
    fn surjectivity_examples() {
        assert!(hits_all_naturals(&form(SpaceKind::Full, 4)).is_surjective());
        assert!(!hits_all_naturals(&form(SpaceKind::Full, 5)).is_surjective());
        assert!(hits_all_naturals(&form(SpaceKind::New, 18)).is_surjective());
        let plus11 = closed_form(0);
        assert_eq!(plus11.first_term(), 0);
        assert!(hits_all_naturals(&plus11).is_surjective());
    }

    #[test]
    fn exactly_once_examples() {
        for kind in 0..3 {
            assert_eq!(exactly_once(&closed_form(kind)).unwrap(), ExactlyOnce::Bijective);
        }
        // dim S_2(1) = dim S_4(1) = 0
        assert!(!exactly_once(&form(SpaceKind::Full, 1)).unwrap().holds());
        // Surjective with slope 1 but alpha_1 repeats a later value.
        let v: Vec<u64> = (1..=49u64).map(|k| if k == 1 { 5 } else { k - 2 }).collect();
        let f = extract_form(&v, 12, 1).unwrap();
        assert!(hits_all_naturals(&f).is_surjective());
        assert!(matches!(exactly_once(&f).unwrap(), ExactlyOnce::Collision { first: 1, value: 5, .. }));
    }

    #[test]
    fn constructive_preimages() {
        for kind in [SpaceKind::Full, SpaceKind::New] {
            for n in [1u64, 2, 3, 4, 8, 12, 16, 18] {
                let f = form(kind, n);
                if let Coverage::Covers { hits } = hits_all_naturals(&f) {
                    for v in 0..10 * f.a() {
                        assert_eq!(f.value(preimage(&f, &hits, v)), v);
                    }
                }
            }
        }
    }

    #[test]
    fn density_examples() {
        let d = |n, kind, s| multiset_density(&factorize(n).unwrap(), kind, s).unwrap();
        let r = |a: i64, b: i64| Rational::new(a.into(), b.into());
        assert_eq!(d(11, SpaceKind::Full, true), r(1, 1));
        assert_eq!(d(10, SpaceKind::Full, true), r(4, 3));
        assert_eq!(d(1, SpaceKind::Full, true), r(6, 1));
        assert_eq!(d(1, SpaceKind::Full, false), r(6, 1));
        assert!(matches!(
            multiset_density(&factorize(12).unwrap(), SpaceKind::Full, true),
            Err(SequenceError::NotSquarefree(12))
        ));
    }

    #[test]
    fn prefilter_cutoffs() {
        let full = density_prefilter(SpaceKind::Full).unwrap();
        assert_eq!(full.cutoff, 90);
        assert_eq!(full.levels, vec![1, 2, 3, 5, 6, 7, 10, 11, 14, 15]);
        assert!(!full.levels.contains(&13));
        let new = density_prefilter(SpaceKind::New).unwrap();
        assert!(new.cutoff > 390);
        assert_eq!(new.levels.len(), 34);
    }

    #[test]
    fn weight_classification() {
        let cfg = ScanConfig::default();
        let full = classify_weight(SpaceKind::Full, &cfg).unwrap();
        assert_eq!(full.surjective_levels(), vec![1, 2, 3, 4]);
        let new = classify_weight(SpaceKind::New, &cfg).unwrap();
        assert_eq!(new.surjective_levels(), vec![1, 2, 3, 4, 8, 12, 16, 18]);
    }

    #[test]
    fn empirical_density_small() {
        let cfg = ScanConfig { block_size: 1 << 16, limit: 10_000_000 };
        let e = empirical_set_density(SpaceKind::New, Weight::new(1).unwrap(), 1, &cfg).unwrap();
        assert_eq!(e.attained, 2);
        assert_eq!(e.density, Rational::from_integer(2.into()));
        let e = empirical_set_density(SpaceKind::New, Weight::new(1).unwrap(), 10_000, &cfg).unwrap();
        assert_eq!(e.attained, 10_001);
    }
}
