//! Atkin-Lehner sign patterns on squarefree levels and the dimensions of
//! their simultaneous eigenspaces,
//!
//! `dim S^sigma_2k(N) = 2^-omega(N) * sum_{d | N} sigma(d) Tr W_d`,
//!
//! with `Tr W_1 = dim S_2k(N)`. Traces for `d != 1` are data: either
//! inverted from known eigenspace dimensions or read from a trace file.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dimension::{dim, DimensionError, SpaceKind, Weight};
use crate::numthy::{factorize, Factorization, NumthyError, Rational};
use crate::sequence::{density_prefilter, extract_form, hits_all_naturals, multiset_density, witness_window, Coverage, SequenceError};

/// Weights checked when validating a trace table: `k = 1` plus two full periods.
pub const CONSISTENCY_WINDOW: u64 = 25;

pub const TRACE_HEADER: &str = "#modform-traces v1";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignError {
    #[error("level {0} is not squarefree")]
    NotSquarefree(u64),
    #[error("sign pattern {pattern:?} does not fit level {level}")]
    BadPattern { pattern: String, level: u64 },
    #[error("trace data unavailable for (N,d) = ({level},{divisor})")]
    TraceUnavailable { level: u64, divisor: u64 },
    #[error("inconsistent trace data for level {level}: {detail}")]
    Inconsistent { level: u64, detail: String },
    #[error("trace file line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error(transparent)]
    Dimension(#[from] DimensionError),
    #[error(transparent)]
    Numthy(#[from] NumthyError),
    #[error(transparent)]
    Sequence(#[from] SequenceError),
}

/// Signs on the primes of a squarefree level, listed by ascending prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignPattern {
    primes: Vec<u64>,
    negative: Vec<bool>,
}

impl SignPattern {
    /// The all-plus pattern on `n`.
    pub fn trivial(n: &Factorization) -> Result<Self, SignError> {
        check_squarefree(n)?;
        let primes: Vec<u64> = n.primes().collect();
        let negative = vec![false; primes.len()];
        Ok(SignPattern { primes, negative })
    }

    /// Parses `+-+` style patterns; `−` is accepted for `-`, and `()` or the
    /// empty string for level 1.
    pub fn parse(n: &Factorization, s: &str) -> Result<Self, SignError> {
        check_squarefree(n)?;
        let bad = || SignError::BadPattern { pattern: s.to_string(), level: n.value() };
        let s = s.trim();
        let body = if s == "()" { "" } else { s };
        let negative = body
            .chars()
            .map(|c| match c {
                '+' => Ok(false),
                '-' | '−' => Ok(true),
                _ => Err(bad()),
            })
            .collect::<Result<Vec<_>, _>>()?;
        let primes: Vec<u64> = n.primes().collect();
        if negative.len() != primes.len() {
            return Err(bad());
        }
        Ok(SignPattern { primes, negative })
    }

    pub fn level(&self) -> u64 {
        self.primes.iter().product()
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn sign_at_prime(&self, p: u64) -> Option<i64> {
        let i = self.primes.iter().position(|&q| q == p)?;
        Some(if self.negative[i] { -1 } else { 1 })
    }

    /// `sigma(d)` for `d | N`, extended multiplicatively.
    pub fn at(&self, d: u64) -> i64 {
        debug_assert_eq!(self.level() % d, 0);
        self.primes
            .iter()
            .zip(&self.negative)
            .filter(|(&p, &neg)| neg && d.is_multiple_of(p))
            .fold(1, |s, _| -s)
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.primes.is_empty() {
            return f.write_str("()");
        }
        for &neg in &self.negative {
            f.write_str(if neg { "-" } else { "+" })?;
        }
        Ok(())
    }
}

fn check_squarefree(n: &Factorization) -> Result<(), SignError> {
    if n.is_squarefree() {
        Ok(())
    } else {
        Err(SignError::NotSquarefree(n.value()))
    }
}

/// All `2^omega(N)` patterns, `+` before `-`, first prime most significant.
pub fn enumerate_patterns(n: &Factorization) -> Result<Vec<SignPattern>, SignError> {
    check_squarefree(n)?;
    let primes: Vec<u64> = n.primes().collect();
    let t = primes.len();
    Ok((0..1u64 << t)
        .map(|bits| SignPattern {
            primes: primes.clone(),
            negative: (0..t).map(|j| bits >> (t - 1 - j) & 1 == 1).collect(),
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Derived,
    Ingested,
}

/// `Tr W_d` on `S_2k(N)` as a function of `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceRow {
    pub value_at_k1: i64,
    /// Value for `k ≡ j (mod 12)` stored at index `j - 2`, `j = 2..=13`.
    pub periodic: [i64; 12],
    pub provenance: Provenance,
}

impl TraceRow {
    pub fn at(&self, k: Weight) -> i64 {
        if k.is_one() {
            self.value_at_k1
        } else {
            self.periodic[((k.k() - 2) % 12) as usize]
        }
    }
}

/// Traces of every `W_d`, `1 != d | N`, for one level and space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceTable {
    level: Factorization,
    kind: SpaceKind,
    rows: BTreeMap<u64, TraceRow>,
}

impl TraceTable {
    /// Validates coverage of the divisors and that every pattern gets a
    /// natural-number dimension on `k = 1..=CONSISTENCY_WINDOW`.
    pub fn new(level: Factorization, kind: SpaceKind, rows: BTreeMap<u64, TraceRow>) -> Result<Self, SignError> {
        check_squarefree(&level)?;
        let n = level.value();
        let divisors: Vec<u64> = level.divisors().iter().map(Factorization::value).filter(|&d| d != 1).collect();
        if let Some(&d) = divisors.iter().find(|d| !rows.contains_key(d)) {
            return Err(SignError::TraceUnavailable { level: n, divisor: d });
        }
        if let Some(&d) = rows.keys().find(|d| !divisors.contains(d)) {
            return Err(SignError::Inconsistent { level: n, detail: format!("{d} is not a divisor other than 1") });
        }
        let table = TraceTable { level, kind, rows };
        for sigma in enumerate_patterns(&table.level)? {
            for k in 1..=CONSISTENCY_WINDOW {
                dim_sigma(&table.level, Weight::new(k)?, &sigma, kind, &table)?;
            }
        }
        Ok(table)
    }

    pub fn level(&self) -> &Factorization {
        &self.level
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn row(&self, d: u64) -> Option<&TraceRow> {
        self.rows.get(&d)
    }

    pub fn rows(&self) -> impl Iterator<Item = (u64, &TraceRow)> {
        self.rows.iter().map(|(&d, r)| (d, r))
    }

    /// `Tr W_d(k)`; `d = 1` is the dimension itself.
    pub fn trace(&self, d: u64, k: Weight) -> Result<i64, SignError> {
        if d == 1 {
            return Ok(dim(self.kind, &self.level, k)? as i64);
        }
        self.rows
            .get(&d)
            .map(|r| r.at(k))
            .ok_or(SignError::TraceUnavailable { level: self.level.value(), divisor: d })
    }
}

/// `2^-omega * sum_d sigma(d) Tr W_d`, with the division checked.
pub fn dim_sigma(n: &Factorization, k: Weight, sigma: &SignPattern, kind: SpaceKind, traces: &TraceTable) -> Result<u64, SignError> {
    check_squarefree(n)?;
    if traces.level.value() != n.value() || traces.kind != kind {
        return Err(SignError::TraceUnavailable { level: n.value(), divisor: n.value() });
    }
    if sigma.level() != n.value() {
        return Err(SignError::BadPattern { pattern: sigma.to_string(), level: n.value() });
    }
    let mut total = 0i64;
    for d in n.divisors() {
        total += sigma.at(d.value()) * traces.trace(d.value(), k)?;
    }
    let parts = 1i64 << n.omega();
    if total < 0 || total % parts != 0 {
        return Err(SignError::Inconsistent {
            level: n.value(),
            detail: format!("pattern {sigma} at k={} gives {total}/{parts}", k.k()),
        });
    }
    Ok((total / parts) as u64)
}

/// Recovers the trace table from the eigenspace dimensions by character
/// orthogonality, `Tr W_d(k) = sum_sigma sigma(d) dim S^sigma_2k(N)`.
///
/// `dims` gives each pattern's values for `k = 1, 2, ...`; at least
/// [`CONSISTENCY_WINDOW`] terms are needed.
pub fn invert_traces(
    n: &Factorization,
    kind: SpaceKind,
    dims: &[(SignPattern, Vec<u64>)],
    provenance: Provenance,
) -> Result<TraceTable, SignError> {
    let level = n.value();
    let err = |detail: String| SignError::Inconsistent { level, detail };
    let patterns = enumerate_patterns(n)?;
    let mut by_pattern = BTreeMap::new();
    for (sigma, values) in dims {
        if by_pattern.insert(sigma, values).is_some() {
            return Err(err(format!("pattern {sigma} given twice")));
        }
    }
    if let Some(missing) = patterns.iter().find(|s| !by_pattern.contains_key(s)) {
        return Err(err(format!("pattern {missing} missing")));
    }
    if by_pattern.len() != patterns.len() {
        return Err(err("patterns do not match the level".into()));
    }
    let window = by_pattern.values().map(|v| v.len()).min().unwrap_or(0);
    if (window as u64) < CONSISTENCY_WINDOW {
        return Err(err(format!("need {CONSISTENCY_WINDOW} weights, got {window}")));
    }
    let trace = |d: u64, k: usize| -> i64 { by_pattern.iter().map(|(s, v)| s.at(d) * v[k - 1] as i64).sum() };
    for k in 1..=window {
        let expected = dim(kind, n, Weight::new(k as u64)?)? as i64;
        if trace(1, k) != expected {
            return Err(err(format!("pattern dimensions sum to {} at k={k}, expected {expected}", trace(1, k))));
        }
    }
    let mut rows = BTreeMap::new();
    for d in n.divisors().iter().map(Factorization::value).filter(|&d| d != 1) {
        let mut periodic = [0i64; 12];
        for (i, slot) in periodic.iter_mut().enumerate() {
            *slot = trace(d, i + 2);
        }
        for k in 14..=window {
            if trace(d, k) != periodic[(k - 2) % 12] {
                return Err(err(format!("Tr W_{d} is not 12-periodic at k={k}")));
            }
        }
        rows.insert(d, TraceRow { value_at_k1: trace(d, 1), periodic, provenance });
    }
    let table = TraceTable::new(n.clone(), kind, rows)?;
    for (sigma, values) in &by_pattern {
        for (i, &v) in values.iter().enumerate() {
            if dim_sigma(n, Weight::new(i as u64 + 1)?, sigma, kind, &table)? != v {
                return Err(err(format!("pattern {sigma} not reproduced at k={}", i + 1)));
            }
        }
    }
    Ok(table)
}

/// Trace tables for one space kind, keyed by level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceLibrary {
    kind: SpaceKind,
    tables: BTreeMap<u64, TraceTable>,
}

impl TraceLibrary {
    pub fn empty(kind: SpaceKind) -> Self {
        TraceLibrary { kind, tables: BTreeMap::new() }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn levels(&self) -> Vec<u64> {
        self.tables.keys().copied().collect()
    }

    pub fn insert(&mut self, table: TraceTable) -> Result<(), SignError> {
        let level = table.level.value();
        if table.kind != self.kind {
            return Err(SignError::Inconsistent { level, detail: format!("{} table in a {} library", table.kind, self.kind) });
        }
        match self.tables.get(&level) {
            Some(old) if !same_values(old, &table) => {
                Err(SignError::Inconsistent { level, detail: "conflicting trace tables".into() })
            }
            Some(_) => Ok(()),
            None => {
                self.tables.insert(level, table);
                Ok(())
            }
        }
    }

    pub fn merge(&mut self, other: TraceLibrary) -> Result<(), SignError> {
        other.tables.into_values().try_for_each(|t| self.insert(t))
    }

    /// The table for `n`; level 1 needs no data and always has one.
    pub fn get(&self, n: &Factorization) -> Option<TraceTable> {
        if n.value() == 1 {
            return Some(TraceTable { level: Factorization::one(), kind: self.kind, rows: BTreeMap::new() });
        }
        self.tables.get(&n.value()).cloned()
    }

    pub fn render(&self) -> String {
        let mut out = format!("{TRACE_HEADER} kind={}\n", self.kind);
        for (n, table) in &self.tables {
            for (d, row) in &table.rows {
                let mut fields = vec![n.to_string(), d.to_string(), row.value_at_k1.to_string()];
                fields.extend(row.periodic.iter().map(i64::to_string));
                out.push_str(&fields.join("\t"));
                out.push('\n');
            }
        }
        out
    }
}

fn same_values(a: &TraceTable, b: &TraceTable) -> bool {
    a.rows.len() == b.rows.len()
        && a.rows.iter().all(|(d, r)| b.rows.get(d).is_some_and(|s| s.value_at_k1 == r.value_at_k1 && s.periodic == r.periodic))
}

impl FromStr for TraceLibrary {
    type Err = SignError;

    fn from_str(text: &str) -> Result<Self, SignError> {
        let perr = |line: usize, detail: String| SignError::Parse { line, detail };
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let (_, header) = lines.next().ok_or_else(|| perr(1, "empty file".into()))?;
        let kind = header
            .strip_prefix(TRACE_HEADER)
            .and_then(|rest| rest.strip_prefix(" kind="))
            .and_then(|k| k.trim_end().parse::<SpaceKind>().ok())
            .ok_or_else(|| perr(1, format!("expected `{TRACE_HEADER} kind=<full|new>`")))?;
        let mut grouped: BTreeMap<u64, (usize, BTreeMap<u64, TraceRow>)> = BTreeMap::new();
        for (no, line) in lines {
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split('\t').collect();
            if fields.len() != 15 {
                return Err(perr(no, format!("expected 15 tab-separated fields, found {}", fields.len())));
            }
            let parse_u = |s: &str| s.parse::<u64>().map_err(|e| perr(no, format!("{s:?}: {e}")));
            let parse_i = |s: &str| s.parse::<i64>().map_err(|e| perr(no, format!("{s:?}: {e}")));
            let (n, d) = (parse_u(fields[0])?, parse_u(fields[1])?);
            if n == 0 || d <= 1 || n % d != 0 {
                return Err(perr(no, format!("d={d} must be a divisor of N={n} other than 1")));
            }
            let mut periodic = [0i64; 12];
            for (slot, s) in periodic.iter_mut().zip(&fields[3..]) {
                *slot = parse_i(s)?;
            }
            let row = TraceRow { value_at_k1: parse_i(fields[2])?, periodic, provenance: Provenance::Ingested };
            let entry = grouped.entry(n).or_insert((no, BTreeMap::new()));
            if entry.1.insert(d, row).is_some() {
                return Err(perr(no, format!("duplicate entry for (N,d) = ({n},{d})")));
            }
        }
        let mut library = TraceLibrary::empty(kind);
        for (n, (first_line, rows)) in grouped {
            let level = factorize(n)?;
            let table = TraceTable::new(level, kind, rows).map_err(|e| perr(first_line, e.to_string()))?;
            library.tables.insert(n, table);
        }
        Ok(library)
    }
}

/// Closed forms of the density-one pattern sequences at levels 11, 14, 15.
pub fn closed_form(shape: ClosedForm, k: u64) -> u64 {
    let alt: i64 = if k.is_multiple_of(2) { 1 } else { -1 };
    let k = k as i64;
    (match shape {
        ClosedForm::PairSwapFromZero => k - 1 + alt + i64::from(k == 1),
        ClosedForm::PairSwap => k - 1 - alt,
        ClosedForm::Identity => k - 1,
    }) as u64
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosedForm {
    /// `0, 2, 1, 4, 3, ...`
    PairSwapFromZero,
    /// `1, 0, 3, 2, 5, ...`
    PairSwap,
    /// `0, 1, 2, 3, ...`
    Identity,
}

/// The ten `(N, sigma)` sequences at `N = 11, 14, 15` and their closed forms.
pub fn closed_form_cases() -> Vec<(u64, &'static str, ClosedForm)> {
    use ClosedForm::*;
    let mut cases = vec![(11, "+", PairSwapFromZero), (11, "-", PairSwap)];
    for n in [14, 15] {
        cases.extend([(n, "++", PairSwapFromZero), (n, "-+", Identity), (n, "+-", PairSwap), (n, "--", Identity)]);
    }
    cases
}

/// Full-space trace tables for levels 11, 14 and 15, inverted from the
/// closed-form pattern sequences.
pub fn builtin_fixtures() -> TraceLibrary {
    let mut library = TraceLibrary::empty(SpaceKind::Full);
    for n in [11u64, 14, 15] {
        let level = factorize(n).expect("small level");
        let dims: Vec<(SignPattern, Vec<u64>)> = closed_form_cases()
            .into_iter()
            .filter(|c| c.0 == n)
            .map(|(_, s, shape)| {
                let sigma = SignPattern::parse(&level, s).expect("fixture pattern");
                (sigma, (1..=CONSISTENCY_WINDOW).map(|k| closed_form(shape, k)).collect())
            })
            .collect();
        let table = invert_traces(&level, SpaceKind::Full, &dims, Provenance::Derived).expect("fixture sequences are consistent");
        library.insert(table).expect("fresh library");
    }
    library
}

/// The pattern sequence `k -> dim S^sigma_2k(N)` as a periodic linear form with
/// `a = 2 psi(N)` (or `2 psi'(N)`) and `b = 2^omega(N)`.
pub fn sigma_form(table: &TraceTable, sigma: &SignPattern) -> Result<crate::sequence::PeriodicLinearForm, SignError> {
    let n = table.level();
    let a = 2 * table.kind.leading().eval_integer(n)? as u64;
    let b = 1u64 << n.omega();
    let values = (1..=witness_window(b) as u64)
        .map(|k| dim_sigma(n, Weight::new(k)?, sigma, table.kind, table))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(extract_form(&values, a, b)?)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Surjective,
    Misses { value: u64 },
    Unavailable { reason: String },
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Surjective => "true",
            Verdict::Misses { .. } => "false",
            Verdict::Unavailable { .. } => "unavailable",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaRow {
    pub level: u64,
    pub pattern: SignPattern,
    pub density: Rational,
    pub verdict: Verdict,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaClassification {
    pub kind: SpaceKind,
    /// One row per `(N, sigma)` with `N` in the density prefilter and trace data present.
    pub rows: Vec<SigmaRow>,
    /// Prefilter levels skipped for lack of trace data.
    pub missing: Vec<u64>,
}

impl SigmaClassification {
    /// Levels where every pattern is surjective.
    pub fn all_pattern_levels(&self) -> Vec<u64> {
        let mut levels: Vec<u64> = self.rows.iter().map(|r| r.level).collect();
        levels.dedup();
        levels.retain(|&n| self.rows.iter().filter(|r| r.level == n).all(|r| r.verdict == Verdict::Surjective));
        levels
    }

    /// Surjective `(N, sigma)` at levels where some other pattern is not.
    pub fn sporadic(&self) -> Vec<(u64, SignPattern)> {
        let full = self.all_pattern_levels();
        self.rows
            .iter()
            .filter(|r| r.verdict == Verdict::Surjective && !full.contains(&r.level))
            .map(|r| (r.level, r.pattern.clone()))
            .collect()
    }
}

/// Runs the finite surjectivity check on every pattern of every prefilter level.
pub fn classify_sigma(traces: &TraceLibrary) -> Result<SigmaClassification, SignError> {
    let kind = traces.kind;
    let prefilter = density_prefilter(kind)?;
    let mut jobs = Vec::new();
    let mut missing = Vec::new();
    for &n in &prefilter.levels {
        let level = factorize(n)?;
        match traces.get(&level) {
            Some(table) => {
                for sigma in enumerate_patterns(&level)? {
                    jobs.push((table.clone(), sigma));
                }
            }
            None => missing.push(n),
        }
    }
    let rows = jobs
        .into_par_iter()
        .map(|(table, sigma)| -> Result<SigmaRow, SignError> {
            let density = multiset_density(table.level(), kind, true)?;
            let verdict = match sigma_form(&table, &sigma) {
                Ok(form) => match hits_all_naturals(&form) {
                    Coverage::Covers { .. } => Verdict::Surjective,
                    Coverage::Misses { value } => Verdict::Misses { value },
                },
                Err(e) => Verdict::Unavailable { reason: e.to_string() },
            };
            Ok(SigmaRow { level: table.level().value(), pattern: sigma, density, verdict })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SigmaClassification { kind, rows, missing })
}
