use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Subcommand, ValueEnum};
use serde_json::{json, Value};

use modform_core::certify::{find_omission, replay as replay_cert, zero_pairs as zero_table, Candidate, OmissionCertificate, ScanConfig};
use modform_core::dimension::dim as dimension;
use modform_core::numthy::factorize;
use modform_core::sequence::{approx, classify_weight, density_prefilter, empirical_set_density, multiset_density, Coverage};
use modform_core::signpattern::{builtin_fixtures, classify_sigma, dim_sigma, SignPattern, TraceLibrary, Verdict};
use modform_core::{Rational, SpaceKind, Weight};

use crate::output::Record;
use crate::{CliError, Outcome, Space};

type CmdResult = Result<Outcome, CliError>;

#[derive(Args)]
pub struct DimArgs {
    #[arg(long)]
    pub level: u64,
    /// The weight 2k (even)
    #[arg(long)]
    pub weight2k: u64,
    #[arg(long, value_enum, default_value = "full")]
    pub space: Space,
    /// Sign pattern such as `+-`, one sign per prime in ascending order
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// Trace-table file extending the built-in tables
    #[arg(long)]
    pub traces: Option<PathBuf>,
}

#[derive(Args)]
pub struct ScanArgs {
    #[arg(long, value_enum)]
    pub space: Space,
    #[arg(long)]
    pub weight2k: u64,
    /// Certify this value instead of the least one not found
    #[arg(long)]
    pub candidate: Option<u64>,
    /// Largest level the scan may reach
    #[arg(long, default_value_t = 20_000_000)]
    pub limit: u64,
    /// Levels per block between termination checks
    #[arg(long, default_value_t = 1 << 20)]
    pub block_size: usize,
    /// Write the certificate here as JSON
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct ReplayArgs {
    #[arg(long)]
    pub cert: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    WeightFull,
    WeightNew,
    SigmaFull,
    SigmaNew,
}

#[derive(Args)]
pub struct ClassifyArgs {
    #[arg(long, value_enum)]
    pub mode: Mode,
    #[arg(long)]
    pub traces: Option<PathBuf>,
}

#[derive(Args)]
pub struct SpaceArgs {
    #[arg(long, value_enum)]
    pub space: Space,
}

#[derive(Args)]
pub struct DensityArgs {
    #[command(subcommand)]
    pub what: DensityCmd,
}

#[derive(Subcommand)]
pub enum DensityCmd {
    /// Multiset density of the weight sequence at one level
    Multiset {
        #[arg(long)]
        level: u64,
        #[arg(long, value_enum)]
        space: Space,
        /// Density of a single sign-pattern subsequence instead
        #[arg(long)]
        per_pattern: bool,
    },
    /// Squarefree levels whose sign-pattern sequences have density at least 1
    Prefilter {
        #[arg(long, value_enum)]
        space: Space,
    },
    /// Fraction of [0, x] taken by N -> dim S_2k(N)
    Empirical {
        #[arg(long, value_enum, default_value = "new")]
        space: Space,
        #[arg(long, default_value_t = 2)]
        weight2k: u64,
        #[arg(long)]
        x: u64,
        #[arg(long, default_value_t = 40_000_000)]
        limit: u64,
    },
}

fn weight(w2k: u64) -> Result<Weight, CliError> {
    Ok(Weight::from_weight2k(w2k)?)
}

/// Built-in tables for the full space, extended by an optional file.
pub fn load_traces(kind: SpaceKind, path: Option<&Path>) -> Result<TraceLibrary, CliError> {
    let mut lib = match kind {
        SpaceKind::Full => builtin_fixtures(),
        SpaceKind::New => TraceLibrary::empty(kind),
    };
    if let Some(path) = path {
        let text = fs::read_to_string(path).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        let file: TraceLibrary = text.parse().map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
        if file.kind() != kind {
            return Err(CliError::Data(format!("{}: traces are for the {} space, not {}", path.display(), file.kind(), kind)));
        }
        lib.merge(file)?;
    }
    Ok(lib)
}

fn rational(r: &Rational) -> Value {
    json!(r.to_string())
}

pub fn dim(a: DimArgs) -> CmdResult {
    let kind: SpaceKind = a.space.into();
    let k = weight(a.weight2k)?;
    let n = factorize(a.level)?;
    let (sigma_cell, value) = match &a.sigma {
        None => (Value::Null, dimension(kind, &n, k)?),
        Some(s) => {
            let sigma = SignPattern::parse(&n, s)?;
            let lib = load_traces(kind, a.traces.as_deref())?;
            let table = lib
                .get(&n)
                .ok_or_else(|| CliError::Data(format!("trace data unavailable for level {} ({} space)", a.level, kind)))?;
            (json!(sigma.to_string()), dim_sigma(&n, k, &sigma, kind, &table)?)
        }
    };
    let inputs = json!({"level": a.level, "weight2k": a.weight2k, "space": kind.as_str(), "sigma": a.sigma});
    let mut rec = Record::new("dim", inputs, &["level", "weight2k", "space", "sigma", "dim"]);
    rec.row(vec![json!(a.level), json!(a.weight2k), json!(kind.as_str()), sigma_cell, json!(value)]);
    Ok(rec.into())
}

fn cert_row(rec: &mut Record, cert: &OmissionCertificate) {
    rec.row(vec![
        json!(cert.kind.as_str()),
        json!(2 * cert.k),
        json!(cert.omitted),
        json!(cert.scan_bound),
        json!(cert.threshold),
        json!(cert.scan_count),
        json!(format!("{:016x}", cert.checksum)),
    ]);
}

const CERT_COLUMNS: [&str; 7] = ["space", "weight2k", "omitted", "n0", "threshold", "scan_count", "checksum"];

pub fn scan_omitted(a: ScanArgs) -> CmdResult {
    let kind: SpaceKind = a.space.into();
    let k = weight(a.weight2k)?;
    if a.limit == 0 || a.block_size == 0 {
        return Err(CliError::Usage("--limit and --block-size must be positive".into()));
    }
    let cfg = ScanConfig { block_size: a.block_size, limit: a.limit };
    let candidate = a.candidate.map_or(Candidate::Auto, Candidate::Value);
    let cert = find_omission(kind, k, candidate, &cfg)?;
    if let Some(path) = &a.out {
        fs::write(path, cert.to_json() + "\n").map_err(|e| CliError::Data(format!("{}: {e}", path.display())))?;
    }
    let inputs = json!({"space": kind.as_str(), "weight2k": a.weight2k, "candidate": a.candidate, "limit": a.limit});
    let mut rec = Record::new("scan-omitted", inputs, &CERT_COLUMNS);
    cert_row(&mut rec, &cert);
    rec.summary.push(format!("OMITTED {} up to N0={} certified", cert.omitted, cert.scan_bound));
    rec.extra.insert("certificate".into(), json!(a.out.as_ref().map(|p| p.display().to_string())));
    Ok(rec.into())
}

pub fn replay(a: ReplayArgs) -> CmdResult {
    let text = fs::read_to_string(&a.cert).map_err(|e| CliError::Data(format!("{}: {e}", a.cert.display())))?;
    let cert = OmissionCertificate::from_json(text.trim())?;
    replay_cert(&cert)?;
    let mut rec = Record::new("replay", json!({"cert": a.cert.display().to_string()}), &CERT_COLUMNS);
    cert_row(&mut rec, &cert);
    rec.summary.push(format!("REPLAYED {} up to N0={} ok", cert.omitted, cert.scan_bound));
    Ok(rec.into())
}

fn join(values: impl IntoIterator<Item = u64>) -> String {
    values.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

pub fn classify(a: ClassifyArgs) -> CmdResult {
    let mode = a.mode.to_possible_value().expect("named mode").get_name().to_string();
    let inputs = json!({"mode": mode, "traces": a.traces.as_ref().map(|p| p.display().to_string())});
    match a.mode {
        Mode::WeightFull | Mode::WeightNew => {
            let kind = if matches!(a.mode, Mode::WeightFull) { SpaceKind::Full } else { SpaceKind::New };
            let c = classify_weight(kind, &ScanConfig::default())?;
            let mut rec = Record::new("classify", inputs, &["level", "surjective", "least_missing"]);
            for (n, cov) in &c.candidates {
                let missing = match cov {
                    Coverage::Covers { .. } => Value::Null,
                    Coverage::Misses { value } => json!(value),
                };
                rec.row(vec![json!(n), json!(cov.is_surjective()), missing]);
            }
            rec.summary.push(format!("SURJECTIVE {}", join(c.surjective_levels())));
            Ok(rec.into())
        }
        Mode::SigmaFull | Mode::SigmaNew => {
            let kind = if matches!(a.mode, Mode::SigmaFull) { SpaceKind::Full } else { SpaceKind::New };
            let lib = load_traces(kind, a.traces.as_deref())?;
            let c = classify_sigma(&lib)?;
            let mut rec = Record::new("classify", inputs, &["level", "sigma", "density", "surjective", "least_missing"]);
            for row in &c.rows {
                let (verdict, missing) = match &row.verdict {
                    Verdict::Surjective => (json!(true), Value::Null),
                    Verdict::Misses { value } => (json!(false), json!(value)),
                    Verdict::Unavailable { reason } => (json!("unavailable"), json!(reason)),
                };
                rec.row(vec![json!(row.level), json!(row.pattern.to_string()), rational(&row.density), verdict, missing]);
            }
            rec.summary.push(format!("ALL_PATTERNS {}", join(c.all_pattern_levels())));
            let sporadic: Vec<String> = c.sporadic().iter().map(|(n, s)| format!("({n},{s})")).collect();
            rec.summary.push(format!("SPORADIC {}", sporadic.join(",")));
            rec.summary.push(format!("MISSING_TRACES {}", join(c.missing.iter().copied())));
            Ok(rec.into())
        }
    }
}

pub fn zero_pairs(a: SpaceArgs) -> CmdResult {
    let kind: SpaceKind = a.space.into();
    let table = zero_table(kind, &ScanConfig::default())?;
    let mut rec = Record::new("zero-pairs", json!({"space": kind.as_str()}), &["level", "k", "weight2k"]);
    for &(n, k) in &table.pairs {
        rec.row(vec![json!(n), json!(k), json!(2 * k)]);
    }
    rec.summary.push(format!("LEVELS {}", join(table.levels())));
    rec.summary.push(format!("WEIGHTS {}", join(table.weights())));
    Ok(rec.into())
}

pub fn density(a: DensityArgs) -> CmdResult {
    match a.what {
        DensityCmd::Multiset { level, space, per_pattern } => {
            let kind: SpaceKind = space.into();
            let n = factorize(level)?;
            let d = multiset_density(&n, kind, per_pattern)?;
            let inputs = json!({"level": level, "space": kind.as_str(), "per_pattern": per_pattern});
            let mut rec = Record::new("density", inputs, &["level", "space", "per_pattern", "density", "approx"]);
            rec.row(vec![json!(level), json!(kind.as_str()), json!(per_pattern), rational(&d), json!(approx(&d))]);
            Ok(rec.into())
        }
        DensityCmd::Prefilter { space } => {
            let kind: SpaceKind = space.into();
            let p = density_prefilter(kind)?;
            let mut rec = Record::new("density", json!({"prefilter": kind.as_str()}), &["level", "density"]);
            for &n in &p.levels {
                rec.row(vec![json!(n), rational(&multiset_density(&factorize(n)?, kind, true)?)]);
            }
            rec.summary.push(format!("LEVELS {}", join(p.levels.iter().copied())));
            rec.summary.push(format!("CUTOFF {}", p.cutoff));
            Ok(rec.into())
        }
        DensityCmd::Empirical { space, weight2k, x, limit } => {
            let kind: SpaceKind = space.into();
            let k = weight(weight2k)?;
            let cfg = ScanConfig { limit, ..ScanConfig::default() };
            let e = empirical_set_density(kind, k, x, &cfg)?;
            let inputs = json!({"space": kind.as_str(), "weight2k": weight2k, "x": x, "limit": limit});
            let mut rec =
                Record::new("density", inputs, &["space", "weight2k", "x", "attained", "scan_bound", "density", "approx"]);
            rec.row(vec![
                json!(kind.as_str()),
                json!(weight2k),
                json!(x),
                json!(e.attained),
                json!(e.scan_bound),
                rational(&e.density),
                json!(approx(&e.density)),
            ]);
            Ok(rec.into())
        }
    }
}
