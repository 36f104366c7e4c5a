//! `modform`: dimensions of cusp-form spaces, classifications and certified
//! omission scans from the command line.

mod commands;
mod output;
mod verify;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use modform_core::certify::CertifyError;
use modform_core::dimension::DimensionError;
use modform_core::numthy::NumthyError;
use modform_core::sequence::SequenceError;
use modform_core::signpattern::SignError;
use modform_core::SpaceKind;

#[derive(Parser)]
#[command(name = "modform", version, about = "Dimensions of spaces of cusp forms on Gamma0(N) and certified searches over them")]
struct Cli {
    /// Worker threads for scans [default: available cores]
    #[arg(long, global = true, env = "MODFORM_THREADS")]
    threads: Option<usize>,
    /// Emit one JSON object instead of TSV
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Dimension of S_2k(N), its newspace, or a sign-pattern subspace
    Dim(commands::DimArgs),
    /// Find and certify a value the level-indexed dimension sequence never takes
    ScanOmitted(commands::ScanArgs),
    /// Re-check an omission certificate from scratch
    Replay(commands::ReplayArgs),
    /// Which weight or sign-pattern sequences take every natural number
    Classify(commands::ClassifyArgs),
    /// Every (N, k) with zero-dimensional space
    ZeroPairs(commands::SpaceArgs),
    /// Multiset densities, the density prefilter, and empirical set densities
    Density(commands::DensityArgs),
    /// Re-run every reference computation
    VerifyPaper(verify::VerifyArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Space {
    Full,
    New,
}

impl From<Space> for SpaceKind {
    fn from(s: Space) -> Self {
        match s {
            Space::Full => SpaceKind::Full,
            Space::New => SpaceKind::New,
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    /// Bad flags or arguments; exit 2.
    Usage(String),
    /// A check ran and failed; exit 1.
    Verification(String),
    /// Missing or inconsistent data, or a resource limit; exit 3.
    Data(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Data(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Verification(m) | CliError::Data(m) => m,
        }
    }
}

impl From<NumthyError> for CliError {
    fn from(e: NumthyError) -> Self {
        match e {
            NumthyError::Zero => CliError::Usage("level must be positive".into()),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<DimensionError> for CliError {
    fn from(e: DimensionError) -> Self {
        match e {
            DimensionError::ZeroWeight | DimensionError::OddWeight(_) => CliError::Usage(e.to_string()),
            DimensionError::Numthy(inner) => inner.into(),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<CertifyError> for CliError {
    fn from(e: CertifyError) -> Self {
        match e {
            CertifyError::Dimension(inner) => inner.into(),
            CertifyError::Numthy(inner) => inner.into(),
            CertifyError::LimitReached { .. } | CertifyError::ResourceExhausted(_) | CertifyError::Malformed(_) => {
                CliError::Data(e.to_string())
            }
            other => CliError::Verification(other.to_string()),
        }
    }
}

impl From<SignError> for CliError {
    fn from(e: SignError) -> Self {
        match e {
            SignError::NotSquarefree(_) | SignError::BadPattern { .. } => CliError::Usage(e.to_string()),
            SignError::Dimension(inner) => inner.into(),
            SignError::Numthy(inner) => inner.into(),
            SignError::Sequence(inner) => inner.into(),
            other => CliError::Data(other.to_string()),
        }
    }
}

impl From<SequenceError> for CliError {
    fn from(e: SequenceError) -> Self {
        match e {
            SequenceError::Certify(inner) => inner.into(),
            SequenceError::Dimension(inner) => inner.into(),
            SequenceError::Numthy(inner) => inner.into(),
            SequenceError::NotSquarefree(_) | SequenceError::ZeroParameter => CliError::Usage(e.to_string()),
            other => CliError::Data(other.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be positive");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(3);
        }
    }
    let result = match cli.command {
        Command::Dim(a) => commands::dim(a),
        Command::ScanOmitted(a) => commands::scan_omitted(a),
        Command::Replay(a) => commands::replay(a),
        Command::Classify(a) => commands::classify(a),
        Command::ZeroPairs(a) => commands::zero_pairs(a),
        Command::Density(a) => commands::density(a),
        Command::VerifyPaper(a) => verify::verify(a),
    };
    match result {
        Ok(outcome) => {
            let text = if cli.json { outcome.record.render_json(started) } else { outcome.record.render_tsv() };
            print!("{text}");
            match outcome.failure {
                Some(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(1)
                }
                None => ExitCode::SUCCESS,
            }
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

/// A rendered record, plus a failure message when the command ran to
/// completion but something it checked did not hold.
pub struct Outcome {
    pub record: output::Record,
    pub failure: Option<String>,
}

impl From<output::Record> for Outcome {
    fn from(record: output::Record) -> Self {
        Outcome { record, failure: None }
    }
}
