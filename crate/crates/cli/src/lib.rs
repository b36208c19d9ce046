//! The `dgla` command line. [`run`] parses the arguments, computes one
//! [`Report`] and writes its text rendering, plus JSON with `--json`.
//!
//! Exit codes: 0 computed (non-formal verdicts included), 1 invalid input,
//! 2 undetermined within the cutoffs under `--require-conclusive`,
//! 64 usage error.

pub mod certificate;
mod commands;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use certificate::CertificateRecord;
pub use report::{Payload, Report, ReportCutoffs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_UNDETERMINED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "dgla", version, about = "Exact formality computations for finite-dimensional DG-Lie algebras")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// `.dgla` input file; the bundled canonical fixture when omitted.
    #[arg(long, value_name = "FILE")]
    pub input: Option<PathBuf>,
    #[arg(long, value_name = "NAME")]
    pub algebra: Option<String>,
    #[arg(long, value_name = "NAME")]
    pub morphism: Option<String>,
    #[arg(long, value_name = "NAME")]
    pub action: Option<String>,
    /// Largest column `p` of the window (the `p_cutoff` of verdicts).
    #[arg(long = "p-max", value_name = "INT")]
    pub p_max: Option<usize>,
    /// Largest page differential examined.
    #[arg(long = "r-max", value_name = "INT")]
    pub r_max: Option<usize>,
    /// Page shown by `page`.
    #[arg(long, value_name = "INT")]
    pub r: Option<usize>,
    /// Word length `N` for `pbw`.
    #[arg(long, value_name = "INT")]
    pub truncation: Option<usize>,
    /// Also write the report as JSON.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Take the named theorem-side algebra of `transfer` as formal.
    #[arg(long = "assert-formal", value_name = "NAME")]
    pub assert_formal: Option<String>,
    #[arg(long, value_enum, default_value_t = Direction::Forward)]
    pub direction: Direction,
    /// Exit 2 when the cutoffs leave the answer undetermined.
    #[arg(long = "require-conclusive")]
    pub require_conclusive: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    /// Formality of the target implies formality of the source.
    #[default]
    Forward,
    /// Formality of the source implies formality of the target.
    Backward,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the axioms of algebras, morphisms and actions.
    Validate(Common),
    /// Cohomology with representatives and the induced bracket.
    Cohom(Common),
    /// Maurer-Cartan equations in the degree-1 coordinates.
    Mc(Common),
    /// Dimensions of the Chevalley-Eilenberg window.
    Ce(Common),
    /// One page of the first-filtration spectral sequence.
    Page(Common),
    /// Euler class and its higher differentials.
    Euler(Common),
    /// Search for a nonzero higher differential of E(L,L).
    Formality(Common),
    /// Transfer formality along a morphism.
    Transfer(Common),
    /// PBW and enveloping-algebra checks up to a word length.
    Pbw(Common),
    /// Invariant subalgebra of a finite action and its Reynolds retraction.
    Invariants(Common),
    /// Re-validate every certificate in a JSON report.
    #[command(hide = true)]
    CheckCertificate(Common),
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Parse(String),
    #[error("no {kind} named `{name}` in the input")]
    Unknown { kind: &'static str, name: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            _ => EXIT_INVALID,
        }
    }
}

/// A finished computation.
#[derive(Debug, Clone)]
pub struct Computed {
    pub report: Report,
    /// The input passed every check the command makes.
    pub input_valid: bool,
    /// The answer does not depend on enlarging the cutoffs.
    pub conclusive: bool,
}

/// Runs the command line `args` (program name first).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{rendered}");
                EXIT_USAGE
            } else {
                let _ = write!(out, "{rendered}");
                EXIT_OK
            };
        }
    };
    let common = cli.command.common().clone();
    let computed = match commands::execute(&cli.command) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    let _ = write!(out, "{}", computed.report.render());
    if let Some(path) = &common.json {
        if let Err(e) = std::fs::write(path, computed.report.to_json()) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return EXIT_INVALID;
        }
    }
    if !computed.input_valid {
        EXIT_INVALID
    } else if common.require_conclusive && !computed.conclusive {
        EXIT_UNDETERMINED
    } else {
        EXIT_OK
    }
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Validate(c)
            | Command::Cohom(c)
            | Command::Mc(c)
            | Command::Ce(c)
            | Command::Page(c)
            | Command::Euler(c)
            | Command::Formality(c)
            | Command::Transfer(c)
            | Command::Pbw(c)
            | Command::Invariants(c)
            | Command::CheckCertificate(c) => c,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Cohom(_) => "cohom",
            Command::Mc(_) => "mc",
            Command::Ce(_) => "ce",
            Command::Page(_) => "page",
            Command::Euler(_) => "euler",
            Command::Formality(_) => "formality",
            Command::Transfer(_) => "transfer",
            Command::Pbw(_) => "pbw",
            Command::Invariants(_) => "invariants",
            Command::CheckCertificate(_) => "check-certificate",
        }
    }
}
