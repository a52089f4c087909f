//! Command line front end: file ingestion, subcommand dispatch and reports.
//!
//! Exit codes: 0 on success, 1 on validation failure, 2 on usage error.

pub mod fixtures;
pub mod format;
pub mod report;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use gchf_spin::generate::{random_complex_matrix, seeded_rng};
use gchf_spin::oracle::{expand, expectation_on, to_orthonormal_basis, Observable};
use gchf_spin::{
    a_matrix, build_overlap_blocks, expect_s2, expect_sminus_splus, expect_splus, expect_splus_sminus, expect_sz,
    expect_sz2, gen_dods, gen_random_gchf, gen_rhf, gen_rohf, spin_vector, SpinError, SpinorDeterminant,
};
use nalgebra::Vector3;
use thiserror::Error;

use crate::format::{load_determinant, save_determinant};

/// Deviation above which `oracle-check` fails.
pub const ORACLE_CHECK_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("IoError: {0}")]
    Io(String),
    #[error("ParseError: {0}")]
    Parse(String),
    #[error("ShapeError: {0}")]
    Shape(String),
    #[error("NotOrthonormal: {0}; rerun with --orthonormalize to fix the spinors")]
    NotOrthonormal(String),
    #[error("IdentityViolation: {0}")]
    Identity(String),
    #[error("OracleMismatch: max deviation {0:.3e} exceeds {ORACLE_CHECK_TOL:e}")]
    OracleMismatch(f64),
    #[error("FixtureFailure: {0}")]
    Fixture(String),
    #[error("UsageError: {0}")]
    Usage(String),
    #[error("{0}")]
    Core(SpinError),
}

impl CliError {
    pub fn from_core(e: SpinError) -> Self {
        match e {
            SpinError::DimensionMismatch(msg) => CliError::Shape(msg),
            e @ SpinError::NotOrthonormal { .. } => CliError::NotOrthonormal(e.to_string()),
            other => CliError::Core(other),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "gchf-spin", version, about = "Spin contamination and collinearity analysis of spinor determinants")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Kind {
    Rhf,
    Rohf,
    Dods,
    Random,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Full spin analysis of one determinant file.
    Analyze {
        file: PathBuf,
        /// Löwdin-orthonormalize the spinors after loading.
        #[arg(long)]
        orthonormalize: bool,
        /// Also report the collinearity along this axis (normalized).
        #[arg(long, num_args = 3, value_names = ["X", "Y", "Z"], allow_negative_numbers = true)]
        axis: Option<Vec<f64>>,
        /// Rotate to the optimal axis and report the decomposition there.
        #[arg(long)]
        align_optimal: bool,
        #[arg(long, conflicts_with = "text")]
        json: bool,
        #[arg(long)]
        text: bool,
    },
    /// Collinearity matrix, its eigenpairs and the optimal axis.
    Axis {
        file: PathBuf,
        #[arg(long)]
        orthonormalize: bool,
        #[arg(long)]
        json: bool,
    },
    /// Compare every closed-form value with the Fock-space expansion.
    OracleCheck {
        file: PathBuf,
        #[arg(long)]
        orthonormalize: bool,
    },
    /// Write a generated determinant.
    Gen {
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        ne: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Singly occupied orbitals for `rohf` (default: Ne mod 2).
        #[arg(long)]
        open: Option<usize>,
        /// α electrons for `dods` (default: ceil(Ne / 2)).
        #[arg(long)]
        n_alpha: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the built-in H2O+ regression fixtures.
    PaperFixture,
}

/// Parses `args` (including the program name) and runs the subcommand.
/// Reports go to `out`, diagnostics to `err`; returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()))
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match command {
        Command::Analyze { file, orthonormalize, axis, align_optimal, json, text: _ } => {
            let loaded = load_determinant(&file, orthonormalize)?;
            let axis = axis.map(|v| Vector3::new(v[0], v[1], v[2]));
            let rep = report::analyze(&loaded, axis, align_optimal)?;
            if json {
                emit(out, &(serde_json::to_string_pretty(&rep).expect("serializable") + "\n"))
            } else {
                emit(out, &report::render_text(&rep))
            }
        }
        Command::Axis { file, orthonormalize, json } => {
            let loaded = load_determinant(&file, orthonormalize)?;
            let res = report::collinearity_of(&loaded.det)?;
            let col: report::Collinearity = (&res).into();
            if json {
                emit(out, &(serde_json::to_string_pretty(&col).expect("serializable") + "\n"))
            } else {
                let mut s = String::new();
                report::collinearity_text(&mut s, &col);
                emit(out, &s)
            }
        }
        Command::OracleCheck { file, orthonormalize } => {
            let loaded = load_determinant(&file, orthonormalize)?;
            let rows = oracle_rows(&loaded.det)?;
            let mut s = String::new();
            let _ = writeln!(s, "{:<16}{:>24}{:>24}{:>12}", "quantity", "formula", "oracle", "|diff|");
            let mut max_dev = 0.0f64;
            for (name, formula, oracle) in &rows {
                let dev = (formula - oracle).abs();
                max_dev = max_dev.max(dev);
                let _ = writeln!(s, "{name:<16}{formula:>24.15}{oracle:>24.15}{dev:>12.3e}");
            }
            let _ = writeln!(s, "max deviation {max_dev:.3e}");
            emit(out, &s)?;
            if max_dev > ORACLE_CHECK_TOL {
                return Err(CliError::OracleMismatch(max_dev));
            }
            Ok(())
        }
        Command::Gen { kind, m, ne, seed, open, n_alpha, out: path } => {
            let det = generate(kind, m, ne, seed, open, n_alpha)?;
            save_determinant(&det, &path)?;
            let _ = writeln!(err, "wrote {} (M = {m}, Ne = {ne})", path.display());
            Ok(())
        }
        Command::PaperFixture => {
            let checks = fixtures::run_fixtures();
            let mut s = String::new();
            for c in &checks {
                let status = if c.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(s, "[{status}] {}: {} (expected {})", c.name, c.value, c.expected);
            }
            emit(out, &s)?;
            let failed: Vec<_> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
            if failed.is_empty() {
                Ok(())
            } else {
                Err(CliError::Fixture(failed.join(", ")))
            }
        }
    }
}

/// `(name, formula value, oracle value)` for every scalar the oracle can
/// reproduce.
pub fn oracle_rows(det: &SpinorDeterminant) -> Result<Vec<(String, f64, f64)>, CliError> {
    let core = CliError::from_core;
    let blocks = build_overlap_blocks(det).map_err(core)?;
    let vec = expand(&to_orthonormal_basis(det).map_err(core)?).map_err(core)?;
    let o = |w| expectation_on(&vec, w);
    let splus = expect_splus(&blocks);
    let mut rows = vec![
        ("<Sz>".to_string(), expect_sz(&blocks).map_err(core)?, o(Observable::Sz).re),
        ("<Sz^2>".to_string(), expect_sz2(&blocks).map_err(core)?, o(Observable::Sz2).re),
        ("<S-S+>".to_string(), expect_sminus_splus(&blocks).map_err(core)?, o(Observable::SminusSplus).re),
        ("<S+S->".to_string(), expect_splus_sminus(&blocks).map_err(core)?, o(Observable::SplusSminus).re),
        ("Re<S+>".to_string(), splus.re, o(Observable::Splus).re),
        ("Im<S+>".to_string(), splus.im, o(Observable::Splus).im),
        ("<S^2>".to_string(), expect_s2(&blocks).map_err(core)?, o(Observable::S2).re),
    ];
    let sv = spin_vector(&blocks).map_err(core)?.to_vector();
    let a = a_matrix(&blocks).map_err(core)?;
    let names = ["x", "y", "z"];
    for mu in 0..3 {
        for nu in 0..3 {
            rows.push((
                format!("Re<S{}S{}>", names[mu], names[nu]),
                a[(mu, nu)] + sv[mu] * sv[nu],
                o(Observable::Product(mu, nu)).re,
            ));
        }
    }
    Ok(rows)
}

fn generate(
    kind: Kind,
    m: usize,
    ne: usize,
    seed: u64,
    open: Option<usize>,
    n_alpha: Option<usize>,
) -> Result<SpinorDeterminant, CliError> {
    let usage = |msg: String| CliError::Usage(msg);
    if m == 0 || ne == 0 || ne > 2 * m {
        return Err(usage(format!("need 0 < Ne <= 2M, got M = {m}, Ne = {ne}")));
    }
    let mut rng = seeded_rng(seed);
    let det = match kind {
        Kind::Random => gen_random_gchf(m, ne, seed),
        Kind::Rhf => {
            if !ne.is_multiple_of(2) {
                return Err(usage(format!("rhf needs an even electron count, got {ne}")));
            }
            gen_rhf(&random_complex_matrix(m, ne / 2, &mut rng))
        }
        Kind::Rohf => {
            let p = open.unwrap_or(ne % 2);
            if p > ne || !(ne - p).is_multiple_of(2) || (ne - p) / 2 + p > m {
                return Err(usage(format!("cannot build rohf with Ne = {ne}, {p} open shells in M = {m}")));
            }
            let k = (ne - p) / 2;
            let closed = random_complex_matrix(m, k, &mut rng);
            let open = random_complex_matrix(m, p, &mut rng);
            gen_rohf(&closed, &open)
        }
        Kind::Dods => {
            let p = n_alpha.unwrap_or(ne.div_ceil(2));
            if p > ne || p > m || ne - p > m {
                return Err(usage(format!("cannot build dods with {p} of {ne} electrons alpha in M = {m}")));
            }
            let alpha = random_complex_matrix(m, p, &mut rng);
            let beta = random_complex_matrix(m, ne - p, &mut rng);
            gen_dods(&alpha, &beta)
        }
    };
    det.map_err(CliError::from_core)
}
