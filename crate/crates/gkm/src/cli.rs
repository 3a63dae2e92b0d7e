//! Argument parsing and subcommand dispatch.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gkm_core::cartan::{violations, Quiver};
use gkm_core::field::FiniteField;
use gkm_core::hall::{HallAlgebra, HallError};
use gkm_core::kronecker::{Kronecker, LoopModel};
use gkm_core::presentation::{format_degree, graded_dims_exact, verify_quotient, Presentation};
use gkm_core::report::{Report, Verdict};
use thiserror::Error;

use crate::formats::{self, ParseError};

#[derive(Debug, Parser)]
#[command(name = "gkm", version, about = "Generalized Kac-Moody presentations and quiver Hall algebras")]
struct Cli {
    /// Output path, `-` for standard output.
    #[arg(long, global = true, default_value = "-")]
    out: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct FieldArg {
    /// Finite field as `p^r`.
    #[arg(long, default_value = "3^1", value_parser = formats::parse_field)]
    field: FiniteField,
}

#[derive(Debug, Args)]
struct CutoffArg {
    /// Total degree cutoff.
    #[arg(long, default_value_t = 8)]
    cutoff: usize,
}

#[derive(Debug, Args)]
struct IndexArg {
    /// Largest index of the families `I_n`, `P_n`, `R_n` involved.
    #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=6))]
    n: u64,
}

/// A dimension vector given as one comma-separated flag value.
#[derive(Debug, Clone)]
struct Dims(Vec<usize>);

fn parse_dims(s: &str) -> Result<Dims, String> {
    formats::parse_dims(s).map(Dims)
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the Borcherds-Cartan conditions.
    Validate { matrix: PathBuf },
    /// Minimal positive integer symmetrizer.
    Symmetrize { matrix: PathBuf },
    /// The doubled matrix, `+` indices first.
    Double { matrix: PathBuf },
    /// Product of a quiver with the Kronecker quiver.
    ProductQuiver { quiver: PathBuf },
    /// Graded dimensions of the positive part.
    Dims {
        matrix: PathBuf,
        #[command(flatten)]
        cutoff: CutoffArg,
    },
    /// Truncated dimensions of the doubled quotient against the positive part.
    VerifyThm33 {
        matrix: PathBuf,
        #[command(flatten)]
        cutoff: CutoffArg,
    },
    /// Product of two Hall elements, or the classes of one dimension vector.
    HallProduct {
        quiver: PathBuf,
        #[arg(required_unless_present = "dim")]
        left: Option<PathBuf>,
        #[arg(required_unless_present = "dim")]
        right: Option<PathBuf>,
        #[command(flatten)]
        field: FieldArg,
        /// List the isomorphism classes of this dimension vector.
        #[arg(long, value_parser = parse_dims, conflicts_with_all = ["left", "right"])]
        dim: Option<Dims>,
    },
    /// Compatibility of product and coproduct modulo `q-1`.
    HallBialgebra {
        quiver: PathBuf,
        #[command(flatten)]
        field: FieldArg,
        /// Componentwise bound on the classes tested; defaults to 1 at every vertex.
        #[arg(long, value_parser = parse_dims)]
        dim: Option<Dims>,
    },
    /// Serre relators evaluated on the simple classes.
    SerreProbe {
        quiver: PathBuf,
        #[command(flatten)]
        field: FieldArg,
    },
    /// Integer relations in the Kronecker Hall algebra.
    KroneckerQ {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        n: IndexArg,
    },
    /// Relations modulo `q-1` and divisibility of Hall numbers.
    KroneckerQ1 {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        n: IndexArg,
    },
    /// Loop algebra relations and the correspondence with Hall brackets.
    KroneckerLoop {
        #[command(flatten)]
        field: FieldArg,
        #[command(flatten)]
        n: IndexArg,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Compute(String),
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.display().to_string(), source })
}

fn parsed<T>(path: &Path, f: impl Fn(&str) -> Result<T, ParseError>) -> Result<T, CliError> {
    f(&read(path)?).map_err(|source| CliError::Parse { path: path.display().to_string(), source })
}

fn compute<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Compute(e.to_string()))
}

/// Text to emit and whether every check passed.
struct Outcome {
    text: String,
    passed: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, passed: true }
    }

    fn report(report: &Report) -> Self {
        Outcome { text: formats::format_report(report), passed: report.passed() }
    }
}

fn hall_on(path: &Path, field: FiniteField) -> Result<HallAlgebra, CliError> {
    let q: Quiver = parsed(path, formats::parse_quiver)?;
    Ok(HallAlgebra::new(q, field))
}

fn execute(command: Command) -> Result<Outcome, CliError> {
    match command {
        Command::Validate { matrix } => {
            let rows = parsed(&matrix, formats::parse_matrix_rows)?;
            let found = compute(violations(&rows))?;
            if found.is_empty() {
                return Ok(Outcome::ok("valid\n".into()));
            }
            let mut text = String::from("condition\trow\tcol\n");
            for v in &found {
                let _ = writeln!(text, "{}\t{}\t{}", v.condition, v.row + 1, v.col + 1);
            }
            Ok(Outcome { text, passed: false })
        }
        Command::Symmetrize { matrix } => {
            let c = parsed(&matrix, formats::parse_matrix)?;
            Ok(match c.symmetrize() {
                Some(eps) => {
                    let cells: Vec<String> = eps.0.iter().map(|e| e.to_string()).collect();
                    Outcome::ok(format!("{}\n", cells.join(" ")))
                }
                None => Outcome { text: "none\n".into(), passed: false },
            })
        }
        Command::Double { matrix } => {
            let c = parsed(&matrix, formats::parse_matrix)?;
            Ok(Outcome::ok(formats::format_matrix(&c.double().rows())))
        }
        Command::ProductQuiver { quiver } => {
            let q = parsed(&quiver, formats::parse_quiver)?;
            Ok(Outcome::ok(formats::format_quiver(&q.product_with_kronecker())))
        }
        Command::Dims { matrix, cutoff } => {
            let c = parsed(&matrix, formats::parse_matrix)?;
            let table = compute(graded_dims_exact(&Presentation::positive_part(&c), cutoff.cutoff))?;
            let mut text: String = c.labels().iter().map(|l| format!("deg.{l}\t")).collect();
            text.push_str("dim\tstable\n");
            for (d, &(dim, stable)) in &table.entries {
                for x in d {
                    let _ = write!(text, "{x}\t");
                }
                let _ = writeln!(text, "{dim}\t{}", if stable { "stable" } else { "unstable" });
            }
            Ok(Outcome::ok(text))
        }
        Command::VerifyThm33 { matrix, cutoff } => {
            let c = parsed(&matrix, formats::parse_matrix)?;
            let report = compute(verify_quotient(&c, cutoff.cutoff))?;
            let mut text = format!("# degree 0 is expected to have dimension {}\n", c.size());
            text.push_str("degree\tcomputed\texpected\tstatus\n");
            for r in &report.rows {
                let _ = writeln!(text, "{}\t{}\t{}\t{}", format_degree(&r.degree), r.computed, r.expected, r.status);
            }
            Ok(Outcome { text, passed: report.all_match() })
        }
        Command::HallProduct { quiver, left, right, field, dim } => {
            let hall = hall_on(&quiver, field.field)?;
            if let Some(Dims(dims)) = dim {
                let mut text = String::from("class\tautomorphisms\torbit\tindecomposable\n");
                for (key, orbit) in compute(hall.iso_classes(&dims))? {
                    let aut = compute(hall.automorphisms(&key))?;
                    let indec = compute(hall.is_indecomposable(&key))?;
                    let _ = writeln!(text, "{}\t{aut}\t{orbit}\t{indec}", hall.key_hex(&key));
                }
                return Ok(Outcome::ok(text));
            }
            let (Some(left), Some(right)) = (left, right) else {
                return Err(CliError::Usage("hall-product needs two element files or --dim".into()));
            };
            let element = |p: &Path| parsed(p, |t| hall.parse_element(t).map_err(hall_parse_error));
            let (x, y) = (element(&left)?, element(&right)?);
            let z = compute(hall.multiply(&x, &y))?;
            Ok(Outcome::ok(hall.serialize(&z)))
        }
        Command::HallBialgebra { quiver, field, dim } => {
            let hall = hall_on(&quiver, field.field)?;
            let bound = dim.map(|d| d.0).unwrap_or_else(|| vec![1; hall.quiver().vertices().len()]);
            let report = match hall.check_bialgebra(&bound) {
                Err(HallError::Collapsed) => {
                    let mut r = Report::new();
                    r.push("bialgebra", hall.field().to_string(), "-", Verdict::Vacuous, None);
                    r
                }
                other => compute(other)?,
            };
            Ok(Outcome::report(&report))
        }
        Command::SerreProbe { quiver, field } => {
            let hall = hall_on(&quiver, field.field)?;
            Ok(Outcome::report(&compute(hall.serre_probe())?))
        }
        Command::KroneckerQ { field, n } => {
            let k = Kronecker::new(field.field);
            Ok(Outcome::report(&compute(k.verify_q_relations(n.n as usize))?))
        }
        Command::KroneckerQ1 { field, n } => {
            let k = Kronecker::new(field.field);
            let mut report = compute(k.verify_q1_relations(n.n as usize))?;
            report.extend(compute(k.divisibility_check(n.n as usize))?);
            Ok(Outcome::report(&report))
        }
        Command::KroneckerLoop { field, n } => {
            let k = Kronecker::new(field.field);
            let model = compute(LoopModel::new((2 * n.n as u32).max(2)))?;
            let mut report = compute(model.check())?;
            report.extend(compute(k.correspondence_check(n.n as usize))?);
            Ok(Outcome::report(&report))
        }
    }
}

fn hall_parse_error(e: HallError) -> ParseError {
    match e {
        HallError::Parse { line, message } => ParseError { line, message },
        other => ParseError { line: 0, message: other.to_string() },
    }
}

fn emit(out: &str, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    let io = |source| CliError::Read { path: out.to_string(), source };
    if out == "-" {
        stdout.write_all(text.as_bytes()).map_err(io)
    } else {
        fs::write(out, text).map_err(io)
    }
}

/// Runs the command line `args` (program name first) and returns the exit
/// code: 0 when every check passes, 1 when one fails, 2 on usage or input errors.
pub fn run_with<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let result = execute(cli.command).and_then(|o| emit(&cli.out, &o.text, stdout).map(|_| o.passed));
    match result {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

#[cfg(test)]
mod tests;
