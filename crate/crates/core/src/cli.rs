//! Command-line front end. [`run`] is the whole program; `main` only wires
//! it to the process streams.
//!
//! Exit codes: 0 success, 1 verification mismatch, 2 usage error,
//! 3 mathematical precondition violated.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::algebra::{approx, Rational};
use crate::closed_form::{build_closed_form, big_json, ClosedForm, ClosedFormError};
use crate::explorer::{tabulate, ExploreError, Family};
use crate::oracle::{tighten, verify_range, OracleError, TailOracle};
use crate::parse::PolyExpr;
use crate::solver::{solve, SolveError};

pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "tailsum", version, about = "Closed forms for floor(1 / Σ_{i>n} 1/P(i))")]
pub struct Cli {
    /// Add decimal renderings next to exact values (non-authoritative).
    #[arg(long, global = true)]
    pub approx: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Closed,
    Oracle,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Latex,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve for the coefficient tuple and its case classification.
    Solve {
        #[arg(long)]
        poly: PolyExpr,
    },
    /// Build the residue-class closed form.
    ClosedForm {
        #[arg(long)]
        poly: PolyExpr,
        /// Walk below the certified threshold with the oracle.
        #[arg(long)]
        tighten: bool,
    },
    /// Compute a single a_n.
    An {
        #[arg(long)]
        poly: PolyExpr,
        #[arg(long)]
        n: u64,
        #[arg(long, value_enum, default_value_t = Method::Closed)]
        method: Method,
        /// Tighten the closed form's range before evaluating.
        #[arg(long)]
        tighten: bool,
    },
    /// Compare closed form and oracle over a range of n (JSON lines).
    Verify {
        #[arg(long)]
        poly: PolyExpr,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
    /// Emit (n, a_n) rows.
    Table {
        #[arg(long)]
        poly: PolyExpr,
        #[arg(long)]
        from: u64,
        #[arg(long)]
        to: u64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Tabulate c_i(k) over a polynomial family and fit polynomials in k.
    ExploreCk {
        /// monomial | monomial-times:<P0> | product:<P>;<Q>
        #[arg(long)]
        family: String,
        #[arg(long, default_value_t = 2)]
        kmin: usize,
        #[arg(long)]
        kmax: usize,
        #[arg(long, default_value_t = crate::explorer::DEFAULT_DMAX)]
        dmax: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{0}")]
    Mismatch(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Precondition(_) => EXIT_PRECONDITION,
            CliError::Mismatch(_) => EXIT_MISMATCH,
        }
    }
}

impl From<SolveError> for CliError {
    fn from(e: SolveError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<ClosedFormError> for CliError {
    fn from(e: ClosedFormError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Unresolved { .. } => CliError::Mismatch(e.to_string()),
            _ => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<ExploreError> for CliError {
    fn from(e: ExploreError) -> Self {
        match e {
            ExploreError::BadFamily(_) | ExploreError::EmptyRange(..) => CliError::Usage(e.to_string()),
            ExploreError::InsufficientRows { .. } => CliError::Usage(e.to_string()),
            ExploreError::Solve { .. } => CliError::Precondition(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

fn strings(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn approxes(xs: &[Rational]) -> Vec<f64> {
    xs.iter().map(approx).collect()
}

fn print_json(out: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    writeln!(out, "{}", serde_json::to_string_pretty(v).expect("serializable"))?;
    Ok(())
}

fn build_with_oracle(poly: &PolyExpr, tighten_range: bool) -> Result<(ClosedForm, TailOracle), CliError> {
    let mut cf = build_closed_form(&poly.poly)?;
    let oracle = TailOracle::new(&poly.poly)?;
    if tighten_range {
        tighten(&mut cf, &oracle, 1);
    }
    Ok((cf, oracle))
}

/// Runs one CLI invocation and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{text}");
            return if code == 0 { 0 } else { EXIT_USAGE };
        }
    };
    match execute(&cli, out, err) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve { poly } => {
            let r = solve(&poly.poly)?;
            let mut v = json!({
                "poly": poly.poly.to_string(),
                "k": r.k,
                "c": strings(&r.c),
                "a": strings(&r.a),
                "case": r.case_tag.to_string(),
                "i_star": r.i_star,
                "gap": r.gap.as_ref().map(|g| g.to_string()),
                "bounding_poly": r.bounding_poly().to_string(),
            });
            if cli.approx {
                v["approx_non_authoritative"] = json!({ "c": approxes(&r.c) });
            }
            print_json(out, &v)
        }
        Command::ClosedForm { poly, tighten } => {
            let (cf, _) = build_with_oracle(poly, *tighten)?;
            let mut v = cf.to_json();
            v["poly"] = json!(poly.poly.to_string());
            if cli.approx {
                let consts: Vec<Rational> = cf.residues.iter().map(|r| r.constant.clone()).collect();
                v["approx_non_authoritative"] = json!({
                    "c": approxes(&cf.solution.c),
                    "constants": approxes(&consts),
                });
            }
            print_json(out, &v)
        }
        Command::An { poly, n, method, tighten } => {
            let value = match method {
                Method::Oracle => TailOracle::new(&poly.poly)?.a_n(*n)?.a_n,
                Method::Closed => build_with_oracle(poly, *tighten)?.0.eval_a_n(*n)?,
                Method::Both => {
                    let (cf, oracle) = build_with_oracle(poly, *tighten)?;
                    let closed = cf.formula_value(*n)?;
                    let truth = oracle.a_n(*n)?.a_n;
                    if closed != truth {
                        return Err(CliError::Mismatch(format!(
                            "a_{n}: closed form gives {closed}, oracle gives {truth}"
                        )));
                    }
                    if BigInt::from(*n) < *cf.valid_from() {
                        writeln!(err, "note: n = {n} is below the certified threshold {}", cf.valid_from())?;
                    }
                    closed
                }
            };
            writeln!(out, "{value}")?;
            Ok(())
        }
        Command::Verify { poly, from, to } => {
            if from > to {
                return Err(CliError::Usage(format!("empty range {from}..={to}")));
            }
            let (cf, oracle) = build_with_oracle(poly, false)?;
            let report = verify_range(&cf, &oracle, *from, *to);
            for line in &report.lines {
                writeln!(out, "{}", line.to_json())?;
            }
            let bad = report.mismatches().count();
            writeln!(
                err,
                "verified {from}..={to}: {bad} mismatches; certified N = {}; agreement from n = {}",
                cf.threshold,
                report.agreement_floor.map_or("-".to_string(), |n| n.to_string())
            )?;
            if bad > 0 {
                return Err(CliError::Mismatch(format!("{bad} mismatches")));
            }
            Ok(())
        }
        Command::Table { poly, from, to, format } => {
            if from > to {
                return Err(CliError::Usage(format!("empty range {from}..={to}")));
            }
            let (cf, oracle) = build_with_oracle(poly, false)?;
            let rows: Result<Vec<(u64, BigInt, &str)>, CliError> = (*from..=*to)
                .into_par_iter()
                .map(|n| match cf.eval_a_n(n) {
                    Ok(a) => Ok((n, a, "closed")),
                    Err(_) => Ok((n, oracle.a_n(n)?.a_n, "oracle")),
                })
                .collect();
            let rows = rows?;
            match format {
                Format::Json => {
                    let v: Vec<Value> = rows
                        .iter()
                        .map(|(n, a, s)| json!({"n": n, "a_n": big_json(a), "source": s}))
                        .collect();
                    print_json(out, &Value::Array(v))
                }
                Format::Csv => {
                    writeln!(out, "n,a_n,source")?;
                    for (n, a, s) in &rows {
                        writeln!(out, "{n},{a},{s}")?;
                    }
                    Ok(())
                }
                Format::Latex => {
                    writeln!(out, "\\begin{{tabular}}{{rr}}\n$n$ & $a_n$ \\\\\n\\hline")?;
                    for (n, a, _) in &rows {
                        writeln!(out, "{n} & {a} \\\\")?;
                    }
                    writeln!(out, "\\end{{tabular}}")?;
                    Ok(())
                }
            }
        }
        Command::ExploreCk { family, kmin, kmax, dmax, format } => {
            let family: Family = family.parse()?;
            let mut table = tabulate(&family, *kmin, *kmax)?;
            for i in 0..table.max_index() {
                match table.interpolate_ci(i, *dmax) {
                    Ok(_) | Err(ExploreError::InsufficientRows { .. }) => {}
                    Err(e) => return Err(e.into()),
                }
            }
            match format {
                Format::Json => print_json(out, &table.to_json()),
                Format::Csv => Ok(write!(out, "{}", table.to_csv())?),
                Format::Latex => Ok(write!(out, "{}", table.to_latex())?),
            }
        }
    }
}

/// Threshold as `u64` when it fits.
pub fn threshold_u64(cf: &ClosedForm) -> Option<u64> {
    cf.threshold.to_u64()
}
