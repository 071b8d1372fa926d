//! qphi: q-series expansion and congruence verification at the command
//! line.
//!
//! Subcommands:
//!
//! - `expand`: evaluate an expression and print its coefficients;
//! - `verify`: check that two expressions expand to the same series;
//! - `congruence`: check that coefficients vanish modulo m along an
//!   arithmetic progression of exponents;
//! - `oracle`: run the independent constant-term counters;
//! - `residues`: solve a weighted double sum's exponent congruence over
//!   residue pairs, optionally against a completed-square form;
//! - `suite`: run a named suite of claims from the built-in battery or
//!   from a TOML fixture file.
//!
//! Exit status is 0 when everything verifies, 1 when a claim is violated,
//! and 2 for usage or evaluation errors. Diagnostics go to the error
//! stream; reports go to standard output or to `--out`. Structured output
//! is byte-identical across runs except for the `elapsed_ms` field.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use qphi_core::arithmetic::{set_karatsuba_threshold, set_parallel_enabled};
use qphi_core::bivariate::{
    cphi_oracle_with_limit, phi_oracle_with_limit, DEFAULT_ORACLE_LIMIT,
};
use qphi_core::expr::SeriesExpr;
use qphi_core::fixtures::FixtureSet;
use qphi_core::io::{to_tsv, SeriesDocument};
use qphi_core::parse::{parse_completed_square, parse_expr};
use qphi_core::products::DoubleSumForm;
use qphi_core::verify::{
    completed_square_equivalence, residue_solutions, verify_congruence, verify_identity,
    CongruenceClaim, Counterexample, Evaluator, ReportDocument, Status, VerificationReport,
};
use qphi_core::Series;

#[derive(Parser)]
#[command(name = "qphi", version, about = "Exact q-series expansion and congruence verification")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalArgs {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write the report to this path instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Disable the parallel execution paths.
    #[arg(long, global = true)]
    sequential: bool,
    /// Use Karatsuba multiplication for series of at least this many
    /// coefficients.
    #[arg(long, global = true, value_name = "N")]
    karatsuba_threshold: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Line-oriented text.
    Text,
    /// A single JSON document.
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Expand an expression and print its coefficients.
    Expand {
        /// Expression in the series language, e.g. "P(1,1,-4)".
        #[arg(long)]
        expr: String,
        /// Truncation order (largest exponent kept).
        #[arg(long, env = "QPHI_ORDER")]
        order: usize,
    },
    /// Check that two expressions expand to the same series.
    Verify {
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
        #[arg(long, env = "QPHI_ORDER")]
        order: usize,
        /// Label for the report; defaults to the normalized equation.
        #[arg(long)]
        claim: Option<String>,
    },
    /// Check that an expression's coefficients vanish mod m on a
    /// progression of exponents.
    Congruence {
        #[arg(long)]
        expr: String,
        #[arg(long = "mod", value_name = "M")]
        modulus: u64,
        /// Progression step: exponents step*n + residue are checked.
        #[arg(long)]
        step: u64,
        #[arg(long)]
        residue: u64,
        #[arg(long, env = "QPHI_ORDER")]
        order: usize,
    },
    /// Run a constant-term oracle and print its counting sequence.
    Oracle {
        /// Count k-colored two-row arrays (distinct entries per row).
        #[arg(long, value_name = "K", conflicts_with = "repetitions", required_unless_present = "repetitions")]
        colors: Option<u32>,
        /// Count arrays with entries repeating at most k times per row.
        #[arg(long, value_name = "K")]
        repetitions: Option<u32>,
        #[arg(long, env = "QPHI_ORDER")]
        order: usize,
        /// Largest order the oracle will attempt.
        #[arg(long, default_value_t = DEFAULT_ORACLE_LIMIT)]
        limit: usize,
    },
    /// Solve a double sum's exponent congruence over all residue pairs
    /// mod an odd prime, optionally checking a completed-square form.
    Residues {
        /// Multiplier of the triangular-number part of the exponent.
        #[arg(long)]
        tri: u32,
        /// Multiplier of the pentagonal-number part of the exponent.
        #[arg(long)]
        pent: u32,
        #[arg(long = "mod", value_name = "P")]
        modulus: u64,
        /// Residue class of exponents to solve for.
        #[arg(long)]
        target: u64,
        /// Completed-square form, e.g. "3*(2k+1)^2+(6m-1)^2", that must
        /// pick out exactly the exponents in the target class.
        #[arg(long)]
        square: Option<String>,
    },
    /// Run every claim in a named suite.
    Suite {
        #[arg(long)]
        name: String,
        /// Run all claims at this order instead of their stored orders.
        #[arg(long)]
        order: Option<usize>,
        /// Load claims from a TOML fixture file instead of the built-in
        /// battery.
        #[arg(long, value_name = "PATH")]
        file: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if cli.global.sequential {
        set_parallel_enabled(false);
    }
    if let Some(threshold) = cli.global.karatsuba_threshold {
        set_karatsuba_threshold(Some(threshold));
    }
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, String> {
    match &cli.command {
        Command::Expand { expr, order } => {
            let parsed = parse_expr(expr).map_err(|e| e.to_string())?;
            let series = evaluate(&parsed, *order)?;
            emit(&cli.global, &render_series(&cli.global, &series))?;
            Ok(0)
        }
        Command::Verify {
            lhs,
            rhs,
            order,
            claim,
        } => {
            let left = parse_expr(lhs).map_err(|e| e.to_string())?;
            let right = parse_expr(rhs).map_err(|e| e.to_string())?;
            let label = claim
                .clone()
                .unwrap_or_else(|| format!("{left} = {right}"));
            let mut evaluator = Evaluator::with_standard_env();
            let report = verify_identity(&mut evaluator, label, &left, &right, *order);
            finish_report(&cli.global, &report)
        }
        Command::Congruence {
            expr,
            modulus,
            step,
            residue,
            order,
        } => {
            let parsed = parse_expr(expr).map_err(|e| e.to_string())?;
            let claim = CongruenceClaim {
                description: format!(
                    "{parsed} == 0 (mod {modulus}) on exponents {step}n+{residue}"
                ),
                expr: parsed,
                modulus: *modulus,
                step: *step,
                residue: *residue,
                order: *order,
            };
            let mut evaluator = Evaluator::with_standard_env();
            let report = verify_congruence(&mut evaluator, &claim);
            finish_report(&cli.global, &report)
        }
        Command::Oracle {
            colors,
            repetitions,
            order,
            limit,
        } => {
            let series = match (colors, repetitions) {
                (Some(k), None) => cphi_oracle_with_limit(*k, *order, *limit),
                (None, Some(k)) => phi_oracle_with_limit(*k, *order, *limit),
                _ => unreachable!("clap enforces exactly one of --colors/--repetitions"),
            }
            .map_err(|e| e.to_string())?;
            emit(&cli.global, &render_series(&cli.global, &series))?;
            Ok(0)
        }
        Command::Residues {
            tri,
            pent,
            modulus,
            target,
            square,
        } => run_residues(&cli.global, *tri, *pent, *modulus, *target, square.as_deref()),
        Command::Suite { name, order, file } => {
            let loaded;
            let set = match file {
                Some(path) => {
                    let text = std::fs::read_to_string(path)
                        .map_err(|e| format!("{}: {e}", path.display()))?;
                    loaded = FixtureSet::from_toml_str(&text).map_err(|e| e.to_string())?;
                    &loaded
                }
                None => FixtureSet::builtin(),
            };
            let reports = set.run_suite(name, *order).map_err(|e| e.to_string())?;
            emit(&cli.global, &render_suite(&cli.global, name, &reports))?;
            Ok(reports
                .iter()
                .map(|r| status_code(r.status))
                .max()
                .unwrap_or(0))
        }
    }
}

fn evaluate(expr: &SeriesExpr, order: usize) -> Result<Series, String> {
    Evaluator::with_standard_env()
        .eval(expr, order)
        .map_err(|e| e.to_string())
}

fn status_code(status: Status) -> u8 {
    match status {
        Status::Verified => 0,
        Status::Violated => 1,
        Status::Error => 2,
    }
}

fn finish_report(global: &GlobalArgs, report: &VerificationReport) -> Result<u8, String> {
    emit(global, &render_report(global, report))?;
    Ok(status_code(report.status))
}

fn emit(global: &GlobalArgs, text: &str) -> Result<(), String> {
    match &global.out {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

fn to_pretty_json(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    text
}

fn render_series(global: &GlobalArgs, series: &Series) -> String {
    match global.format {
        Format::Text => to_tsv(series),
        Format::Structured => to_pretty_json(&SeriesDocument::from_series(series)),
    }
}

fn render_report(global: &GlobalArgs, report: &VerificationReport) -> String {
    match global.format {
        Format::Text => render_report_text(report),
        Format::Structured => to_pretty_json(&ReportDocument::from_report(report)),
    }
}

fn render_report_text(report: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "claim: {}", report.claim);
    let _ = writeln!(out, "status: {}", report.status);
    let _ = writeln!(out, "order: {}", report.order);
    if let Some((step, residue)) = report.progression {
        let _ = writeln!(out, "progression: {step}n+{residue}");
    }
    if let Some(modulus) = report.modulus {
        let _ = writeln!(out, "modulus: {modulus}");
    }
    if let Some(detail) = &report.detail {
        let _ = writeln!(out, "detail: {detail}");
    }
    match &report.counterexample {
        Some(Counterexample::Coefficient { exponent, value }) => {
            let _ = writeln!(out, "counterexample: coefficient of q^{exponent} is {value}");
        }
        Some(Counterexample::ResiduePair { k, m }) => {
            let _ = writeln!(out, "counterexample: residue pair (k, m) = ({k}, {m})");
        }
        None => {}
    }
    let _ = writeln!(out, "elapsed: {}ms", report.elapsed.as_millis());
    out
}

fn render_suite(global: &GlobalArgs, name: &str, reports: &[VerificationReport]) -> String {
    match global.format {
        Format::Text => {
            let mut out = String::new();
            let mut tallies = [0usize; 3];
            for report in reports {
                tallies[status_code(report.status) as usize] += 1;
                let _ = writeln!(
                    out,
                    "{:<8} {} (order {}, {}ms)",
                    report.status.to_string(),
                    report.claim,
                    report.order,
                    report.elapsed.as_millis()
                );
                if report.status != Status::Verified {
                    if let Some(detail) = &report.detail {
                        let _ = writeln!(out, "         {detail}");
                    }
                }
            }
            let _ = writeln!(
                out,
                "suite {name}: {} verified, {} violated, {} errors",
                tallies[0], tallies[1], tallies[2]
            );
            out
        }
        Format::Structured => {
            let documents: Vec<ReportDocument> =
                reports.iter().map(ReportDocument::from_report).collect();
            to_pretty_json(&documents)
        }
    }
}

// ---------------------------------------------------------------------------
// residue analysis
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct ResidueRunDocument {
    form: String,
    modulus: u64,
    target: u64,
    solutions: Vec<[u64; 2]>,
    weights_vanish: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    square: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    square_equivalent: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<[u64; 2]>,
}

fn run_residues(
    global: &GlobalArgs,
    tri: u32,
    pent: u32,
    modulus: u64,
    target: u64,
    square: Option<&str>,
) -> Result<u8, String> {
    let form = DoubleSumForm::new(tri, pent).map_err(|e| e.to_string())?;
    let analysis = residue_solutions(&form, modulus, target).map_err(|e| e.to_string())?;
    let mut document = ResidueRunDocument {
        form: SeriesExpr::DoubleSum(form).to_string(),
        modulus,
        target,
        solutions: analysis.solutions.iter().map(|&(k, m)| [k, m]).collect(),
        weights_vanish: analysis.weights_vanish,
        square: None,
        square_equivalent: None,
        witness: None,
    };
    if let Some(text) = square {
        let parsed = parse_completed_square(text).map_err(|e| e.to_string())?;
        let equivalence =
            completed_square_equivalence(&form, target, &parsed, modulus).map_err(|e| e.to_string())?;
        document.square = Some(parsed.to_string());
        document.square_equivalent = Some(equivalence.equivalent);
        document.witness = equivalence.witness.map(|(k, m)| [k, m]);
    }

    let text = match global.format {
        Format::Structured => to_pretty_json(&document),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "form: {}", document.form);
            let _ = writeln!(out, "modulus: {modulus}");
            let _ = writeln!(out, "target: {target}");
            let pairs: Vec<String> = document
                .solutions
                .iter()
                .map(|[k, m]| format!("({k}, {m})"))
                .collect();
            let _ = writeln!(out, "solutions: {}", pairs.join(" "));
            let _ = writeln!(
                out,
                "weights vanish: {}",
                if document.weights_vanish { "yes" } else { "no" }
            );
            if let Some(square) = &document.square {
                let _ = writeln!(out, "square: {square}");
                let _ = writeln!(
                    out,
                    "square equivalent: {}",
                    if document.square_equivalent == Some(true) {
                        "yes"
                    } else {
                        "no"
                    }
                );
                if let Some([k, m]) = document.witness {
                    let _ = writeln!(out, "witness: ({k}, {m})");
                }
            }
            out
        }
    };
    emit(global, &text)?;

    let verified = analysis.weights_vanish && document.square_equivalent != Some(false);
    Ok(if verified { 0 } else { 1 })
}
