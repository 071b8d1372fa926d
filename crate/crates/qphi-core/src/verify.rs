//! Expression evaluation and claim verification.
//!
//! An [`Evaluator`] turns a [`SeriesExpr`] into a [`Series`] at a requested
//! truncation order. Evaluation is demand-driven from the top: a dissection
//! node evaluates its child at order `t*n + r` so the dissected series comes
//! out at exactly order n, and every other node passes the requested order
//! through unchanged. Named leaves are resolved against an [`Env`], whose
//! bindings are order-indexed generators, so `@cphi4` at order 40 runs the
//! constant-term oracle at order 40.
//!
//! Verification produces [`VerificationReport`]s rather than booleans. A
//! report says what was claimed, whether it was verified, violated, or
//! failed to evaluate, and on violation carries the first counterexample:
//! the offending coefficient for series claims, or the offending residue
//! pair for quadratic-form claims. Reports serialize through
//! [`ReportDocument`], which is deterministic except for the elapsed time.
//!
//! The quadratic-form side handles the residue bookkeeping behind the
//! congruences: which (k, m) classes mod p let a double sum deposit terms
//! on a progression, whether a completed-square form picks out exactly
//! those classes, and whether the surviving weights all vanish mod p.

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;
use std::time::{Duration, Instant};

use crate::arithmetic::{
    add, dissect, invert, mul, pow, reduce_mod, sub, substitute_power, truncate,
};
use crate::bivariate::{cphi_oracle, partition_numbers, phi_oracle};
use crate::error::{Error, Result};
use crate::expr::{CompletedSquareForm, SeriesExpr};
use crate::products::{theta_phi, theta_psi, weighted_double_sum, DoubleSumForm, Expander};
use crate::series::Series;

// ---------------------------------------------------------------------------
// evaluation environment
// ---------------------------------------------------------------------------

type Generator = Arc<dyn Fn(usize) -> Result<Series> + Send + Sync>;

/// Named series available to `@name` leaves. Each binding is a generator
/// indexed by truncation order.
#[derive(Clone, Default)]
pub struct Env {
    bindings: BTreeMap<String, Generator>,
}

impl Env {
    /// No bindings.
    pub fn empty() -> Env {
        Env::default()
    }

    /// The stock bindings: `@p` for the partition numbers and the
    /// self-checking constant-term oracles `@cphi1`, `@cphi2`, `@cphi4`,
    /// and `@phi4`.
    pub fn standard() -> Env {
        let mut env = Env::empty();
        env.bind("p", |order| {
            Ok(Series::from_coeffs(partition_numbers(order)))
        });
        env.bind("cphi1", |order| cphi_oracle(1, order));
        env.bind("cphi2", |order| cphi_oracle(2, order));
        env.bind("cphi4", |order| cphi_oracle(4, order));
        env.bind("phi4", |order| phi_oracle(4, order));
        env
    }

    /// Binds `name` to an order-indexed generator, replacing any previous
    /// binding.
    pub fn bind(
        &mut self,
        name: impl Into<String>,
        generator: impl Fn(usize) -> Result<Series> + Send + Sync + 'static,
    ) {
        self.bindings.insert(name.into(), Arc::new(generator));
    }

    /// Binds `name` to a fixed series; requests at or below its order are
    /// served by truncation, deeper requests are errors.
    pub fn bind_series(&mut self, name: impl Into<String>, series: Series) {
        self.bind(name, move |order| truncate(&series, order));
    }

    /// Resolves a name at the requested order.
    pub fn resolve(&self, name: &str, order: usize) -> Result<Series> {
        match self.bindings.get(name) {
            Some(generator) => generator(order),
            None => Err(Error::UnboundName(name.to_string())),
        }
    }

    /// Bound names, ascending.
    pub fn names(&self) -> Vec<&str> {
        self.bindings.keys().map(|s| s.as_str()).collect()
    }
}

impl fmt::Debug for Env {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Env").field("names", &self.names()).finish()
    }
}

// ---------------------------------------------------------------------------
// evaluator
// ---------------------------------------------------------------------------

/// Evaluates expression trees to series, caching product expansions.
pub struct Evaluator {
    expander: Expander,
    env: Env,
}

impl Evaluator {
    pub fn new(env: Env) -> Evaluator {
        Evaluator {
            expander: Expander::new(),
            env,
        }
    }

    /// Evaluator with the [`Env::standard`] bindings.
    pub fn with_standard_env() -> Evaluator {
        Evaluator::new(Env::standard())
    }

    pub fn env(&self) -> &Env {
        &self.env
    }

    pub fn env_mut(&mut self) -> &mut Env {
        &mut self.env
    }

    /// Evaluates `expr` truncated at `order`. Dissection nodes demand
    /// order `t*order + r` from their child; all other nodes pass `order`
    /// through.
    pub fn eval(&mut self, expr: &SeriesExpr, order: usize) -> Result<Series> {
        match expr {
            SeriesExpr::Integer(n) => Ok(Series::monomial(*n, 0, order)),
            SeriesExpr::Q => Ok(Series::monomial(1, 1, order)),
            SeriesExpr::Pochhammer(factor) => self.expander.pochhammer(factor, order),
            SeriesExpr::ThetaPhi(t) => Ok(theta_phi(*t, order)),
            SeriesExpr::ThetaPsi(t) => Ok(theta_psi(*t, order)),
            SeriesExpr::DoubleSum(form) => Ok(weighted_double_sum(form, order)),
            SeriesExpr::Named(name) => self.env.resolve(name, order),
            SeriesExpr::Add(l, r) => {
                let l = self.eval(l, order)?;
                let r = self.eval(r, order)?;
                add(&l, &r)
            }
            SeriesExpr::Sub(l, r) => {
                let l = self.eval(l, order)?;
                let r = self.eval(r, order)?;
                sub(&l, &r)
            }
            SeriesExpr::Mul(l, r) => {
                let l = self.eval(l, order)?;
                let r = self.eval(r, order)?;
                mul(&l, &r)
            }
            SeriesExpr::Pow(base, exponent) => {
                let base = self.eval(base, order)?;
                pow(&base, *exponent as i64)
            }
            SeriesExpr::Invert(inner) => {
                let inner = self.eval(inner, order)?;
                invert(&inner)
            }
            SeriesExpr::Substitute(inner, t) => {
                let inner = self.eval(inner, order)?;
                substitute_power(&inner, *t)
            }
            SeriesExpr::Dissect(inner, t, r) => {
                let child = self.eval(inner, *t as usize * order + *r as usize)?;
                dissect(&child, *t, *r)
            }
            SeriesExpr::ReduceMod(inner, m) => {
                let inner = self.eval(inner, order)?;
                reduce_mod(&inner, *m)
            }
        }
    }
}

// ---------------------------------------------------------------------------
// reports
// ---------------------------------------------------------------------------

/// Outcome of a verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    /// The claim holds everywhere it was checked.
    Verified,
    /// The claim is false; the report carries the first counterexample.
    Violated,
    /// The claim could not be evaluated.
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let word = match self {
            Status::Verified => "verified",
            Status::Violated => "violated",
            Status::Error => "error",
        };
        write!(f, "{word}")
    }
}

/// The first witness against a violated claim.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Counterexample {
    /// A series coefficient that should have been zero.
    Coefficient { exponent: usize, value: BigInt },
    /// A residue pair where two quadratic conditions disagree.
    ResiduePair { k: u64, m: u64 },
}

/// What was claimed and what happened when it was checked.
#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub claim: String,
    pub status: Status,
    /// Human-oriented elaboration: the error message, or where the first
    /// counterexample lives.
    pub detail: Option<String>,
    pub order: usize,
    /// (step, residue) when the claim quantified over a progression.
    pub progression: Option<(u64, u64)>,
    pub modulus: Option<u64>,
    pub counterexample: Option<Counterexample>,
    pub elapsed: Duration,
}

impl VerificationReport {
    fn begin(claim: impl Into<String>, order: usize) -> VerificationReport {
        VerificationReport {
            claim: claim.into(),
            status: Status::Verified,
            detail: None,
            order,
            progression: None,
            modulus: None,
            counterexample: None,
            elapsed: Duration::ZERO,
        }
    }

    fn fail_eval(mut self, error: &Error, started: Instant) -> VerificationReport {
        self.status = Status::Error;
        self.detail = Some(error.to_string());
        self.elapsed = started.elapsed();
        self
    }
}

/// Serializable rendering of a [`VerificationReport`]. Everything but
/// `elapsed_ms` is deterministic for a given claim and build.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportDocument {
    pub claim: String,
    pub status: String,
    pub order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub progression: Option<ProgressionDocument>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleDocument>,
    pub elapsed_ms: u128,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ProgressionDocument {
    pub step: u64,
    pub residue: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum CounterexampleDocument {
    Coefficient { exponent: usize, coefficient: String },
    ResiduePair { k: u64, m: u64 },
}

impl ReportDocument {
    pub fn from_report(report: &VerificationReport) -> ReportDocument {
        ReportDocument {
            claim: report.claim.clone(),
            status: report.status.to_string(),
            order: report.order,
            progression: report
                .progression
                .map(|(step, residue)| ProgressionDocument { step, residue }),
            modulus: report.modulus,
            detail: report.detail.clone(),
            counterexample: report.counterexample.as_ref().map(|c| match c {
                Counterexample::Coefficient { exponent, value } => {
                    CounterexampleDocument::Coefficient {
                        exponent: *exponent,
                        coefficient: value.to_string(),
                    }
                }
                Counterexample::ResiduePair { k, m } => {
                    CounterexampleDocument::ResiduePair { k: *k, m: *m }
                }
            }),
            elapsed_ms: report.elapsed.as_millis(),
        }
    }
}

// ---------------------------------------------------------------------------
// identity and congruence checks
// ---------------------------------------------------------------------------

/// Checks that two expressions expand to the same series at `order`. A
/// violation reports the first exponent where they differ and the value of
/// the difference there; mixing rings (one side reduced, the other not, or
/// different moduli) is an evaluation error, not a violation.
pub fn verify_identity(
    evaluator: &mut Evaluator,
    claim: impl Into<String>,
    lhs: &SeriesExpr,
    rhs: &SeriesExpr,
    order: usize,
) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::begin(claim, order);
    let difference = (|| -> Result<Series> {
        let lhs = evaluator.eval(lhs, order)?;
        let rhs = evaluator.eval(rhs, order)?;
        sub(&lhs, &rhs)
    })();
    let difference = match difference {
        Ok(series) => series,
        Err(error) => return report.fail_eval(&error, started),
    };
    report.modulus = difference.modulus();
    if let Some(exponent) = difference.valuation() {
        let value = difference.coeff(exponent).expect("valuation in range").clone();
        report.status = Status::Violated;
        report.detail = Some(format!("sides first differ at q^{exponent}"));
        report.counterexample = Some(Counterexample::Coefficient { exponent, value });
    }
    report.elapsed = started.elapsed();
    report
}

/// A congruence along an arithmetic progression: every coefficient of
/// `expr` on exponents `step*n + residue` up to `order` must vanish
/// modulo `modulus`.
#[derive(Debug, Clone)]
pub struct CongruenceClaim {
    pub description: String,
    pub expr: SeriesExpr,
    pub modulus: u64,
    pub step: u64,
    pub residue: u64,
    pub order: usize,
}

/// Checks a [`CongruenceClaim`]. An expression already reduced to the
/// claim's modulus is used as is; an integer expression is reduced; a
/// mismatched modulus is an error.
pub fn verify_congruence(
    evaluator: &mut Evaluator,
    claim: &CongruenceClaim,
) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport::begin(claim.description.clone(), claim.order);
    report.progression = Some((claim.step, claim.residue));
    report.modulus = Some(claim.modulus);

    let reduced = (|| -> Result<Series> {
        if claim.step == 0 {
            return Err(Error::ZeroStep);
        }
        if claim.residue >= claim.step {
            return Err(Error::ResidueOutOfRange {
                residue: claim.residue,
                step: claim.step,
            });
        }
        let series = evaluator.eval(&claim.expr, claim.order)?;
        match series.modulus() {
            None => reduce_mod(&series, claim.modulus),
            Some(m) if m == claim.modulus => Ok(series),
            Some(m) => Err(Error::ModulusMismatch {
                left: Some(m),
                right: Some(claim.modulus),
            }),
        }
    })();
    let reduced = match reduced {
        Ok(series) => series,
        Err(error) => return report.fail_eval(&error, started),
    };

    let mut n = claim.residue as usize;
    while n <= claim.order {
        let value = reduced.coeff(n).expect("progression within order");
        if !value.is_zero() {
            report.status = Status::Violated;
            report.detail = Some(format!(
                "coefficient of q^{n} reduces to {value} (mod {})",
                claim.modulus
            ));
            report.counterexample = Some(Counterexample::Coefficient {
                exponent: n,
                value: value.clone(),
            });
            break;
        }
        n += claim.step as usize;
    }
    report.elapsed = started.elapsed();
    report
}

// ---------------------------------------------------------------------------
// residue analysis of double sums
// ---------------------------------------------------------------------------

fn is_odd_prime(n: u64) -> bool {
    if n < 3 || n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

fn require_odd_prime(modulus: u64) -> Result<()> {
    if is_odd_prime(modulus) {
        Ok(())
    } else {
        Err(Error::NotOddPrime(modulus))
    }
}

/// Exponent of the (k, m) term of a double sum, reduced mod `modulus`.
/// Both the triangular and pentagonal pieces are periodic in their argument
/// mod an odd modulus, so representatives in 0..modulus determine every
/// class.
fn exponent_residue(form: &DoubleSumForm, k: u64, m: u64, modulus: u64) -> u64 {
    form.exponent(k, m as i64) % modulus
}

/// Which residue classes (k, m) mod p land a double-sum term on exponents
/// congruent to `target`, and whether the weights there all vanish mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResidueAnalysis {
    pub form: DoubleSumForm,
    pub modulus: u64,
    pub target: u64,
    /// Solution pairs (k mod p, m mod p), row-major ascending.
    pub solutions: Vec<(u64, u64)>,
    /// True when every solution pair has weight divisible by p, which is
    /// what makes the corresponding progression vanish mod p.
    pub weights_vanish: bool,
}

/// Solves `exponent(k, m) = target (mod modulus)` over residue pairs.
/// The modulus must be an odd prime.
pub fn residue_solutions(
    form: &DoubleSumForm,
    modulus: u64,
    target: u64,
) -> Result<ResidueAnalysis> {
    require_odd_prime(modulus)?;
    if target >= modulus {
        return Err(Error::ResidueOutOfRange {
            residue: target,
            step: modulus,
        });
    }
    let mut solutions = Vec::new();
    let mut weights_vanish = true;
    for k in 0..modulus {
        for m in 0..modulus {
            if exponent_residue(form, k, m, modulus) == target {
                // The weight is +-(2k+1); its divisibility by p depends
                // only on k mod p.
                if (2 * k + 1) % modulus != 0 {
                    weights_vanish = false;
                }
                solutions.push((k, m));
            }
        }
    }
    Ok(ResidueAnalysis {
        form: *form,
        modulus,
        target,
        solutions,
        weights_vanish,
    })
}

/// Residue pairs (k mod p, m mod p) where a completed-square form
/// vanishes. The modulus must be an odd prime.
pub fn completed_square_solutions(
    square: &CompletedSquareForm,
    modulus: u64,
) -> Result<Vec<(u64, u64)>> {
    require_odd_prime(modulus)?;
    let mut zeros = Vec::new();
    for k in 0..modulus {
        for m in 0..modulus {
            if square.residue(k as i64, m as i64, modulus) == 0 {
                zeros.push((k, m));
            }
        }
    }
    Ok(zeros)
}

/// Whether a completed-square form characterizes a double sum's
/// progression: over all residue pairs mod p, `exponent = target (mod p)`
/// must hold exactly when the square form vanishes mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareEquivalence {
    pub equivalent: bool,
    /// First residue pair where the two conditions disagree, row-major.
    pub witness: Option<(u64, u64)>,
}

pub fn completed_square_equivalence(
    form: &DoubleSumForm,
    target: u64,
    square: &CompletedSquareForm,
    modulus: u64,
) -> Result<SquareEquivalence> {
    require_odd_prime(modulus)?;
    if target >= modulus {
        return Err(Error::ResidueOutOfRange {
            residue: target,
            step: modulus,
        });
    }
    for k in 0..modulus {
        for m in 0..modulus {
            let on_progression = exponent_residue(form, k, m, modulus) == target;
            let square_vanishes = square.residue(k as i64, m as i64, modulus) == 0;
            if on_progression != square_vanishes {
                return Ok(SquareEquivalence {
                    equivalent: false,
                    witness: Some((k, m)),
                });
            }
        }
    }
    Ok(SquareEquivalence {
        equivalent: true,
        witness: None,
    })
}

/// Walks the actual double-sum terms up to `order` and returns the first
/// term on the progression whose weight fails to vanish mod p, if any.
/// `None` means every deposited term is divisible by p, confirming the
/// residue analysis against the concrete series.
pub fn confirm_double_sum_weights(
    form: &DoubleSumForm,
    modulus: u64,
    target: u64,
    order: usize,
) -> Result<Option<(u64, i64)>> {
    require_odd_prime(modulus)?;
    if target >= modulus {
        return Err(Error::ResidueOutOfRange {
            residue: target,
            step: modulus,
        });
    }
    let mut offender = None;
    form.for_each_term(order, |k, m, exponent, weight| {
        if offender.is_some() {
            return;
        }
        if exponent % modulus == target && weight.rem_euclid(modulus as i64) != 0 {
            offender = Some((k, m));
        }
    });
    Ok(offender)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_completed_square, parse_expr};

    fn expr(text: &str) -> SeriesExpr {
        parse_expr(text).expect("test expression parses")
    }

    // ======================================================================
    // environment and evaluation
    // ======================================================================

    #[test]
    fn standard_env_binds_the_oracles() {
        let env = Env::standard();
        assert_eq!(env.names(), vec!["cphi1", "cphi2", "cphi4", "p", "phi4"]);
        let p = env.resolve("p", 10).unwrap();
        assert_eq!(p.coeff(10), Some(&BigInt::from(42)));
        assert_eq!(
            env.resolve("nope", 5).unwrap_err(),
            Error::UnboundName("nope".to_string())
        );
    }

    #[test]
    fn bound_series_serve_truncations_only() {
        let mut env = Env::empty();
        env.bind_series("fixed", Series::from_i64(&[1, 2, 3]));
        assert_eq!(env.resolve("fixed", 1).unwrap(), Series::from_i64(&[1, 2]));
        assert_eq!(
            env.resolve("fixed", 5).unwrap_err(),
            Error::TruncateBeyondOrder {
                requested: 5,
                order: 2
            }
        );
    }

    #[test]
    fn evaluation_covers_the_leaf_vocabulary() {
        let mut ev = Evaluator::with_standard_env();
        assert_eq!(ev.eval(&expr("7"), 3).unwrap(), Series::from_i64(&[7, 0, 0, 0]));
        assert_eq!(ev.eval(&expr("q"), 3).unwrap(), Series::from_i64(&[0, 1, 0, 0]));
        assert_eq!(
            ev.eval(&expr("q^2*3"), 4).unwrap(),
            Series::from_i64(&[0, 0, 3, 0, 0])
        );
        // Euler's product inverted is the partition series.
        let lhs = ev.eval(&expr("P(1,1,-1)"), 12).unwrap();
        let rhs = ev.eval(&expr("@p"), 12).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn dissection_demands_a_deeper_child_order() {
        let mut ev = Evaluator::with_standard_env();
        // Even part of the partition series at order 10 needs p(0..=20).
        let even = ev.eval(&expr("dissect(P(1,1,-1),2,0)"), 10).unwrap();
        let p = partition_numbers(20);
        assert_eq!(even.order(), 10);
        for n in 0..=10 {
            assert_eq!(even.coeff(n), Some(&p[2 * n]), "p({}) via dissection", 2 * n);
        }
        // Nested dissection composes the demands.
        let nested = ev.eval(&expr("dissect(dissect(P(1,1,-1),2,0),3,1)"), 3).unwrap();
        assert_eq!(nested.order(), 3);
        for n in 0..=3 {
            assert_eq!(nested.coeff(n), Some(&p[2 * (3 * n + 1)]));
        }
    }

    #[test]
    fn evaluation_reports_structural_errors() {
        let mut ev = Evaluator::with_standard_env();
        assert_eq!(
            ev.eval(&expr("inv(q)"), 5).unwrap_err(),
            Error::NonUnitConstant {
                constant: BigInt::zero(),
                modulus: None
            }
        );
        assert!(matches!(
            ev.eval(&expr("mod(mod(P(1,1,1),5),5)"), 5).unwrap_err(),
            Error::AlreadyReduced(5)
        ));
    }

    // ======================================================================
    // identity verification
    // ======================================================================

    #[test]
    fn identity_verifies_equal_sides() {
        let mut ev = Evaluator::with_standard_env();
        let report = verify_identity(
            &mut ev,
            "inverse Euler product counts partitions",
            &expr("P(1,1,-1)"),
            &expr("@p"),
            30,
        );
        assert_eq!(report.status, Status::Verified);
        assert_eq!(report.counterexample, None);
        assert_eq!(report.order, 30);
    }

    #[test]
    fn identity_reports_the_first_divergent_coefficient() {
        let mut ev = Evaluator::with_standard_env();
        let report = verify_identity(
            &mut ev,
            "a perturbed identity",
            &expr("P(1,1,1)"),
            &expr("P(1,1,1) + q^37"),
            50,
        );
        assert_eq!(report.status, Status::Violated);
        assert_eq!(
            report.counterexample,
            Some(Counterexample::Coefficient {
                exponent: 37,
                value: BigInt::from(-1)
            })
        );
        assert_eq!(report.detail.as_deref(), Some("sides first differ at q^37"));
    }

    #[test]
    fn identity_rejects_mixed_rings() {
        let mut ev = Evaluator::with_standard_env();
        let report = verify_identity(
            &mut ev,
            "mixed rings",
            &expr("mod(P(1,1,1),5)"),
            &expr("P(1,1,1)"),
            10,
        );
        assert_eq!(report.status, Status::Error);
        assert!(report.detail.unwrap().contains("modulo 5"));
    }

    // ======================================================================
    // congruence verification
    // ======================================================================

    fn congruence(text: &str, modulus: u64, step: u64, residue: u64, order: usize) -> CongruenceClaim {
        CongruenceClaim {
            description: format!("{text} along {step}n+{residue} mod {modulus}"),
            expr: expr(text),
            modulus,
            step,
            residue,
            order,
        }
    }

    #[test]
    fn congruence_holds_on_vanishing_progressions() {
        // The fifth power of Euler's product collapses mod 5 to a series
        // in q^5, so every non-multiple-of-5 progression vanishes.
        let mut ev = Evaluator::with_standard_env();
        for residue in [1, 2, 3, 4] {
            let claim = congruence("P(1,1,5)", 5, 5, residue, 60);
            let report = verify_congruence(&mut ev, &claim);
            assert_eq!(report.status, Status::Verified, "residue {residue}");
            assert_eq!(report.progression, Some((5, residue)));
        }
    }

    #[test]
    fn congruence_reports_the_first_bad_coefficient() {
        // The constant series 1 is not 0 mod 5 at exponent 0.
        let mut ev = Evaluator::with_standard_env();
        let report = verify_congruence(&mut ev, &congruence("1", 5, 5, 0, 20));
        assert_eq!(report.status, Status::Violated);
        assert_eq!(
            report.counterexample,
            Some(Counterexample::Coefficient {
                exponent: 0,
                value: BigInt::from(1)
            })
        );
    }

    #[test]
    fn congruence_accepts_prereduced_and_rejects_mismatched_moduli() {
        let mut ev = Evaluator::with_standard_env();
        let ok = verify_congruence(&mut ev, &congruence("mod(P(1,1,5),5)", 5, 5, 2, 40));
        assert_eq!(ok.status, Status::Verified);

        let bad = verify_congruence(&mut ev, &congruence("mod(P(1,1,5),3)", 5, 5, 2, 40));
        assert_eq!(bad.status, Status::Error);

        let zero_step = verify_congruence(&mut ev, &congruence("1", 5, 0, 0, 10));
        assert_eq!(zero_step.status, Status::Error);
    }

    // ======================================================================
    // report documents
    // ======================================================================

    #[test]
    fn report_documents_serialize_deterministically() {
        let mut ev = Evaluator::with_standard_env();
        let report = verify_congruence(&mut ev, &congruence("1", 5, 5, 0, 20));
        let mut doc = ReportDocument::from_report(&report);
        doc.elapsed_ms = 0;
        let json = serde_json::to_string_pretty(&doc).unwrap();
        assert!(json.contains("\"status\": \"violated\""));
        assert!(json.contains("\"exponent\": 0"));
        assert!(json.contains("\"coefficient\": \"1\""));
        assert!(json.contains("\"step\": 5"));
        let back: ReportDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
    }

    #[test]
    fn residue_pair_counterexamples_serialize() {
        let doc = CounterexampleDocument::ResiduePair { k: 0, m: 3 };
        let json = serde_json::to_string(&doc).unwrap();
        assert_eq!(json, "{\"k\":0,\"m\":3}");
        let back: CounterexampleDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
    }

    // ======================================================================
    // residue analysis
    // ======================================================================

    #[test]
    fn residue_solutions_for_the_two_working_forms() {
        // Exponents k(k+1) + m(3m-1) hit 3 mod 5 only from (k,m) = (2,1),
        // where the weight 2k+1 = 5 vanishes.
        let form = DoubleSumForm::new(2, 2).unwrap();
        let analysis = residue_solutions(&form, 5, 3).unwrap();
        assert_eq!(analysis.solutions, vec![(2, 1)]);
        assert!(analysis.weights_vanish);

        // Exponents k(k+1)/2 + 2m(3m-1) hit 2 mod 5 only from (2,1) too.
        let form = DoubleSumForm::new(1, 4).unwrap();
        let analysis = residue_solutions(&form, 5, 2).unwrap();
        assert_eq!(analysis.solutions, vec![(2, 1)]);
        assert!(analysis.weights_vanish);
    }

    #[test]
    fn residue_solutions_with_surviving_weights() {
        // Target 0 for the (2,2) form is reachable from k = 0 classes,
        // whose weights are units mod 5.
        let form = DoubleSumForm::new(2, 2).unwrap();
        let analysis = residue_solutions(&form, 5, 0).unwrap();
        assert_eq!(
            analysis.solutions,
            vec![(0, 0), (0, 2), (2, 3), (2, 4), (4, 0), (4, 2)]
        );
        assert!(!analysis.weights_vanish);
    }

    #[test]
    fn residue_analysis_requires_an_odd_prime() {
        let form = DoubleSumForm::new(2, 2).unwrap();
        assert_eq!(
            residue_solutions(&form, 4, 0).unwrap_err(),
            Error::NotOddPrime(4)
        );
        assert_eq!(
            residue_solutions(&form, 2, 0).unwrap_err(),
            Error::NotOddPrime(2)
        );
        assert_eq!(
            residue_solutions(&form, 9, 0).unwrap_err(),
            Error::NotOddPrime(9)
        );
        assert_eq!(
            residue_solutions(&form, 5, 5).unwrap_err(),
            Error::ResidueOutOfRange {
                residue: 5,
                step: 5
            }
        );
    }

    #[test]
    fn completed_squares_pick_out_the_solution_classes() {
        let square = parse_completed_square("3*(2k+1)^2+(6m-1)^2").unwrap();
        assert_eq!(completed_square_solutions(&square, 5).unwrap(), vec![(2, 1)]);

        let square = parse_completed_square("(2k+1)^2+8*(m-1)^2").unwrap();
        assert_eq!(completed_square_solutions(&square, 5).unwrap(), vec![(2, 1)]);
    }

    #[test]
    fn square_equivalence_accepts_the_right_forms() {
        let form = DoubleSumForm::new(2, 2).unwrap();
        let square = parse_completed_square("3*(2k+1)^2+(6m-1)^2").unwrap();
        let eq = completed_square_equivalence(&form, 3, &square, 5).unwrap();
        assert!(eq.equivalent);
        assert_eq!(eq.witness, None);

        let form = DoubleSumForm::new(1, 4).unwrap();
        let square = parse_completed_square("(2k+1)^2+8*(m-1)^2").unwrap();
        let eq = completed_square_equivalence(&form, 2, &square, 5).unwrap();
        assert!(eq.equivalent);
    }

    #[test]
    fn square_equivalence_rejects_a_wrong_form_with_a_witness() {
        // Dropping the multiplier 3 admits extra zeros, the first being
        // (k,m) = (0,3).
        let form = DoubleSumForm::new(2, 2).unwrap();
        let square = parse_completed_square("(2k+1)^2+(6m-1)^2").unwrap();
        let eq = completed_square_equivalence(&form, 3, &square, 5).unwrap();
        assert!(!eq.equivalent);
        assert_eq!(eq.witness, Some((0, 3)));
    }

    #[test]
    fn term_walk_confirms_vanishing_weights() {
        let form = DoubleSumForm::new(2, 2).unwrap();
        assert_eq!(confirm_double_sum_weights(&form, 5, 3, 300).unwrap(), None);
        // Target 0 is hit by the (0,0) term with weight 1.
        assert_eq!(
            confirm_double_sum_weights(&form, 5, 0, 300).unwrap(),
            Some((0, 0))
        );
        let form = DoubleSumForm::new(1, 4).unwrap();
        assert_eq!(confirm_double_sum_weights(&form, 5, 2, 300).unwrap(), None);
    }
}
