//! Claim fixtures: loading, validation, and batch execution.
//!
//! A fixture file is a TOML document of named claims grouped into suites.
//! Claims come in three kinds:
//!
//! - `identity`: two expressions expand to the same series;
//! - `congruence`: an expression vanishes mod a modulus along an
//!   arithmetic progression of exponents;
//! - `residue`: a weighted double sum paired with a completed-square form
//!   that must pick out exactly the residue classes reaching the
//!   progression; the claim passes when the characterization is exact,
//!   every reachable class carries vanishing weights, the term walk finds
//!   no offender, and the expanded series confirms the congruence.
//!
//! Files are validated eagerly at load time: unknown kinds, missing or
//! extraneous fields, duplicate names, unparseable expressions, and suites
//! citing unknown claims are all rejected with messages naming the claim.
//! The crate ships a built-in file covering the identities and congruences
//! this engine exists to certify, available via [`FixtureSet::builtin`].

use serde::Deserialize;
use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::expr::{CompletedSquareForm, SeriesExpr};
use crate::parse::{parse_completed_square, parse_expr};
use crate::products::DoubleSumForm;
use crate::verify::{
    completed_square_equivalence, confirm_double_sum_weights, residue_solutions,
    verify_congruence, verify_identity, CongruenceClaim, Counterexample, Evaluator, Status,
    VerificationReport,
};

/// A validated claim, ready to run.
#[derive(Debug, Clone)]
pub struct Claim {
    pub name: String,
    pub order: usize,
    pub kind: ClaimKind,
}

/// The checkable content of a claim.
#[derive(Debug, Clone)]
pub enum ClaimKind {
    Identity {
        lhs: SeriesExpr,
        rhs: SeriesExpr,
    },
    Congruence {
        expr: SeriesExpr,
        modulus: u64,
        step: u64,
        residue: u64,
    },
    Residue {
        form: DoubleSumForm,
        square: CompletedSquareForm,
        modulus: u64,
        target: u64,
    },
}

/// A validated fixture file: claims in file order plus named suites.
#[derive(Debug, Clone)]
pub struct FixtureSet {
    claims: Vec<Claim>,
    index: HashMap<String, usize>,
    suites: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FixtureFile {
    version: u32,
    #[serde(default)]
    suite: Vec<SuiteDoc>,
    #[serde(default)]
    claim: Vec<ClaimDoc>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteDoc {
    name: String,
    claims: Vec<String>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClaimDoc {
    name: String,
    kind: String,
    lhs: String,
    rhs: Option<String>,
    modulus: Option<u64>,
    progression: Option<[u64; 2]>,
    order: usize,
}

fn claim_error(name: &str, message: impl std::fmt::Display) -> Error {
    Error::Fixture(format!("claim '{name}': {message}"))
}

impl ClaimDoc {
    fn validate(self) -> Result<Claim> {
        let name = self.name;
        let kind = match self.kind.as_str() {
            "identity" => {
                if self.modulus.is_some() || self.progression.is_some() {
                    return Err(claim_error(
                        &name,
                        "identity claims take no modulus or progression",
                    ));
                }
                let rhs = self
                    .rhs
                    .ok_or_else(|| claim_error(&name, "identity claims need an rhs"))?;
                ClaimKind::Identity {
                    lhs: parse_expr(&self.lhs).map_err(|e| claim_error(&name, e))?,
                    rhs: parse_expr(&rhs).map_err(|e| claim_error(&name, e))?,
                }
            }
            "congruence" => {
                if self.rhs.is_some() {
                    return Err(claim_error(&name, "congruence claims take no rhs"));
                }
                let modulus = self
                    .modulus
                    .ok_or_else(|| claim_error(&name, "congruence claims need a modulus"))?;
                if modulus < 2 {
                    return Err(claim_error(&name, "modulus must be at least 2"));
                }
                let [step, residue] = self.progression.ok_or_else(|| {
                    claim_error(&name, "congruence claims need a progression [step, residue]")
                })?;
                if step == 0 {
                    return Err(claim_error(&name, "progression step must be at least 1"));
                }
                if residue >= step {
                    return Err(claim_error(
                        &name,
                        "progression residue must be less than the step",
                    ));
                }
                ClaimKind::Congruence {
                    expr: parse_expr(&self.lhs).map_err(|e| claim_error(&name, e))?,
                    modulus,
                    step,
                    residue,
                }
            }
            "residue" => {
                let rhs = self.rhs.ok_or_else(|| {
                    claim_error(&name, "residue claims need a completed-square rhs")
                })?;
                let modulus = self
                    .modulus
                    .ok_or_else(|| claim_error(&name, "residue claims need a modulus"))?;
                let [step, target] = self.progression.ok_or_else(|| {
                    claim_error(&name, "residue claims need a progression [step, residue]")
                })?;
                if step != modulus {
                    return Err(claim_error(
                        &name,
                        "residue claims read progressions mod the modulus, so the step must equal it",
                    ));
                }
                if target >= modulus {
                    return Err(claim_error(
                        &name,
                        "progression residue must be less than the modulus",
                    ));
                }
                let lhs = parse_expr(&self.lhs).map_err(|e| claim_error(&name, e))?;
                let form = match lhs {
                    SeriesExpr::DoubleSum(form) => form,
                    other => {
                        return Err(claim_error(
                            &name,
                            format!("residue claims analyze a double sum, got '{other}'"),
                        ))
                    }
                };
                let square =
                    parse_completed_square(&rhs).map_err(|e| claim_error(&name, e))?;
                ClaimKind::Residue {
                    form,
                    square,
                    modulus,
                    target,
                }
            }
            other => return Err(claim_error(&name, format!("unknown kind '{other}'"))),
        };
        Ok(Claim {
            name,
            order: self.order,
            kind,
        })
    }
}

impl FixtureSet {
    /// Parses and validates a fixture file.
    pub fn from_toml_str(text: &str) -> Result<FixtureSet> {
        let file: FixtureFile =
            toml::from_str(text).map_err(|e| Error::Fixture(e.to_string()))?;
        if file.version != 1 {
            return Err(Error::Fixture(format!(
                "unsupported fixture version {}",
                file.version
            )));
        }
        let mut claims = Vec::with_capacity(file.claim.len());
        let mut index = HashMap::new();
        for doc in file.claim {
            let claim = doc.validate()?;
            if index.insert(claim.name.clone(), claims.len()).is_some() {
                return Err(Error::Fixture(format!(
                    "duplicate claim name '{}'",
                    claim.name
                )));
            }
            claims.push(claim);
        }
        let mut suites = BTreeMap::new();
        for suite in file.suite {
            for cited in &suite.claims {
                if !index.contains_key(cited) {
                    return Err(Error::Fixture(format!(
                        "suite '{}' cites unknown claim '{}'",
                        suite.name, cited
                    )));
                }
            }
            if suites.insert(suite.name.clone(), suite.claims).is_some() {
                return Err(Error::Fixture(format!(
                    "duplicate suite name '{}'",
                    suite.name
                )));
            }
        }
        Ok(FixtureSet {
            claims,
            index,
            suites,
        })
    }

    /// The built-in claim battery shipped with the crate.
    pub fn builtin() -> &'static FixtureSet {
        static BUILTIN: OnceLock<FixtureSet> = OnceLock::new();
        BUILTIN.get_or_init(|| {
            FixtureSet::from_toml_str(include_str!("../fixtures/standard.toml"))
                .expect("builtin fixtures are valid")
        })
    }

    /// Claims in file order.
    pub fn claims(&self) -> &[Claim] {
        &self.claims
    }

    /// Looks up one claim by name.
    pub fn claim(&self, name: &str) -> Option<&Claim> {
        self.index.get(name).map(|&i| &self.claims[i])
    }

    /// Suite names, ascending.
    pub fn suite_names(&self) -> Vec<&str> {
        self.suites.keys().map(|s| s.as_str()).collect()
    }

    /// Runs every claim in a suite, preserving suite order. With the
    /// parallel feature enabled and switched on, claims run across threads,
    /// each thread reusing one evaluator.
    pub fn run_suite(
        &self,
        suite: &str,
        order_override: Option<usize>,
    ) -> Result<Vec<VerificationReport>> {
        let names = self
            .suites
            .get(suite)
            .ok_or_else(|| Error::Fixture(format!("unknown suite '{suite}'")))?;
        let claims: Vec<&Claim> = names
            .iter()
            .map(|name| self.claim(name).expect("suites were validated"))
            .collect();
        #[cfg(feature = "parallel")]
        {
            if crate::arithmetic::parallel_enabled() {
                use rayon::prelude::*;
                return Ok(claims
                    .par_iter()
                    .map_init(Evaluator::with_standard_env, |evaluator, claim| {
                        run_claim(claim, evaluator, order_override)
                    })
                    .collect());
            }
        }
        let mut evaluator = Evaluator::with_standard_env();
        Ok(claims
            .iter()
            .map(|claim| run_claim(claim, &mut evaluator, order_override))
            .collect())
    }
}

/// Runs one claim, optionally overriding its order.
pub fn run_claim(
    claim: &Claim,
    evaluator: &mut Evaluator,
    order_override: Option<usize>,
) -> VerificationReport {
    let order = order_override.unwrap_or(claim.order);
    match &claim.kind {
        ClaimKind::Identity { lhs, rhs } => {
            verify_identity(evaluator, claim.name.clone(), lhs, rhs, order)
        }
        ClaimKind::Congruence {
            expr,
            modulus,
            step,
            residue,
        } => verify_congruence(
            evaluator,
            &CongruenceClaim {
                description: claim.name.clone(),
                expr: expr.clone(),
                modulus: *modulus,
                step: *step,
                residue: *residue,
                order,
            },
        ),
        ClaimKind::Residue {
            form,
            square,
            modulus,
            target,
        } => run_residue(&claim.name, *form, square, *modulus, *target, order, evaluator),
    }
}

/// The four stages of a residue claim, in order: the completed square must
/// characterize the progression's residue classes exactly, every class
/// reaching the progression must carry vanishing weights, the term walk up
/// to the order must agree, and the expanded series must satisfy the
/// congruence.
fn run_residue(
    name: &str,
    form: DoubleSumForm,
    square: &CompletedSquareForm,
    modulus: u64,
    target: u64,
    order: usize,
    evaluator: &mut Evaluator,
) -> VerificationReport {
    let started = Instant::now();
    let mut report = VerificationReport {
        claim: name.to_string(),
        status: Status::Verified,
        detail: None,
        order,
        progression: Some((modulus, target)),
        modulus: Some(modulus),
        counterexample: None,
        elapsed: std::time::Duration::ZERO,
    };

    let outcome = (|| -> Result<Option<(String, Counterexample)>> {
        let equivalence = completed_square_equivalence(&form, target, square, modulus)?;
        if let Some((k, m)) = equivalence.witness {
            return Ok(Some((
                format!(
                    "the completed square misclassifies the residue pair (k,m) = ({k},{m})"
                ),
                Counterexample::ResiduePair { k, m },
            )));
        }
        let analysis = residue_solutions(&form, modulus, target)?;
        if !analysis.weights_vanish {
            let &(k, m) = analysis
                .solutions
                .iter()
                .find(|(k, _)| (2 * k + 1) % modulus != 0)
                .expect("a surviving weight exists");
            return Ok(Some((
                format!("the class (k,m) = ({k},{m}) reaches the progression with unit weight"),
                Counterexample::ResiduePair { k, m },
            )));
        }
        if let Some((k, m)) = confirm_double_sum_weights(&form, modulus, target, order)? {
            let (k, m) = (k % modulus, m.rem_euclid(modulus as i64) as u64);
            return Ok(Some((
                format!("a term from the class (k,m) = ({k},{m}) survives the term walk"),
                Counterexample::ResiduePair { k, m },
            )));
        }
        Ok(None)
    })();

    match outcome {
        Err(error) => {
            report.status = Status::Error;
            report.detail = Some(error.to_string());
            report.elapsed = started.elapsed();
            return report;
        }
        Ok(Some((detail, counterexample))) => {
            report.status = Status::Violated;
            report.detail = Some(detail);
            report.counterexample = Some(counterexample);
            report.elapsed = started.elapsed();
            return report;
        }
        Ok(None) => {}
    }

    // Series-level confirmation of the congruence the analysis implies.
    let series_report = verify_congruence(
        evaluator,
        &CongruenceClaim {
            description: name.to_string(),
            expr: SeriesExpr::DoubleSum(form),
            modulus,
            step: modulus,
            residue: target,
            order,
        },
    );
    report.status = series_report.status;
    report.detail = series_report.detail;
    report.counterexample = series_report.counterexample;
    report.elapsed = started.elapsed();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frobenius::dsl;

    // ======================================================================
    // loading and validation
    // ======================================================================

    #[test]
    fn builtin_fixtures_load() {
        let set = FixtureSet::builtin();
        assert_eq!(set.suite_names(), vec!["oracle", "standard"]);
        assert_eq!(set.claims().len(), 25);
        assert!(set.claim("even-part-progression").is_some());
        assert!(set.claim("no-such-claim").is_none());
    }

    #[test]
    fn builtin_fixtures_quote_the_library_spellings() {
        let set = FixtureSet::builtin();

        let headline = set.claim("even-part-progression").unwrap();
        match &headline.kind {
            ClaimKind::Congruence {
                expr,
                modulus,
                step,
                residue,
            } => {
                assert_eq!(expr, &parse_expr(dsl::CPHI4_EVEN_ETA).unwrap());
                assert_eq!((*modulus, *step, *residue), (5, 5, 3));
                assert_eq!(headline.order, 500);
            }
            other => panic!("wrong kind: {other:?}"),
        }

        let dissection = set.claim("even-part-by-dissection").unwrap();
        match &dissection.kind {
            ClaimKind::Identity { lhs, rhs } => {
                let full = parse_expr(dsl::CPHI4_FULL).unwrap();
                assert_eq!(lhs, &SeriesExpr::Dissect(Box::new(full), 2, 0));
                assert_eq!(rhs, &parse_expr(dsl::CPHI4_EVEN_ETA).unwrap());
            }
            other => panic!("wrong kind: {other:?}"),
        }

        let reduction = set.claim("mod5-term1-reduction").unwrap();
        match &reduction.kind {
            ClaimKind::Identity { lhs, rhs } => {
                let term = parse_expr(dsl::MOD5_TERM1).unwrap();
                let reduced = parse_expr(dsl::MOD5_TERM1_REDUCED).unwrap();
                assert_eq!(lhs, &SeriesExpr::ReduceMod(Box::new(term), 5));
                assert_eq!(rhs, &SeriesExpr::ReduceMod(Box::new(reduced), 5));
            }
            other => panic!("wrong kind: {other:?}"),
        }
    }

    fn load_err(text: &str) -> String {
        FixtureSet::from_toml_str(text).unwrap_err().to_string()
    }

    #[test]
    fn loader_rejects_malformed_files() {
        assert!(load_err("version = 2").contains("unsupported fixture version"));

        let duplicate = r#"
version = 1
[[claim]]
name = "a"
kind = "identity"
lhs = "q"
rhs = "q"
order = 5
[[claim]]
name = "a"
kind = "identity"
lhs = "q"
rhs = "q"
order = 5
"#;
        assert!(load_err(duplicate).contains("duplicate claim name 'a'"));

        let unknown_kind = r#"
version = 1
[[claim]]
name = "a"
kind = "conjecture"
lhs = "q"
order = 5
"#;
        assert!(load_err(unknown_kind).contains("unknown kind 'conjecture'"));

        let missing_rhs = r#"
version = 1
[[claim]]
name = "a"
kind = "identity"
lhs = "q"
order = 5
"#;
        assert!(load_err(missing_rhs).contains("need an rhs"));

        let bad_expression = r#"
version = 1
[[claim]]
name = "a"
kind = "identity"
lhs = "P(1,1,4"
rhs = "q"
order = 5
"#;
        assert!(load_err(bad_expression).contains("offset 8"));

        let phantom_claim = r#"
version = 1
[[suite]]
name = "s"
claims = ["ghost"]
"#;
        assert!(load_err(phantom_claim).contains("unknown claim 'ghost'"));

        let residue_non_dsum = r#"
version = 1
[[claim]]
name = "a"
kind = "residue"
lhs = "P(1,1,1)"
rhs = "(2k+1)^2+(m)^2"
modulus = 5
progression = [5, 3]
order = 5
"#;
        assert!(load_err(residue_non_dsum).contains("analyze a double sum"));

        let residue_step_mismatch = r#"
version = 1
[[claim]]
name = "a"
kind = "residue"
lhs = "dsum(2,2)"
rhs = "(2k+1)^2+(m)^2"
modulus = 5
progression = [10, 3]
order = 5
"#;
        assert!(load_err(residue_step_mismatch).contains("must equal"));

        let identity_with_modulus = r#"
version = 1
[[claim]]
name = "a"
kind = "identity"
lhs = "q"
rhs = "q"
modulus = 5
order = 5
"#;
        assert!(load_err(identity_with_modulus).contains("take no modulus"));

        let bad_progression = r#"
version = 1
[[claim]]
name = "a"
kind = "congruence"
lhs = "q"
modulus = 5
progression = [5, 7]
order = 5
"#;
        assert!(load_err(bad_progression).contains("less than the step"));
    }

    // ======================================================================
    // running claims
    // ======================================================================

    #[test]
    fn synthetic_identity_claims_verify_and_violate() {
        let text = r#"
version = 1
[[suite]]
name = "all"
claims = ["true-identity", "false-identity"]
[[claim]]
name = "true-identity"
kind = "identity"
lhs = "P(1,1,-1)"
rhs = "@p"
order = 20
[[claim]]
name = "false-identity"
kind = "identity"
lhs = "P(1,1,1)"
rhs = "P(1,1,1) + q^3"
order = 10
"#;
        let set = FixtureSet::from_toml_str(text).unwrap();
        let reports = set.run_suite("all", None).unwrap();
        assert_eq!(reports.len(), 2);
        assert_eq!(reports[0].claim, "true-identity");
        assert_eq!(reports[0].status, Status::Verified);
        assert_eq!(reports[1].status, Status::Violated);
        assert_eq!(
            reports[1].counterexample,
            Some(Counterexample::Coefficient {
                exponent: 3,
                value: num_bigint::BigInt::from(-1)
            })
        );

        assert!(matches!(
            set.run_suite("nope", None),
            Err(Error::Fixture(_))
        ));
    }

    #[test]
    fn residue_claims_pass_their_four_stages() {
        let set = FixtureSet::builtin();
        let claim = set.claim("euler-quartic-residues").unwrap();
        let mut evaluator = Evaluator::with_standard_env();
        let report = run_claim(claim, &mut evaluator, Some(80));
        assert_eq!(report.status, Status::Verified, "{report:?}");
        assert_eq!(report.progression, Some((5, 3)));
    }

    #[test]
    fn residue_claims_fail_on_a_wrong_square() {
        let text = r#"
version = 1
[[claim]]
name = "wrong-square"
kind = "residue"
lhs = "dsum(2,2)"
rhs = "(2k+1)^2+(6m-1)^2"
modulus = 5
progression = [5, 3]
order = 40
"#;
        let set = FixtureSet::from_toml_str(text).unwrap();
        let mut evaluator = Evaluator::with_standard_env();
        let report = run_claim(set.claim("wrong-square").unwrap(), &mut evaluator, None);
        assert_eq!(report.status, Status::Violated);
        assert_eq!(
            report.counterexample,
            Some(Counterexample::ResiduePair { k: 0, m: 3 })
        );
    }

    #[test]
    fn standard_suite_holds_at_reduced_order() {
        let reports = FixtureSet::builtin().run_suite("standard", Some(40)).unwrap();
        assert_eq!(reports.len(), 19);
        for report in &reports {
            assert_eq!(report.status, Status::Verified, "{report:?}");
            assert_eq!(report.order, 40);
        }
    }

    #[test]
    fn oracle_suite_passes_at_its_stated_orders() {
        let reports = FixtureSet::builtin().run_suite("oracle", None).unwrap();
        assert_eq!(reports.len(), 6);
        for report in &reports {
            assert_eq!(report.status, Status::Verified, "{report:?}");
        }
    }
}
