//! Generating functions for 4-colored generalized Frobenius partitions.
//!
//! The working objects, written in the expression language of [`crate::parse`]
//! and shared with the fixture suites through the [`dsl`] constants:
//!
//! - the full generating function for the 4-colored counts, built from the
//!   theta series phi and psi over an inverse fourth power of Euler's
//!   product;
//! - its even part, reachable two independent ways: by 2-dissection of the
//!   full series, and by a closed two-term eta-quotient form (with an
//!   equivalent all-theta spelling);
//! - the two closed-form terms reduced modulo 5, where Euler-product fifth
//!   powers collapse to series in q^5 and leave one genuinely 5-adic factor
//!   per term;
//! - the even part of the overline variant, with its rearrangement and its
//!   own mod-5 reduction.
//!
//! Everything downstream of the even part speaks in the dissected variable:
//! exponent n there carries the count at 2n, so the progression 5n+3 is the
//! original progression 10n+6.

use crate::arithmetic::dissect;
use crate::error::{Error, Result};
use crate::expr::SeriesExpr;
use crate::parse::parse_expr;
use crate::series::Series;
use crate::verify::{
    verify_congruence, verify_identity, CongruenceClaim, Env, Evaluator, VerificationReport,
};

/// Expression-language spellings of the working series. The fixture suites
/// quote the same strings, so the library and the data stay in lockstep.
pub mod dsl {
    /// Full generating function of the 4-colored counts.
    pub const CPHI4_FULL: &str = "(phi(2)^3 + 12*q^1*phi(2)*psi(4)^2)*P(1,1,-4)";

    /// Even part in eta-quotient form, in the dissected variable.
    pub const CPHI4_EVEN_ETA: &str =
        "P(2,2,29)*P(1,1,-20)*P(4,4,-10) + 48*q^1*P(2,2,5)*P(4,4,6)*P(1,1,-12)";

    /// The same even part spelled through theta series.
    pub const CPHI4_EVEN_THETA: &str =
        "(phi(1)^5 + 48*q^1*phi(1)*psi(2)^4)*P(1,1,-6)*P(1,2,-4)";

    /// First term of the even-part closed form.
    pub const MOD5_TERM1: &str = "P(2,2,29)*P(1,1,-20)*P(4,4,-10)";

    /// First term with every fifth power collapsed mod 5: all factors are
    /// series in q^5 except the surviving `P(2,2,4)`.
    pub const MOD5_TERM1_REDUCED: &str = "P(10,10,5)*P(2,2,4)*P(5,5,-4)*P(20,20,-2)";

    /// Second term of the even-part closed form.
    pub const MOD5_TERM2: &str = "48*q^1*P(2,2,5)*P(4,4,6)*P(1,1,-12)";

    /// Second term reduced mod 5; the surviving factor is
    /// `P(1,1,3)*P(4,4,1)`.
    pub const MOD5_TERM2_REDUCED: &str =
        "48*q^1*P(10,10,1)*P(20,20,1)*P(1,1,3)*P(4,4,1)*P(5,5,-3)";

    /// Even part of the overline variant, in the dissected variable.
    pub const CPHIBAR4_EVEN: &str = "64*q^1*P(4,4,6)*P(2,2,-7)*P(1,2,-12)";

    /// The same series with `P(1,2,-12)` rewritten through
    /// `P(1,1,-12)*P(2,2,12)`.
    pub const CPHIBAR4_EVEN_REARRANGED: &str = "64*q^1*P(4,4,6)*P(2,2,5)*P(1,1,-12)";

    /// The rearranged form reduced mod 5, again leaving
    /// `P(1,1,3)*P(4,4,1)` as the 5-adic factor.
    pub const CPHIBAR4_EVEN_REDUCED: &str =
        "64*q^1*P(20,20,1)*P(4,4,1)*P(10,10,1)*P(1,1,3)*P(5,5,-3)";
}

fn embedded(text: &str) -> SeriesExpr {
    parse_expr(text).expect("embedded expression parses")
}

fn evaluator() -> Evaluator {
    Evaluator::new(Env::empty())
}

/// Runs two closures, in parallel when the parallel feature is enabled and
/// switched on.
fn maybe_join<A, B>(a: impl FnOnce() -> A + Send, b: impl FnOnce() -> B + Send) -> (A, B)
where
    A: Send,
    B: Send,
{
    #[cfg(feature = "parallel")]
    {
        if crate::arithmetic::parallel_enabled() {
            return rayon::join(a, b);
        }
    }
    (a(), b())
}

/// Full generating function of the 4-colored counts, truncated at `order`.
pub fn cphi4_series(order: usize) -> Result<Series> {
    evaluator().eval(&embedded(dsl::CPHI4_FULL), order)
}

/// How to produce the even part.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EvenPartRoute {
    /// Build the full series at twice the order and keep even exponents.
    Dissection,
    /// Evaluate the closed eta-quotient form directly.
    ClosedForm,
}

/// Even-indexed counts, `order + 1` of them, by the chosen route.
pub fn cphi4_even_series(order: usize, route: EvenPartRoute) -> Result<Series> {
    match route {
        EvenPartRoute::Dissection => {
            let full = cphi4_series(2 * order)?;
            dissect(&full, 2, 0)
        }
        EvenPartRoute::ClosedForm => evaluator().eval(&embedded(dsl::CPHI4_EVEN_ETA), order),
    }
}

/// Even part of the overline variant, truncated at `order`.
pub fn cphibar4_even_series(order: usize) -> Result<Series> {
    evaluator().eval(&embedded(dsl::CPHIBAR4_EVEN), order)
}

/// The working series built together, with the two even-part routes
/// cross-checked against each other.
#[derive(Debug, Clone)]
pub struct FrobeniusBundle {
    /// Full series at order `2 * even_order`.
    pub full: Series,
    /// Even part by dissection of `full`.
    pub even_via_dissection: Series,
    /// Even part by the closed form.
    pub even_via_closed_form: Series,
    /// Even part of the overline variant.
    pub cphibar_even: Series,
}

impl FrobeniusBundle {
    /// Builds every series at the given even-part order. The dissection
    /// route and the closed form must agree exactly; disagreement is an
    /// error, since every downstream congruence leans on that identity.
    pub fn build(even_order: usize) -> Result<FrobeniusBundle> {
        let (full, closed) = maybe_join(
            || cphi4_series(2 * even_order),
            || {
                maybe_join(
                    || cphi4_even_series(even_order, EvenPartRoute::ClosedForm),
                    || cphibar4_even_series(even_order),
                )
            },
        );
        let full = full?;
        let (even_via_closed_form, cphibar_even) = closed;
        let even_via_closed_form = even_via_closed_form?;
        let cphibar_even = cphibar_even?;
        let even_via_dissection = dissect(&full, 2, 0)?;
        if even_via_dissection != even_via_closed_form {
            let difference =
                crate::arithmetic::sub(&even_via_dissection, &even_via_closed_form)?;
            let exponent = difference.valuation().unwrap_or(0);
            return Err(Error::CrossCheck(format!(
                "even-part routes disagree first at q^{exponent} (order {even_order})"
            )));
        }
        Ok(FrobeniusBundle {
            full,
            even_via_dissection,
            even_via_closed_form,
            cphibar_even,
        })
    }
}

/// Reports for one closed-form term: that it reduces mod 5 to its
/// collapsed spelling, and that the collapsed spelling vanishes on the
/// progression 5n+3.
#[derive(Debug, Clone)]
pub struct TermChecks {
    pub reduction: VerificationReport,
    pub progression: VerificationReport,
}

/// The two-term mod-5 analysis of the even part.
#[derive(Debug, Clone)]
pub struct Mod5Split {
    pub first_term: TermChecks,
    pub second_term: TermChecks,
}

impl Mod5Split {
    pub fn all_verified(&self) -> bool {
        [
            &self.first_term.reduction,
            &self.first_term.progression,
            &self.second_term.reduction,
            &self.second_term.progression,
        ]
        .iter()
        .all(|report| report.status == crate::verify::Status::Verified)
    }
}

fn term_checks(
    label: &str,
    term: &str,
    reduced: &str,
    order: usize,
) -> TermChecks {
    let mut ev = evaluator();
    let reduction = verify_identity(
        &mut ev,
        format!("{label} collapses mod 5 to its q^5-adapted form"),
        &SeriesExpr::ReduceMod(Box::new(embedded(term)), 5),
        &SeriesExpr::ReduceMod(Box::new(embedded(reduced)), 5),
        order,
    );
    let progression = verify_congruence(
        &mut ev,
        &CongruenceClaim {
            description: format!("{label}, reduced, vanishes mod 5 on 5n+3"),
            expr: embedded(reduced),
            modulus: 5,
            step: 5,
            residue: 3,
            order,
        },
    );
    TermChecks {
        reduction,
        progression,
    }
}

/// Checks both closed-form terms at the given order: each term reduces
/// mod 5 to its collapsed form, and each collapsed form vanishes on 5n+3.
/// Together these give the progression for the full even part.
pub fn mod5_split_check(order: usize) -> Mod5Split {
    let (first_term, second_term) = maybe_join(
        || term_checks("first even-part term", dsl::MOD5_TERM1, dsl::MOD5_TERM1_REDUCED, order),
        || {
            term_checks(
                "second even-part term",
                dsl::MOD5_TERM2,
                dsl::MOD5_TERM2_REDUCED,
                order,
            )
        },
    );
    Mod5Split {
        first_term,
        second_term,
    }
}

/// The headline claim as a congruence on the even part: its coefficients
/// on 5n+3 vanish mod 5, i.e. the 4-colored count at 10n+6 is divisible
/// by 5.
pub fn headline_congruence(order: usize) -> CongruenceClaim {
    CongruenceClaim {
        description: "4-colored counts on 10n+6 are divisible by 5 (even part at 5n+3)"
            .to_string(),
        expr: embedded(dsl::CPHI4_EVEN_ETA),
        modulus: 5,
        step: 5,
        residue: 3,
        order,
    }
}

/// Reports for the overline variant's even part: the rearrangement
/// identity, the mod-5 reduction, and the vanishing progression.
#[derive(Debug, Clone)]
pub struct CphibarChecks {
    pub rearrangement: VerificationReport,
    pub reduction: VerificationReport,
    pub progression: VerificationReport,
}

impl CphibarChecks {
    pub fn all_verified(&self) -> bool {
        [&self.rearrangement, &self.reduction, &self.progression]
            .iter()
            .all(|report| report.status == crate::verify::Status::Verified)
    }
}

/// Checks the overline variant: the two spellings of its even part agree
/// at `rearrangement_order`, the rearranged form collapses mod 5, and the
/// collapsed form vanishes on 5n+3 (so the count at 10n+6 is divisible by
/// 5), both at `reduction_order`.
pub fn cphibar4_checks(rearrangement_order: usize, reduction_order: usize) -> CphibarChecks {
    let mut ev = evaluator();
    let rearrangement = verify_identity(
        &mut ev,
        "overline even part: odd-modulus spelling equals the rearranged spelling",
        &embedded(dsl::CPHIBAR4_EVEN),
        &embedded(dsl::CPHIBAR4_EVEN_REARRANGED),
        rearrangement_order,
    );
    let reduction = verify_identity(
        &mut ev,
        "overline even part collapses mod 5 to its q^5-adapted form",
        &SeriesExpr::ReduceMod(Box::new(embedded(dsl::CPHIBAR4_EVEN_REARRANGED)), 5),
        &SeriesExpr::ReduceMod(Box::new(embedded(dsl::CPHIBAR4_EVEN_REDUCED)), 5),
        reduction_order,
    );
    let progression = verify_congruence(
        &mut ev,
        &CongruenceClaim {
            description: "overline counts on 10n+6 are divisible by 5 (even part at 5n+3)"
                .to_string(),
            expr: embedded(dsl::CPHIBAR4_EVEN_REDUCED),
            modulus: 5,
            step: 5,
            residue: 3,
            order: reduction_order,
        },
    );
    CphibarChecks {
        rearrangement,
        reduction,
        progression,
    }
}
