//! Bivariate series and the constant-term oracles.
//!
//! A [`BivariateSeries`] is a Laurent polynomial in an auxiliary variable z
//! whose coefficients are truncated q-series, all sharing one truncation
//! order. The k-colored generalized Frobenius partition counts come out of
//! the constant term (the z^0 entry) of
//!
//! ```text
//! prod_{m >= 1} (1 + z q^m)^k  *  prod_{m >= 0} (1 + z^-1 q^m)^k
//! ```
//!
//! and the bounded-repetition variant phi_k replaces each binomial factor by
//! the truncated geometric factor sum_{i=0..k} z^(+-i) q^(i m).
//!
//! These oracles are deliberately independent of the dissection pipelines
//! they certify, and they police themselves: every call first re-derives the
//! one-color case and compares it against an elementary partition-counting
//! dynamic program, and the bounded-repetition oracle at k = 4 additionally
//! checks its output against the 4-colored oracle modulo 5. A failed gate is
//! an error, never a silently wrong series.
//!
//! Entries whose retained coefficients are all zero can never contribute to
//! the constant term within the truncation order (multiplying by any factor
//! only raises q-valuations), so they are pruned as the product grows; the
//! pruning is cross-checked against unpruned runs in the tests.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

use crate::arithmetic::mul;
use crate::error::{Error, Result};
use crate::series::Series;

/// Largest order the oracles accept by default; they are exponential-ish in
/// practice and exist to certify small prefixes, not to race the engine.
pub const DEFAULT_ORACLE_LIMIT: usize = 60;

/// Laurent polynomial in z with truncated q-series entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    entries: BTreeMap<i64, Series>,
    order: usize,
}

impl BivariateSeries {
    /// The multiplicative identity: z^0 * 1.
    pub fn one(order: usize) -> BivariateSeries {
        let mut entries = BTreeMap::new();
        entries.insert(0, Series::one(order));
        BivariateSeries { entries, order }
    }

    /// Builds from explicit (z-exponent, series) pairs; duplicate exponents
    /// are summed. Every series must share the same order.
    pub fn from_entries(order: usize, pairs: Vec<(i64, Series)>) -> Result<BivariateSeries> {
        let mut entries: BTreeMap<i64, Series> = BTreeMap::new();
        for (z, series) in pairs {
            if series.order() != order {
                return Err(Error::OrderMismatch {
                    left: order,
                    right: series.order(),
                });
            }
            match entries.remove(&z) {
                Some(existing) => {
                    entries.insert(z, crate::arithmetic::add(&existing, &series)?);
                }
                None => {
                    entries.insert(z, series);
                }
            }
        }
        Ok(BivariateSeries { entries, order })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// q-series attached to z^j, if the entry is present.
    pub fn z_entry(&self, j: i64) -> Option<&Series> {
        self.entries.get(&j)
    }

    /// The constant term in z, as a full series (zero if the entry was
    /// pruned away).
    pub fn constant_term(&self) -> Series {
        self.entries
            .get(&0)
            .cloned()
            .unwrap_or_else(|| Series::zero(self.order))
    }

    /// z-exponents with retained entries, ascending.
    pub fn z_support(&self) -> Vec<i64> {
        self.entries.keys().copied().collect()
    }

    fn prune_zero_entries(&mut self) {
        self.entries.retain(|_, series| !series.is_zero());
    }

    /// Multiplies by a sparse bivariate polynomial given as
    /// (z-exponent, q-exponent, coefficient) terms. This is the oracle's
    /// workhorse: each term is a shift-and-scale pass, so a factor with f
    /// terms costs f * entries * order coefficient operations instead of a
    /// full convolution.
    pub fn mul_sparse(
        &self,
        terms: &[(i64, usize, BigInt)],
        prune: bool,
    ) -> BivariateSeries {
        let width = self.order + 1;
        let mut out: BTreeMap<i64, Vec<BigInt>> = BTreeMap::new();
        for (z, series) in &self.entries {
            for (dz, dq, c) in terms {
                if *dq > self.order || c.is_zero() {
                    continue;
                }
                let target = out
                    .entry(z + dz)
                    .or_insert_with(|| vec![BigInt::zero(); width]);
                for i in *dq..width {
                    target[i] += &series.coeffs()[i - dq] * c;
                }
            }
        }
        let entries = out
            .into_iter()
            .map(|(z, coeffs)| (z, Series::from_coeffs(coeffs)))
            .collect();
        let mut result = BivariateSeries {
            entries,
            order: self.order,
        };
        if prune {
            result.prune_zero_entries();
        }
        result
    }
}

/// Full bivariate product: convolution over z-exponents, truncated series
/// multiplication on the entries. Operand orders must match.
pub fn bimul(a: &BivariateSeries, b: &BivariateSeries) -> Result<BivariateSeries> {
    bimul_with_pruning(a, b, true)
}

/// [`bimul`] with pruning made explicit so tests can compare both modes.
pub fn bimul_with_pruning(
    a: &BivariateSeries,
    b: &BivariateSeries,
    prune: bool,
) -> Result<BivariateSeries> {
    if a.order != b.order {
        return Err(Error::OrderMismatch {
            left: a.order,
            right: b.order,
        });
    }
    let mut entries: BTreeMap<i64, Series> = BTreeMap::new();
    for (za, sa) in &a.entries {
        for (zb, sb) in &b.entries {
            let product = mul(sa, sb)?;
            match entries.remove(&(za + zb)) {
                Some(existing) => {
                    entries.insert(za + zb, crate::arithmetic::add(&existing, &product)?);
                }
                None => {
                    entries.insert(za + zb, product);
                }
            }
        }
    }
    let mut result = BivariateSeries {
        entries,
        order: a.order,
    };
    if prune {
        result.prune_zero_entries();
    }
    Ok(result)
}

// ---------------------------------------------------------------------------
// reference counts and the oracles
// ---------------------------------------------------------------------------

/// Partition numbers p(0), ..., p(order) by the elementary coin dynamic
/// program. This is the reference the oracles self-check against, so it
/// deliberately shares no code with the series engine.
pub fn partition_numbers(order: usize) -> Vec<BigInt> {
    let mut table = vec![BigInt::zero(); order + 1];
    table[0] = BigInt::one();
    for part in 1..=order {
        for n in part..=order {
            let prev = table[n - part].clone();
            table[n] += prev;
        }
    }
    table
}

fn binomial_row(k: u32) -> Vec<BigInt> {
    let mut row = vec![BigInt::one()];
    for i in 0..k {
        let next = (&row[i as usize] * (k - i)) / (i + 1);
        row.push(next);
    }
    row
}

/// Constant term of prod_{m>=1} f_z(q^m) * prod_{m>=0} f_{1/z}(q^m) where
/// f has the given weights: f_z(x) = sum_i weights[i] z^i x^i.
fn constant_term_series(weights: &[BigInt], order: usize, prune: bool) -> Series {
    let mut acc = BivariateSeries::one(order);
    for m in 0..=order {
        if m >= 1 {
            let top: Vec<(i64, usize, BigInt)> = weights
                .iter()
                .enumerate()
                .map(|(i, w)| (i as i64, i * m, w.clone()))
                .filter(|(_, dq, _)| *dq <= order)
                .collect();
            acc = acc.mul_sparse(&top, prune);
        }
        let bottom: Vec<(i64, usize, BigInt)> = weights
            .iter()
            .enumerate()
            .map(|(i, w)| (-(i as i64), i * m, w.clone()))
            .filter(|(_, dq, _)| *dq <= order)
            .collect();
        acc = acc.mul_sparse(&bottom, prune);
    }
    acc.constant_term()
}

fn check_partition_gate(gate: &str, order: usize, prune: bool) -> Result<Series> {
    let produced = constant_term_series(&[BigInt::one(), BigInt::one()], order, prune);
    let reference = partition_numbers(order);
    for (n, expected) in reference.iter().enumerate() {
        let actual = &produced.coeffs()[n];
        if actual != expected {
            return Err(Error::OracleGateFailed {
                gate: gate.to_string(),
                index: n,
                actual: actual.clone(),
                expected: expected.clone(),
            });
        }
    }
    Ok(produced)
}

/// k-colored generalized Frobenius partition counts, with the default
/// order limit.
pub fn cphi_oracle(colors: u32, order: usize) -> Result<Series> {
    cphi_oracle_with_limit(colors, order, DEFAULT_ORACLE_LIMIT)
}

/// k-colored counts with an explicit order limit. Refuses orders beyond the
/// limit, and refuses to answer at all if the one-color self-check fails.
pub fn cphi_oracle_with_limit(colors: u32, order: usize, limit: usize) -> Result<Series> {
    if colors == 0 {
        return Err(Error::InvalidOracleParameter);
    }
    if order > limit {
        return Err(Error::OracleOrderLimit {
            requested: order,
            limit,
        });
    }
    let one_color = check_partition_gate(
        "one color must reproduce the partition numbers",
        order,
        true,
    )?;
    if colors == 1 {
        return Ok(one_color);
    }
    Ok(constant_term_series(&binomial_row(colors), order, true))
}

/// Bounded-repetition generalized Frobenius counts phi_k (each row may
/// repeat a value up to k times), with the default order limit.
pub fn phi_oracle(repetitions: u32, order: usize) -> Result<Series> {
    phi_oracle_with_limit(repetitions, order, DEFAULT_ORACLE_LIMIT)
}

/// phi_k with an explicit order limit. Two gates guard the inferred
/// product: repetitions = 1 must reproduce the partition numbers, and
/// repetitions = 4 must agree with the 4-colored oracle modulo 5. Either
/// failure is an error carrying the first mismatch.
pub fn phi_oracle_with_limit(repetitions: u32, order: usize, limit: usize) -> Result<Series> {
    if repetitions == 0 {
        return Err(Error::InvalidOracleParameter);
    }
    if order > limit {
        return Err(Error::OracleOrderLimit {
            requested: order,
            limit,
        });
    }
    let one_rep = check_partition_gate(
        "one repetition must reproduce the partition numbers",
        order,
        true,
    )?;
    if repetitions == 1 {
        return Ok(one_rep);
    }
    let ones = vec![BigInt::one(); repetitions as usize + 1];
    let produced = constant_term_series(&ones, order, true);
    if repetitions == 4 {
        let colored = cphi_oracle_with_limit(4, order, limit)?;
        let five = BigInt::from(5);
        for n in 0..=order {
            let actual = produced.coeffs()[n].clone() % &five;
            let expected = colored.coeffs()[n].clone() % &five;
            let actual = (actual + &five) % &five;
            let expected = (expected + &five) % &five;
            if actual != expected {
                return Err(Error::OracleGateFailed {
                    gate: "four repetitions must match the 4-colored oracle mod 5".to_string(),
                    index: n,
                    actual,
                    expected,
                });
            }
        }
    }
    Ok(produced)
}
