//! Infinite-product and theta-series builders.
//!
//! The building blocks mirror how q-series identities are written down:
//!
//! * [`PochhammerFactor`] is one factor (s*q^a; q^b)_inf^e with s = +-1,
//!   offset a >= 1, step b >= 1 and a nonzero integer exponent e;
//! * [`ProductExpr`] is a leading monomial c*q^t times a list of factors;
//! * [`theta_phi`] and [`theta_psi`] build phi(q^t) = sum_{n in Z} q^(t n^2)
//!   and psi(q^t) = sum_{n >= 0} q^(t n(n+1)/2);
//! * [`weighted_double_sum`] builds
//!   sum_{k >= 0} sum_{m in Z} (-1)^(k+m) (2k+1)
//!   q^(alpha k(k+1)/2 + beta m(3m-1)/2),
//!   the shape that factors as a Jacobi cube times a pentagonal-number
//!   product.
//!
//! [`Expander`] memoizes factor expansions keyed by (factor, order) so a
//! single evaluation never expands the same Pochhammer symbol twice. Caches
//! are per-evaluation values, not global state, which keeps concurrent
//! evaluations independent.

use num_bigint::BigInt;
use num_traits::Zero;
use std::collections::HashMap;
use std::fmt;

use crate::arithmetic::{mul, pow};
use crate::error::{Error, Result};
use crate::series::Series;

/// One Pochhammer symbol (s*q^offset; q^step)_inf^exponent with s = -1 when
/// `negated` is set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PochhammerFactor {
    negated: bool,
    offset: u32,
    step: u32,
    exponent: i32,
}

impl PochhammerFactor {
    pub fn new(negated: bool, offset: u32, step: u32, exponent: i32) -> Result<PochhammerFactor> {
        if offset == 0 || step == 0 {
            return Err(Error::InvalidPochhammer);
        }
        if exponent == 0 {
            return Err(Error::ZeroExponent);
        }
        Ok(PochhammerFactor {
            negated,
            offset,
            step,
            exponent,
        })
    }

    /// (q^offset; q^step)_inf^exponent
    pub fn plain(offset: u32, step: u32, exponent: i32) -> Result<PochhammerFactor> {
        PochhammerFactor::new(false, offset, step, exponent)
    }

    /// (-q^offset; q^step)_inf^exponent
    pub fn negated(offset: u32, step: u32, exponent: i32) -> Result<PochhammerFactor> {
        PochhammerFactor::new(true, offset, step, exponent)
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    pub fn offset(&self) -> u32 {
        self.offset
    }

    pub fn step(&self) -> u32 {
        self.step
    }

    pub fn exponent(&self) -> i32 {
        self.exponent
    }
}

impl fmt::Display for PochhammerFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = if self.negated { "Pneg" } else { "P" };
        write!(f, "{name}({},{},{})", self.offset, self.step, self.exponent)
    }
}

/// A monomial times a list of Pochhammer factors: c * q^power * prod factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductExpr {
    pub coeff: i64,
    pub power: usize,
    pub factors: Vec<PochhammerFactor>,
}

impl ProductExpr {
    pub fn new(coeff: i64, power: usize, factors: Vec<PochhammerFactor>) -> ProductExpr {
        ProductExpr {
            coeff,
            power,
            factors,
        }
    }
}

/// Memoizing expander for Pochhammer factors, keyed by (factor, order).
#[derive(Default)]
pub struct Expander {
    cache: HashMap<(PochhammerFactor, usize), Series>,
}

impl Expander {
    pub fn new() -> Expander {
        Expander::default()
    }

    /// Number of cached (factor, order) expansions; used by tests.
    pub fn cached_expansions(&self) -> usize {
        self.cache.len()
    }

    /// Expansion of a single factor to the requested order, cached.
    pub fn pochhammer(&mut self, factor: &PochhammerFactor, order: usize) -> Result<Series> {
        if let Some(hit) = self.cache.get(&(*factor, order)) {
            return Ok(hit.clone());
        }
        let expanded = expand_pochhammer_uncached(factor, order)?;
        self.cache.insert((*factor, order), expanded.clone());
        Ok(expanded)
    }

    /// Expansion of a full product expression to the requested order.
    pub fn product(&mut self, product: &ProductExpr, order: usize) -> Result<Series> {
        let mut acc = Series::monomial(product.coeff, product.power, order);
        for factor in &product.factors {
            let expanded = self.pochhammer(factor, order)?;
            acc = mul(&acc, &expanded)?;
        }
        Ok(acc)
    }
}

/// One-shot expansion of a single Pochhammer factor.
pub fn expand_pochhammer(factor: &PochhammerFactor, order: usize) -> Result<Series> {
    expand_pochhammer_uncached(factor, order)
}

/// One-shot expansion of a product expression.
pub fn expand_product(product: &ProductExpr, order: usize) -> Result<Series> {
    Expander::new().product(product, order)
}

fn expand_pochhammer_uncached(factor: &PochhammerFactor, order: usize) -> Result<Series> {
    // Base product prod_{n >= 0, offset + n*step <= order} (1 -+ q^(offset + n*step)),
    // multiplied in place: binomial factors need one pass each, not a full
    // convolution.
    let mut coeffs = vec![BigInt::zero(); order + 1];
    coeffs[0] = BigInt::from(1);
    let mut exponent_of_q = factor.offset as usize;
    while exponent_of_q <= order {
        for i in (exponent_of_q..=order).rev() {
            let tail = coeffs[i - exponent_of_q].clone();
            if factor.negated {
                coeffs[i] += tail;
            } else {
                coeffs[i] -= tail;
            }
        }
        exponent_of_q += factor.step as usize;
    }
    let base = Series::from_coeffs(coeffs);
    pow(&base, factor.exponent as i64)
}

/// phi(q^t) = 1 + 2 sum_{n >= 1} q^(t n^2), truncated at `order`.
/// The step t must be positive; the parser enforces this before reaching
/// the builder.
pub fn theta_phi(t: u32, order: usize) -> Series {
    assert!(t >= 1, "theta_phi needs a positive power of q");
    let t = t as usize;
    let mut coeffs = vec![BigInt::zero(); order + 1];
    coeffs[0] = BigInt::from(1);
    let mut n = 1usize;
    while let Some(e) = n.checked_mul(n).and_then(|sq| sq.checked_mul(t)) {
        if e > order {
            break;
        }
        coeffs[e] = BigInt::from(2);
        n += 1;
    }
    Series::from_coeffs(coeffs)
}

/// psi(q^t) = sum_{n >= 0} q^(t n(n+1)/2), truncated at `order`.
pub fn theta_psi(t: u32, order: usize) -> Series {
    assert!(t >= 1, "theta_psi needs a positive power of q");
    let t = t as usize;
    let mut coeffs = vec![BigInt::zero(); order + 1];
    let mut n = 0usize;
    while let Some(e) = (n * (n + 1) / 2).checked_mul(t) {
        if e > order {
            break;
        }
        coeffs[e] = BigInt::from(1);
        n += 1;
    }
    Series::from_coeffs(coeffs)
}

/// Weighted double sum over triangular and pentagonal exponents. The two
/// multipliers scale k(k+1)/2 and m(3m-1)/2 respectively; both must be at
/// least 1, enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DoubleSumForm {
    tri_mult: u32,
    pent_mult: u32,
}

impl DoubleSumForm {
    pub fn new(tri_mult: u32, pent_mult: u32) -> Result<DoubleSumForm> {
        if tri_mult == 0 || pent_mult == 0 {
            return Err(Error::InvalidDoubleSum);
        }
        Ok(DoubleSumForm {
            tri_mult,
            pent_mult,
        })
    }

    /// Multiplier alpha on the triangular exponent k(k+1)/2.
    pub fn tri_mult(&self) -> u32 {
        self.tri_mult
    }

    /// Multiplier beta on the pentagonal exponent m(3m-1)/2.
    pub fn pent_mult(&self) -> u32 {
        self.pent_mult
    }

    /// Exponent contributed by the pair (k, m).
    pub fn exponent(&self, k: u64, m: i64) -> u64 {
        let tri = k * (k + 1) / 2;
        // m(3m-1)/2 is a nonnegative integer for every integer m.
        let pent = (m * (3 * m - 1) / 2) as u64;
        (self.tri_mult as u64) * tri + (self.pent_mult as u64) * pent
    }

    /// Weight carried by the pair (k, m): (-1)^(k+m) (2k+1).
    pub fn weight(&self, k: u64, m: i64) -> i64 {
        let sign = if (k as i64 + m).rem_euclid(2) == 0 {
            1
        } else {
            -1
        };
        sign * (2 * k as i64 + 1)
    }

    /// Visits every term with exponent <= order.
    pub fn for_each_term(&self, order: usize, mut visit: impl FnMut(u64, i64, u64, i64)) {
        let order = order as u64;
        let mut k = 0u64;
        loop {
            let tri = (self.tri_mult as u64) * (k * (k + 1) / 2);
            if tri > order {
                break;
            }
            // m = 0, 1, -1, 2, -2, ...; within each sign the pentagonal
            // exponent is increasing, so stop at the first overflow.
            for sign in [1i64, -1i64] {
                let mut m = if sign == 1 { 0i64 } else { -1i64 };
                loop {
                    let e = self.exponent(k, m);
                    if e > order {
                        break;
                    }
                    visit(k, m, e, self.weight(k, m));
                    m += sign;
                }
            }
            k += 1;
        }
    }
}

impl fmt::Display for DoubleSumForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "dsum({},{})", self.tri_mult, self.pent_mult)
    }
}

/// Expands the weighted double sum of `form` to the requested order.
pub fn weighted_double_sum(form: &DoubleSumForm, order: usize) -> Series {
    let mut coeffs = vec![BigInt::zero(); order + 1];
    form.for_each_term(order, |_, _, e, w| {
        coeffs[e as usize] += w;
    });
    Series::from_coeffs(coeffs)
}
