//! Truncated formal power series with exact coefficients.
//!
//! A [`Series`] holds the coefficients of q^0 .. q^N for a fixed truncation
//! order N, either over the integers (arbitrary precision) or reduced modulo
//! a fixed modulus m >= 2 with canonical residues in [0, m). The order and
//! the coefficient ring are part of the value: operations in
//! [`crate::arithmetic`] refuse to mix series that disagree on either one,
//! because a silent coercion would turn a truncation bookkeeping bug into a
//! wrong theorem.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};

/// Dense truncated power series: coefficient i is the coefficient of q^i,
/// exact for every exponent up to and including `order()`.
#[derive(Clone, PartialEq, Eq)]
pub struct Series {
    coeffs: Vec<BigInt>,
    modulus: Option<u64>,
}

impl Series {
    /// The zero series truncated at `order`.
    pub fn zero(order: usize) -> Series {
        Series {
            coeffs: vec![BigInt::zero(); order + 1],
            modulus: None,
        }
    }

    /// The constant series 1 truncated at `order`.
    pub fn one(order: usize) -> Series {
        Series::monomial(1, 0, order)
    }

    /// The monomial c * q^power truncated at `order`. A power beyond the
    /// order yields the zero series (every retained coefficient is zero).
    pub fn monomial(coeff: impl Into<BigInt>, power: usize, order: usize) -> Series {
        let mut coeffs = vec![BigInt::zero(); order + 1];
        if power <= order {
            coeffs[power] = coeff.into();
        }
        Series {
            coeffs,
            modulus: None,
        }
    }

    /// Integer series from explicit coefficients; the order is the last
    /// index. Panics on an empty list (there is no series without q^0).
    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Series {
        assert!(
            !coeffs.is_empty(),
            "a series needs at least the q^0 coefficient"
        );
        Series {
            coeffs,
            modulus: None,
        }
    }

    /// Shorthand used pervasively in tests.
    pub fn from_i64(coeffs: &[i64]) -> Series {
        Series::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    /// Internal constructor for coefficients that are already canonical for
    /// `modulus`. Callers must uphold that invariant.
    pub(crate) fn raw(coeffs: Vec<BigInt>, modulus: Option<u64>) -> Series {
        debug_assert!(!coeffs.is_empty());
        debug_assert!(match modulus {
            Some(m) => coeffs
                .iter()
                .all(|c| !c.is_negative() && *c < BigInt::from(m)),
            None => true,
        });
        Series { coeffs, modulus }
    }

    /// Truncation order N: coefficients are exact for q^0 .. q^N.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The modulus when the series lives in Z/m, `None` over Z.
    pub fn modulus(&self) -> Option<u64> {
        self.modulus
    }

    /// Coefficient of q^n, or `None` beyond the truncation order.
    pub fn coeff(&self, n: usize) -> Option<&BigInt> {
        self.coeffs.get(n)
    }

    /// All retained coefficients, lowest exponent first.
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    /// True when every retained coefficient is zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Smallest exponent with a nonzero coefficient, if any.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub(crate) fn reduce_value(value: BigInt, modulus: Option<u64>) -> BigInt {
        match modulus {
            Some(m) => value.mod_floor(&BigInt::from(m)),
            None => value,
        }
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Series({self})")
    }
}

impl fmt::Display for Series {
    /// Renders the leading terms in the usual `1 - 4*q^2 + 2*q^4` style,
    /// with an `O(q^{N+1})` tail marker and the modulus when present.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        const MAX_TERMS: usize = 12;
        let mut shown = 0usize;
        let mut first = true;
        for (n, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if shown == MAX_TERMS {
                write!(f, " + ...")?;
                break;
            }
            let magnitude = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (n, magnitude.is_one()) {
                (0, _) => write!(f, "{magnitude}")?,
                (_, true) => write!(f, "q^{n}")?,
                (_, false) => write!(f, "{magnitude}*q^{n}")?,
            }
            shown += 1;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)?;
        if let Some(m) = self.modulus {
            write!(f, " (mod {m})")?;
        }
        Ok(())
    }
}

/// Checks the equal-order, equal-ring contract and returns the common shape.
pub(crate) fn common_shape(a: &Series, b: &Series) -> Result<(usize, Option<u64>)> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch {
            left: a.order(),
            right: b.order(),
        });
    }
    if a.modulus() != b.modulus() {
        return Err(Error::ModulusMismatch {
            left: a.modulus(),
            right: b.modulus(),
        });
    }
    Ok((a.order(), a.modulus()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructors_fix_order_and_ring() {
        let z = Series::zero(4);
        assert_eq!(z.order(), 4);
        assert!(z.is_zero());
        assert_eq!(z.modulus(), None);

        let m = Series::monomial(48, 1, 3);
        assert_eq!(m.coeff(1), Some(&BigInt::from(48)));
        assert_eq!(m.coeff(4), None, "beyond the order there is no coefficient");

        let far = Series::monomial(7, 10, 3);
        assert!(far.is_zero(), "a monomial beyond the order truncates away");
    }

    #[test]
    fn valuation_finds_first_nonzero_exponent() {
        assert_eq!(Series::from_i64(&[0, 0, 5, 1]).valuation(), Some(2));
        assert_eq!(Series::zero(6).valuation(), None);
    }

    #[test]
    fn display_shows_signs_powers_and_tail() {
        let s = Series::from_i64(&[1, 0, -4, 0, 2]);
        assert_eq!(format!("{s}"), "1 - 4*q^2 + 2*q^4 + O(q^5)");
        assert_eq!(format!("{}", Series::zero(2)), "0 + O(q^3)");
        let t = Series::from_i64(&[0, -1]);
        assert_eq!(format!("{t}"), "-q^1 + O(q^2)");
    }

    #[test]
    fn common_shape_rejects_mixed_operands() {
        let a = Series::one(3);
        let b = Series::one(5);
        assert_eq!(
            common_shape(&a, &b),
            Err(Error::OrderMismatch { left: 3, right: 5 })
        );

        let c = crate::arithmetic::reduce_mod(&Series::one(3), 5).unwrap();
        assert_eq!(
            common_shape(&a, &c),
            Err(Error::ModulusMismatch {
                left: None,
                right: Some(5)
            })
        );
    }
}
