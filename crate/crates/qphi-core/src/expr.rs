//! Expression trees for q-series.
//!
//! A [`SeriesExpr`] is the abstract syntax behind the text language used by
//! the fixtures and the command line. Leaves are Pochhammer symbols, theta
//! series, double sums, integer and q monomials, and named series bound at
//! evaluation time; interior nodes are ring operations plus the structural
//! ones (inversion, substitution, dissection, modular reduction).
//!
//! Display renders the canonical text form with the minimal parentheses the
//! grammar requires, so printing and reparsing an expression gives back the
//! same tree. Binary operators associate to the left; exponentiation binds
//! to a single atom.

use std::fmt;

use crate::products::{DoubleSumForm, PochhammerFactor};

/// Abstract syntax of a series expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesExpr {
    /// Nonnegative integer literal.
    Integer(i64),
    /// The formal variable q.
    Q,
    /// `P(a,b,e)` or `Pneg(a,b,e)`.
    Pochhammer(PochhammerFactor),
    /// `phi(t)`: theta series over squares scaled by t.
    ThetaPhi(u32),
    /// `psi(t)`: theta series over triangular numbers scaled by t.
    ThetaPsi(u32),
    /// `dsum(a,b)`: weighted double sum over triangular and pentagonal
    /// exponents.
    DoubleSum(DoubleSumForm),
    /// `@name`: series bound in the evaluation environment.
    Named(String),
    Add(Box<SeriesExpr>, Box<SeriesExpr>),
    Sub(Box<SeriesExpr>, Box<SeriesExpr>),
    Mul(Box<SeriesExpr>, Box<SeriesExpr>),
    /// `f^e` with a possibly negative exponent.
    Pow(Box<SeriesExpr>, i32),
    /// `inv(f)`: multiplicative inverse.
    Invert(Box<SeriesExpr>),
    /// `sub(f,t)`: substitute q^t for q.
    Substitute(Box<SeriesExpr>, u32),
    /// `dissect(f,t,r)`: coefficients on exponents congruent to r mod t.
    Dissect(Box<SeriesExpr>, u32, u32),
    /// `mod(f,m)`: reduce coefficients into Z/m.
    ReduceMod(Box<SeriesExpr>, u64),
}

impl SeriesExpr {
    pub fn add(self, rhs: SeriesExpr) -> SeriesExpr {
        SeriesExpr::Add(Box::new(self), Box::new(rhs))
    }

    pub fn sub(self, rhs: SeriesExpr) -> SeriesExpr {
        SeriesExpr::Sub(Box::new(self), Box::new(rhs))
    }

    pub fn mul(self, rhs: SeriesExpr) -> SeriesExpr {
        SeriesExpr::Mul(Box::new(self), Box::new(rhs))
    }

    pub fn pow(self, exponent: i32) -> SeriesExpr {
        SeriesExpr::Pow(Box::new(self), exponent)
    }

    /// Operator precedence used by Display: sums bind loosest, then
    /// products, then exponentiation; everything else is atomic.
    fn precedence(&self) -> u8 {
        match self {
            SeriesExpr::Add(..) | SeriesExpr::Sub(..) => 1,
            SeriesExpr::Mul(..) => 2,
            SeriesExpr::Pow(..) => 3,
            _ => 4,
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let wrap = self.precedence() < min;
        if wrap {
            write!(f, "(")?;
        }
        match self {
            SeriesExpr::Integer(n) => write!(f, "{n}")?,
            SeriesExpr::Q => write!(f, "q")?,
            SeriesExpr::Pochhammer(factor) => write!(f, "{factor}")?,
            SeriesExpr::ThetaPhi(t) => write!(f, "phi({t})")?,
            SeriesExpr::ThetaPsi(t) => write!(f, "psi({t})")?,
            SeriesExpr::DoubleSum(form) => write!(f, "{form}")?,
            SeriesExpr::Named(name) => write!(f, "@{name}")?,
            SeriesExpr::Add(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                r.fmt_prec(f, 2)?;
            }
            SeriesExpr::Sub(l, r) => {
                l.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                r.fmt_prec(f, 2)?;
            }
            SeriesExpr::Mul(l, r) => {
                l.fmt_prec(f, 2)?;
                write!(f, "*")?;
                r.fmt_prec(f, 3)?;
            }
            SeriesExpr::Pow(base, exponent) => {
                base.fmt_prec(f, 4)?;
                write!(f, "^{exponent}")?;
            }
            SeriesExpr::Invert(inner) => {
                write!(f, "inv(")?;
                inner.fmt_prec(f, 0)?;
                write!(f, ")")?;
            }
            SeriesExpr::Substitute(inner, t) => {
                write!(f, "sub(")?;
                inner.fmt_prec(f, 0)?;
                write!(f, ",{t})")?;
            }
            SeriesExpr::Dissect(inner, t, r) => {
                write!(f, "dissect(")?;
                inner.fmt_prec(f, 0)?;
                write!(f, ",{t},{r})")?;
            }
            SeriesExpr::ReduceMod(inner, m) => {
                write!(f, "mod(")?;
                inner.fmt_prec(f, 0)?;
                write!(f, ",{m})")?;
            }
        }
        if wrap {
            write!(f, ")")?;
        }
        Ok(())
    }
}

impl fmt::Display for SeriesExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// A sum of two completed squares,
/// `k_mult*(k_scale*k + k_shift)^2 + m_mult*(m_scale*m + m_shift)^2`,
/// written in text as e.g. `3*(2k+1)^2+(6m-1)^2`. These arise when the
/// exponents of a weighted double sum are completed to squares to read off
/// which residue classes the surviving terms can reach.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompletedSquareForm {
    pub k_mult: i64,
    pub k_scale: i64,
    pub k_shift: i64,
    pub m_mult: i64,
    pub m_scale: i64,
    pub m_shift: i64,
}

impl CompletedSquareForm {
    /// Value of the form at integer arguments.
    pub fn value(&self, k: i64, m: i64) -> i64 {
        let a = self.k_scale * k + self.k_shift;
        let b = self.m_scale * m + self.m_shift;
        self.k_mult * a * a + self.m_mult * b * b
    }

    /// Value of the form reduced into 0..modulus.
    pub fn residue(&self, k: i64, m: i64, modulus: u64) -> u64 {
        self.value(k, m).rem_euclid(modulus as i64) as u64
    }
}

impl fmt::Display for CompletedSquareForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let write_square = |f: &mut fmt::Formatter<'_>,
                            mult: i64,
                            scale: i64,
                            shift: i64,
                            var: char|
         -> fmt::Result {
            if mult != 1 {
                write!(f, "{mult}*")?;
            }
            write!(f, "(")?;
            if scale != 1 {
                write!(f, "{scale}")?;
            }
            write!(f, "{var}")?;
            if shift > 0 {
                write!(f, "+{shift}")?;
            } else if shift < 0 {
                write!(f, "{shift}")?;
            }
            write!(f, ")^2")
        };
        write_square(f, self.k_mult, self.k_scale, self.k_shift, 'k')?;
        write!(f, "+")?;
        write_square(f, self.m_mult, self.m_scale, self.m_shift, 'm')
    }
}
