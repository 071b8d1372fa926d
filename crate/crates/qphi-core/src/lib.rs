//! Exact truncated q-series arithmetic for generalized Frobenius partitions.
//!
//! The crate is organized bottom-up:
//!
//! - [`series`]: truncated power series over the integers or a prime-free
//!   modular ring, with explicit truncation orders.
//! - [`arithmetic`]: ring operations, inversion, dissection, interleaving,
//!   and the parallel/sequential multiplication kernels.
//! - [`products`]: Pochhammer symbols, eta-quotient style products, theta
//!   series, and weighted double sums.
//! - [`bivariate`]: independent constant-term oracles for the colored and
//!   bounded-repetition Frobenius counts.
//! - [`expr`] and [`parse`]: a small expression language for naming series
//!   constructions, with a printer and parser that invert each other.
//! - [`verify`]: identity, congruence, and residue-class checkers that
//!   produce structured reports.
//! - [`frobenius`]: the four-colored generating functions, their even
//!   parts, and the mod 5 collapse, as expressions and as checks.
//! - [`fixtures`]: TOML claim files and the built-in claim battery.
//! - [`io`]: plain-text and structured serialization of series.

pub mod arithmetic;
pub mod bivariate;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod frobenius;
pub mod io;
pub mod parse;
pub mod products;
pub mod series;
pub mod verify;

pub use error::{Error, ParseError, Result};
pub use series::Series;
