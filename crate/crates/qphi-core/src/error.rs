//! Error type shared by every layer of the crate.
//!
//! Arithmetic on truncated series is strict: operands must agree on both the
//! truncation order and the coefficient ring, and violations are reported as
//! errors rather than silently coerced. Parse errors carry a 1-based byte
//! offset into the source text.

use num_bigint::BigInt;
use thiserror::Error;

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("order mismatch: one operand is truncated at q^{left}, the other at q^{right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("coefficient ring mismatch: one operand is {}, the other is {}", ring_name(.left), ring_name(.right))]
    ModulusMismatch { left: Option<u64>, right: Option<u64> },

    #[error("constant term {constant} is not invertible {}", ring_name(.modulus))]
    NonUnitConstant {
        constant: BigInt,
        modulus: Option<u64>,
    },

    #[error("modulus must be at least 2, got {0}")]
    InvalidModulus(u64),

    #[error("series is already reduced modulo {0}; reduce_mod expects integer coefficients")]
    AlreadyReduced(u64),

    #[error("step must be a positive integer")]
    ZeroStep,

    #[error("residue {residue} is not a valid residue modulo the step {step}")]
    ResidueOutOfRange { residue: u64, step: u64 },

    #[error("dissecting an order-{order} series on exponents = {residue} (mod {step}) keeps no coefficients")]
    DissectUnderflow {
        order: usize,
        step: u32,
        residue: u32,
    },

    #[error("cannot truncate an order-{order} series up to order {requested}")]
    TruncateBeyondOrder { requested: usize, order: usize },

    #[error("interleave requires at least one part")]
    EmptyInterleave,

    #[error("Pochhammer offset and step must both be at least 1")]
    InvalidPochhammer,

    #[error("Pochhammer exponent must be nonzero")]
    ZeroExponent,

    #[error("double-sum multipliers must both be at least 1")]
    InvalidDoubleSum,

    #[error("color/repetition count must be at least 1")]
    InvalidOracleParameter,

    #[error("oracle order {requested} exceeds the configured limit {limit}")]
    OracleOrderLimit { requested: usize, limit: usize },

    #[error("oracle self-check failed ({gate}): first mismatch at q^{index}, got {actual}, expected {expected}")]
    OracleGateFailed {
        gate: String,
        index: usize,
        actual: BigInt,
        expected: BigInt,
    },

    #[error("no series is bound to the name '{0}'")]
    UnboundName(String),

    #[error("modulus {0} is not an odd prime, so k(k+1)/2 has no residue meaning")]
    NotOddPrime(u64),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("fixture error: {0}")]
    Fixture(String),

    #[error("serialized series is malformed: {0}")]
    MalformedSeries(String),

    #[error("internal cross-check failed: {0}")]
    CrossCheck(String),
}

fn ring_name(modulus: &Option<u64>) -> String {
    match modulus {
        Some(m) => format!("modulo {m}"),
        None => "over the integers".into(),
    }
}

/// Syntax or semantic error from the expression parser, with a 1-based
/// offset into the input text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at offset {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(offset: usize, message: impl Into<String>) -> Self {
        ParseError {
            offset,
            message: message.into(),
        }
    }
}
