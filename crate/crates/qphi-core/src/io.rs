//! Series serialization.
//!
//! Two interchange forms:
//!
//! * a plain-text form with one `n<TAB>c` line per coefficient, exponents
//!   ascending from zero;
//! * a single structured document `{order, modulus?, coeffs[]}` with the
//!   coefficients as decimal strings, so arbitrary-precision values survive
//!   JSON round trips untouched.

use num_bigint::BigInt;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::series::Series;

/// Renders one `n<TAB>c` line per coefficient.
pub fn to_tsv(series: &Series) -> String {
    let mut out = String::new();
    for (n, c) in series.coeffs().iter().enumerate() {
        writeln!(out, "{n}\t{c}").expect("writing to a String cannot fail");
    }
    out
}

/// Parses the `n<TAB>c` form produced by [`to_tsv`]. Exponents must be the
/// contiguous range 0..=N in order; the result is an integer series.
pub fn from_tsv(text: &str) -> Result<Series> {
    let mut coeffs = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let (n_text, c_text) = line.split_once('\t').ok_or_else(|| {
            Error::MalformedSeries(format!("line {} has no tab separator", lineno + 1))
        })?;
        let n: usize = n_text.trim().parse().map_err(|_| {
            Error::MalformedSeries(format!("line {}: bad exponent '{n_text}'", lineno + 1))
        })?;
        if n != coeffs.len() {
            return Err(Error::MalformedSeries(format!(
                "line {}: expected exponent {}, found {n}",
                lineno + 1,
                coeffs.len()
            )));
        }
        let c = BigInt::from_str(c_text.trim()).map_err(|_| {
            Error::MalformedSeries(format!("line {}: bad coefficient '{c_text}'", lineno + 1))
        })?;
        coeffs.push(c);
    }
    if coeffs.is_empty() {
        return Err(Error::MalformedSeries("no coefficient lines".into()));
    }
    Ok(Series::from_coeffs(coeffs))
}

/// Structured single-document form of a series.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesDocument {
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    pub coeffs: Vec<String>,
}

impl SeriesDocument {
    pub fn from_series(series: &Series) -> SeriesDocument {
        SeriesDocument {
            order: series.order(),
            modulus: series.modulus(),
            coeffs: series.coeffs().iter().map(BigInt::to_string).collect(),
        }
    }

    /// Validates the shape (length matches the order, residues canonical
    /// when a modulus is present) and rebuilds the series.
    pub fn into_series(self) -> Result<Series> {
        if self.coeffs.len() != self.order + 1 {
            return Err(Error::MalformedSeries(format!(
                "order {} needs {} coefficients, found {}",
                self.order,
                self.order + 1,
                self.coeffs.len()
            )));
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len());
        for (n, text) in self.coeffs.iter().enumerate() {
            let c = BigInt::from_str(text).map_err(|_| {
                Error::MalformedSeries(format!("coefficient {n} is not an integer: '{text}'"))
            })?;
            if let Some(m) = self.modulus {
                if m < 2 {
                    return Err(Error::InvalidModulus(m));
                }
                if c.is_negative() || c >= BigInt::from(m) {
                    return Err(Error::MalformedSeries(format!(
                        "coefficient {n} = {c} is not a canonical residue mod {m}"
                    )));
                }
            }
            coeffs.push(c);
        }
        let series = Series::from_coeffs(coeffs);
        match self.modulus {
            Some(m) => crate::arithmetic::reduce_mod(&series, m),
            None => Ok(series),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arithmetic::reduce_mod;

    #[test]
    fn tsv_round_trip() {
        let s = Series::from_i64(&[1, 0, -4, 0, 2]);
        let text = to_tsv(&s);
        assert_eq!(text, "0\t1\n1\t0\n2\t-4\n3\t0\n4\t2\n");
        assert_eq!(from_tsv(&text).unwrap(), s);
    }

    #[test]
    fn tsv_rejects_gaps_and_junk() {
        assert!(matches!(
            from_tsv("0\t1\n2\t5\n"),
            Err(Error::MalformedSeries(_))
        ));
        assert!(matches!(from_tsv("0 1\n"), Err(Error::MalformedSeries(_))));
        assert!(matches!(from_tsv(""), Err(Error::MalformedSeries(_))));
    }

    #[test]
    fn document_round_trip_preserves_modulus() {
        let s = reduce_mod(&Series::from_i64(&[1, -4, 2]), 5).unwrap();
        let doc = SeriesDocument::from_series(&s);
        assert_eq!(doc.modulus, Some(5));
        assert_eq!(doc.coeffs, vec!["1", "1", "2"]);
        let json = serde_json::to_string(&doc).unwrap();
        let back: SeriesDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back.into_series().unwrap(), s);
    }

    #[test]
    fn document_omits_modulus_over_the_integers() {
        let doc = SeriesDocument::from_series(&Series::from_i64(&[7]));
        let json = serde_json::to_string(&doc).unwrap();
        assert!(!json.contains("modulus"), "json was {json}");
    }

    #[test]
    fn document_validates_shape() {
        let doc = SeriesDocument {
            order: 3,
            modulus: None,
            coeffs: vec!["1".into()],
        };
        assert!(matches!(
            doc.into_series(),
            Err(Error::MalformedSeries(_))
        ));

        let doc = SeriesDocument {
            order: 0,
            modulus: Some(5),
            coeffs: vec!["7".into()],
        };
        assert!(matches!(doc.into_series(), Err(Error::MalformedSeries(_))));
    }
}
