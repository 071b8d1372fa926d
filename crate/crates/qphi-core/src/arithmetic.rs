//! Operations on truncated series.
//!
//! Everything here is exact: a result's coefficients are correct for every
//! exponent up to its truncation order, and operand orders/rings must match
//! (see [`crate::series`]). The only algorithmic choices are about speed,
//! never about precision:
//!
//! * multiplication defaults to the schoolbook convolution, parallelized
//!   with rayon above [`PARALLEL_MUL_MIN_ORDER`] when the `parallel`
//!   feature is enabled;
//! * an optional Karatsuba multiplication can be switched on above a
//!   process-wide threshold with [`set_karatsuba_threshold`] (off by
//!   default); it computes the full polynomial product and truncates.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::series::{common_shape, Series};

/// Smallest order at which the parallel schoolbook convolution is used.
pub const PARALLEL_MUL_MIN_ORDER: usize = 64;

/// Smallest step index at which `invert` parallelizes its inner sum.
#[cfg(feature = "parallel")]
const PARALLEL_INVERT_MIN: usize = 256;

/// Below this many coefficients Karatsuba recursion falls back to the
/// schoolbook product.
const KARATSUBA_LEAF: usize = 32;

static KARATSUBA_THRESHOLD: AtomicUsize = AtomicUsize::new(0);
static PARALLEL_ENABLED: AtomicBool = AtomicBool::new(true);

/// Enables Karatsuba multiplication for products of `threshold` or more
/// coefficients; `None` (the default) disables it.
pub fn set_karatsuba_threshold(threshold: Option<usize>) {
    let stored = match threshold {
        Some(t) => t.max(1),
        None => 0,
    };
    KARATSUBA_THRESHOLD.store(stored, Ordering::Relaxed);
}

/// Current Karatsuba dispatch threshold, if enabled.
pub fn karatsuba_threshold() -> Option<usize> {
    match KARATSUBA_THRESHOLD.load(Ordering::Relaxed) {
        0 => None,
        t => Some(t),
    }
}

/// Turns the rayon code paths on or off at runtime. A no-op when the
/// `parallel` feature is compiled out.
pub fn set_parallel_enabled(enabled: bool) {
    PARALLEL_ENABLED.store(enabled, Ordering::Relaxed);
}

/// Whether the rayon code paths are currently allowed.
pub fn parallel_enabled() -> bool {
    PARALLEL_ENABLED.load(Ordering::Relaxed)
}

// ---------------------------------------------------------------------------
// linear operations
// ---------------------------------------------------------------------------

/// Coefficientwise sum. Operands must share order and ring.
pub fn add(a: &Series, b: &Series) -> Result<Series> {
    let (_, modulus) = common_shape(a, b)?;
    let coeffs = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| Series::reduce_value(x + y, modulus))
        .collect();
    Ok(Series::raw(coeffs, modulus))
}

/// Coefficientwise difference. Operands must share order and ring.
pub fn sub(a: &Series, b: &Series) -> Result<Series> {
    let (_, modulus) = common_shape(a, b)?;
    let coeffs = a
        .coeffs()
        .iter()
        .zip(b.coeffs())
        .map(|(x, y)| Series::reduce_value(x - y, modulus))
        .collect();
    Ok(Series::raw(coeffs, modulus))
}

/// Negation.
pub fn neg(a: &Series) -> Series {
    let coeffs = a
        .coeffs()
        .iter()
        .map(|x| Series::reduce_value(-x, a.modulus()))
        .collect();
    Series::raw(coeffs, a.modulus())
}

/// Multiplication by a fixed integer.
pub fn scale(a: &Series, c: &BigInt) -> Series {
    let coeffs = a
        .coeffs()
        .iter()
        .map(|x| Series::reduce_value(c * x, a.modulus()))
        .collect();
    Series::raw(coeffs, a.modulus())
}

/// Multiplication by q^s. The result has order `a.order() + s`: shifting
/// loses nothing, so the order grows with the exponents.
pub fn shift(a: &Series, s: usize) -> Series {
    let mut coeffs = vec![BigInt::zero(); s];
    coeffs.extend_from_slice(a.coeffs());
    Series::raw(coeffs, a.modulus())
}

/// Drops coefficients above `order`. Raising the order is refused: the
/// missing coefficients are unknown, not zero.
pub fn truncate(a: &Series, order: usize) -> Result<Series> {
    if order > a.order() {
        return Err(Error::TruncateBeyondOrder {
            requested: order,
            order: a.order(),
        });
    }
    Ok(Series::raw(
        a.coeffs()[..=order].to_vec(),
        a.modulus(),
    ))
}

/// Inverse of dissection: given parts d_0 .. d_{t-1}, builds the series
/// whose coefficient of q^(t*j + r) is coefficient j of d_r. The result
/// order is the largest exponent every part can account for,
/// min_r (t * order(d_r) + r), which is at least N - t when the parts came
/// from dissecting an order-N series.
pub fn interleave(parts: &[Series]) -> Result<Series> {
    if parts.is_empty() {
        return Err(Error::EmptyInterleave);
    }
    let modulus = parts[0].modulus();
    for p in &parts[1..] {
        if p.modulus() != modulus {
            return Err(Error::ModulusMismatch {
                left: modulus,
                right: p.modulus(),
            });
        }
    }
    let t = parts.len();
    let order = parts
        .iter()
        .enumerate()
        .map(|(r, p)| t * p.order() + r)
        .min()
        .expect("parts is non-empty");
    let coeffs = (0..=order)
        .map(|e| parts[e % t].coeffs()[e / t].clone())
        .collect();
    Ok(Series::raw(coeffs, modulus))
}

// ---------------------------------------------------------------------------
// multiplication
// ---------------------------------------------------------------------------

/// Product truncated to the common order. Dispatches to Karatsuba when a
/// threshold is configured, otherwise to the (possibly parallel)
/// schoolbook convolution.
pub fn mul(a: &Series, b: &Series) -> Result<Series> {
    let (order, _) = common_shape(a, b)?;
    if let Some(threshold) = karatsuba_threshold() {
        if order + 1 >= threshold {
            return mul_karatsuba(a, b);
        }
    }
    #[cfg(feature = "parallel")]
    if parallel_enabled() && order >= PARALLEL_MUL_MIN_ORDER {
        return mul_schoolbook_parallel(a, b);
    }
    mul_schoolbook(a, b)
}

fn convolve_at(a: &[BigInt], b: &[BigInt], k: usize, modulus: Option<u64>) -> BigInt {
    let mut acc = BigInt::zero();
    for i in 0..=k {
        acc += &a[i] * &b[k - i];
    }
    Series::reduce_value(acc, modulus)
}

/// Sequential O(N^2) truncated product; the baseline every other
/// multiplication path is checked against.
pub fn mul_schoolbook(a: &Series, b: &Series) -> Result<Series> {
    let (order, modulus) = common_shape(a, b)?;
    let coeffs = (0..=order)
        .map(|k| convolve_at(a.coeffs(), b.coeffs(), k, modulus))
        .collect();
    Ok(Series::raw(coeffs, modulus))
}

/// Parallel schoolbook product: each output coefficient is an independent
/// convolution, computed on the rayon pool.
#[cfg(feature = "parallel")]
pub fn mul_schoolbook_parallel(a: &Series, b: &Series) -> Result<Series> {
    let (order, modulus) = common_shape(a, b)?;
    let coeffs = (0..=order)
        .into_par_iter()
        .map(|k| convolve_at(a.coeffs(), b.coeffs(), k, modulus))
        .collect();
    Ok(Series::raw(coeffs, modulus))
}

/// Karatsuba product: computes the full polynomial product recursively and
/// truncates to the common order. Exactness is unaffected; only the
/// operation count changes.
pub fn mul_karatsuba(a: &Series, b: &Series) -> Result<Series> {
    let (order, modulus) = common_shape(a, b)?;
    let mut full = karatsuba_full(a.coeffs(), b.coeffs());
    full.truncate(order + 1);
    full.resize(order + 1, BigInt::zero());
    let coeffs = full
        .into_iter()
        .map(|c| Series::reduce_value(c, modulus))
        .collect();
    Ok(Series::raw(coeffs, modulus))
}

fn schoolbook_full(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[i + j] += x * y;
        }
    }
    out
}

fn add_slices(lo: &[BigInt], hi: &[BigInt]) -> Vec<BigInt> {
    let mut out = lo.to_vec();
    if hi.len() > out.len() {
        out.resize(hi.len(), BigInt::zero());
    }
    for (o, h) in out.iter_mut().zip(hi) {
        *o += h;
    }
    out
}

fn karatsuba_full(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    if a.len().min(b.len()) <= KARATSUBA_LEAF {
        return schoolbook_full(a, b);
    }
    let h = a.len().max(b.len()) / 2;
    let (a0, a1) = a.split_at(h.min(a.len()));
    let (b0, b1) = b.split_at(h.min(b.len()));
    let sa = add_slices(a0, a1);
    let sb = add_slices(b0, b1);

    #[cfg(feature = "parallel")]
    let ((z0, z2), zmid) = if parallel_enabled() && a.len().min(b.len()) >= 4 * KARATSUBA_LEAF {
        rayon::join(
            || rayon::join(|| karatsuba_full(a0, b0), || karatsuba_full(a1, b1)),
            || karatsuba_full(&sa, &sb),
        )
    } else {
        (
            (karatsuba_full(a0, b0), karatsuba_full(a1, b1)),
            karatsuba_full(&sa, &sb),
        )
    };
    #[cfg(not(feature = "parallel"))]
    let ((z0, z2), zmid) = (
        (karatsuba_full(a0, b0), karatsuba_full(a1, b1)),
        karatsuba_full(&sa, &sb),
    );

    // z1 = (a0+a1)(b0+b1) - z0 - z2
    let mut z1 = zmid;
    for (i, c) in z0.iter().enumerate() {
        z1[i] -= c;
    }
    for (i, c) in z2.iter().enumerate() {
        z1[i] -= c;
    }

    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, c) in z0.into_iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in z1.into_iter().enumerate() {
        if !c.is_zero() {
            out[i + h] += c;
        }
    }
    for (i, c) in z2.into_iter().enumerate() {
        out[i + 2 * h] += c;
    }
    out
}

// ---------------------------------------------------------------------------
// inversion and powers
// ---------------------------------------------------------------------------

fn mod_inverse(c: &BigInt, m: u64) -> Option<BigInt> {
    let modulus = BigInt::from(m);
    let e = c.extended_gcd(&modulus);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(&modulus))
    } else {
        None
    }
}

fn tail_convolution(a: &[BigInt], b: &[BigInt], n: usize) -> BigInt {
    #[cfg(feature = "parallel")]
    if parallel_enabled() && n >= PARALLEL_INVERT_MIN {
        return (1..=n)
            .into_par_iter()
            .map(|i| &a[i] * &b[n - i])
            .reduce(BigInt::zero, |x, y| x + y);
    }
    let mut acc = BigInt::zero();
    for i in 1..=n {
        acc += &a[i] * &b[n - i];
    }
    acc
}

/// Multiplicative inverse of a series whose constant term is a unit
/// (1 or -1 over the integers, an invertible residue modulo m). The
/// coefficients follow the geometric-series recurrence
/// b_n = -b_0 * sum_{i=1..n} a_i b_{n-i}.
pub fn invert(a: &Series) -> Result<Series> {
    let modulus = a.modulus();
    let c0 = &a.coeffs()[0];
    let b0 = match modulus {
        None => {
            if c0.is_one() || (-c0).is_one() {
                c0.clone()
            } else {
                return Err(Error::NonUnitConstant {
                    constant: c0.clone(),
                    modulus,
                });
            }
        }
        Some(m) => mod_inverse(c0, m).ok_or_else(|| Error::NonUnitConstant {
            constant: c0.clone(),
            modulus,
        })?,
    };
    let order = a.order();
    let mut b: Vec<BigInt> = Vec::with_capacity(order + 1);
    b.push(Series::reduce_value(b0.clone(), modulus));
    for n in 1..=order {
        let s = tail_convolution(a.coeffs(), &b, n);
        b.push(Series::reduce_value(-(s * &b0), modulus));
    }
    Ok(Series::raw(b, modulus))
}

/// Integer power by repeated squaring, truncating after every product.
/// Negative exponents invert first, so they require a unit constant term.
pub fn pow(a: &Series, e: i64) -> Result<Series> {
    if e == 0 {
        let one = Series::one(a.order());
        return match a.modulus() {
            Some(m) => reduce_mod(&one, m),
            None => Ok(one),
        };
    }
    if e < 0 {
        let inv = invert(a)?;
        return pow_repeated_squaring(&inv, e.unsigned_abs());
    }
    pow_repeated_squaring(a, e as u64)
}

fn pow_repeated_squaring(a: &Series, e: u64) -> Result<Series> {
    debug_assert!(e >= 1);
    let mut base = a.clone();
    let mut exp = e;
    let mut acc: Option<Series> = None;
    loop {
        if exp & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(r) => mul(&r, &base)?,
            });
        }
        exp >>= 1;
        if exp == 0 {
            break;
        }
        base = mul(&base, &base)?;
    }
    Ok(acc.expect("e >= 1 sets the accumulator"))
}

// ---------------------------------------------------------------------------
// substitution, dissection, reduction
// ---------------------------------------------------------------------------

/// a(q^t), truncated to the input's order: coefficient t*n of the result is
/// coefficient n of `a`, everything else is zero.
pub fn substitute_power(a: &Series, t: u32) -> Result<Series> {
    if t == 0 {
        return Err(Error::ZeroStep);
    }
    let t = t as usize;
    let order = a.order();
    let mut coeffs = vec![BigInt::zero(); order + 1];
    let mut j = 0usize;
    while j * t <= order {
        coeffs[j * t] = a.coeffs()[j].clone();
        j += 1;
    }
    Ok(Series::raw(coeffs, a.modulus()))
}

/// The (t, r)-dissection: coefficient n of the result is coefficient
/// t*n + r of `a`, so the result captures exactly the exponents congruent
/// to r mod t. The order shrinks to floor((N - r) / t).
pub fn dissect(a: &Series, t: u32, r: u32) -> Result<Series> {
    if t == 0 {
        return Err(Error::ZeroStep);
    }
    if r >= t {
        return Err(Error::ResidueOutOfRange {
            residue: r as u64,
            step: t as u64,
        });
    }
    let (ts, rs) = (t as usize, r as usize);
    if a.order() < rs {
        return Err(Error::DissectUnderflow {
            order: a.order(),
            step: t,
            residue: r,
        });
    }
    let new_order = (a.order() - rs) / ts;
    let coeffs = (0..=new_order)
        .map(|j| a.coeffs()[ts * j + rs].clone())
        .collect();
    Ok(Series::raw(coeffs, a.modulus()))
}

/// Moves an integer series into Z/m, with canonical residues in [0, m).
/// Re-reducing an already modular series is refused.
pub fn reduce_mod(a: &Series, m: u64) -> Result<Series> {
    if let Some(existing) = a.modulus() {
        return Err(Error::AlreadyReduced(existing));
    }
    if m < 2 {
        return Err(Error::InvalidModulus(m));
    }
    let coeffs = a
        .coeffs()
        .iter()
        .map(|c| Series::reduce_value(c.clone(), Some(m)))
        .collect();
    Ok(Series::raw(coeffs, Some(m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;
    use proptest::prelude::*;

    fn s(coeffs: &[i64]) -> Series {
        Series::from_i64(coeffs)
    }

    // ======================================================================
    // linear operations
    // ======================================================================

    #[test]
    fn add_sub_neg_scale_are_coefficientwise() {
        let a = s(&[1, 2, 3]);
        let b = s(&[0, -2, 5]);
        assert_eq!(add(&a, &b).unwrap(), s(&[1, 0, 8]));
        assert_eq!(sub(&a, &b).unwrap(), s(&[1, 4, -2]));
        assert_eq!(neg(&a), s(&[-1, -2, -3]));
        assert_eq!(scale(&a, &BigInt::from(-3)), s(&[-3, -6, -9]));
    }

    #[test]
    fn add_requires_matching_shape() {
        let err = add(&s(&[1, 2]), &s(&[1, 2, 3])).unwrap_err();
        assert_eq!(err, Error::OrderMismatch { left: 1, right: 2 });

        let m = reduce_mod(&s(&[1, 2]), 5).unwrap();
        let err = add(&s(&[1, 2]), &m).unwrap_err();
        assert!(matches!(err, Error::ModulusMismatch { .. }));
    }

    #[test]
    fn shift_raises_the_order_and_loses_nothing() {
        let a = s(&[1, 2, 3]);
        let shifted = shift(&a, 2);
        assert_eq!(shifted, s(&[0, 0, 1, 2, 3]));
        assert_eq!(shifted.order(), 4, "multiplying by q^2 extends the order");
    }

    #[test]
    fn truncate_only_shrinks() {
        let a = s(&[1, 2, 3, 4]);
        assert_eq!(truncate(&a, 1).unwrap(), s(&[1, 2]));
        assert_eq!(
            truncate(&a, 9).unwrap_err(),
            Error::TruncateBeyondOrder {
                requested: 9,
                order: 3
            }
        );
    }

    // ======================================================================
    // multiplication
    // ======================================================================

    #[test]
    fn mul_matches_hand_expansions() {
        // (1 + q)(1 - q) = 1 - q^2
        let p = mul(&s(&[1, 1, 0, 0]), &s(&[1, -1, 0, 0])).unwrap();
        assert_eq!(p, s(&[1, 0, -1, 0]));

        // (1 - q^2)^4 (1 - q^4)^4 = 1 - 4q^2 + 2q^4 + O(q^5)
        let a = pow(&s(&[1, 0, -1, 0, 0]), 4).unwrap();
        let b = pow(&s(&[1, 0, 0, 0, -1]), 4).unwrap();
        assert_eq!(mul(&a, &b).unwrap(), s(&[1, 0, -4, 0, 2]));
    }

    #[test]
    fn mul_truncates_at_the_common_order() {
        // (1 + q)^2 at order 1 has no room for the q^2 term.
        let p = mul(&s(&[1, 1]), &s(&[1, 1])).unwrap();
        assert_eq!(p, s(&[1, 2]));
    }

    #[test]
    fn modular_mul_keeps_canonical_residues() {
        let a = reduce_mod(&s(&[4, 3, 2]), 5).unwrap();
        let b = reduce_mod(&s(&[2, 4, 1]), 5).unwrap();
        let p = mul(&a, &b).unwrap();
        // (4 + 3q + 2q^2)(2 + 4q + q^2) = 8 + 22q + 20q^2 + ... -> 3 + 2q + 0q^2 (mod 5)
        assert_eq!(p, reduce_mod(&s(&[3, 2, 0]), 5).unwrap());
        assert!(p.coeffs().iter().all(|c| !c.is_negative()));
    }

    #[test]
    fn karatsuba_agrees_with_schoolbook_on_fixed_inputs() {
        let a = s(&(0..200).map(|i| (i * i) as i64 - 37).collect::<Vec<_>>());
        let b = s(&(0..200).map(|i| 11 - 3 * i as i64).collect::<Vec<_>>());
        assert_eq!(
            mul_karatsuba(&a, &b).unwrap(),
            mul_schoolbook(&a, &b).unwrap()
        );
    }

    #[test]
    fn karatsuba_threshold_dispatch_is_transparent() {
        let a = s(&(0..80).map(|i| i as i64 % 7 - 3).collect::<Vec<_>>());
        let b = s(&(0..80).map(|i| 5 - i as i64 % 11).collect::<Vec<_>>());
        let plain = mul(&a, &b).unwrap();
        set_karatsuba_threshold(Some(16));
        let via_karatsuba = mul(&a, &b).unwrap();
        set_karatsuba_threshold(None);
        assert_eq!(karatsuba_threshold(), None);
        assert_eq!(plain, via_karatsuba);
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn parallel_schoolbook_agrees_with_sequential() {
        let a = s(&(0..300).map(|i| (7 * i) as i64 - 100).collect::<Vec<_>>());
        let b = s(&(0..300).map(|i| (i * i * i) as i64 % 97).collect::<Vec<_>>());
        assert_eq!(
            mul_schoolbook_parallel(&a, &b).unwrap(),
            mul_schoolbook(&a, &b).unwrap()
        );
    }

    // ======================================================================
    // inversion and powers
    // ======================================================================

    #[test]
    fn invert_geometric_series() {
        // 1/(1 - q) = 1 + q + q^2 + ...
        let inv = invert(&s(&[1, -1, 0, 0, 0])).unwrap();
        assert_eq!(inv, s(&[1, 1, 1, 1, 1]));

        // constant term -1 works too, and round-trips to one
        let a = s(&[-1, 1, 4, -2]);
        let prod = mul(&a, &invert(&a).unwrap()).unwrap();
        assert_eq!(prod, s(&[1, 0, 0, 0]));
    }

    #[test]
    fn invert_rejects_non_units() {
        let err = invert(&s(&[2, 1])).unwrap_err();
        assert_eq!(
            err,
            Error::NonUnitConstant {
                constant: BigInt::from(2),
                modulus: None
            }
        );

        let m6 = reduce_mod(&s(&[3, 1]), 6).unwrap();
        let err = invert(&m6).unwrap_err();
        assert_eq!(
            err,
            Error::NonUnitConstant {
                constant: BigInt::from(3),
                modulus: Some(6)
            }
        );
    }

    #[test]
    fn invert_uses_modular_inverse_of_the_constant() {
        // 2 * 3 = 6 = 1 (mod 5), so 1/(2 + q) starts with 3.
        let a = reduce_mod(&s(&[2, 1, 0]), 5).unwrap();
        let inv = invert(&a).unwrap();
        assert_eq!(inv.coeff(0), Some(&BigInt::from(3)));
        let one = reduce_mod(&Series::one(2), 5).unwrap();
        assert_eq!(mul(&a, &inv).unwrap(), one);
    }

    #[test]
    fn pow_small_cases() {
        assert_eq!(pow(&s(&[1, 1, 0, 0]), 3).unwrap(), s(&[1, 3, 3, 1]));
        assert_eq!(pow(&s(&[1, 5, -2]), 0).unwrap(), Series::one(2));
        assert_eq!(pow(&s(&[1, 1]), 1).unwrap(), s(&[1, 1]));
    }

    #[test]
    fn negative_powers_invert_first() {
        let a = s(&[1, -1, 0, 0, 0]);
        let direct = pow(&a, -2).unwrap();
        let via_invert = pow(&invert(&a).unwrap(), 2).unwrap();
        assert_eq!(direct, via_invert);
        // 1/(1-q)^2 = sum (n+1) q^n
        assert_eq!(direct, s(&[1, 2, 3, 4, 5]));
    }

    #[test]
    fn freshmans_dream_concrete() {
        // (1 + q)^5 = 1 + q^5 (mod 5)
        let lhs = reduce_mod(&pow(&s(&[1, 1, 0, 0, 0, 0, 0]), 5).unwrap(), 5).unwrap();
        let rhs = reduce_mod(
            &substitute_power(&s(&[1, 1, 0, 0, 0, 0, 0]), 5).unwrap(),
            5,
        )
        .unwrap();
        assert_eq!(lhs, rhs);
    }

    // ======================================================================
    // substitution, dissection, reduction, interleave
    // ======================================================================

    #[test]
    fn substitute_power_spreads_exponents() {
        let a = s(&[1, 2, 3]);
        assert_eq!(substitute_power(&a, 2).unwrap(), s(&[1, 0, 2]));
        assert_eq!(substitute_power(&a, 1).unwrap(), a);
        assert_eq!(substitute_power(&a, 0).unwrap_err(), Error::ZeroStep);
    }

    #[test]
    fn dissect_extracts_progressions() {
        let a = s(&[1, 2, 3, 4, 5]);
        assert_eq!(dissect(&a, 2, 0).unwrap(), s(&[1, 3, 5]));
        assert_eq!(dissect(&a, 2, 1).unwrap(), s(&[2, 4]));
        assert_eq!(dissect(&a, 3, 2).unwrap(), s(&[3]));
        assert_eq!(dissect(&a, 1, 0).unwrap(), a);
    }

    #[test]
    fn dissect_validates_step_and_residue() {
        let a = s(&[1, 2, 3]);
        assert_eq!(dissect(&a, 0, 0).unwrap_err(), Error::ZeroStep);
        assert_eq!(
            dissect(&a, 3, 3).unwrap_err(),
            Error::ResidueOutOfRange {
                residue: 3,
                step: 3
            }
        );
        assert_eq!(
            dissect(&s(&[1]), 7, 5).unwrap_err(),
            Error::DissectUnderflow {
                order: 0,
                step: 7,
                residue: 5
            }
        );
    }

    #[test]
    fn reduce_mod_canonicalizes_into_zero_to_m() {
        let r = reduce_mod(&s(&[1, -4, 2, -10]), 5).unwrap();
        assert_eq!(r, Series::raw(vec![1.into(), 1.into(), 2.into(), 0.into()], Some(5)));
        assert_eq!(reduce_mod(&s(&[1]), 1).unwrap_err(), Error::InvalidModulus(1));
        assert_eq!(reduce_mod(&r, 5).unwrap_err(), Error::AlreadyReduced(5));
    }

    #[test]
    fn interleave_is_inverse_to_dissection() {
        let a = s(&[1, 2, 3, 4, 5, 6, 7, 8]);
        for t in 1..=4u32 {
            let parts: Vec<Series> = (0..t).map(|r| dissect(&a, t, r).unwrap()).collect();
            let back = interleave(&parts).unwrap();
            let l = back.order();
            assert!(l + (t as usize) > a.order(), "reassembly reaches N - t");
            assert_eq!(back, truncate(&a, l).unwrap(), "t = {t}");
        }
        assert_eq!(interleave(&[]).unwrap_err(), Error::EmptyInterleave);
    }

    // ======================================================================
    // randomized cross-checks
    // ======================================================================

    fn arb_series() -> impl Strategy<Value = Series> {
        prop::collection::vec(-9i64..=9, 1..=65).prop_map(|v| Series::from_i64(&v))
    }

    fn arb_unit_series() -> impl Strategy<Value = Series> {
        (arb_series(), prop::bool::ANY).prop_map(|(series, positive)| {
            let mut coeffs = series.coeffs().to_vec();
            coeffs[0] = if positive { BigInt::one() } else { -BigInt::one() };
            Series::from_coeffs(coeffs)
        })
    }

    proptest! {
        #[test]
        fn karatsuba_matches_schoolbook(a in arb_series(), b in arb_series()) {
            let order = a.order().min(b.order());
            let a = truncate(&a, order).unwrap();
            let b = truncate(&b, order).unwrap();
            prop_assert_eq!(mul_karatsuba(&a, &b).unwrap(), mul_schoolbook(&a, &b).unwrap());
        }

        #[test]
        fn invert_round_trips_to_one(a in arb_unit_series()) {
            let prod = mul(&a, &invert(&a).unwrap()).unwrap();
            prop_assert_eq!(prod, Series::one(a.order()));
        }
    }
}
