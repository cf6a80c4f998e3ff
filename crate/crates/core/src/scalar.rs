//! Scalar types shared by the exact and the floating-point layers.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, Signed, ToPrimitive, Zero};

/// A field whose arithmetic is exact, so that rank and independence
/// questions have definite answers.
///
/// Only rational types implement this. Floating point deliberately does not:
/// structural decisions must never depend on a tolerance.
pub trait Field: Clone + Debug + PartialEq + Num + Signed {}

impl<I> Field for Ratio<I> where I: Clone + Debug + Integer + Signed {}

/// Parse a rational literal: `p`, `-p`, `p/q`, or a terminating decimal
/// such as `0.125`. Decimals are converted exactly.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = parse_decimal(num.trim())?;
        let den = parse_decimal(den.trim())?;
        if den.is_zero() {
            return None;
        }
        return Some(num / den);
    }
    parse_decimal(text)
}

fn parse_decimal(text: &str) -> Option<BigRational> {
    let (negative, body) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    if body.is_empty() {
        return None;
    }
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().ok()?;
    let denom = num_traits::pow(BigInt::from(10), frac_part.len());
    let value = BigRational::new(numer, denom);
    Some(if negative { -value } else { value })
}

/// Convert an exact rational to the nearest representable float of type `F`.
pub fn to_float<F: num_traits::Float>(value: &BigRational) -> F {
    let approx = value.to_f64().unwrap_or_else(|| {
        if value.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    });
    F::from(approx).unwrap_or_else(F::nan)
}

/// Exact `base^exponent` for a rational exponent, when the result is rational.
///
/// Integral exponents are always exact (a zero base with a negative exponent is
/// `None`). A fractional exponent `p/q` requires a non-negative base whose
/// numerator and denominator are perfect `q`-th powers.
pub fn exact_pow(base: &BigRational, exponent: &BigRational) -> Option<BigRational> {
    if exponent.is_integer() {
        let e = exponent.to_integer().to_i32()?;
        if e < 0 && base.is_zero() {
            return None;
        }
        return Some(num_traits::pow::Pow::pow(base, e));
    }
    if base.is_negative() {
        return None;
    }
    if base.is_zero() {
        return if exponent.is_positive() { Some(BigRational::zero()) } else { None };
    }
    let q = exponent.denom().to_u32()?;
    let num_root = exact_root(base.numer(), q)?;
    let den_root = exact_root(base.denom(), q)?;
    let root = BigRational::new(num_root, den_root);
    let p = exponent.numer().to_i32()?;
    Some(num_traits::pow::Pow::pow(&root, p))
}

fn exact_root(value: &BigInt, n: u32) -> Option<BigInt> {
    let root = num_integer::Roots::nth_root(value, n);
    if num_traits::pow(root.clone(), n as usize) == *value {
        Some(root)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_integer_fraction_and_decimal() {
        assert_eq!(parse_rational("3"), Some(q(3, 1)));
        assert_eq!(parse_rational("-3/2"), Some(q(-3, 2)));
        assert_eq!(parse_rational("6/4"), Some(q(3, 2)));
        assert_eq!(parse_rational("0.001"), Some(q(1, 1000)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
    }

    #[test]
    fn rejects_malformed_literals() {
        for bad in ["", "-", "1/0", "a", "1.2.3", "1/", "/2", "1e3"] {
            assert_eq!(parse_rational(bad), None, "{bad:?}");
        }
    }

    #[test]
    fn exact_powers() {
        assert_eq!(exact_pow(&q(2, 1), &q(3, 1)), Some(q(8, 1)));
        assert_eq!(exact_pow(&q(4, 9), &q(1, 2)), Some(q(2, 3)));
        assert_eq!(exact_pow(&q(4, 9), &q(3, 2)), Some(q(8, 27)));
        assert_eq!(exact_pow(&q(2, 1), &q(1, 2)), None);
        assert_eq!(exact_pow(&q(-4, 1), &q(1, 2)), None);
        assert_eq!(exact_pow(&q(0, 1), &q(0, 1)), Some(q(1, 1)));
    }
}
