use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Exact rational scalar; always stored in lowest terms with a positive denominator.
pub type Rational = BigRational;

/// A column vector of rationals.
pub type RatVector = Vec<Rational>;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn rat_vec(values: &[(i64, i64)]) -> RatVector {
    values.iter().map(|&(p, q)| rat(p, q)).collect()
}

pub fn int_vec(values: &[i64]) -> RatVector {
    values.iter().map(|&v| int(v)).collect()
}

/// Representative of `r` modulo 1 in `[0, 1)`.
pub fn frac(r: &Rational) -> Rational {
    r - Rational::from_integer(r.floor().to_integer())
}

pub fn floor_int(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn ceil_int(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// `floor(sqrt(r))` for `r >= 0`, computed without leaving the integers.
pub fn floor_sqrt(r: &Rational) -> BigInt {
    assert!(!r.is_negative(), "floor_sqrt of a negative rational");
    // floor(sqrt(p/q)) = floor(floor(sqrt(p*q)) / q)
    let pq = r.numer() * r.denom();
    pq.sqrt().div_floor(r.denom())
}

/// Largest integer `k` with `k <= t + sqrt(r)`, for `r >= 0`.
pub fn floor_add_sqrt(t: &Rational, r: &Rational) -> BigInt {
    let k0 = floor_int(t) + floor_sqrt(r);
    let next = Rational::from_integer(&k0 + BigInt::one()) - t;
    if !next.is_positive() || &next * &next <= *r {
        k0 + BigInt::one()
    } else {
        k0
    }
}

/// Smallest integer `k` with `k >= t - sqrt(r)`, for `r >= 0`.
pub fn ceil_sub_sqrt(t: &Rational, r: &Rational) -> BigInt {
    -floor_add_sqrt(&-t, r)
}

pub fn lcm_of_denominators<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}

/// Error returned when a string is not of the form `p`, `-p`, `p/q` or `-p/q`.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {input:?}")]
pub struct ParseRationalError {
    pub input: String,
}

/// Parses `"p/q"`, `"p"`, with an optional leading `-` (ASCII or U+2212).
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError { input: String::from(s) };
    let trimmed = s.trim();
    let (negative, body) = if let Some(rest) = trimmed.strip_prefix('-') {
        (true, rest)
    } else if let Some(rest) = trimmed.strip_prefix('\u{2212}') {
        (true, rest)
    } else {
        (false, trimmed)
    };
    let digits = |t: &str| -> Result<BigInt, ParseRationalError> {
        if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        BigInt::parse_bytes(t.as_bytes(), 10).ok_or_else(err)
    };
    let value = match body.split_once('/') {
        Some((p, q)) => {
            let denom = digits(q)?;
            if denom.is_zero() {
                return Err(err());
            }
            Rational::new(digits(p)?, denom)
        }
        None => Rational::from_integer(digits(body)?),
    };
    Ok(if negative { -value } else { value })
}

/// Displays a slice of rationals as `(a, b, c)`.
pub struct DisplayVec<'a>(pub &'a [Rational]);

impl fmt::Display for DisplayVec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn parse_and_display() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("\u{2212}1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_rational("6/4").unwrap(), rat(3, 2));
        assert_eq!(parse_rational("2").unwrap(), int(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("--1").is_err());
        assert_eq!(rat(-3, 6).to_string(), "-1/2");
        assert_eq!(int(7).to_string(), "7");
    }

    #[test]
    fn sqrt_bounds() {
        assert_eq!(floor_sqrt(&int(16)), BigInt::from(4));
        assert_eq!(floor_sqrt(&int(15)), BigInt::from(3));
        assert_eq!(floor_sqrt(&rat(1, 4)), BigInt::from(0));
        assert_eq!(floor_sqrt(&rat(9, 4)), BigInt::from(1));
        // 1/2 + sqrt(9/4) = 2 exactly
        assert_eq!(floor_add_sqrt(&rat(1, 2), &rat(9, 4)), BigInt::from(2));
        assert_eq!(ceil_sub_sqrt(&rat(1, 2), &rat(9, 4)), BigInt::from(-1));
        assert_eq!(floor_add_sqrt(&rat(-1, 3), &int(0)), BigInt::from(-1));
    }

    #[test]
    fn frac_is_in_unit_interval() {
        assert_eq!(frac(&rat(-1, 2)), rat(1, 2));
        assert_eq!(frac(&rat(7, 3)), rat(1, 3));
        assert_eq!(frac(&int(-4)), int(0));
    }
}
