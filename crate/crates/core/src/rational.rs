//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::str::FromStr;

use crate::error::{DiracError, Result};

/// Arbitrary-precision rational number used as the coefficient field.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

pub fn half() -> Q {
    qf(1, 2)
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Ratio of huge integers; fall back to scaled division.
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-0.125"` exactly.
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if let Some((int, frac)) = s.split_once('.') {
        if !s.contains('/') && frac.chars().all(|c| c.is_ascii_digit()) {
            let neg = int.starts_with('-');
            let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
            let numer = BigInt::from_str(if digits.is_empty() { "0" } else { &digits })
                .map_err(|e| DiracError::Invalid(format!("bad decimal {s:?}: {e}")))?;
            let denom = num_traits::pow(BigInt::from(10), frac.len());
            let v = Q::new(numer, denom);
            return Ok(if neg { -v } else { v });
        }
    }
    Q::from_str(s).map_err(|e| DiracError::Invalid(format!("bad rational {s:?}: {e}")))
}

/// Exact decimal-string rendering `p` or `p/q`.
pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn abs(x: &Q) -> Q {
    x.abs()
}

/// Best rational approximation with bounded denominator, used to turn float
/// inputs (e.g. interval endpoints) into exact data.
pub fn from_f64(x: f64) -> Result<Q> {
    Q::from_float(x).ok_or_else(|| DiracError::Invalid(format!("non-finite value {x}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_and_decimals() {
        assert_eq!(parse_q("3/6").unwrap(), qf(1, 2));
        assert_eq!(parse_q("-0.125").unwrap(), qf(-1, 8));
        assert_eq!(parse_q("7").unwrap(), q(7));
        assert_eq!(parse_q("2.").unwrap(), q(2));
        assert!(parse_q("x").is_err());
    }

    #[test]
    fn formats_canonically() {
        assert_eq!(fmt_q(&qf(4, -6)), "-2/3");
        assert_eq!(fmt_q(&q(5)), "5");
    }
}
