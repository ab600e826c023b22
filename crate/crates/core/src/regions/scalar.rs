use std::cmp::Ordering;
use std::fmt::{Debug, Display};
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Number types the region deciders run on: `f64` compares with relative
/// tolerance `1e-12`, `BigRational` compares exactly.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_int(n: i64) -> Self;

    /// Three-way comparison; `Equal` within the type's tolerance.
    fn compare(&self, other: &Self) -> Ordering;

    fn to_f64(&self) -> f64;

    fn is_finite(&self) -> bool;
}

/// Relative tolerance for floating-point equality on region boundaries.
pub const BOUNDARY_TOLERANCE: f64 = 1e-12;

impl Scalar for f64 {
    fn from_int(n: i64) -> Self {
        n as f64
    }

    fn compare(&self, other: &Self) -> Ordering {
        let scale = self.abs().max(other.abs());
        if (self - other).abs() <= BOUNDARY_TOLERANCE * scale {
            Ordering::Equal
        } else {
            self.partial_cmp(other).unwrap_or(Ordering::Equal)
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Scalar for BigRational {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn compare(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(if self.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        })
    }

    fn is_finite(&self) -> bool {
        true
    }
}

pub(crate) fn require_positive<S: Scalar>(name: &str, x: &S) -> Result<()> {
    if !x.is_finite() || x.compare(&S::from_int(0)) != Ordering::Greater {
        return domain(format!("{name} must be positive, got {x}"));
    }
    Ok(())
}

pub(crate) fn require_weight<S: Scalar>(name: &str, x: &S) -> Result<()> {
    if !x.is_finite() || x.compare(&S::from_int(-1)) != Ordering::Greater {
        return domain(format!("{name} must exceed -1, got {x}"));
    }
    Ok(())
}

/// Parses `"3"`, `"-0.25"`, `"1.5e-3"` or `"7/3"` as an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let s = text.trim();
    let bad = || Error::Domain(format!("not a number: {text:?}"));
    if let Some((num, den)) = s.split_once('/') {
        let num: BigInt = num.trim().parse().map_err(|_| bad())?;
        let den: BigInt = den.trim().parse().map_err(|_| bad())?;
        if den.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(num, den));
    }
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (negative, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty()
        || !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let all: BigInt = format!("{int_part}{frac_part}")
        .parse()
        .map_err(|_| bad())?;
    let scale = exponent - frac_part.len() as i32;
    if scale.abs() > 4096 {
        return Err(bad());
    }
    let ten = BigInt::from(10);
    let mut value = if scale >= 0 {
        BigRational::from_integer(all * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(all, num_traits::pow(ten, (-scale) as usize))
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_exactly() {
        assert_eq!(parse_rational("3").unwrap(), r(3, 1));
        assert_eq!(parse_rational("-0.25").unwrap(), r(-1, 4));
        assert_eq!(parse_rational("0.1").unwrap(), r(1, 10));
        assert_eq!(parse_rational("1.5e-3").unwrap(), r(3, 2000));
        assert_eq!(parse_rational("2E2").unwrap(), r(200, 1));
        assert_eq!(parse_rational(" 7/3 ").unwrap(), r(7, 3));
        assert_eq!(parse_rational(".5").unwrap(), r(1, 2));
        for bad in ["", "x", "1/0", "1.2.3", "--1", "e5", "1e"] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn float_tolerance() {
        assert_eq!(Scalar::compare(&(0.1 + 0.2), &0.3), Ordering::Equal);
        assert_eq!(Scalar::compare(&1.0, &(1.0 + 1e-9)), Ordering::Less);
        assert_eq!(Scalar::compare(&0.0, &0.0), Ordering::Equal);
        assert_eq!(r(1, 10).compare(&r(1, 10)), Ordering::Equal);
        assert_eq!((r(1, 10) + r(2, 10)).compare(&r(3, 10)), Ordering::Equal);
    }
}
