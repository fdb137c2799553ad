//! The scalar abstraction shared by every algorithm in the crate.
//!
//! All structural computations (ranks, jump sets, canonical forms, Grassmannian
//! limits) are only meaningful over an exact field, so the reference scalar is
//! [`Rational`]. Floating point types implement [`Scalar`] as well, which is
//! handy for quick numerical experiments, but zero tests on them are exact
//! comparisons and results near degenerate configurations are unreliable.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, Zero};

/// Arbitrary precision rational number.
pub type Rational = BigRational;

/// Field of coefficients used throughout the crate.
pub trait Scalar:
    Clone
    + Debug
    + Display
    + FromStr
    + PartialOrd
    + Num
    + Signed
    + FromPrimitive
    + Send
    + Sync
    + 'static
{
    /// Returns `r >= 0` with `r^degree == self` when such an `r` exists in the field.
    fn exact_root(&self, degree: u32) -> Option<Self>;

    /// Whether arithmetic in this type is exact.
    fn is_exact() -> bool;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num).expect("i64 is representable") / Self::from_i64(den).expect("i64 is representable")
    }

    fn from_count(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize is representable")
    }

    /// `self^exp` by repeated squaring.
    fn pow_u32(&self, exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            base = base.clone() * base;
            e >>= 1;
        }
        acc
    }
}

impl Scalar for BigRational {
    fn exact_root(&self, degree: u32) -> Option<Self> {
        if self.is_negative() || degree == 0 {
            return None;
        }
        if degree == 1 || self.is_zero() {
            return Some(self.clone());
        }
        let num = exact_int_root(self.numer(), degree)?;
        let den = exact_int_root(self.denom(), degree)?;
        Some(BigRational::new(num, den))
    }

    fn is_exact() -> bool {
        true
    }
}

fn exact_int_root(n: &BigInt, degree: u32) -> Option<BigInt> {
    let r = n.nth_root(degree);
    if num_traits::pow(r.clone(), degree as usize) == *n {
        Some(r)
    } else {
        None
    }
}

impl Scalar for f64 {
    fn exact_root(&self, degree: u32) -> Option<Self> {
        if *self < 0.0 || degree == 0 {
            return None;
        }
        Some(self.powf(1.0 / degree as f64))
    }

    fn is_exact() -> bool {
        false
    }
}

impl Scalar for f32 {
    fn exact_root(&self, degree: u32) -> Option<Self> {
        if *self < 0.0 || degree == 0 {
            return None;
        }
        Some(self.powf(1.0 / degree as f32))
    }

    fn is_exact() -> bool {
        false
    }
}

/// Parses a rational from `"p/q"`, `"p"` or a finite decimal such as `"-1.25"`.
pub fn parse_rational(text: &str) -> Option<Rational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((whole, frac)) = text.split_once('.') {
        if text.contains('/') || frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let negative = whole.starts_with('-');
        let whole_int: BigInt = if whole.is_empty() || whole == "-" || whole == "+" {
            BigInt::zero()
        } else {
            whole.parse().ok()?
        };
        let frac_int: BigInt = frac.parse().ok()?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let magnitude = BigRational::from_integer(whole_int.abs()) + BigRational::new(frac_int, scale);
        return Some(if negative { -magnitude } else { magnitude });
    }
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
        None => (text.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Canonical text form: `"p/q"` in lowest terms, or `"p"` for integers.
pub fn format_scalar<S: Scalar>(value: &S) -> String {
    value.to_string()
}

/// Least common multiple of a non-empty list of positive integers.
pub fn lcm_all(values: &[u32]) -> u32 {
    values.iter().fold(1u32, |acc, &v| num_integer::lcm(acc, v.max(1)))
}

pub fn factorial<S: Scalar>(k: usize) -> S {
    (1..=k).fold(S::one(), |acc, i| acc * S::from_count(i))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from_ratio(n, d)
    }

    #[test]
    fn rational_roots() {
        assert_eq!(q(16, 81).exact_root(4), Some(q(2, 3)));
        assert_eq!(q(2, 1).exact_root(2), None);
        assert_eq!(q(-1, 1).exact_root(3), None);
        assert_eq!(q(0, 1).exact_root(5), Some(q(0, 1)));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("3/6"), Some(q(1, 2)));
        assert_eq!(parse_rational("-7"), Some(q(-7, 1)));
        assert_eq!(parse_rational("-1.25"), Some(q(-5, 4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(format_scalar(&q(4, 2)), "2");
        assert_eq!(format_scalar(&q(-2, 6)), "-1/3");
    }

    #[test]
    fn powers_and_lcm() {
        assert_eq!(q(2, 3).pow_u32(3), q(8, 27));
        assert_eq!(lcm_all(&[2, 1, 3]), 6);
        assert_eq!(factorial::<Rational>(5), q(120, 1));
    }
}
