//! Scalar abstraction shared by every geometric routine.
//!
//! All decisions (signs, ranks, memberships) go through [`Scalar::sign`], so
//! exact types decide exactly while floating types use a small absolute
//! tolerance.

use std::cmp::Ordering;
use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive, Zero};

/// Field element usable by the linear algebra, LP and polyhedral code.
pub trait Scalar:
    Clone + Debug + Display + PartialEq + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `true` for exact arithmetic, where every decision is certified.
    const EXACT: bool;

    /// Whether the value should be treated as zero.
    fn is_negligible(&self) -> bool;

    /// Builds `p / q`. Panics when `q == 0`.
    fn from_ratio(p: i64, q: i64) -> Self;

    /// Parses `"p/q"`, `"p"` or (for floats) a decimal literal.
    fn parse_scalar(s: &str) -> Option<Self>;

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Tolerance-aware sign.
    fn sign(&self) -> Ordering {
        if self.is_negligible() {
            Ordering::Equal
        } else if self.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    fn is_pos(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    fn is_neg(&self) -> bool {
        self.sign() == Ordering::Less
    }

    /// `self <= other` up to the scalar's tolerance.
    fn le_tol(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).sign() != Ordering::Greater
    }

    /// `self < other` strictly, beyond the scalar's tolerance.
    fn lt_tol(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).sign() == Ordering::Less
    }

    fn eq_tol(&self, other: &Self) -> bool {
        (self.clone() - other.clone()).sign() == Ordering::Equal
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    fn from_ratio(p: i64, q: i64) -> Self {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    fn parse_scalar(s: &str) -> Option<Self> {
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => {
                let p: BigInt = p.trim().parse().ok()?;
                let q: BigInt = q.trim().parse().ok()?;
                if q.is_zero() {
                    return None;
                }
                Some(BigRational::new(p, q))
            }
            None => {
                if let Ok(p) = s.parse::<BigInt>() {
                    return Some(BigRational::from_integer(p));
                }
                parse_decimal(s)
            }
        }
    }
}

/// Exact parse of a finite decimal literal such as `-1.25`.
fn parse_decimal(s: &str) -> Option<BigRational> {
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = body.split_once('.')?;
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let den = num_traits::pow(BigInt::from(10u32), frac_part.len());
    let r = BigRational::new(num, den);
    Some(if neg { -r } else { r })
}

macro_rules! impl_float_scalar {
    ($t:ty, $tol:expr) => {
        impl Scalar for $t {
            const EXACT: bool = false;

            fn is_negligible(&self) -> bool {
                self.abs() <= $tol
            }

            fn from_ratio(p: i64, q: i64) -> Self {
                assert!(q != 0, "zero denominator");
                p as $t / q as $t
            }

            fn parse_scalar(s: &str) -> Option<Self> {
                let s = s.trim();
                match s.split_once('/') {
                    Some((p, q)) => {
                        let p: $t = p.trim().parse().ok()?;
                        let q: $t = q.trim().parse().ok()?;
                        if q == 0.0 {
                            None
                        } else {
                            Some(p / q)
                        }
                    }
                    None => s.parse().ok(),
                }
            }
        }
    };
}

impl_float_scalar!(f64, 1e-9);
impl_float_scalar!(f32, 1e-4);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_rational_forms() {
        let half = BigRational::parse_scalar("1/2").unwrap();
        assert_eq!(half, BigRational::from_ratio(1, 2));
        assert_eq!(BigRational::parse_scalar("-4/8").unwrap(), BigRational::from_ratio(-1, 2));
        assert_eq!(BigRational::parse_scalar("7").unwrap(), BigRational::from_ratio(7, 1));
        assert_eq!(BigRational::parse_scalar("-1.25").unwrap(), BigRational::from_ratio(-5, 4));
        assert!(BigRational::parse_scalar("1/0").is_none());
        assert!(BigRational::parse_scalar("abc").is_none());
    }

    #[test]
    fn display_roundtrips() {
        for (p, q) in [(3, 7), (-12, 4), (0, 5), (5, 1)] {
            let r = BigRational::from_ratio(p, q);
            assert_eq!(BigRational::parse_scalar(&r.to_string()).unwrap(), r);
        }
    }

    #[test]
    fn float_tolerance() {
        assert_eq!(1e-12f64.sign(), Ordering::Equal);
        assert!(f64::parse_scalar("3/4").unwrap() == 0.75);
        assert!(0.5f64.lt_tol(&1.0));
    }
}
