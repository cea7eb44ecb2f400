
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::torus::TorusError;

/// A point on the frequency line, stored as an exact rational multiple of π.
///
/// The stored ratio `p/q` denotes the value `(p/q)·π` radians. All set
/// algebra and breakpoint bookkeeping in the crate goes through this type so
/// interval combinatorics never drift, no matter how many operations chain.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalPi(BigRational);

impl RationalPi {
    /// `(num/den)·π`. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        RationalPi(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_ratio(ratio: BigRational) -> Self {
        RationalPi(ratio)
    }

    pub fn from_int(n: i64) -> Self {
        RationalPi(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Self {
        RationalPi(BigRational::zero())
    }

    pub fn pi() -> Self {
        Self::from_int(1)
    }

    pub fn two_pi() -> Self {
        Self::from_int(2)
    }

    /// The coefficient of π.
    pub fn ratio(&self) -> &BigRational {
        &self.0
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN) * PI
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        RationalPi(self.0.abs())
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Multiply by an exact rational scale factor.
    pub fn scale(&self, factor: &BigRational) -> Self {
        RationalPi(&self.0 * factor)
    }

    pub fn scale_int(&self, factor: i64) -> Self {
        RationalPi(&self.0 * BigRational::from_integer(BigInt::from(factor)))
    }

    /// Reduce into the fundamental period `[−π, π)`. Returns the reduced
    /// point and the integer `k` with `self = reduced + 2πk`.
    pub fn reduce_mod_2pi(&self) -> (Self, BigInt) {
        // self = (r + 2k)·π with r ∈ [−1, 1): k = floor((ratio + 1) / 2).
        let shifted = &self.0 + BigRational::one();
        let k = (shifted / BigRational::from_integer(BigInt::from(2))).floor();
        let k = k.to_integer();
        let reduced = &self.0 - BigRational::from_integer(&k * BigInt::from(2));
        (RationalPi(reduced), k)
    }

    /// Parse `"p/q"` or `"p"` as the multiple-of-π ratio.
    pub fn parse(text: &str) -> Result<Self, TorusError> {
        let text = text.trim();
        let ratio = match text.split_once('/') {
            Some((num, den)) => {
                let num = BigInt::from_str(num.trim())
                    .map_err(|_| TorusError::BadRational(text.to_string()))?;
                let den = BigInt::from_str(den.trim())
                    .map_err(|_| TorusError::BadRational(text.to_string()))?;
                if den.is_zero() {
                    return Err(TorusError::BadRational(text.to_string()));
                }
                BigRational::new(num, den)
            }
            None => {
                let num = BigInt::from_str(text)
                    .map_err(|_| TorusError::BadRational(text.to_string()))?;
                BigRational::from_integer(num)
            }
        };
        Ok(RationalPi(ratio))
    }
}

impl fmt::Display for RationalPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for RationalPi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}π", self)
    }
}

impl Add for RationalPi {
    type Output = RationalPi;
    fn add(self, rhs: Self) -> Self {
        RationalPi(self.0 + rhs.0)
    }
}

impl<'a> Add<&'a RationalPi> for &'a RationalPi {
    type Output = RationalPi;
    fn add(self, rhs: &RationalPi) -> RationalPi {
        RationalPi(&self.0 + &rhs.0)
    }
}

impl Sub for RationalPi {
    type Output = RationalPi;
    fn sub(self, rhs: Self) -> Self {
        RationalPi(self.0 - rhs.0)
    }
}

impl<'a> Sub<&'a RationalPi> for &'a RationalPi {
    type Output = RationalPi;
    fn sub(self, rhs: &RationalPi) -> RationalPi {
        RationalPi(&self.0 - &rhs.0)
    }
}

impl Neg for RationalPi {
    type Output = RationalPi;
    fn neg(self) -> Self {
        RationalPi(-self.0)
    }
}

impl Mul<i64> for RationalPi {
    type Output = RationalPi;
    fn mul(self, rhs: i64) -> Self {
        self.scale_int(rhs)
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduce_into_period() {
        // 9π/4 = π/4 + 2π
        let (r, k) = RationalPi::new(9, 4).reduce_mod_2pi();
        assert_eq!(r, RationalPi::new(1, 4));
        assert_eq!(k, BigInt::from(1));
        // −π stays put
        let (r, k) = RationalPi::new(-1, 1).reduce_mod_2pi();
        assert_eq!(r, RationalPi::new(-1, 1));
        assert_eq!(k, BigInt::from(0));
        // π wraps to −π
        let (r, k) = RationalPi::pi().reduce_mod_2pi();
        assert_eq!(r, RationalPi::new(-1, 1));
        assert_eq!(k, BigInt::from(1));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(RationalPi::parse("4/7").unwrap(), RationalPi::new(4, 7));
        assert_eq!(RationalPi::parse("1").unwrap(), RationalPi::pi());
        assert_eq!(RationalPi::parse("-2/14").unwrap(), RationalPi::new(-1, 7));
        assert!(RationalPi::parse("x").is_err());
        assert!(RationalPi::parse("1/0").is_err());
        assert_eq!(RationalPi::new(4, 7).to_string(), "4/7");
        assert_eq!(RationalPi::new(2, 1).to_string(), "2");
    }

    #[test]
    fn exact_ordering() {
        assert!(RationalPi::new(4, 7) < RationalPi::new(3, 5));
        assert!(RationalPi::new(-1, 2) < RationalPi::zero());
    }
}
