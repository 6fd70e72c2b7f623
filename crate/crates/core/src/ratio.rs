//! Exact non-negative rationals for metric values.

use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ratio(BigRational);

impl Ratio {
    /// `num / den`; `None` when `den` is zero.
    pub fn new(num: u64, den: u64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        Some(Ratio(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn zero() -> Self {
        Ratio(BigRational::zero())
    }

    pub fn one() -> Self {
        Ratio(BigRational::one())
    }

    pub fn from_big(r: BigRational) -> Self {
        Ratio(r)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn one_minus(&self) -> Self {
        Ratio(BigRational::one() - &self.0)
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Rounded half-up to three decimals, computed exactly before the final
    /// conversion.
    pub fn round3(&self) -> f64 {
        let scaled = self.0.numer() * BigInt::from(2000) + self.0.denom();
        let thousandths = scaled.div_floor(&(self.0.denom() * BigInt::from(2)));
        thousandths.to_f64().unwrap_or(f64::NAN) / 1000.0
    }

    pub fn is_within_unit(&self) -> bool {
        self.0 >= BigRational::zero() && self.0 <= BigRational::one()
    }

    /// Arithmetic mean; `None` for an empty input.
    pub fn mean<'a>(items: impl IntoIterator<Item = &'a Ratio>) -> Option<Self> {
        let mut sum = BigRational::zero();
        let mut n = 0u64;
        for r in items {
            sum += &r.0;
            n += 1;
        }
        (n > 0).then(|| Ratio(sum / BigRational::from_integer(BigInt::from(n))))
    }

    /// Parse `"n/d"` or `"n"`.
    pub fn parse(s: &str) -> Option<Self> {
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim().parse::<BigInt>().ok()?, d.trim().parse::<BigInt>().ok()?),
            None => (s.trim().parse::<BigInt>().ok()?, BigInt::one()),
        };
        if d.is_zero() {
            return None;
        }
        Some(Ratio(BigRational::new(n, d)))
    }
}

impl fmt::Display for Ratio {
    /// Reduced `num/den`, or just `num` for integers.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Ratio> for &Ratio {
            type Output = Ratio;
            fn $m(self, rhs: &Ratio) -> Ratio {
                Ratio($tr::$m(&self.0, &rhs.0))
            }
        }
        impl $tr for Ratio {
            type Output = Ratio;
            fn $m(self, rhs: Ratio) -> Ratio {
                Ratio($tr::$m(self.0, rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_renders() {
        let r = Ratio::new(1394, 1440).unwrap();
        assert_eq!(r.to_string(), "697/720");
        assert_eq!(r.round3(), 0.968);
        assert_eq!(Ratio::new(1440, 1440).unwrap().to_string(), "1");
        assert_eq!(Ratio::new(0, 7).unwrap().to_string(), "0");
        assert!(Ratio::new(1, 0).is_none());
    }

    #[test]
    fn rounding_is_half_up() {
        assert_eq!(Ratio::new(1, 2000).unwrap().round3(), 0.001);
        assert_eq!(Ratio::new(1, 3).unwrap().round3(), 0.333);
        assert_eq!(Ratio::new(2, 3).unwrap().round3(), 0.667);
        assert_eq!(Ratio::new(7062, 7085).unwrap().round3(), 0.997);
        assert_eq!(Ratio::one().round3(), 1.0);
    }

    #[test]
    fn arithmetic() {
        let a = Ratio::new(1, 3).unwrap();
        let b = Ratio::new(1, 6).unwrap();
        assert_eq!(&a + &b, Ratio::new(1, 2).unwrap());
        assert_eq!(a.one_minus(), Ratio::new(2, 3).unwrap());
        assert_eq!(Ratio::mean([&a, &b]).unwrap(), Ratio::new(1, 4).unwrap());
        assert!(Ratio::mean(std::iter::empty()).is_none());
        assert_eq!(Ratio::parse("697/720"), Ratio::new(1394, 1440));
        assert_eq!(Ratio::parse("1"), Some(Ratio::one()));
        assert_eq!(Ratio::parse("1/0"), None);
    }
}
