//! Numeric backends for the closed-form bound templates and growth ratios.

use std::fmt::{Debug, Display};

use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Field-like scalar used wherever a bound or ratio can be fractional.
pub trait Scalar: Num + Clone + PartialOrd + Debug + Display + FromPrimitive + ToPrimitive {
    fn from_count(k: usize) -> Self {
        Self::from_usize(k).expect("count representable in scalar")
    }

    /// 2^e for a possibly negative exponent.
    fn pow2(e: i64) -> Self {
        let two = Self::one() + Self::one();
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc * two.clone();
        }
        if e < 0 {
            Self::one() / acc
        } else {
            acc
        }
    }

    fn approx(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
impl Scalar for BigRational {}

/// k! in the scalar.
pub fn factorial<S: Scalar>(k: usize) -> S {
    (1..=k).fold(S::one(), |acc, i| acc * S::from_count(i))
}

/// `num / den`, or `None` when the denominator is zero.
pub fn ratio<S: Scalar>(num: usize, den: usize) -> Option<S> {
    (den != 0).then(|| S::from_count(num) / S::from_count(den))
}
