//! Exact rationals over a checked integer type.
//!
//! Operators panic on overflow instead of wrapping; use the `checked_*`
//! methods where overflow is a recoverable condition.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{PrimInt, Signed};
use serde::{Serialize, Serializer};

/// Integer types that can back an [`ExactRational`].
pub trait ExactInt: PrimInt + Signed + Integer + Hash + fmt::Debug + fmt::Display + Send + Sync + 'static {}

impl ExactInt for i32 {}
impl ExactInt for i64 {}
impl ExactInt for i128 {}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ExactRational<T: ExactInt> {
    num: T,
    den: T,
}

impl<T: ExactInt> ExactRational<T> {
    /// Panics if `den == 0` or normalization overflows.
    pub fn new(num: T, den: T) -> Self {
        Self::checked_new(num, den).expect("invalid or overflowing rational")
    }

    pub fn checked_new(num: T, den: T) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let g = num.gcd(&den);
        let (mut n, mut d) = (num / g, den / g);
        if d.is_negative() {
            n = T::zero().checked_sub(&n)?;
            d = T::zero().checked_sub(&d)?;
        }
        Some(ExactRational { num: n, den: d })
    }

    pub fn from_integer(n: T) -> Self {
        ExactRational { num: n, den: T::one() }
    }

    pub fn zero() -> Self {
        Self::from_integer(T::zero())
    }

    pub fn one() -> Self {
        Self::from_integer(T::one())
    }

    #[inline]
    pub fn numer(&self) -> T {
        self.num
    }

    #[inline]
    pub fn denom(&self) -> T {
        self.den
    }

    pub fn is_integer(&self) -> bool {
        self.den.is_one()
    }

    pub fn to_integer(&self) -> Option<T> {
        self.is_integer().then_some(self.num)
    }

    pub fn is_positive(&self) -> bool {
        self.num.is_positive()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn checked_add(&self, rhs: &Self) -> Option<Self> {
        let g = self.den.gcd(&rhs.den);
        let l = self.num.checked_mul(&(rhs.den / g))?;
        let r = rhs.num.checked_mul(&(self.den / g))?;
        let den = (self.den / g).checked_mul(&rhs.den)?;
        Self::checked_new(l.checked_add(&r)?, den)
    }

    pub fn checked_neg(&self) -> Option<Self> {
        Some(ExactRational { num: T::zero().checked_sub(&self.num)?, den: self.den })
    }

    pub fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        self.checked_add(&rhs.checked_neg()?)
    }

    pub fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        // cross-reduce first to keep intermediates small
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let (g1, g2) = (if g1.is_zero() { T::one() } else { g1 }, if g2.is_zero() { T::one() } else { g2 });
        let num = (self.num / g1).checked_mul(&(rhs.num / g2))?;
        let den = (self.den / g2).checked_mul(&(rhs.den / g1))?;
        Self::checked_new(num, den)
    }

    pub fn checked_div(&self, rhs: &Self) -> Option<Self> {
        if rhs.num.is_zero() {
            return None;
        }
        self.checked_mul(&ExactRational::checked_new(rhs.den, rhs.num)?)
    }

    pub fn checked_mul_int(&self, k: T) -> Option<Self> {
        self.checked_mul(&Self::from_integer(k))
    }
}

macro_rules! panicking_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl<T: ExactInt> $tr for ExactRational<T> {
            type Output = Self;
            fn $method(self, rhs: Self) -> Self {
                self.$checked(&rhs).unwrap_or_else(|| {
                    panic!(concat!("exact rational ", stringify!($method), " overflowed or divided by zero"))
                })
            }
        }
    };
}

panicking_op!(Add, add, checked_add);
panicking_op!(Sub, sub, checked_sub);
panicking_op!(Mul, mul, checked_mul);
panicking_op!(Div, div, checked_div);

impl<T: ExactInt> Neg for ExactRational<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.checked_neg().expect("exact rational negation overflowed")
    }
}

impl<T: ExactInt> Ord for ExactRational<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        let l = self.num.checked_mul(&other.den).expect("exact rational comparison overflowed");
        let r = other.num.checked_mul(&self.den).expect("exact rational comparison overflowed");
        l.cmp(&r)
    }
}

impl<T: ExactInt> PartialOrd for ExactRational<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: ExactInt> fmt::Display for ExactRational<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

impl<T: ExactInt> fmt::Debug for ExactRational<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl<T: ExactInt> Serialize for ExactRational<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
