//! Exact half-integers.

use std::fmt;
use std::ops::{Add, Neg, Sub};

/// An element of ½ℤ, stored as twice its value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInteger(i64);

impl HalfInteger {
    pub const ZERO: HalfInteger = HalfInteger(0);
    pub const HALF: HalfInteger = HalfInteger(1);

    pub const fn from_twice(twice: i64) -> Self {
        HalfInteger(twice)
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInteger(2 * n)
    }

    /// The doubled value `2x`.
    pub const fn twice(self) -> i64 {
        self.0
    }

    pub const fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// The value as an integer, if it is one.
    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn add_int(self, n: i64) -> Self {
        HalfInteger(self.0 + 2 * n)
    }

    /// Smallest integer `t` with `self + t >= 0`, clamped below at 0.
    pub fn lift_to_nonnegative(self) -> i64 {
        if self.0 >= 0 {
            0
        } else {
            // ceil(-x) for x = twice/2
            (-self.0 + 1) / 2
        }
    }
}

impl Add for HalfInteger {
    type Output = HalfInteger;
    fn add(self, rhs: HalfInteger) -> HalfInteger {
        HalfInteger(self.0 + rhs.0)
    }
}

impl Sub for HalfInteger {
    type Output = HalfInteger;
    fn sub(self, rhs: HalfInteger) -> HalfInteger {
        HalfInteger(self.0 - rhs.0)
    }
}

impl Neg for HalfInteger {
    type Output = HalfInteger;
    fn neg(self) -> HalfInteger {
        HalfInteger(-self.0)
    }
}

impl fmt::Display for HalfInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn display() {
        assert_eq!(HalfInteger::from_twice(3).to_string(), "3/2");
        assert_eq!(HalfInteger::from_twice(-1).to_string(), "-1/2");
        assert_eq!(HalfInteger::from_int(2).to_string(), "2");
    }

    #[test]
    fn lift() {
        assert_eq!(HalfInteger::from_twice(-1).lift_to_nonnegative(), 1);
        assert_eq!(HalfInteger::from_twice(-3).lift_to_nonnegative(), 2);
        assert_eq!(HalfInteger::from_twice(-4).lift_to_nonnegative(), 2);
        assert_eq!(HalfInteger::from_twice(5).lift_to_nonnegative(), 0);
    }

    proptest! {
        #[test]
        fn doubled_round_trip(t in -10_000i64..10_000) {
            let x = HalfInteger::from_twice(t);
            prop_assert_eq!(x.twice(), t);
            prop_assert_eq!(x.is_integer(), t % 2 == 0);
            prop_assert_eq!(x - x, HalfInteger::ZERO);
            prop_assert_eq!((x + HalfInteger::HALF) - HalfInteger::HALF, x);
        }

        #[test]
        fn lift_is_minimal(t in -1000i64..1000) {
            let x = HalfInteger::from_twice(t);
            let s = x.lift_to_nonnegative();
            prop_assert!(x.add_int(s) >= HalfInteger::ZERO);
            if s > 0 {
                prop_assert!(x.add_int(s - 1) < HalfInteger::ZERO);
            }
        }
    }
}
