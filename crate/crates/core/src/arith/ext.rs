use std::fmt;
use std::ops::Add;

use num_bigint::{BigInt, BigUint};
use serde::{Serialize, Serializer};

/// A value extended by a distinguished `Infinity` that exceeds every finite value.
///
/// Variant order matters: the derived `Ord` places every `Finite` below `Infinity`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended<T> {
    Finite(T),
    Infinity,
}

/// Codomain of the valuation on integers.
pub type ExtNat = Extended<BigUint>;
/// Codomain of the valuation on rationals.
pub type ExtInt = Extended<BigInt>;

impl<T> Extended<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinity => None,
        }
    }

    pub fn into_finite(self) -> Option<T> {
        match self {
            Extended::Finite(v) => Some(v),
            Extended::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinity)
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> Extended<U> {
        match self {
            Extended::Finite(v) => Extended::Finite(f(v)),
            Extended::Infinity => Extended::Infinity,
        }
    }
}

impl<T> From<T> for Extended<T> {
    fn from(v: T) -> Self {
        Extended::Finite(v)
    }
}

impl From<u64> for ExtNat {
    fn from(v: u64) -> Self {
        Extended::Finite(BigUint::from(v))
    }
}

impl From<i64> for ExtInt {
    fn from(v: i64) -> Self {
        Extended::Finite(BigInt::from(v))
    }
}

impl ExtNat {
    pub fn to_ext_int(&self) -> ExtInt {
        match self {
            Extended::Finite(v) => Extended::Finite(BigInt::from(v.clone())),
            Extended::Infinity => Extended::Infinity,
        }
    }
}

impl<T: Add<Output = T>> Add for Extended<T> {
    type Output = Extended<T>;

    fn add(self, rhs: Self) -> Self::Output {
        match (self, rhs) {
            (Extended::Finite(a), Extended::Finite(b)) => Extended::Finite(a + b),
            _ => Extended::Infinity,
        }
    }
}

impl<T: fmt::Display> fmt::Display for Extended<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(v) => v.fmt(f),
            Extended::Infinity => f.write_str("inf"),
        }
    }
}

// Serialized as a decimal string ("inf" for infinity) so that values beyond 64 bits survive JSON.
impl<T: fmt::Display> Serialize for Extended<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn infinity_is_maximal_and_absorbing() {
        let big: ExtNat = Extended::Finite(BigUint::from(1u8) << 4000usize);
        assert!(big < ExtNat::Infinity);
        assert_eq!(big.clone() + ExtNat::Infinity, ExtNat::Infinity);
        assert_eq!(ExtNat::Infinity + big, ExtNat::Infinity);
        assert_eq!(ExtNat::from(3) + ExtNat::from(4), ExtNat::from(7));
    }

    #[test]
    fn ordering_of_negative_finite_values() {
        assert!(ExtInt::from(-5) < ExtInt::from(2));
        assert!(ExtInt::from(-5) < ExtInt::Infinity);
        assert_eq!(ExtInt::Infinity.to_string(), "inf");
    }
}
