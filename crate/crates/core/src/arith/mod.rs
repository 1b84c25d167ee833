//! Exact integer and rational arithmetic with p-adic valuations.

mod ext;
mod factored;
pub mod log2;
pub mod primes;
mod valuation;

use num_bigint::BigUint;
use thiserror::Error;

pub use ext::{ExtInt, ExtNat, Extended};
pub use factored::FactoredInteger;
pub use valuation::{nu_p_int, nu_p_rat, prime_pow, strip_prime};

/// Exact rationals, always kept in lowest terms with a positive denominator.
pub type BigRat = num_rational::BigRational;

/// Default materialization cap in bits.
pub const DEFAULT_BIT_CAP: u64 = 1 << 20;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("invalid prime {0}: primes are at least 2")]
    InvalidPrime(u64),
    #[error("zero has no factored form")]
    Zero,
    #[error("value has {bits} bits, above the cap of {cap}")]
    TooLarge { bits: BigUint, cap: u64 },
}

impl FactoredInteger {
    /// Valuation of a factored value at `p`, alias of [`FactoredInteger::nu_p`].
    pub fn nu_p_factored(&self, p: u64) -> ExtNat {
        self.nu_p(p)
    }
}
