use serde::{Deserialize, Serialize};

use crate::arith::primes;

/// Rule for the exponent `f_k(n)` in the sign `(−1)^{f_k(n)}`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum SignFunction {
    /// `f_k(n) = value` for every `k, n`.
    Constant { value: i64 },
    /// `f_k(n) = k·n`.
    #[default]
    KTimesN,
    /// `f_k(n)` = number of divisors of `n`.
    DivisorCount,
    /// `f_k(n)` = Euler's totient of `n`.
    EulerTotient,
    /// `f_k(n) = values[(n − 1) mod len]`, repeating the table cyclically.
    Table { values: Vec<i64> },
}

impl SignFunction {
    pub fn exponent(&self, k: usize, n: u64) -> i64 {
        match self {
            SignFunction::Constant { value } => *value,
            SignFunction::KTimesN => k as i64 * n as i64,
            SignFunction::DivisorCount => primes::divisor_count(n) as i64,
            SignFunction::EulerTotient => primes::totient(n) as i64,
            SignFunction::Table { values } if values.is_empty() => 0,
            SignFunction::Table { values } => values[((n - 1) % values.len() as u64) as usize],
        }
    }

    /// `(−1)^{f_k(n)}` as ±1.
    pub fn sign(&self, k: usize, n: u64) -> i64 {
        if self.exponent(k, n).rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}
