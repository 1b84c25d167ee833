//! Finite-N certificates: exact partial sums, p-adic dominance certificates for polynomial
//! non-vanishing, the analytic gap inequality, tail majorants, and the `Z_N` statistic.

mod dominance;
mod tail;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::{
    nu_p_int, prime_pow, strip_prime, ArithError, BigRat, ExtInt, Extended, FactoredInteger, DEFAULT_BIT_CAP,
};
use crate::poly::PolyError;
use crate::series::{SeriesError, SeriesFamily};

pub use dominance::{
    certify_window, dominance_certificate, linear_scan, CertVerdict, Certificate, CertificateRow, Certifier,
    Crosscheck, LinearScanReport, PrimeChoice, ScanRow, WindowReport, WindowRow,
};
pub use tail::{
    corollary_witnesses, erdos_gap_check, tail_bound, z_statistic, CorollaryReport, CorollaryRow, GapReport, LogTail,
    Majorant, TailBound, TailKind, ZStatistic, DEFAULT_TAIL_TERMS,
};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CertError {
    #[error("precondition violated: {hypothesis}")]
    Precondition { hypothesis: String },
    #[error("the zero polynomial cannot be certified")]
    ZeroPolynomial,
    #[error("polynomial has degree {degree}, above the configured order {order}")]
    DegreeExceedsOrder { degree: u32, order: u32 },
    #[error("polynomial has {got} variables, the family has {expected} series")]
    VariableCount { expected: usize, got: usize },
    #[error("no prime with ν_p(leading coefficient) = 0 among the first {scanned} candidates")]
    NoSuitablePrime { scanned: usize },
    #[error("tail bound unavailable: {0}")]
    TailUnavailable(String),
    #[error("hypothesis not witnessed: {0}")]
    HypothesisNotWitnessed(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn precondition(h: impl Into<String>) -> CertError {
    CertError::Precondition { hypothesis: h.into() }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertOptions {
    /// Largest bit length materialized for exact crosschecks and partial sums.
    pub bit_cap: u64,
    /// Whether certificates also evaluate `P` at the partial sums when feasible.
    pub crosscheck: bool,
    /// Candidates scanned when choosing a prime from an infinite set.
    pub prime_scan_cap: usize,
}

impl Default for CertOptions {
    fn default() -> Self {
        CertOptions { bit_cap: DEFAULT_BIT_CAP, crosscheck: true, prime_scan_cap: 10_000 }
    }
}

pub(crate) fn ser_display<T: std::fmt::Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

pub(crate) fn ser_display_map<K: Serialize, V: std::fmt::Display, S: Serializer>(
    m: &BTreeMap<K, V>,
    s: S,
) -> Result<S::Ok, S::Error> {
    use serde::ser::SerializeMap;
    let mut map = s.serialize_map(Some(m.len()))?;
    for (k, v) in m {
        map.serialize_entry(k, &v.to_string())?;
    }
    map.end()
}

/// `α_{k,N}` as an exact reduced rational.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartialSum {
    pub k: usize,
    pub n: u64,
    #[serde(serialize_with = "ser_display")]
    pub value: BigRat,
    /// `ν_p` of the reduced denominator for every prime seen in a factored denominator.
    #[serde(serialize_with = "ser_display_map")]
    pub denominator_valuations: BTreeMap<u64, BigUint>,
}

/// `Σ_{n ≤ N} b_{k,n} / a_{k,n}`, materializing every denominator within `bit_cap` bits.
pub fn partial_sum(fam: &SeriesFamily, k: usize, n: u64, bit_cap: u64) -> Result<PartialSum, CertError> {
    if n == 0 {
        return Err(CertError::InvalidArgument("N must be at least 1".into()));
    }
    let terms = (1..=n).map(|i| fam.term(k, i)).collect::<Result<Vec<_>, _>>()?;
    // One reduction over the common denominator instead of one per term.
    let lcm = terms.iter().fold(FactoredInteger::one(), |acc, t| acc.lcm(&t.a));
    let common = lcm.materialize(bit_cap)?;
    let mut numer = BigInt::zero();
    let mut primes = Vec::new();
    for t in &terms {
        primes.extend(t.a.factors().keys().copied());
        let cofactor = lcm.div_exact(&t.a).expect("lcm is a multiple of every term").materialize(bit_cap)?;
        numer += &t.b * cofactor;
    }
    let value = reduce_over(numer, common, &lcm);
    primes.sort_unstable();
    primes.dedup();
    let mut denominator_valuations = BTreeMap::new();
    for p in primes {
        if let Extended::Finite(v) = nu_p_int(value.denom(), p)? {
            denominator_valuations.insert(p, v);
        }
    }
    Ok(PartialSum { k, n, value, denominator_valuations })
}

/// `numer / denom` in lowest terms when `denom` is the materialized `factored`. Only primes
/// of `factored` and its residual can be shared, which avoids a full gcd of huge numbers.
fn reduce_over(numer: BigInt, denom: BigInt, factored: &FactoredInteger) -> BigRat {
    if numer.is_zero() {
        return BigRat::zero();
    }
    let mut g = BigUint::one();
    for (&p, e) in factored.factors() {
        let (v, _) = strip_prime(numer.magnitude(), p);
        let v = BigUint::from(v).min(e.clone());
        g *= prime_pow(p, v.to_u64().expect("bounded by the numerator size"));
    }
    let r = factored.residual();
    if !r.is_one() {
        g *= (numer.magnitude() % r).gcd(r);
    }
    let g = BigInt::from(g);
    BigRat::new_raw(numer / &g, denom / g)
}

/// `max_{n ≤ N} ν_p(a_{k,n})` after checking that it is positive, attained once, and that
/// `p ∤ gcd(a_{k,n}, b_{k,n})` for every `n ≤ N`.
pub(crate) fn dominant_valuation(fam: &SeriesFamily, k: usize, n: u64, p: u64) -> Result<BigUint, CertError> {
    let mut best = BigUint::zero();
    let mut count = 0usize;
    for i in 1..=n {
        let t = fam.term(k, i)?;
        let v = t.a.valuation(p);
        if !v.is_zero() && (t.b.magnitude() % p).is_zero() {
            return Err(precondition(format!("{p} divides both a_{{{k},{i}}} and b_{{{k},{i}}}")));
        }
        match v.cmp(&best) {
            std::cmp::Ordering::Greater => {
                best = v;
                count = 1;
            }
            std::cmp::Ordering::Equal => count += 1,
            std::cmp::Ordering::Less => {}
        }
    }
    if best.is_zero() {
        return Err(precondition(format!("max ν_{p}(a_{{{k},n}}) over n ≤ {n} is 0, not positive")));
    }
    if count != 1 {
        return Err(precondition(format!("max ν_{p}(a_{{{k},n}}) over n ≤ {n} is attained {count} times, not once")));
    }
    Ok(best)
}

/// `ν_p(α_{k,N}) = −max_{n ≤ N} ν_p(a_{k,n})`, computed from factored denominators.
pub fn valuation_of_partial_sum(fam: &SeriesFamily, k: usize, n: u64, p: u64) -> Result<ExtInt, CertError> {
    crate::arith::primes::is_prime(p).then_some(()).ok_or(ArithError::InvalidPrime(p))?;
    if n == 0 {
        return Err(CertError::InvalidArgument("N must be at least 1".into()));
    }
    let m = dominant_valuation(fam, k, n, p)?;
    Ok(Extended::Finite(-BigInt::from(m)))
}

/// Both sides of `b^N = b^k + (b−1)·Σ_{n=k}^{N−1} b^n` for an integer base `b = M+2+δ`.
pub fn power_split(base: u64, k: u32, n: u32) -> (BigUint, BigUint) {
    let b = BigUint::from(base);
    let lhs = num_traits::pow(b.clone(), n as usize);
    let tail: BigUint = (k..n).map(|e| num_traits::pow(b.clone(), e as usize)).sum();
    let rhs = num_traits::pow(b.clone(), k as usize) + (b - BigUint::one()) * tail;
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{nu_p_rat, FactoredInteger};
    use crate::series::{builtin_family, BuiltinParams, Term};

    fn geometric(b: i64, base: u64, scale: u64) -> SeriesFamily {
        SeriesFamily::custom(
            "test",
            1,
            move |_k, n| {
                let a =
                    FactoredInteger::prime_power(base, BigUint::from(n)).mul(&FactoredInteger::from_i64(scale as i64)?);
                Ok(Term::new(BigInt::from(b), a))
            },
            None,
        )
    }

    #[test]
    fn partial_sum_examples() {
        assert_eq!(partial_sum(&geometric(1, 2, 1), 1, 3, 1 << 20).unwrap().value, BigRat::new(7.into(), 8.into()));
        let params: BuiltinParams = serde_json::from_str(r#"{"a":"1","sign":{"rule":"constant","value":0}}"#).unwrap();
        let zeta = builtin_family("zeta5", &params).unwrap();
        assert_eq!(partial_sum(&zeta, 1, 2, 1 << 20).unwrap().value, BigRat::new(33.into(), 32.into()));
        let alt = SeriesFamily::custom(
            "alt",
            1,
            |_k, n| {
                let b = if n % 2 == 0 { 1 } else { -1 };
                Ok(Term::new(BigInt::from(b), FactoredInteger::prime_power(2, BigUint::one() << n as usize)))
            },
            None,
        );
        let s = partial_sum(&alt, 1, 2, 1 << 20).unwrap();
        assert_eq!(s.value, BigRat::new((-3).into(), 16.into()));
        assert_eq!(s.denominator_valuations[&2], BigUint::from(4u32));
    }

    #[test]
    fn valuation_matches_direct_computation() {
        let fam = geometric(1, 2, 3);
        assert_eq!(valuation_of_partial_sum(&fam, 1, 5, 2).unwrap(), ExtInt::from(-5));
        let direct = partial_sum(&fam, 1, 5, 1 << 20).unwrap().value;
        assert_eq!(nu_p_rat(&direct, 2).unwrap(), ExtInt::from(-5));
        // ν_3 is 1 for every term: the maximum is not unique.
        assert!(matches!(valuation_of_partial_sum(&fam, 1, 5, 3), Err(CertError::Precondition { .. })));
        // ν_5 is 0 throughout.
        assert!(matches!(valuation_of_partial_sum(&fam, 1, 5, 5), Err(CertError::Precondition { .. })));
        // p divides numerator and denominator.
        assert!(matches!(valuation_of_partial_sum(&geometric(2, 2, 1), 1, 3, 2), Err(CertError::Precondition { .. })));
    }

    #[test]
    fn power_split_small_cases() {
        for base in 2..8 {
            for n in 1..10 {
                for k in 0..n {
                    let (l, r) = power_split(base, k, n);
                    assert_eq!(l, r);
                }
            }
        }
    }
}
