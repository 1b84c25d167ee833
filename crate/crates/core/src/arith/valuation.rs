use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{ArithError, BigRat, ExtInt, ExtNat, Extended};

/// Splits `n = p^v * m` with `p ∤ m`, returning `(v, m)`. `n` must be nonzero.
///
/// Uses a ladder of repeated squares `p, p^2, p^4, ...` so that large valuations cost
/// a logarithmic number of divisions.
pub fn strip_prime(n: &BigUint, p: u64) -> (u64, BigUint) {
    debug_assert!(!n.is_zero());
    if p == 2 {
        let v = n.trailing_zeros().unwrap_or(0);
        return (v, n >> v);
    }
    let p_big = BigUint::from(p);
    if !(n % &p_big).is_zero() {
        return (0, n.clone());
    }
    let mut ladder = vec![p_big];
    loop {
        let last = ladder.last().unwrap();
        if last.bits() * 2 > n.bits() + 1 {
            break;
        }
        let sq = last * last;
        if &sq > n {
            break;
        }
        ladder.push(sq);
    }
    let mut rest = n.clone();
    let mut v = 0u64;
    for (i, pw) in ladder.iter().enumerate().rev() {
        let (q, r) = rest.div_rem(pw);
        if r.is_zero() {
            rest = q;
            v += 1u64 << i;
        }
    }
    (v, rest)
}

fn check_prime(p: u64) -> Result<(), ArithError> {
    if p < 2 {
        return Err(ArithError::InvalidPrime(p));
    }
    debug_assert!(super::primes::is_prime(p), "{p} is not prime");
    Ok(())
}

/// Exponent of `p` in `n`; infinite for `n = 0`.
pub fn nu_p_int(n: &BigInt, p: u64) -> Result<ExtNat, ArithError> {
    check_prime(p)?;
    if n.is_zero() {
        return Ok(Extended::Infinity);
    }
    Ok(Extended::Finite(BigUint::from(strip_prime(n.magnitude(), p).0)))
}

/// Valuation of a rational, `ν_p(num) − ν_p(den)`; infinite for zero.
pub fn nu_p_rat(q: &BigRat, p: u64) -> Result<ExtInt, ArithError> {
    check_prime(p)?;
    if q.is_zero() {
        return Ok(Extended::Infinity);
    }
    let num = strip_prime(q.numer().magnitude(), p).0;
    let den = strip_prime(q.denom().magnitude(), p).0;
    Ok(Extended::Finite(BigInt::from(num) - BigInt::from(den)))
}

/// `p^e` for a machine exponent.
pub fn prime_pow(p: u64, e: u64) -> BigUint {
    if p == 2 {
        return BigUint::one() << e;
    }
    num_traits::pow(BigUint::from(p), e as usize)
}
