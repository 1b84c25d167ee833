use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::log2::{log2_uint, Bracket, PRECISIONS};
use super::primes;
use super::valuation::{prime_pow, strip_prime};
use super::{ArithError, ExtNat, Extended};

/// Primes below this bound are split off when a plain integer enters factored form.
const TRIAL_BOUND: u64 = 1000;

/// Largest residual power (in bits) `pow` is willing to build.
const RESIDUAL_POW_BITS: u64 = 1 << 24;

/// A nonzero integer stored as `sign · residual · ∏ p^e`.
///
/// Exponents may be astronomically large; the residual is coprime to every key prime.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FactoredInteger {
    negative: bool,
    factors: BTreeMap<u64, BigUint>,
    residual: BigUint,
}

impl FactoredInteger {
    /// Builds and normalizes: zero exponents are dropped and key primes are divided out of
    /// the residual. Keys must be prime.
    pub fn new(
        negative: bool,
        factors: impl IntoIterator<Item = (u64, BigUint)>,
        residual: BigUint,
    ) -> Result<Self, ArithError> {
        if residual.is_zero() {
            return Err(ArithError::Zero);
        }
        let mut map: BTreeMap<u64, BigUint> = BTreeMap::new();
        for (p, e) in factors {
            debug_assert!(primes::is_prime(p), "{p} is not prime");
            *map.entry(p).or_default() += e;
        }
        let mut x = FactoredInteger { negative, factors: map, residual };
        let keys: Vec<u64> = x.factors.keys().copied().collect();
        x.absorb_keys(&keys);
        x.factors.retain(|_, e| !e.is_zero());
        Ok(x)
    }

    pub fn one() -> Self {
        FactoredInteger { negative: false, factors: BTreeMap::new(), residual: BigUint::one() }
    }

    /// `p^e` for a prime `p`.
    pub fn prime_power(p: u64, e: BigUint) -> Self {
        Self::new(false, [(p, e)], BigUint::one()).expect("nonzero")
    }

    /// Enters a plain integer, splitting off small primes by trial division.
    pub fn from_bigint(n: &BigInt) -> Result<Self, ArithError> {
        if n.is_zero() {
            return Err(ArithError::Zero);
        }
        let mut rest = n.magnitude().clone();
        let mut factors = BTreeMap::new();
        let mut p = 2;
        while p < TRIAL_BOUND && !rest.is_one() {
            let (v, r) = strip_prime(&rest, p);
            if v > 0 {
                factors.insert(p, BigUint::from(v));
                rest = r;
            }
            p = primes::next_prime(p + 1);
        }
        // Whatever remains below the square of the bound is prime.
        if rest.bits() < 64 {
            let r = rest.to_u64().unwrap();
            if r > 1 && r < TRIAL_BOUND * TRIAL_BOUND {
                factors.insert(r, BigUint::one());
                rest = BigUint::one();
            }
        }
        Ok(FactoredInteger { negative: n.is_negative(), factors, residual: rest })
    }

    pub fn from_i64(n: i64) -> Result<Self, ArithError> {
        Self::from_bigint(&BigInt::from(n))
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn factors(&self) -> &BTreeMap<u64, BigUint> {
        &self.factors
    }

    pub fn residual(&self) -> &BigUint {
        &self.residual
    }

    pub fn abs(&self) -> Self {
        FactoredInteger { negative: false, ..self.clone() }
    }

    pub fn negate(&self) -> Self {
        FactoredInteger { negative: !self.negative, ..self.clone() }
    }

    pub fn with_sign(&self, negative: bool) -> Self {
        FactoredInteger { negative, ..self.clone() }
    }

    pub fn is_one(&self) -> bool {
        !self.negative && self.factors.is_empty() && self.residual.is_one()
    }

    /// Moves every power of the given primes out of the residual into the factor map.
    fn absorb_keys(&mut self, keys: &[u64]) {
        for &p in keys {
            if self.residual.is_one() {
                break;
            }
            let (v, rest) = strip_prime(&self.residual, p);
            if v > 0 {
                *self.factors.entry(p).or_default() += BigUint::from(v);
                self.residual = rest;
            }
        }
    }

    fn normalized_against(&self, keys: &BTreeSet<u64>) -> Self {
        let mut x = self.clone();
        let missing: Vec<u64> = keys.iter().copied().filter(|p| !x.factors.contains_key(p)).collect();
        x.absorb_keys(&missing);
        x
    }

    fn union_keys(&self, other: &Self) -> BTreeSet<u64> {
        self.factors.keys().chain(other.factors.keys()).copied().collect()
    }

    /// Exact product: exponents add and the residual product is re-stripped against all keys.
    pub fn mul(&self, other: &Self) -> Self {
        let mut factors = self.factors.clone();
        for (p, e) in &other.factors {
            *factors.entry(*p).or_default() += e;
        }
        let mut x = FactoredInteger {
            negative: self.negative != other.negative,
            factors,
            residual: &self.residual * &other.residual,
        };
        let keys: Vec<u64> = x.factors.keys().copied().collect();
        x.absorb_keys(&keys);
        x
    }

    /// Raises to a (possibly huge) power. Fails only when a nontrivial residual would have
    /// to be expanded beyond an internal size limit.
    pub fn pow(&self, e: &BigUint) -> Result<Self, ArithError> {
        if e.is_zero() {
            return Ok(Self::one());
        }
        let residual = if self.residual.is_one() {
            BigUint::one()
        } else {
            let bits = BigUint::from(self.residual.bits() - 1) * e + 1u32;
            match e.to_u32() {
                Some(small) if bits <= BigUint::from(RESIDUAL_POW_BITS) => self.residual.pow(small),
                _ => return Err(ArithError::TooLarge { bits, cap: RESIDUAL_POW_BITS }),
            }
        };
        Ok(FactoredInteger {
            negative: self.negative && e.is_odd(),
            factors: self.factors.iter().map(|(p, x)| (*p, x * e)).collect(),
            residual,
        })
    }

    /// Exponent of `p`, without materializing the value.
    pub fn nu_p(&self, p: u64) -> ExtNat {
        match self.factors.get(&p) {
            Some(e) => Extended::Finite(e.clone()),
            None if p < 2 => Extended::Finite(BigUint::zero()),
            None => Extended::Finite(BigUint::from(strip_prime(&self.residual, p).0)),
        }
    }

    /// Finite exponent of `p` (the value is never zero).
    pub fn valuation(&self, p: u64) -> BigUint {
        self.nu_p(p).into_finite().expect("nonzero value")
    }

    /// Enclosure of `log2 |x|` with about `prec` fractional bits per factor.
    pub fn log2_bracket(&self, prec: u32) -> Bracket {
        let mut acc = log2_uint(&self.residual, prec);
        for (p, e) in &self.factors {
            acc = &acc + &log2_uint(&BigUint::from(*p), prec).scale_int(e);
        }
        acc
    }

    /// Whether `|x|` is a power of two (then its logarithm is an exact integer).
    pub fn is_power_of_two(&self) -> bool {
        self.residual.is_one() && self.factors.keys().all(|&p| p == 2)
    }

    /// Exact bit length of `|x|`, computed from exponents.
    pub fn bit_length(&self) -> BigUint {
        if self.is_power_of_two() {
            return self.factors.get(&2).cloned().unwrap_or_default() + 1u32;
        }
        // log2|x| is irrational here, so the enclosure eventually avoids every integer.
        let mut prec = PRECISIONS[0];
        loop {
            let b = self.log2_bracket(prec);
            let lo = b.lo.floor().to_integer();
            let hi = b.hi.floor().to_integer();
            if lo == hi {
                return lo.to_biguint().expect("log of |x| ≥ 1 is non-negative") + 1u32;
            }
            prec *= 2;
        }
    }

    /// The exact integer, if its bit length is at most `bit_cap`.
    pub fn materialize(&self, bit_cap: u64) -> Result<BigInt, ArithError> {
        let bits = self.bit_length();
        if bits > BigUint::from(bit_cap) {
            return Err(ArithError::TooLarge { bits, cap: bit_cap });
        }
        let mut v = self.residual.clone();
        for (p, e) in &self.factors {
            let e = e.to_u64().expect("bounded by bit cap");
            if *p == 2 {
                v <<= e;
            } else {
                v *= prime_pow(*p, e);
            }
        }
        let sign = if self.negative { Sign::Minus } else { Sign::Plus };
        Ok(BigInt::from_biguint(sign, v))
    }

    /// Least common multiple of the absolute values.
    pub fn lcm(&self, other: &Self) -> Self {
        let keys = self.union_keys(other);
        let a = self.normalized_against(&keys);
        let b = other.normalized_against(&keys);
        let mut factors = a.factors.clone();
        for (p, e) in &b.factors {
            let slot = factors.entry(*p).or_default();
            if *e > *slot {
                *slot = e.clone();
            }
        }
        FactoredInteger { negative: false, factors, residual: a.residual.lcm(&b.residual) }
    }

    /// `self / other` when the division is exact.
    pub fn div_exact(&self, other: &Self) -> Option<Self> {
        let keys = self.union_keys(other);
        let a = self.normalized_against(&keys);
        let b = other.normalized_against(&keys);
        let mut factors = a.factors.clone();
        for (p, e) in &b.factors {
            let slot = factors.entry(*p).or_default();
            if *slot < *e {
                return None;
            }
            *slot -= e;
        }
        factors.retain(|_, e| !e.is_zero());
        let (q, r) = a.residual.div_rem(&b.residual);
        if !r.is_zero() {
            return None;
        }
        Some(FactoredInteger { negative: a.negative != b.negative, factors, residual: q })
    }

    /// Divides out everything `|self|` and `|other|` have in common, leaving coprime parts.
    fn cancel_common(&self, other: &Self) -> (Self, Self) {
        let keys = self.union_keys(other);
        let mut a = self.normalized_against(&keys).abs();
        let mut b = other.normalized_against(&keys).abs();
        for p in &keys {
            let ea = a.factors.get(p).cloned().unwrap_or_default();
            let eb = b.factors.get(p).cloned().unwrap_or_default();
            let common = ea.clone().min(eb.clone());
            a.factors.insert(*p, ea - &common);
            b.factors.insert(*p, eb - &common);
        }
        let g = a.residual.gcd(&b.residual);
        a.residual /= &g;
        b.residual /= &g;
        a.factors.retain(|_, e| !e.is_zero());
        b.factors.retain(|_, e| !e.is_zero());
        (a, b)
    }

    /// Encloses `log2 |self / other|`, after cancelling common factors so that equal parts
    /// contribute no width.
    pub fn log2_ratio_bracket(&self, other: &Self, prec: u32) -> Bracket {
        let (a, b) = self.cancel_common(other);
        &a.log2_bracket(prec) - &b.log2_bracket(prec)
    }

    /// Compares absolute values exactly when possible, via logarithm enclosures otherwise.
    /// `None` only if the enclosures fail to separate two distinct values.
    pub fn cmp_abs(&self, other: &Self) -> Option<Ordering> {
        let (a, b) = self.cancel_common(other);
        if a == b {
            return Some(Ordering::Equal);
        }
        let small = BigUint::from(1u32 << 16);
        if a.bit_length() <= small && b.bit_length() <= small {
            let x = a.materialize(1 << 16).ok()?;
            let y = b.materialize(1 << 16).ok()?;
            return Some(x.cmp(&y));
        }
        for prec in PRECISIONS {
            let la = a.log2_bracket(prec);
            let lb = b.log2_bracket(prec);
            if la.hi < lb.lo {
                return Some(Ordering::Less);
            }
            if lb.hi < la.lo {
                return Some(Ordering::Greater);
            }
        }
        None
    }
}

impl fmt::Display for FactoredInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            f.write_str("-")?;
        }
        let mut parts: Vec<String> =
            self.factors.iter().map(|(p, e)| if e.is_one() { p.to_string() } else { format!("{p}^{e}") }).collect();
        if !self.residual.is_one() || parts.is_empty() {
            parts.push(self.residual.to_string());
        }
        f.write_str(&parts.join("*"))
    }
}

impl Serialize for FactoredInteger {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FactoredInteger", 3)?;
        st.serialize_field("sign", &if self.negative { -1 } else { 1 })?;
        let factors: BTreeMap<String, String> =
            self.factors.iter().map(|(p, e)| (p.to_string(), e.to_string())).collect();
        st.serialize_field("factors", &factors)?;
        st.serialize_field("residual", &self.residual.to_string())?;
        st.end()
    }
}
