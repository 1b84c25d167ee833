//! Sound dyadic enclosures of binary logarithms and of their rational powers.
//!
//! Every quantity is an interval `[lo, hi]` of exact rationals guaranteed to contain the
//! true real value. Comparisons report `Unknown` rather than guess when intervals overlap.

use std::ops::{Add, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::BigRat;

/// Precision ladder (fractional bits) used by refining comparisons.
pub const PRECISIONS: [u32; 4] = [64, 256, 1024, 4096];

/// Closed interval `[lo, hi]` of rationals enclosing a real number.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bracket {
    pub lo: BigRat,
    pub hi: BigRat,
}

/// Outcome of a sound comparison.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Decision {
    True,
    False,
    Unknown,
}

impl Decision {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Decision::True
        } else {
            Decision::False
        }
    }

    pub fn is_true(self) -> bool {
        self == Decision::True
    }
}

fn int(v: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(v))
}

fn dyadic(num: BigInt, frac_bits: u32) -> BigRat {
    BigRat::new(num, BigInt::one() << frac_bits)
}

impl Bracket {
    pub fn exact(v: BigRat) -> Self {
        Bracket { lo: v.clone(), hi: v }
    }

    pub fn from_int(v: i64) -> Self {
        Bracket::exact(int(v))
    }

    pub fn zero() -> Self {
        Bracket::from_int(0)
    }

    pub fn width(&self) -> BigRat {
        &self.hi - &self.lo
    }

    /// Multiplies by a non-negative rational.
    pub fn scale(&self, k: &BigRat) -> Self {
        debug_assert!(!k.is_negative());
        Bracket { lo: &self.lo * k, hi: &self.hi * k }
    }

    pub fn scale_int(&self, k: &BigUint) -> Self {
        self.scale(&BigRat::from_integer(BigInt::from(k.clone())))
    }

    /// Encloses `x^kappa` for `kappa = a/b ≥ 0`; values below zero are clamped to zero.
    pub fn pow_rat(&self, kappa: &BigRat, prec: u32) -> Self {
        Bracket { lo: rat_pow_lower(&self.lo, kappa, prec), hi: rat_pow_upper(&self.hi, kappa, prec) }
    }

    /// Encloses `max(self, other)`.
    pub fn max(&self, other: &Bracket) -> Self {
        Bracket { lo: self.lo.clone().max(other.lo.clone()), hi: self.hi.clone().max(other.hi.clone()) }
    }

    /// Sound `self ≤ other`.
    pub fn le(&self, other: &Bracket) -> Decision {
        if self.hi <= other.lo {
            Decision::True
        } else if self.lo > other.hi {
            Decision::False
        } else {
            Decision::Unknown
        }
    }

    /// Sound `self < other`.
    pub fn lt(&self, other: &Bracket) -> Decision {
        if self.hi < other.lo {
            Decision::True
        } else if self.lo >= other.hi {
            Decision::False
        } else {
            Decision::Unknown
        }
    }

    /// Largest integer `m` with `m ≤ lo`, a sound lower bound on the floor.
    pub fn floor_lo(&self) -> BigInt {
        self.lo.floor().to_integer()
    }

    /// Smallest integer `m` with `m ≥ hi`.
    pub fn ceil_hi(&self) -> BigInt {
        self.hi.ceil().to_integer()
    }
}

impl Add for &Bracket {
    type Output = Bracket;
    fn add(self, rhs: &Bracket) -> Bracket {
        Bracket { lo: &self.lo + &rhs.lo, hi: &self.hi + &rhs.hi }
    }
}

impl Add for Bracket {
    type Output = Bracket;
    fn add(self, rhs: Bracket) -> Bracket {
        &self + &rhs
    }
}

impl Sub for &Bracket {
    type Output = Bracket;
    fn sub(self, rhs: &Bracket) -> Bracket {
        Bracket { lo: &self.lo - &rhs.hi, hi: &self.hi - &rhs.lo }
    }
}

impl Sub for Bracket {
    type Output = Bracket;
    fn sub(self, rhs: Bracket) -> Bracket {
        &self - &rhs
    }
}

impl Neg for Bracket {
    type Output = Bracket;
    fn neg(self) -> Bracket {
        Bracket { lo: -self.hi, hi: -self.lo }
    }
}

/// Encloses `log2(n)` for `n ≥ 1` with `prec` fractional bits; exact for powers of two.
pub fn log2_uint(n: &BigUint, prec: u32) -> Bracket {
    assert!(!n.is_zero(), "log2 of zero");
    let int_part = n.bits() - 1;
    if n.trailing_zeros() == Some(int_part) {
        return Bracket::exact(BigRat::from_integer(BigInt::from(int_part)));
    }
    // Fixed point y = n / 2^int_part in [1, 2) with `width` fractional bits.
    let width = prec as u64 + 16;
    let (y_lo, y_hi) = if int_part >= width {
        let shift = int_part - width;
        let lo = n >> shift;
        let hi = if (&lo << shift) == *n { lo.clone() } else { &lo + 1u32 };
        (lo, hi)
    } else {
        let v = n << (width - int_part);
        (v.clone(), v)
    };
    let frac_lo = log2_frac_digits(y_lo, width, prec, false);
    let frac_hi = log2_frac_digits(y_hi, width, prec, true);
    let base = BigInt::from(int_part) << prec;
    Bracket { lo: dyadic(base.clone() + frac_lo, prec), hi: dyadic(base + frac_hi, prec) }
}

/// Digits of log2(y) for fixed-point `y ∈ [1, 2]` scaled by `2^width`, as an integer
/// numerator over `2^prec`. Rounds down throughout when `upper` is false, up otherwise.
fn log2_frac_digits(mut y: BigUint, width: u64, prec: u32, upper: bool) -> BigInt {
    let one = BigUint::one() << width;
    let two = BigUint::one() << (width + 1);
    let mask = &one - 1u32;
    let mut digits = BigUint::zero();
    // The upper path may start at exactly 2 after rounding.
    if y >= two {
        return BigInt::from(BigUint::one() << prec);
    }
    for _ in 0..prec {
        let sq = &y * &y;
        let mut next = &sq >> width;
        if upper && !(&sq & &mask).is_zero() {
            next += 1u32;
        }
        digits <<= 1;
        if next >= two {
            digits |= BigUint::one();
            let odd = next.is_odd();
            next >>= 1;
            if upper && odd {
                next += 1u32;
            }
        }
        y = next;
        debug_assert!(y >= one);
    }
    if upper {
        // Remaining value log2(y) / 2^prec lies in [0, 2^-prec]; y may round up to 2 at most.
        digits += 1u32;
    }
    BigInt::from(digits)
}

/// Encloses `log2(q)` for a positive rational.
pub fn log2_rat(q: &BigRat, prec: u32) -> Bracket {
    assert!(q.is_positive(), "log2 of non-positive rational");
    let num = log2_uint(q.numer().magnitude(), prec);
    let den = log2_uint(q.denom().magnitude(), prec);
    &num - &den
}

/// Lower bound on `x^kappa` for `x ≥ 0`, `kappa = a/b ≥ 0`, within about `2^-prec`.
pub fn rat_pow_lower(x: &BigRat, kappa: &BigRat, prec: u32) -> BigRat {
    if !x.is_positive() {
        return if kappa.is_zero() && x.is_zero() { int(1) } else { int(0) };
    }
    let (a, b) = split_exponent(kappa);
    let xa = num_traits::pow(x.clone(), a);
    let scaled = (xa * BigRat::from_integer(BigInt::one() << (prec as u64 * b as u64))).floor();
    let t = scaled.to_integer().to_biguint().unwrap_or_default();
    let r = t.nth_root(b);
    dyadic(BigInt::from(r), prec)
}

/// Upper bound on `x^kappa` for `x ≥ 0`, `kappa = a/b ≥ 0`.
pub fn rat_pow_upper(x: &BigRat, kappa: &BigRat, prec: u32) -> BigRat {
    if !x.is_positive() {
        return if kappa.is_zero() { int(1) } else { int(0) };
    }
    let (a, b) = split_exponent(kappa);
    let xa = num_traits::pow(x.clone(), a);
    let scaled = (xa * BigRat::from_integer(BigInt::one() << (prec as u64 * b as u64))).ceil();
    let t = scaled.to_integer().to_biguint().unwrap_or_default();
    let mut r = t.nth_root(b);
    if num_traits::pow(r.clone(), b as usize) < t {
        r += 1u32;
    }
    dyadic(BigInt::from(r), prec)
}

fn split_exponent(kappa: &BigRat) -> (usize, u32) {
    assert!(!kappa.is_negative(), "negative exponent");
    let a = kappa.numer().to_usize().expect("exponent numerator too large");
    let b = kappa.denom().to_u32().expect("exponent denominator too large");
    (a, b)
}

/// Runs `f` at increasing precision until it returns a definite answer.
pub fn refine(mut f: impl FnMut(u32) -> Decision) -> Decision {
    for prec in PRECISIONS {
        let d = f(prec);
        if d != Decision::Unknown {
            return d;
        }
    }
    Decision::Unknown
}

/// `2^x` enclosed for a bracket of exponents, as a bracket of rationals. Only sensible for
/// modest exponents; the caller guarantees `|x|` is small enough to materialize.
pub fn exp2_bracket(x: &Bracket, prec: u32) -> Bracket {
    Bracket { lo: exp2_lower(&x.lo, prec), hi: exp2_upper(&x.hi, prec) }
}

fn exp2_lower(x: &BigRat, prec: u32) -> BigRat {
    let fl = x.floor();
    let frac = x - &fl;
    let base = pow2_int(&fl.to_integer());
    // 2^frac ≥ 1 + frac * (2^(1/2^k) stuff): use the root-based lower bound 2^(a/b) ≥ floor-root.
    base * rat_pow_lower(&int(2), &frac, prec)
}

fn exp2_upper(x: &BigRat, prec: u32) -> BigRat {
    let fl = x.floor();
    let frac = x - &fl;
    let base = pow2_int(&fl.to_integer());
    base * rat_pow_upper(&int(2), &frac, prec)
}

fn pow2_int(e: &BigInt) -> BigRat {
    let mag = e.magnitude().to_u64().expect("exponent too large for 2^e");
    let p = BigInt::one() << mag;
    if e.is_negative() {
        BigRat::new(BigInt::one(), p)
    } else {
        BigRat::from_integer(p)
    }
}

/// Sound `log2(1 + 2^t)` upper bound for the log-sum step `log2(2^u + 2^v)` with `t = v − u ≤ 0`.
///
/// Uses `log2(1 + y) ≤ y / ln 2 ≤ 1.5·y` and `2^t ≤ 2^floor(t)`, or the trivial bound 1.
pub fn log1p_exp2_upper(t: &BigRat) -> BigRat {
    if !t.is_negative() {
        // log2(1 + 2^t) ≤ t + 1 for t ≥ 0.
        return t + int(1);
    }
    let f = t.floor().to_integer();
    if f < BigInt::from(-100_000) {
        // Negligible but still positive; keep a tiny dyadic bound.
        return BigRat::new(BigInt::from(3), BigInt::one() << 100_001u32);
    }
    let y = pow2_int(&f);
    let bound = y * BigRat::new(BigInt::from(3), BigInt::from(2));
    bound.min(int(1))
}

/// Upper bound on `log2(2^u + 2^v)` from upper bounds `u`, `v`.
pub fn log2_sum_upper(u: &BigRat, v: &BigRat) -> BigRat {
    let (hi, lo) = if u >= v { (u, v) } else { (v, u) };
    hi + log1p_exp2_upper(&(lo - hi))
}
