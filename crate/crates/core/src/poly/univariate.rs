//! Dense univariate polynomials over `Z` and `Q`, coefficients stored low degree first.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::BigRat;

/// Polynomial over the integers; no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZPoly(Vec<BigInt>);

/// Polynomial over the rationals; no trailing zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QPoly(Vec<BigRat>);

fn trim<T: Zero>(mut v: Vec<T>) -> Vec<T> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

impl ZPoly {
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        ZPoly(trim(coeffs))
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        ZPoly(Vec::new())
    }

    pub fn one() -> Self {
        ZPoly(vec![BigInt::one()])
    }

    /// `x`.
    pub fn x() -> Self {
        Self::from_i64(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.0.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> BigInt {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        ZPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    /// Non-negative gcd of the coefficients.
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Divides by the content and makes the leading coefficient positive.
    pub fn primitive(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = self.content();
        if self.lc().is_negative() {
            c = -c;
        }
        ZPoly(self.0.iter().map(|x| x / &c).collect())
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_rat(&self, x: &BigRat) -> BigRat {
        self.0.iter().rev().fold(BigRat::zero(), |acc, c| acc * x + BigRat::from_integer(c.clone()))
    }

    /// `self / d` when the quotient exists in `Z[x]`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dd = d.deg();
        if self.deg() < dd {
            return None;
        }
        let mut rem = self.0.clone();
        let mut q = vec![BigInt::zero(); self.deg() - dd + 1];
        let lc = d.lc();
        for i in (0..q.len()).rev() {
            let top = &rem[i + dd];
            if top.is_zero() {
                continue;
            }
            let (qi, r) = top.div_rem(&lc);
            if !r.is_zero() {
                return None;
            }
            for (j, c) in d.0.iter().enumerate() {
                rem[i + j] -= &qi * c;
            }
            q[i] = qi;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Self::new(q))
    }

    pub fn to_q(&self) -> QPoly {
        QPoly::new(self.0.iter().map(|c| BigRat::from_integer(c.clone())).collect())
    }

    /// Primitive gcd with positive leading coefficient.
    pub fn gcd(&self, o: &Self) -> Self {
        if self.is_zero() {
            return o.primitive();
        }
        if o.is_zero() {
            return self.primitive();
        }
        // Primitive remainder sequence.
        let (mut a, mut b) = (self.primitive(), o.primitive());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive();
        }
        a.primitive()
    }

    /// Remainder of `lc(d)^(deg a − deg d + 1) · a` by `d`.
    pub fn pseudo_rem(&self, d: &Self) -> Self {
        let dd = d.deg();
        let mut r = self.clone();
        let lc = d.lc();
        while !r.is_zero() && r.deg() >= dd {
            let shift = r.deg() - dd;
            let top = r.lc();
            let mut scaled = r.scale(&lc);
            let mut sub = vec![BigInt::zero(); shift];
            sub.extend(d.0.iter().map(|c| c * &top));
            scaled = scaled.sub(&ZPoly::new(sub));
            r = scaled;
        }
        r
    }

    /// Square-free decomposition `f = c · ∏ g_i^i` of a nonzero polynomial (Yun), returning
    /// the primitive factors `g_i` of positive degree with their multiplicity `i`.
    pub fn squarefree_decomposition(&self) -> Vec<(ZPoly, u32)> {
        let f = self.primitive();
        let mut out = Vec::new();
        if f.deg() == 0 {
            return out;
        }
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_exact(&a0).expect("gcd divides").primitive();
        let mut c = fp.div_exact(&a0).unwrap_or_else(|| {
            // f' / a0 is integral up to content; fall back through the rationals.
            fp.to_q().divrem(&a0.to_q()).0.to_primitive_z()
        });
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.deg() > 0 {
            let a = b.gcd(&d);
            if a.deg() > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).expect("gcd divides").primitive();
            c = match d.div_exact(&a) {
                Some(q) => q,
                None => d.to_q().divrem(&a.to_q()).0.to_primitive_z(),
            };
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Substitutes `x ↦ x + shift`.
    pub fn taylor_shift(&self, shift: &BigInt) -> Self {
        let mut out = ZPoly::zero();
        let lin = ZPoly::new(vec![shift.clone(), BigInt::one()]);
        for c in self.0.iter().rev() {
            out = out.mul(&lin).add(&ZPoly::new(vec![c.clone()]));
        }
        out
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_dense(f, &self.0)
    }
}

fn write_dense<T: fmt::Display + Zero>(f: &mut fmt::Formatter<'_>, c: &[T]) -> fmt::Result {
    if c.is_empty() {
        return f.write_str("0");
    }
    let mut first = true;
    for (i, v) in c.iter().enumerate().rev() {
        if v.is_zero() {
            continue;
        }
        if !first {
            f.write_str(" + ")?;
        }
        first = false;
        match i {
            0 => write!(f, "{v}")?,
            1 => write!(f, "({v})*t")?,
            _ => write!(f, "({v})*t^{i}")?,
        }
    }
    Ok(())
}

impl QPoly {
    pub fn new(coeffs: Vec<BigRat>) -> Self {
        QPoly(trim(coeffs))
    }

    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn one() -> Self {
        QPoly(vec![BigRat::one()])
    }

    pub fn constant(c: BigRat) -> Self {
        Self::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.0
    }

    pub fn coeff(&self, i: usize) -> BigRat {
        self.0.get(i).cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn deg(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn lc(&self) -> BigRat {
        self.0.last().cloned().unwrap_or_else(BigRat::zero)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.0.len().max(o.0.len());
        Self::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRat::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, k: &BigRat) -> Self {
        Self::new(self.0.iter().map(|c| c * k).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigRat::from_integer(BigInt::from(i))).collect())
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let inv = self.lc().recip();
        self.scale(&inv)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.0.len() < d.0.len() {
            return (Self::zero(), self.clone());
        }
        let dd = d.deg();
        let inv = d.lc().recip();
        let mut rem = self.0.clone();
        let mut q = vec![BigRat::zero(); self.0.len() - dd];
        for i in (0..q.len()).rev() {
            let top = &rem[i + dd] * &inv;
            if top.is_zero() {
                continue;
            }
            for (j, c) in d.0.iter().enumerate() {
                rem[i + j] -= &top * c;
            }
            q[i] = top;
        }
        rem.truncate(dd);
        (Self::new(q), Self::new(rem))
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Monic gcd (zero if both are zero).
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// `(g, s, t)` with `s·self + t·o = g`, `g` monic.
    pub fn xgcd(&self, o: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), o.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1);
            let s2 = s0.sub(&q.mul(&s1));
            let t2 = t0.sub(&q.mul(&t1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
            t0 = std::mem::replace(&mut t1, t2);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = r0.lc().recip();
        (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        self.0.iter().rev().fold(BigRat::zero(), |acc, c| acc * x + c)
    }

    /// Clears denominators and returns the primitive integer multiple.
    pub fn to_primitive_z(&self) -> ZPoly {
        let l = self.0.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
        ZPoly::new(self.0.iter().map(|c| (c * BigRat::from_integer(l.clone())).to_integer()).collect()).primitive()
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_dense(f, &self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(c: &[i64]) -> ZPoly {
        ZPoly::from_i64(c)
    }

    #[test]
    fn gcd_and_exact_division() {
        let a = z(&[-1, 0, 1]); // x^2 - 1
        let b = z(&[1, 2, 1]); // (x+1)^2
        assert_eq!(a.gcd(&b), z(&[1, 1]));
        assert_eq!(a.div_exact(&z(&[1, 1])).unwrap(), z(&[-1, 1]));
        assert!(a.div_exact(&z(&[2, 1])).is_none());
        assert_eq!(z(&[6, 12]).primitive(), z(&[1, 2]));
        assert_eq!(z(&[6, -12]).primitive(), z(&[-1, 2]));
    }

    #[test]
    fn squarefree_decomposition_recovers_powers() {
        // (x-1)(x+2)^2(x^2+1)^3
        let f =
            z(&[-1, 1]).mul(&z(&[2, 1]).mul(&z(&[2, 1]))).mul(&z(&[1, 0, 1]).mul(&z(&[1, 0, 1])).mul(&z(&[1, 0, 1])));
        let parts = f.scale(&BigInt::from(6)).squarefree_decomposition();
        assert_eq!(parts, vec![(z(&[-1, 1]), 1), (z(&[2, 1]), 2), (z(&[1, 0, 1]), 3)]);
    }

    #[test]
    fn rational_xgcd() {
        let a = z(&[-1, 0, 1]).to_q();
        let b = z(&[2, 1]).to_q();
        let (g, s, t) = a.xgcd(&b);
        assert_eq!(g, QPoly::one());
        assert_eq!(s.mul(&a).add(&t.mul(&b)), QPoly::one());
    }

    #[test]
    fn taylor_shift_moves_roots() {
        let f = z(&[-4, 0, 1]); // x^2 - 4
        assert_eq!(f.taylor_shift(&BigInt::from(2)), z(&[0, 4, 1]));
    }
}
