//! Arithmetic in `Q[t]/(m)` for irreducible `m`, and dense univariate polynomials over it.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::BigRat;
use crate::poly::univariate::{QPoly, ZPoly};
use crate::poly::IntPolynomial;

/// Element of a number field: a rational polynomial in `t` reduced modulo the field modulus.
pub(crate) type Elem = QPoly;

/// Polynomial over a number field, coefficient `i` multiplying `y^i`, no trailing zeros.
pub(crate) type KPoly = Vec<Elem>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct NumberField {
    modulus: QPoly,
}

impl NumberField {
    /// The field `Q[t]/(m)`; `m` must be irreducible of positive degree.
    pub fn new(m: &ZPoly) -> Self {
        NumberField { modulus: m.to_q().monic() }
    }

    /// `Q` itself, presented as `Q[t]/(t)`.
    pub fn rational() -> Self {
        Self::new(&ZPoly::x())
    }

    pub fn degree(&self) -> usize {
        self.modulus.deg()
    }

    pub fn modulus(&self) -> &QPoly {
        &self.modulus
    }

    /// The class of `t`.
    pub fn generator(&self) -> Elem {
        self.reduce(&QPoly::new(vec![BigRat::zero(), BigRat::one()]))
    }

    pub fn reduce(&self, a: &QPoly) -> Elem {
        a.rem(&self.modulus)
    }

    pub fn int(&self, c: &BigInt) -> Elem {
        QPoly::constant(BigRat::from_integer(c.clone()))
    }

    pub fn mul(&self, a: &Elem, b: &Elem) -> Elem {
        self.reduce(&a.mul(b))
    }

    pub fn pow(&self, a: &Elem, e: u32) -> Elem {
        let mut acc = QPoly::one();
        for _ in 0..e {
            acc = self.mul(&acc, a);
        }
        acc
    }

    /// Inverse of a nonzero element.
    pub fn inv(&self, a: &Elem) -> Elem {
        let (g, s, _) = a.xgcd(&self.modulus);
        debug_assert!(g == QPoly::one(), "inverting zero or a non-field modulus");
        self.reduce(&s)
    }

    /// Value of an integer polynomial at `t = a`.
    pub fn eval_z(&self, p: &ZPoly, a: &Elem) -> Elem {
        p.coeffs().iter().rev().fold(QPoly::zero(), |acc, c| self.mul(&acc, a).add(&self.int(c)))
    }

    /// Value of a multivariate integer polynomial at a point with coordinates in the field.
    pub fn eval_multi(&self, p: &IntPolynomial, point: &[Elem]) -> Elem {
        let mut acc = QPoly::zero();
        for (m, c) in p.terms() {
            let mut t = self.int(c);
            for (x, &e) in point.iter().zip(m.exps()) {
                t = self.mul(&t, &self.pow(x, e));
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Exact equality test against zero after reduction.
    pub fn is_zero(&self, a: &Elem) -> bool {
        self.reduce(a).is_zero()
    }

    /// Rational value of an element of degree zero.
    pub fn as_rational(&self, a: &Elem) -> Option<BigRat> {
        let r = self.reduce(a);
        match r.degree() {
            None => Some(BigRat::zero()),
            Some(0) => Some(r.coeff(0)),
            _ => None,
        }
    }

    // --- polynomials over the field ---

    pub fn ktrim(&self, mut p: KPoly) -> KPoly {
        for c in p.iter_mut() {
            *c = self.reduce(c);
        }
        while p.last().is_some_and(|c| c.is_zero()) {
            p.pop();
        }
        p
    }

    pub fn kderiv(&self, p: &KPoly) -> KPoly {
        let out = p.iter().enumerate().skip(1).map(|(i, c)| c.scale(&BigRat::from_integer(BigInt::from(i)))).collect();
        self.ktrim(out)
    }

    /// Division with remainder by a nonzero divisor.
    pub fn kdivrem(&self, a: &KPoly, d: &KPoly) -> (KPoly, KPoly) {
        let dd = d.len() - 1;
        let inv = self.inv(&d[dd]);
        let mut rem = a.clone();
        if rem.len() <= dd {
            return (Vec::new(), rem);
        }
        let mut q = vec![QPoly::zero(); rem.len() - dd];
        for i in (0..q.len()).rev() {
            let top = self.reduce(&rem[i + dd]);
            if top.is_zero() {
                continue;
            }
            let qi = self.mul(&top, &inv);
            for (j, c) in d.iter().enumerate() {
                rem[i + j] = self.reduce(&rem[i + j].sub(&self.mul(&qi, c)));
            }
            q[i] = qi;
        }
        (self.ktrim(q), self.ktrim(rem))
    }

    pub fn kmonic(&self, p: &KPoly) -> KPoly {
        match p.last() {
            None => Vec::new(),
            Some(lc) => {
                let inv = self.inv(lc);
                p.iter().map(|c| self.mul(c, &inv)).collect()
            }
        }
    }

    /// Monic gcd; empty when both inputs are zero.
    pub fn kgcd(&self, a: &KPoly, b: &KPoly) -> KPoly {
        let (mut a, mut b) = (self.ktrim(a.clone()), self.ktrim(b.clone()));
        while !b.is_empty() {
            let r = self.kdivrem(&a, &b).1;
            a = b;
            b = r;
        }
        self.kmonic(&a)
    }

    /// Product of the distinct monic irreducible factors.
    pub fn ksquarefree_part(&self, p: &KPoly) -> KPoly {
        let g = self.kgcd(p, &self.kderiv(p));
        self.kmonic(&self.kdivrem(p, &g).0)
    }
}

/// Degree of a nonzero polynomial over a field, `None` for zero.
pub(crate) fn kdegree(p: &KPoly) -> Option<usize> {
    p.len().checked_sub(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> QPoly {
        ZPoly::from_i64(c).to_q()
    }

    #[test]
    fn sqrt_two_field() {
        let k = NumberField::new(&ZPoly::from_i64(&[-2, 0, 1]));
        let s = k.generator();
        assert_eq!(k.mul(&s, &s), q(&[2]));
        let inv = k.inv(&s);
        assert_eq!(k.mul(&inv, &s), QPoly::one());
        // y^2 - 2 = (y - s)(y + s) over the field
        let p: KPoly = vec![q(&[-2]), QPoly::zero(), QPoly::one()];
        let lin: KPoly = vec![s.scale(&BigRat::from_integer((-1).into())), QPoly::one()];
        let (quo, rem) = k.kdivrem(&p, &lin);
        assert!(rem.is_empty());
        assert_eq!(quo, vec![s.clone(), QPoly::one()]);
        assert_eq!(k.kgcd(&p, &k.kderiv(&p)), vec![QPoly::one()]);
        let sq = vec![k.mul(&s, &s), s.scale(&BigRat::from_integer(2.into())), QPoly::one()];
        assert_eq!(k.ksquarefree_part(&sq), vec![s, QPoly::one()]);
    }
}
