//! Sparse multivariate polynomials over the integers.

mod factor;
mod parse;
pub mod univariate;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::arith::BigRat;

pub use factor::{factor, factor_zpoly, irreducible_factors, Factorization};
pub use parse::ParseError;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("the zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("radius must be at least 1")]
    RadiusTooSmall,
    #[error("operation needs {expected} variables, polynomial has {got}")]
    WrongVariableCount { expected: usize, got: usize },
}

/// Exponent tuple `(i_1, ..., i_K)`, ordered colexicographically: the last coordinate is
/// compared first, ties recurse on the prefix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn zero(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for Monomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(s)
    }
}

/// Polynomial in `nvars` variables with nonzero integer coefficients keyed by monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPolynomial {
    nvars: usize,
    terms: BTreeMap<Monomial, BigInt>,
}

impl IntPolynomial {
    pub fn zero(nvars: usize) -> Self {
        IntPolynomial { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: impl Into<BigInt>) -> Self {
        Self::from_terms(nvars, [(Monomial::zero(nvars), c.into())])
    }

    /// The variable `x_{index+1}` (zero-based `index`).
    pub fn var(nvars: usize, index: usize) -> Self {
        let mut e = vec![0; nvars];
        e[index] = 1;
        Self::from_terms(nvars, [(Monomial(e), BigInt::one())])
    }

    /// Sums the given terms, dropping zero coefficients.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Monomial, BigInt)>) -> Self {
        let mut map: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.0.len(), nvars, "monomial arity");
            *map.entry(m).or_default() += c;
        }
        map.retain(|_, c| !c.is_zero());
        IntPolynomial { nvars, terms: map }
    }

    /// Convenience constructor from `(exponents, coefficient)` pairs with machine integers.
    pub fn from_pairs(nvars: usize, pairs: &[(&[u32], i64)]) -> Self {
        Self::from_terms(nvars, pairs.iter().map(|(e, c)| (Monomial(e.to_vec()), BigInt::from(*c))))
    }

    pub fn parse(text: &str, nvars: Option<usize>) -> Result<Self, ParseError> {
        parse::parse(text, nvars)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|m| m.degree() == 0)
    }

    /// Total degree; zero for constants (including the zero polynomial).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn coeff(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The colexicographically largest term.
    pub fn colex_leading(&self) -> Result<(Monomial, BigInt), PolyError> {
        self.terms
            .iter()
            .next_back()
            .map(|(m, c)| (m.clone(), c.clone()))
            .ok_or(PolyError::ZeroPolynomial("leading term"))
    }

    /// Coefficient of the graded-lexicographically largest term, the one printed first.
    pub fn display_leading_coeff(&self) -> Option<&BigInt> {
        self.terms.iter().max_by(|a, b| graded_lex_key(a.0).cmp(&graded_lex_key(b.0))).map(|(_, c)| c)
    }

    /// Greatest common divisor of the coefficients (non-negative).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        IntPolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect() }
    }

    /// Divides every coefficient by `k`, which must divide the content.
    pub fn div_scalar(&self, k: &BigInt) -> Self {
        IntPolynomial { nvars: self.nvars, terms: self.terms.iter().map(|(m, c)| (m.clone(), c / k)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut terms = self.terms.clone();
        for (m, c) in &other.terms {
            *terms.entry(m.clone()).or_default() += c;
        }
        terms.retain(|_, c| !c.is_zero());
        IntPolynomial { nvars: self.nvars, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut terms: BTreeMap<Monomial, BigInt> = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let e = m1.0.iter().zip(&m2.0).map(|(a, b)| a + b).collect();
                *terms.entry(Monomial(e)).or_default() += c1 * c2;
            }
        }
        terms.retain(|_, c| !c.is_zero());
        IntPolynomial { nvars: self.nvars, terms }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.nvars, 1);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Partial derivative with respect to variable `var` (zero-based).
    pub fn derivative(&self, var: usize) -> Self {
        let terms = self.terms.iter().filter(|(m, _)| m.0[var] > 0).map(|(m, c)| {
            let mut e = m.0.clone();
            let k = e[var];
            e[var] -= 1;
            (Monomial(e), c * BigInt::from(k))
        });
        Self::from_terms(self.nvars, terms)
    }

    /// Exact value at a rational point.
    pub fn evaluate(&self, point: &[BigRat]) -> Result<BigRat, PolyError> {
        if point.len() != self.nvars {
            return Err(PolyError::DimensionMismatch { expected: self.nvars, got: point.len() });
        }
        let mut total = BigRat::zero();
        for (m, c) in &self.terms {
            let mut t = BigRat::from_integer(c.clone());
            for (x, &e) in point.iter().zip(&m.0) {
                if e > 0 {
                    t *= num_traits::pow(x.clone(), e as usize);
                }
            }
            total += t;
        }
        Ok(total)
    }

    /// `C = d·K·R^(d−1)·Σ|c|` with `d = max(deg, 1)`, so that
    /// `|P(α) − P(β)| ≤ C·max_k |α_k − β_k|` whenever all coordinates are at most `R` in size.
    pub fn lipschitz_constant(&self, radius: &BigRat) -> Result<BigRat, PolyError> {
        if *radius < BigRat::one() {
            return Err(PolyError::RadiusTooSmall);
        }
        let d = self.degree().max(1);
        let abs_sum: BigInt = self.terms.values().map(|c| c.abs()).sum();
        let factor = BigInt::from(d) * BigInt::from(self.nvars);
        Ok(BigRat::from_integer(factor * abs_sum) * num_traits::pow(radius.clone(), (d - 1) as usize))
    }

    /// Projective closure: appends a variable raising every term to the total degree.
    pub fn homogenize(&self) -> Result<HomogPolynomial, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroPolynomial("homogenization"));
        }
        let d = self.degree();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.0.clone();
            e.push(d - m.degree());
            (Monomial(e), c.clone())
        });
        Ok(HomogPolynomial { poly: Self::from_terms(self.nvars + 1, terms), degree: d })
    }

    /// Substitutes `x_var = value` for an integer value, keeping the variable count.
    pub fn substitute_int(&self, var: usize, value: &BigInt) -> Self {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.0.clone();
            let k = std::mem::replace(&mut e[var], 0);
            (Monomial(e), c * num_traits::pow(value.clone(), k as usize))
        });
        Self::from_terms(self.nvars, terms)
    }

    /// Exact quotient `self / divisor` when it exists in `Z[x]`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (lead_m, lead_c) = divisor.colex_leading().ok()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        while let Some((m, c)) = rem.terms.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            let mut e = Vec::with_capacity(self.nvars);
            for (a, b) in m.0.iter().zip(&lead_m.0) {
                if a < b {
                    return None;
                }
                e.push(a - b);
            }
            let (q, r) = c.div_rem(&lead_c);
            if !r.is_zero() {
                return None;
            }
            let t = Self::from_terms(self.nvars, [(Monomial(e), q)]);
            rem = rem.sub(&t.mul(divisor));
            quot = quot.add(&t);
        }
        Some(quot)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut ordered: Vec<(&Monomial, &BigInt)> = self.terms.iter().collect();
        ordered.sort_by(|a, b| graded_lex_key(b.0).cmp(&graded_lex_key(a.0)));
        for (i, (m, c)) in ordered.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let vars: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(k, &e)| if e == 1 { format!("x{}", k + 1) } else { format!("x{}^{}", k + 1, e) })
                    .collect();
            if vars.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{mag}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

/// Sort key for display: total degree first, then exponents lexicographically.
fn graded_lex_key(m: &Monomial) -> (u32, &[u32]) {
    (m.degree(), &m.0)
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Homogeneous polynomial: every term has total degree exactly `degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogPolynomial {
    poly: IntPolynomial,
    degree: u32,
}

impl HomogPolynomial {
    pub fn new(poly: IntPolynomial) -> Option<Self> {
        let degree = poly.degree();
        if poly.is_zero() || poly.terms.keys().any(|m| m.degree() != degree) {
            return None;
        }
        Some(HomogPolynomial { poly, degree })
    }

    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Sets the last variable to 1.
    pub fn dehomogenize(&self) -> IntPolynomial {
        let n = self.poly.nvars - 1;
        IntPolynomial::from_terms(n, self.poly.terms.iter().map(|(m, c)| (Monomial(m.0[..n].to_vec()), c.clone())))
    }
}

impl fmt::Display for HomogPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.poly.fmt(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str, k: usize) -> IntPolynomial {
        IntPolynomial::parse(s, Some(k)).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRat {
        BigRat::new(a.into(), b.into())
    }

    #[test]
    fn colex_leading_terms() {
        let (m, c) = p("3*x1^2*x2 + 5*x1*x2^2", 2).colex_leading().unwrap();
        assert_eq!((m.0, c), (vec![1, 2], BigInt::from(5)));
        let (m, c) = p("x1 - x2", 2).colex_leading().unwrap();
        assert_eq!((m.0, c), (vec![0, 1], BigInt::from(-1)));
        let (m, c) = p("7", 3).colex_leading().unwrap();
        assert_eq!((m.0, c), (vec![0, 0, 0], BigInt::from(7)));
        assert!(IntPolynomial::zero(2).colex_leading().is_err());
    }

    #[test]
    fn evaluation() {
        assert_eq!(p("x1*x2 - 1", 2).evaluate(&[q(1, 2), q(2, 1)]).unwrap(), q(0, 1));
        assert_eq!(p("x1 - 1", 1).evaluate(&[q(7, 8)]).unwrap(), q(-1, 8));
        assert_eq!(p("x1^2 - 2", 1).evaluate(&[q(3, 2)]).unwrap(), q(1, 4));
        assert_eq!(p("x1", 2).evaluate(&[q(1, 1)]), Err(PolyError::DimensionMismatch { expected: 2, got: 1 }));
    }

    #[test]
    fn lipschitz_constants() {
        assert_eq!(p("x1*x2 - 1", 2).lipschitz_constant(&q(1, 1)).unwrap(), q(8, 1));
        assert_eq!(p("x1", 1).lipschitz_constant(&q(1, 1)).unwrap(), q(1, 1));
        assert_eq!(p("5", 1).lipschitz_constant(&q(1, 1)).unwrap(), q(5, 1));
        assert_eq!(p("x1", 1).lipschitz_constant(&q(1, 2)), Err(PolyError::RadiusTooSmall));
    }

    #[test]
    fn homogenization() {
        let h = p("x2^2 - x1^3 - x1^2", 2).homogenize().unwrap();
        assert_eq!(h.poly(), &p("x2^2*x3 - x1^3 - x1^2*x3", 3));
        assert_eq!(p("x1 + 1", 2).homogenize().unwrap().poly(), &p("x1 + x3", 3));
        assert_eq!(p("x1^4 + x2^4 - 1", 2).homogenize().unwrap().poly(), &p("x1^4 + x2^4 - x3^4", 3));
        assert_eq!(h.dehomogenize(), p("x2^2 - x1^3 - x1^2", 2));
    }

    #[test]
    fn exact_division() {
        let a = p("x1^2 - x2^2", 2);
        assert_eq!(a.div_exact(&p("x1 - x2", 2)).unwrap(), p("x1 + x2", 2));
        assert!(a.div_exact(&p("x1 - 2*x2", 2)).is_none());
    }

    #[test]
    fn display_round_trips() {
        for s in ["3*x1^2*x2 + 5*x1*x2^2", "x1 - x2 + 7", "-x1^4 + 2"] {
            let poly = p(s, 2);
            assert_eq!(p(&poly.to_string(), 2), poly);
        }
    }
}
