//! Singular points of a projective plane curve by resultant elimination, and the local shape
//! of the curve at a point.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::nf::{kdegree, Elem, KPoly, NumberField};
use super::{CurveError, CurveOptions, SingularPoint};
use crate::arith::BigRat;
use crate::poly::univariate::{QPoly, ZPoly};
use crate::poly::{factor_zpoly, HomogPolynomial, IntPolynomial};

/// Singular points found plus eliminant factors left unexamined.
pub(crate) struct RawLocus {
    pub points: Vec<SingularPoint>,
    pub unresolved: Vec<String>,
}

/// Bivariate integer polynomial in `(u, y)` regrouped by powers of `y`.
fn by_y(p: &IntPolynomial) -> Vec<ZPoly> {
    let dy = p.degree_in(1) as usize;
    let du = p.degree_in(0) as usize;
    let mut rows = vec![vec![BigInt::zero(); du + 1]; dy + 1];
    for (m, c) in p.terms() {
        rows[m.0[1] as usize][m.0[0] as usize] = c.clone();
    }
    let mut out: Vec<ZPoly> = rows.into_iter().map(ZPoly::new).collect();
    while out.last().is_some_and(|c| c.is_zero()) {
        out.pop();
    }
    out
}

/// Determinant of a square matrix over `Z[u]` by fraction-free elimination.
fn bareiss_det(mut m: Vec<Vec<ZPoly>>) -> ZPoly {
    let n = m.len();
    if n == 0 {
        return ZPoly::one();
    }
    let mut negate = false;
    let mut prev = ZPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return ZPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.div_exact(&prev).expect("Bareiss quotient is exact");
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

/// `Res_y(a, b)` for polynomials given by their `y`-coefficients in `Z[u]`.
pub(crate) fn resultant_y(a: &[ZPoly], b: &[ZPoly]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return ZPoly::zero();
    }
    let (da, db) = (a.len() - 1, b.len() - 1);
    let size = da + db;
    if size == 0 {
        return ZPoly::one();
    }
    let mut rows = Vec::with_capacity(size);
    for (src, deg, count) in [(a, da, db), (b, db, da)] {
        for shift in 0..count {
            let mut row = vec![ZPoly::zero(); size];
            for (i, c) in src.iter().rev().enumerate() {
                row[shift + i] = c.clone();
            }
            debug_assert_eq!(src.len(), deg + 1);
            rows.push(row);
        }
    }
    bareiss_det(rows)
}

/// `F(u + c·y, y)`.
fn shear(f: &IntPolynomial, c: i64) -> IntPolynomial {
    let u = IntPolynomial::var(2, 0);
    let y = IntPolynomial::var(2, 1);
    let x = u.add(&y.scale(&BigInt::from(c)));
    let mut out = IntPolynomial::zero(2);
    for (m, coef) in f.terms() {
        let t = x.pow(m.0[0]).mul(&y.pow(m.0[1])).scale(coef);
        out = out.add(&t);
    }
    out
}

fn top_form_at(f: &IntPolynomial, c: i64) -> BigInt {
    let d = f.degree();
    f.terms()
        .iter()
        .filter(|(m, _)| m.degree() == d)
        .map(|(m, coef)| coef * num_traits::pow(BigInt::from(c), m.0[0] as usize))
        .sum()
}

fn shear_candidates(max: usize) -> impl Iterator<Item = i64> {
    (0..max as i64).map(|i| if i % 2 == 1 { (i + 1) / 2 } else { -(i / 2) })
}

fn point_from(field: &NumberField, exact: [Elem; 3], at_infinity: bool, multiplicity: u32) -> SingularPoint {
    SingularPoint::new(field.clone(), exact, at_infinity, multiplicity)
}

enum AffineOutcome {
    Done(Vec<(NumberField, [Elem; 2])>, Vec<String>),
    Retry,
}

/// Affine singular points for one shear, or `Retry` when the shear stacks several points over
/// one `u` value.
fn affine_for_shear(f: &IntPolynomial, c: i64, cap: usize) -> AffineOutcome {
    let g = shear(f, c);
    let gy = g.derivative(1);
    let gu = g.derivative(0);
    let (cg, cgy, cgu) = (by_y(&g), by_y(&gy), by_y(&gu));
    let r1 = resultant_y(&cg, &cgy);
    let r2 = resultant_y(&cg, &cgu);
    let elim = if r2.is_zero() { r1 } else { r1.gcd(&r2) };
    if elim.is_zero() || elim.deg() == 0 {
        return AffineOutcome::Done(Vec::new(), Vec::new());
    }
    let (_, factors) = factor_zpoly(&elim);
    let mut found = Vec::new();
    let mut unresolved = Vec::new();
    for (m, _) in factors {
        if m.deg() > cap {
            unresolved.push(format!("affine points with x - ({c})*y a root of {m}"));
            continue;
        }
        let k = NumberField::new(&m);
        let theta = k.generator();
        let at = |p: &[ZPoly]| -> KPoly { k.ktrim(p.iter().map(|c| k.eval_z(c, &theta)).collect()) };
        let mut h = k.kgcd(&at(&cg), &at(&cgy));
        if !cgu.is_empty() {
            h = k.kgcd(&h, &at(&cgu));
        }
        match kdegree(&h) {
            None | Some(0) => continue,
            Some(_) => {}
        }
        let sq = k.ksquarefree_part(&h);
        if kdegree(&sq) != Some(1) {
            return AffineOutcome::Retry;
        }
        let y0 = sq[0].scale(&-BigRat::one());
        let x0 = theta.add(&y0.scale(&BigRat::from_integer(BigInt::from(c))));
        found.push((k.clone(), [k.reduce(&x0), k.reduce(&y0)]));
    }
    AffineOutcome::Done(found, unresolved)
}

fn partials(q: &IntPolynomial) -> [IntPolynomial; 4] {
    [q.clone(), q.derivative(0), q.derivative(1), q.derivative(2)]
}

/// Univariate restriction to `(x : 1 : 0)`.
fn on_line_at_infinity(p: &IntPolynomial) -> ZPoly {
    let r = p.substitute_int(1, &BigInt::one()).substitute_int(2, &BigInt::zero());
    let mut c = vec![BigInt::zero(); r.degree_in(0) as usize + 1];
    for (m, v) in r.terms() {
        c[m.0[0] as usize] += v;
    }
    ZPoly::new(c)
}

/// Every singular point of the curve `Q = 0`, without squarefreeness checks.
pub(crate) fn locate(q: &HomogPolynomial, opts: &CurveOptions) -> Result<RawLocus, CurveError> {
    let qp = q.poly();
    let mut points = Vec::new();
    let mut unresolved = Vec::new();

    // Affine chart z = 1: Euler's identity reduces the four conditions to F = F_x = F_y = 0.
    let f = q.dehomogenize();
    if f.degree() >= 2 {
        let mut done = false;
        for c in shear_candidates(opts.max_shears) {
            if top_form_at(&f, c).is_zero() {
                continue;
            }
            if let AffineOutcome::Done(found, unres) = affine_for_shear(&f, c, opts.field_degree_cap) {
                for (k, [x0, y0]) in found {
                    let exact = [x0, y0, QPoly::one()];
                    let r = local_form(&k, qp, 2, &exact)?.multiplicity;
                    points.push(point_from(&k, exact, false, r));
                }
                unresolved.extend(unres);
                done = true;
                break;
            }
        }
        if !done {
            unresolved.push("affine locus: no separating shear found".to_string());
        }
    }

    // Points (x : 1 : 0).
    let restricted: Vec<ZPoly> = partials(qp).iter().map(on_line_at_infinity).filter(|p| !p.is_zero()).collect();
    if restricted.is_empty() {
        return Err(CurveError::NotSquarefree);
    }
    let common = restricted.iter().skip(1).fold(restricted[0].clone(), |g, p| g.gcd(p));
    if common.deg() > 0 {
        let (_, factors) = factor_zpoly(&common);
        for (m, _) in factors {
            if m.deg() > opts.field_degree_cap {
                unresolved.push(format!("point (t : 1 : 0) with t a root of {m}"));
                continue;
            }
            let k = NumberField::new(&m);
            let exact = [k.generator(), QPoly::one(), QPoly::zero()];
            let r = local_form(&k, qp, 1, &exact)?.multiplicity;
            points.push(point_from(&k, exact, true, r));
        }
    }

    // The point (1 : 0 : 0).
    let k = NumberField::rational();
    let exact = [QPoly::one(), QPoly::zero(), QPoly::zero()];
    if partials(qp).iter().all(|p| k.is_zero(&k.eval_multi(p, &exact))) {
        let r = local_form(&k, qp, 0, &exact)?.multiplicity;
        points.push(point_from(&k, exact, true, r));
    }

    Ok(RawLocus { points, unresolved })
}

pub(crate) struct LocalForm {
    pub multiplicity: u32,
    pub ordinary: bool,
}

fn binomials(n: usize) -> Vec<Vec<BigInt>> {
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let mut row = vec![BigInt::one(); i + 1];
        for j in 1..i {
            row[j] = &rows[i - 1][j - 1] + &rows[i - 1][j];
        }
        rows.push(row);
    }
    rows
}

/// Translates `Q` to the point in the chart where coordinate `chart` equals 1 and returns the
/// multiplicity there together with the ordinariness of the tangent cone.
///
/// The point's `chart` coordinate must already be normalized to 1.
pub(crate) fn local_form(
    k: &NumberField,
    q: &IntPolynomial,
    chart: usize,
    point: &[Elem; 3],
) -> Result<LocalForm, CurveError> {
    let others: Vec<usize> = (0..3).filter(|&i| i != chart).collect();
    let (a, b) = (others[0], others[1]);
    let d = q.degree() as usize;
    let binom = binomials(d);
    let pows = |e: &Elem| -> Vec<Elem> {
        let mut v = vec![QPoly::one()];
        for i in 1..=d {
            let next = k.mul(&v[i - 1], e);
            v.push(next);
        }
        v
    };
    let (pa, pb) = (pows(&point[a]), pows(&point[b]));
    let mut shifted: BTreeMap<(u32, u32), Elem> = BTreeMap::new();
    for (m, c) in q.terms() {
        let (ea, eb) = (m.0[a] as usize, m.0[b] as usize);
        for i in 0..=ea {
            let ca = k.mul(&k.int(&(c * &binom[ea][i])), &pa[ea - i]);
            for j in 0..=eb {
                let term = k.mul(&ca.scale(&BigRat::from_integer(binom[eb][j].clone())), &pb[eb - j]);
                let slot = shifted.entry((i as u32, j as u32)).or_insert_with(QPoly::zero);
                *slot = slot.add(&term);
            }
        }
    }
    shifted.retain(|_, v| !k.is_zero(v));
    let r = shifted.keys().map(|(i, j)| i + j).min().ok_or(CurveError::NotOnCurve)?;
    if r == 0 {
        return Err(CurveError::NotOnCurve);
    }
    if r == 1 {
        return Err(CurveError::NotSingular);
    }
    // Initial form as a polynomial in the slope s/t; the root at infinity has multiplicity
    // r minus its degree.
    let initial: KPoly =
        k.ktrim((0..=r).map(|i| shifted.get(&(i, r - i)).cloned().unwrap_or_else(QPoly::zero)).collect());
    let top = kdegree(&initial).expect("initial form is nonzero") as u32;
    let distinct = kdegree(&k.kgcd(&initial, &k.kderiv(&initial))) == Some(0);
    Ok(LocalForm { multiplicity: r, ordinary: distinct && r - top <= 1 })
}

/// Whether the projective curve has a repeated component.
pub(crate) fn is_squarefree(q: &HomogPolynomial) -> Result<bool, CurveError> {
    let qp = q.poly();
    let z_power = qp.terms().keys().map(|m| m.0[2]).min().unwrap_or(0);
    if z_power >= 2 {
        return Ok(false);
    }
    let f = q.dehomogenize();
    if f.is_constant() {
        return Ok(q.degree() - f.degree() <= 1);
    }
    let fac = crate::poly::factor(&f)?;
    Ok(fac.factors.iter().all(|(_, m)| *m == 1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resultant_of_linear_factors() {
        // Res_y(y - u, y + u) = -2u up to sign convention: roots y = u and y = -u meet at u = 0.
        let a = vec![ZPoly::from_i64(&[0, -1]), ZPoly::one()];
        let b = vec![ZPoly::from_i64(&[0, 1]), ZPoly::one()];
        let r = resultant_y(&a, &b);
        assert_eq!(r.deg(), 1);
        assert!(r.coeff(0).is_zero());
        // Res_y(y^2 - u, 2y) vanishes exactly at u = 0.
        let c = vec![ZPoly::from_i64(&[0, -1]), ZPoly::zero(), ZPoly::one()];
        let dc = vec![ZPoly::zero(), ZPoly::from_i64(&[2])];
        let r = resultant_y(&c, &dc);
        assert_eq!(r.primitive(), ZPoly::from_i64(&[0, 1]));
    }
}
