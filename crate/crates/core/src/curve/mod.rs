//! Plane projective curves: singular points, ordinariness, genus bookkeeping, and the
//! degree-or-genus gate for two-variable polynomial relations.
//!
//! Algebraic singular points are carried as conjugacy classes: a point with coordinates in
//! `Q[t]/(m)` stands for all `deg m` of its conjugates.

mod locus;
mod nf;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::arith::BigRat;
use crate::poly::univariate::QPoly;
use crate::poly::{HomogPolynomial, IntPolynomial, PolyError};
use nf::{Elem, NumberField};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum CurveError {
    #[error("expected a polynomial in {expected} variables, got {got}")]
    WrongVariableCount { expected: usize, got: usize },
    #[error("the zero polynomial does not define a curve")]
    ZeroPolynomial,
    #[error("a nonzero constant defines the empty curve")]
    ConstantPolynomial,
    #[error("polynomial has a repeated factor")]
    NotSquarefree,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("point is a smooth point of the curve")]
    NotSingular,
    #[error("(0 : 0 : 0) is not a projective point")]
    NotAPoint,
    #[error("polynomial has degree {degree}, above the order {order}")]
    DegreeAboveOrder { degree: u32, order: u32 },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CurveOptions {
    /// Largest number-field degree used for a conjugacy class of singular points.
    pub field_degree_cap: usize,
    /// Number of shears `x ↦ x + c·y` tried before giving up on separating affine points.
    pub max_shears: usize,
}

impl Default for CurveOptions {
    fn default() -> Self {
        CurveOptions { field_degree_cap: 24, max_shears: 16 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Ordinariness {
    Ordinary,
    NonOrdinary,
    Undetermined,
}

/// A singular point, or a whole class of conjugate ones.
///
/// Coordinates are printed as polynomials in `t` where `t` is a root of `minimal_polynomial`;
/// rational points have no minimal polynomial and a single conjugate.
#[derive(Clone, Debug, Serialize)]
pub struct SingularPoint {
    pub coordinates: [String; 3],
    pub minimal_polynomial: Option<String>,
    pub conjugates: usize,
    pub multiplicity: u32,
    pub ordinary: Ordinariness,
    pub at_infinity: bool,
    #[serde(skip)]
    field: NumberField,
    #[serde(skip)]
    exact: [Elem; 3],
}

impl SingularPoint {
    pub(crate) fn new(field: NumberField, exact: [Elem; 3], at_infinity: bool, multiplicity: u32) -> Self {
        let rational = field.degree() == 1;
        let coordinates = exact.clone().map(|c| match field.as_rational(&c) {
            Some(r) if rational || c.degree().unwrap_or(0) == 0 => r.to_string(),
            _ => field.reduce(&c).to_string(),
        });
        let minimal_polynomial = (!rational).then(|| field.modulus().to_primitive_z().to_string());
        SingularPoint {
            coordinates,
            minimal_polynomial,
            conjugates: field.degree(),
            multiplicity,
            ordinary: Ordinariness::Undetermined,
            at_infinity,
            field,
            exact,
        }
    }

    /// A rational candidate point, to be examined by [`classify_ordinary`].
    pub fn rational(coords: [BigRat; 3]) -> Self {
        let k = NumberField::rational();
        let at_infinity = num_traits::Zero::is_zero(&coords[2]);
        let exact = coords.map(QPoly::constant);
        Self::new(k, exact, at_infinity, 0)
    }

    /// Exact coordinates when the point is rational.
    pub fn rational_coordinates(&self) -> Option<[BigRat; 3]> {
        if self.field.degree() != 1 {
            return None;
        }
        let c = self.exact.clone().map(|e| self.field.as_rational(&e));
        match c {
            [Some(a), Some(b), Some(z)] => Some([a, b, z]),
            _ => None,
        }
    }

    /// Exact substitution check: `Q` and its three partials vanish at the point.
    pub fn verify(&self, q: &HomogPolynomial) -> bool {
        let p = q.poly();
        [p.clone(), p.derivative(0), p.derivative(1), p.derivative(2)]
            .iter()
            .all(|f| self.field.is_zero(&self.field.eval_multi(f, &self.exact)))
    }

    /// Genus drop `conjugates · r(r−1)/2` charged to this class.
    pub fn genus_drop(&self) -> u64 {
        let r = self.multiplicity as u64;
        self.conjugates as u64 * (r * r.saturating_sub(1) / 2)
    }
}

impl fmt::Display for SingularPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} : {} : {})", self.coordinates[0], self.coordinates[1], self.coordinates[2])?;
        if let Some(m) = &self.minimal_polynomial {
            write!(f, " with {m} = 0 ({} conjugates)", self.conjugates)?;
        }
        write!(f, ", multiplicity {}", self.multiplicity)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularLocus {
    pub points: Vec<SingularPoint>,
    /// Candidate classes that were not examined, described in words.
    pub unresolved: Vec<String>,
}

fn check_projective(q: &HomogPolynomial) -> Result<(), CurveError> {
    if q.poly().nvars() != 3 {
        return Err(CurveError::WrongVariableCount { expected: 3, got: q.poly().nvars() });
    }
    Ok(())
}

/// Common zeros of `Q` and its partials, with multiplicities.
pub fn singular_locus(q: &HomogPolynomial) -> Result<SingularLocus, CurveError> {
    singular_locus_with(q, &CurveOptions::default())
}

pub fn singular_locus_with(q: &HomogPolynomial, opts: &CurveOptions) -> Result<SingularLocus, CurveError> {
    check_projective(q)?;
    if !locus::is_squarefree(q)? {
        return Err(CurveError::NotSquarefree);
    }
    let raw = locus::locate(q, opts)?;
    Ok(SingularLocus { points: raw.points, unresolved: raw.unresolved })
}

/// Recomputes the multiplicity and decides whether the tangent cone is `r` distinct lines.
pub fn classify_ordinary(q: &HomogPolynomial, pt: &SingularPoint) -> Result<SingularPoint, CurveError> {
    classify_ordinary_with(q, pt, &CurveOptions::default())
}

pub fn classify_ordinary_with(
    q: &HomogPolynomial,
    pt: &SingularPoint,
    opts: &CurveOptions,
) -> Result<SingularPoint, CurveError> {
    check_projective(q)?;
    let k = &pt.field;
    let chart = (0..3).rev().find(|&i| !k.is_zero(&pt.exact[i])).ok_or(CurveError::NotAPoint)?;
    let inv = k.inv(&pt.exact[chart]);
    let normalized = pt.exact.clone().map(|c| k.mul(&c, &inv));
    let mut out = pt.clone();
    if k.degree() > opts.field_degree_cap {
        if !k.is_zero(&k.eval_multi(q.poly(), &normalized)) {
            return Err(CurveError::NotOnCurve);
        }
        out.ordinary = Ordinariness::Undetermined;
        return Ok(out);
    }
    let local = locus::local_form(k, q.poly(), chart, &normalized)?;
    out.multiplicity = local.multiplicity;
    out.ordinary = if local.ordinary { Ordinariness::Ordinary } else { Ordinariness::NonOrdinary };
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Genus {
    Exact { value: u64 },
    Bounds { lo: u64, hi: u64 },
}

impl Genus {
    pub fn lo(&self) -> u64 {
        match *self {
            Genus::Exact { value } => value,
            Genus::Bounds { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> u64 {
        match *self {
            Genus::Exact { value } => value,
            Genus::Bounds { hi, .. } => hi,
        }
    }

    pub fn exact(&self) -> Option<u64> {
        match *self {
            Genus::Exact { value } => Some(value),
            Genus::Bounds { lo, hi } if lo == hi => Some(lo),
            Genus::Bounds { .. } => None,
        }
    }
}

impl fmt::Display for Genus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Genus::Exact { value } => write!(f, "{value}"),
            Genus::Bounds { lo, hi } => write!(f, "[{lo}, {hi}]"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CurveFlag {
    Reducible,
    RepeatedFactor,
    NonOrdinaryPresent,
    UnresolvedSingularities,
    /// Singularity drops exceed the arithmetic genus: the factor splits over an extension.
    GeometricallyReducible,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComponentAnalysis {
    pub factor: String,
    pub multiplicity: u32,
    pub degree: u32,
    pub smooth: bool,
    pub singular_points: Vec<SingularPoint>,
    pub unresolved: Vec<String>,
    pub genus: Genus,
    pub flags: Vec<CurveFlag>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurveAnalysis {
    pub polynomial: String,
    pub degree: u32,
    pub smooth: bool,
    pub singular_points: Vec<SingularPoint>,
    /// Set only for an irreducible, reduced curve.
    pub genus: Option<Genus>,
    pub components: Vec<ComponentAnalysis>,
    pub flags: Vec<CurveFlag>,
}

/// `(D−1)(D−2)/2`.
pub fn arithmetic_genus(degree: u32) -> u64 {
    let d = degree as u64;
    if d < 2 {
        0
    } else {
        (d - 1) * (d - 2) / 2
    }
}

fn analyze_component(
    f: &IntPolynomial,
    multiplicity: u32,
    opts: &CurveOptions,
) -> Result<ComponentAnalysis, CurveError> {
    let q = f.homogenize()?;
    let degree = q.degree();
    let raw = locus::locate(&q, opts)?;
    let mut points = Vec::with_capacity(raw.points.len());
    for p in &raw.points {
        points.push(classify_ordinary_with(&q, p, opts)?);
    }
    let formula = arithmetic_genus(degree);
    let drops: u64 = points.iter().map(SingularPoint::genus_drop).sum();
    let mut flags = Vec::new();
    if multiplicity > 1 {
        flags.push(CurveFlag::RepeatedFactor);
    }
    let all_ordinary = points.iter().all(|p| p.ordinary == Ordinariness::Ordinary);
    if !all_ordinary {
        flags.push(CurveFlag::NonOrdinaryPresent);
    }
    if !raw.unresolved.is_empty() {
        flags.push(CurveFlag::UnresolvedSingularities);
    }
    if drops > formula {
        flags.push(CurveFlag::GeometricallyReducible);
    }
    let upper = formula.saturating_sub(drops);
    let genus = if all_ordinary && raw.unresolved.is_empty() {
        Genus::Exact { value: upper }
    } else {
        Genus::Bounds { lo: 0, hi: upper }
    };
    Ok(ComponentAnalysis {
        factor: f.to_string(),
        multiplicity,
        degree,
        smooth: points.is_empty() && raw.unresolved.is_empty(),
        singular_points: points,
        unresolved: raw.unresolved,
        genus,
        flags,
    })
}

/// Genus of the affine curve `P(x₁, x₂) = 0` through its projective closure, per irreducible
/// factor.
pub fn genus(p: &IntPolynomial) -> Result<CurveAnalysis, CurveError> {
    genus_with(p, &CurveOptions::default())
}

pub fn genus_with(p: &IntPolynomial, opts: &CurveOptions) -> Result<CurveAnalysis, CurveError> {
    if p.nvars() != 2 {
        return Err(CurveError::WrongVariableCount { expected: 2, got: p.nvars() });
    }
    if p.is_zero() {
        return Err(CurveError::ZeroPolynomial);
    }
    if p.is_constant() {
        return Err(CurveError::ConstantPolynomial);
    }
    let fac = crate::poly::factor(p)?;
    let components = fac.factors.iter().map(|(f, m)| analyze_component(f, *m, opts)).collect::<Result<Vec<_>, _>>()?;
    let mut flags: Vec<CurveFlag> = components.iter().flat_map(|c| c.flags.iter().copied()).collect();
    if components.len() > 1 {
        flags.push(CurveFlag::Reducible);
    }
    flags.sort();
    flags.dedup();
    let single = components.len() == 1 && components[0].multiplicity == 1;
    Ok(CurveAnalysis {
        polynomial: p.to_string(),
        degree: p.degree(),
        smooth: single && components[0].smooth,
        singular_points: components.iter().flat_map(|c| c.singular_points.iter().cloned()).collect(),
        genus: single.then(|| components[0].genus),
        components,
        flags,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GateVerdict {
    DegreeGatePass,
    GenusGatePass,
    GateFail,
    GateUnknown,
}

impl GateVerdict {
    pub fn passed(self) -> bool {
        matches!(self, GateVerdict::DegreeGatePass | GateVerdict::GenusGatePass)
    }
}

impl fmt::Display for GateVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GateVerdict::DegreeGatePass => "DEGREE_GATE_PASS",
            GateVerdict::GenusGatePass => "GENUS_GATE_PASS",
            GateVerdict::GateFail => "GATE_FAIL",
            GateVerdict::GateUnknown => "GATE_UNKNOWN",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GateReport {
    pub polynomial: String,
    pub order: u32,
    pub degree: u32,
    pub verdict: GateVerdict,
    pub reason: Option<String>,
    pub analysis: Option<CurveAnalysis>,
}

/// Decides whether `P` has degree at most 3 or every irreducible component of `P = 0` has
/// degree at most 3 or genus at least 2.
pub fn nondegenerate_gate(p: &IntPolynomial, order: u32) -> Result<GateReport, CurveError> {
    nondegenerate_gate_with(p, order, &CurveOptions::default())
}

pub fn nondegenerate_gate_with(p: &IntPolynomial, order: u32, opts: &CurveOptions) -> Result<GateReport, CurveError> {
    if p.nvars() != 2 {
        return Err(CurveError::WrongVariableCount { expected: 2, got: p.nvars() });
    }
    if p.is_zero() {
        return Err(CurveError::ZeroPolynomial);
    }
    let degree = p.degree();
    if degree > order {
        return Err(CurveError::DegreeAboveOrder { degree, order });
    }
    let report = |verdict, reason: Option<String>, analysis| GateReport {
        polynomial: p.to_string(),
        order,
        degree,
        verdict,
        reason,
        analysis,
    };
    if degree <= 3 {
        return Ok(report(GateVerdict::DegreeGatePass, None, None));
    }
    let analysis = genus_with(p, opts)?;
    let mut fail = None;
    let mut unknown = None;
    for c in &analysis.components {
        if c.degree <= 3 || (c.genus.lo() >= 2 && !c.flags.contains(&CurveFlag::GeometricallyReducible)) {
            continue;
        }
        if c.flags.contains(&CurveFlag::GeometricallyReducible) {
            unknown.get_or_insert_with(|| format!("component {} splits over an extension; genus undefined", c.factor));
        } else if c.genus.hi() <= 1 {
            fail.get_or_insert_with(|| format!("component {} of degree {} has genus {}", c.factor, c.degree, c.genus));
        } else {
            unknown.get_or_insert_with(|| format!("component {} has genus in {}", c.factor, c.genus));
        }
    }
    let (verdict, reason) = match (fail, unknown) {
        (Some(r), _) => (GateVerdict::GateFail, Some(r)),
        (None, Some(r)) => (GateVerdict::GateUnknown, Some(r)),
        (None, None) => (GateVerdict::GenusGatePass, None),
    };
    Ok(report(verdict, reason, Some(analysis)))
}
