use irrcert_core::curve::{
    arithmetic_genus, genus, nondegenerate_gate, singular_locus, CurveFlag, GateVerdict, Genus, Ordinariness,
};
use irrcert_core::poly::{HomogPolynomial, IntPolynomial, Monomial};
use irrcert_core::BigRat;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn p2(text: &str) -> IntPolynomial {
    IntPolynomial::parse(text, Some(2)).unwrap()
}

fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(n.into(), d.into())
}

#[test]
fn smooth_golden_table() {
    let cases = [
        ("x1 + 2*x2 - 1", 0),
        ("x1^2 + x2^2 - 1", 0),
        ("x2^2 - x1^3 - x1 - 1", 1),
        ("x1^4 + x2^4 - 1", 3),
        ("x1^5 + x2^5 - 1", 6),
    ];
    for (text, g) in cases {
        let a = genus(&p2(text)).unwrap();
        assert!(a.smooth, "{text}");
        assert_eq!(a.genus, Some(Genus::Exact { value: g }), "{text}");
        assert_eq!(arithmetic_genus(a.degree), g);
    }
}

#[test]
fn nodal_cubic_matches_its_parametrization() {
    let p = p2("x2^2 - x1^2 - x1^3");
    // t ↦ (t²−1, t(t²−1)) lies on the curve, so the curve is rational.
    for (n, d) in [(0, 1), (1, 2), (-3, 7), (5, 3), (11, 4)] {
        let t = rat(n, d);
        let x = &t * &t - BigRat::one();
        let y = &t * &x;
        assert!(p.evaluate(&[x, y]).unwrap().is_zero());
    }
    let a = genus(&p).unwrap();
    assert_eq!(a.genus, Some(Genus::Exact { value: 0 }));
    assert_eq!(a.singular_points.len(), 1);
    let node = &a.singular_points[0];
    assert_eq!(node.coordinates, ["0".to_string(), "0".into(), "1".into()]);
    assert_eq!(node.multiplicity, 2);
    assert_eq!(node.ordinary, Ordinariness::Ordinary);
}

#[test]
fn ordinary_triple_point_on_rational_quartic() {
    // (x²+y²)² = x(x²−3y²): in polar form r = cos 3θ.
    let p = p2("(x1^2 + x2^2)^2 - x1^3 + 3*x1*x2^2");
    for (n, d) in [(0, 1), (1, 3), (-2, 5), (7, 2)] {
        let t = rat(n, d);
        let den = BigRat::one() + &t * &t;
        let c = (BigRat::one() - &t * &t) / &den;
        let s = (BigRat::from_integer(2.into()) * &t) / &den;
        let r = BigRat::from_integer(4.into()) * &c * &c * &c - BigRat::from_integer(3.into()) * &c;
        assert!(p.evaluate(&[&r * &c, &r * &s]).unwrap().is_zero());
    }
    let a = genus(&p).unwrap();
    assert_eq!(a.genus, Some(Genus::Exact { value: 0 }));
    let triple = a.singular_points.iter().find(|s| s.multiplicity == 3).unwrap();
    assert_eq!(triple.ordinary, Ordinariness::Ordinary);
    assert_eq!(nondegenerate_gate(&p, 4).unwrap().verdict, GateVerdict::GateFail);
}

#[test]
fn cuspidal_cubic_reports_an_interval() {
    let a = genus(&p2("x2^2 - x1^3")).unwrap();
    assert!(a.flags.contains(&CurveFlag::NonOrdinaryPresent));
    let g = a.genus.unwrap();
    assert_eq!(g.lo(), 0);
    assert!(matches!(g, Genus::Bounds { .. }));
}

#[test]
fn reducible_input_is_split() {
    let a = genus(&p2("(x1 - x2)*(x1^4 + x2^4 - 1)")).unwrap();
    assert!(a.flags.contains(&CurveFlag::Reducible));
    assert_eq!(a.components.len(), 2);
    assert!(a.genus.is_none());
    let quartic = a.components.iter().find(|c| c.degree == 4).unwrap();
    assert_eq!(quartic.genus, Genus::Exact { value: 3 });
    assert_eq!(nondegenerate_gate(&p2("(x1 - x2)*(x1^4 + x2^4 - 1)"), 5).unwrap().verdict, GateVerdict::GenusGatePass);
    // Two conjugate lines x² + y² = 0 meet in a rational point.
    let conj = genus(&p2("x1^2 + x2^2")).unwrap();
    assert!(conj.flags.contains(&CurveFlag::GeometricallyReducible));
}

#[test]
fn gate_golden_examples() {
    assert_eq!(nondegenerate_gate(&p2("x1^2 + x2^2 - 1"), 5).unwrap().verdict, GateVerdict::DegreeGatePass);
    assert_eq!(nondegenerate_gate(&p2("x1^5 + x2^5 - 1"), 5).unwrap().verdict, GateVerdict::GenusGatePass);
    assert_eq!(nondegenerate_gate(&p2("x2^2 - x1^2 - x1^3"), 4).unwrap().verdict, GateVerdict::DegreeGatePass);
    // y² = x⁴ − 1 has genus 1: the point at infinity is a tacnode, not ordinary.
    let ell = nondegenerate_gate(&p2("x2^2 - x1^4 + 1"), 4).unwrap();
    assert!(matches!(ell.verdict, GateVerdict::GateUnknown | GateVerdict::GateFail));
}

fn random_poly(degree: u32, coeffs: &[i64]) -> IntPolynomial {
    let mut terms = Vec::new();
    let mut it = coeffs.iter().cycle();
    for total in 0..=degree {
        for i in 0..=total {
            let c = *it.next().unwrap();
            terms.push((Monomial(vec![i, total - i]), BigInt::from(c)));
        }
    }
    terms.push((Monomial(vec![degree, 0]), BigInt::one()));
    terms.push((Monomial(vec![0, degree]), BigInt::one()));
    IntPolynomial::from_terms(2, terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn locus_points_verify_and_genus_is_bounded(degree in 2u32..=5, coeffs in prop::collection::vec(-2i64..=2, 21)) {
        let p = random_poly(degree, &coeffs);
        let a = genus(&p).unwrap();
        for c in &a.components {
            let q: HomogPolynomial = IntPolynomial::parse(&c.factor, Some(2)).unwrap().homogenize().unwrap();
            let loc = singular_locus(&q).unwrap();
            for pt in &loc.points {
                prop_assert!(pt.verify(&q));
                prop_assert!(pt.multiplicity >= 2);
            }
            let formula = arithmetic_genus(c.degree);
            prop_assert!(c.genus.lo() <= c.genus.hi() && c.genus.hi() <= formula);
            if loc.points.is_empty() && loc.unresolved.is_empty() {
                prop_assert!(c.smooth);
                prop_assert_eq!(c.genus, Genus::Exact { value: formula });
            }
        }
    }
}
