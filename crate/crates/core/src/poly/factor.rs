//! Factorization over `Z` of univariate polynomials (Zassenhaus: factor modulo a small prime,
//! Hensel-lift, recombine) and of bivariate ones (Kronecker substitution, then recombine the
//! univariate factors by exact division).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::univariate::ZPoly;
use super::{IntPolynomial, Monomial, PolyError};
use crate::arith::primes;

/// `P = content · ∏ factor^multiplicity`, each factor primitive, irreducible over `Q`, with a
/// positive coefficient on its first printed (graded-lex largest) term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub content: BigInt,
    pub factors: Vec<(IntPolynomial, u32)>,
}

impl Factorization {
    /// Factors repeated according to multiplicity.
    pub fn expanded(&self) -> Vec<IntPolynomial> {
        self.factors.iter().flat_map(|(f, m)| std::iter::repeat_n(f.clone(), *m as usize)).collect()
    }

    /// Multiplies everything back together.
    pub fn product(&self, nvars: usize) -> IntPolynomial {
        self.expanded().iter().fold(IntPolynomial::constant(nvars, self.content.clone()), |acc, f| acc.mul(f))
    }
}

/// Irreducible factorization of a polynomial in one or two variables.
pub fn factor(p: &IntPolynomial) -> Result<Factorization, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial("factorization"));
    }
    match p.nvars() {
        1 => Ok(factor_via_univariate(p, 1)),
        2 => Ok(factor_bivariate(p)),
        n => Err(PolyError::WrongVariableCount { expected: 2, got: n }),
    }
}

/// Alias of [`factor`] under the name used by the curve analysis.
pub fn irreducible_factors(p: &IntPolynomial) -> Result<Factorization, PolyError> {
    factor(p)
}

fn normalize_sign(f: IntPolynomial, content: &mut BigInt) -> IntPolynomial {
    if f.display_leading_coeff().expect("nonzero factor").is_negative() {
        *content = -content.clone();
        f.neg()
    } else {
        f
    }
}

fn to_zpoly(p: &IntPolynomial) -> ZPoly {
    let mut v = vec![BigInt::zero(); p.degree_in(0) as usize + 1];
    for (m, c) in p.terms() {
        v[m.0[0] as usize] = c.clone();
    }
    ZPoly::new(v)
}

fn from_zpoly(f: &ZPoly) -> IntPolynomial {
    IntPolynomial::from_terms(1, f.coeffs().iter().enumerate().map(|(i, c)| (Monomial(vec![i as u32]), c.clone())))
}

fn factor_via_univariate(p: &IntPolynomial, nvars: usize) -> Factorization {
    debug_assert_eq!(nvars, 1);
    let f = to_zpoly(p);
    let (content, parts) = factor_zpoly(&f);
    let mut content = content;
    let factors = parts.into_iter().map(|(g, m)| (normalize_sign(from_zpoly(&g), &mut content), m)).collect();
    let mut out = Factorization { content, factors };
    sort_factors(&mut out);
    out
}

fn sort_factors(f: &mut Factorization) {
    f.factors.sort_by_key(|a| (a.0.degree(), a.0.to_string()));
}

/// Complete factorization of a nonzero integer polynomial: `f = content · ∏ g^m` with each
/// `g` primitive, irreducible, positive leading coefficient.
pub fn factor_zpoly(f: &ZPoly) -> (BigInt, Vec<(ZPoly, u32)>) {
    assert!(!f.is_zero());
    let prim = f.primitive();
    let content = f.lc() / prim.lc();
    let mut out = Vec::new();
    // Powers of x first: they are invisible to the modular machinery's squarefree test.
    let low = prim.coeffs().iter().take_while(|c| c.is_zero()).count();
    if low > 0 {
        out.push((ZPoly::x(), low as u32));
    }
    let rest = ZPoly::new(prim.coeffs()[low..].to_vec());
    for (g, m) in rest.squarefree_decomposition() {
        for h in zassenhaus(&g) {
            out.push((h, m));
        }
    }
    out.sort_by(|a, b| (a.0.deg(), a.0.coeffs()).cmp(&(b.0.deg(), b.0.coeffs())));
    (content, out)
}

// ---------------------------------------------------------------------------------------
// Arithmetic modulo a small prime q, coefficients in [0, q).

type ModPoly = Vec<u64>;

fn mtrim(mut v: ModPoly) -> ModPoly {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn mod_pow(mut b: u64, mut e: u64, q: u64) -> u64 {
    let mut acc = 1 % q;
    b %= q;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % q;
        }
        b = b * b % q;
        e >>= 1;
    }
    acc
}

fn mod_inv(a: u64, q: u64) -> u64 {
    mod_pow(a, q - 2, q)
}

fn reduce(f: &ZPoly, q: u64) -> ModPoly {
    let qb = BigInt::from(q);
    mtrim(f.coeffs().iter().map(|c| c.mod_floor(&qb).to_u64().unwrap()).collect())
}

fn msub(a: &ModPoly, b: &ModPoly, q: u64) -> ModPoly {
    let n = a.len().max(b.len());
    mtrim((0..n).map(|i| (a.get(i).unwrap_or(&0) + q - b.get(i).unwrap_or(&0)) % q).collect())
}

fn mmul(a: &ModPoly, b: &ModPoly, q: u64) -> ModPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % q;
        }
    }
    mtrim(out)
}

fn mdivrem(a: &ModPoly, d: &ModPoly, q: u64) -> (ModPoly, ModPoly) {
    let dd = d.len() - 1;
    if a.len() < d.len() {
        return (Vec::new(), a.clone());
    }
    let inv = mod_inv(*d.last().unwrap(), q);
    let mut rem = a.clone();
    let mut quo = vec![0u64; a.len() - dd];
    for i in (0..quo.len()).rev() {
        let t = rem[i + dd] * inv % q;
        if t == 0 {
            continue;
        }
        for (j, &c) in d.iter().enumerate() {
            rem[i + j] = (rem[i + j] + q - t * c % q) % q;
        }
        quo[i] = t;
    }
    rem.truncate(dd);
    (mtrim(quo), mtrim(rem))
}

fn mmonic(a: &ModPoly, q: u64) -> ModPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => {
            let inv = mod_inv(l, q);
            a.iter().map(|c| c * inv % q).collect()
        }
    }
}

fn mgcd(a: &ModPoly, b: &ModPoly, q: u64) -> ModPoly {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !b.is_empty() {
        let r = mdivrem(&a, &b, q).1;
        a = b;
        b = r;
    }
    mmonic(&a, q)
}

/// `(g, s, t)` with `s·a + t·b = g` monic.
fn mxgcd(a: &ModPoly, b: &ModPoly, q: u64) -> (ModPoly, ModPoly, ModPoly) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (qt, r) = mdivrem(&r0, &r1, q);
        let s2 = msub(&s0, &mmul(&qt, &s1, q), q);
        let t2 = msub(&t0, &mmul(&qt, &t1, q), q);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    let inv = mod_inv(*r0.last().unwrap(), q);
    let sc = |v: &ModPoly| mtrim(v.iter().map(|c| c * inv % q).collect());
    (sc(&r0), sc(&s0), sc(&t0))
}

fn mderiv(a: &ModPoly, q: u64) -> ModPoly {
    mtrim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % q) * c % q).collect())
}

fn mpowmod(base: &ModPoly, mut e: u128, m: &ModPoly, q: u64) -> ModPoly {
    let mut acc = vec![1u64];
    let mut b = mdivrem(base, m, q).1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mdivrem(&mmul(&acc, &b, q), m, q).1;
        }
        b = mdivrem(&mmul(&b, &b, q), m, q).1;
        e >>= 1;
    }
    acc
}

/// Distinct-degree then equal-degree (Cantor–Zassenhaus) factorization of a monic
/// square-free polynomial modulo an odd prime.
fn factor_mod(f: &ModPoly, q: u64, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = vec![0u64, 1];
    let mut d = 0;
    while rest.len() > 1 {
        d += 1;
        if 2 * d > rest.len() - 1 {
            out.push(rest.clone());
            break;
        }
        h = mpowmod(&h, q as u128, &rest, q);
        let g = mgcd(&rest, &msub(&h, &vec![0, 1], q), q);
        if g.len() > 1 {
            out.extend(equal_degree(&g, d, q, rng));
            rest = mdivrem(&rest, &g, q).0;
            h = mdivrem(&h, &rest, q).1;
        }
    }
    out
}

fn equal_degree(f: &ModPoly, d: usize, q: u64, rng: &mut ChaCha8Rng) -> Vec<ModPoly> {
    let n = f.len() - 1;
    if n == d {
        return vec![f.clone()];
    }
    loop {
        let a: ModPoly = mtrim((0..n).map(|_| rng.gen_range(0..q)).collect());
        if a.len() < 2 {
            continue;
        }
        let g = mgcd(&a, f, q);
        let split = if g.len() > 1 {
            g
        } else {
            // a^((q^d − 1)/2) − 1; the exponent is computed by repeated powering to avoid overflow.
            let b = half_power(&a, d, f, q);
            mgcd(&msub(&b, &vec![1], q), f, q)
        };
        if split.len() > 1 && split.len() < f.len() {
            let other = mmonic(&mdivrem(f, &split, q).0, q);
            let mut out = equal_degree(&split, d, q, rng);
            out.extend(equal_degree(&other, d, q, rng));
            return out;
        }
    }
}

/// `a^((q^d − 1)/2) mod f`.
fn half_power(a: &ModPoly, d: usize, f: &ModPoly, q: u64) -> ModPoly {
    // (q^d − 1)/2 = ((q − 1)/2)·(1 + q + ... + q^(d−1)).
    let mut acc = vec![1u64];
    let mut pw = mdivrem(a, f, q).1;
    for _ in 0..d {
        acc = mdivrem(&mmul(&acc, &pw, q), f, q).1;
        pw = mpowmod(&pw, q as u128, f, q);
    }
    mpowmod(&acc, ((q - 1) / 2) as u128, f, q)
}

// ---------------------------------------------------------------------------------------
// Hensel lifting and recombination.

fn lift_poly(v: &ModPoly) -> ZPoly {
    ZPoly::new(v.iter().map(|&c| BigInt::from(c)).collect())
}

fn zmod(f: &ZPoly, m: &BigInt) -> ZPoly {
    ZPoly::new(f.coeffs().iter().map(|c| c.mod_floor(m)).collect())
}

fn symmetric(f: &ZPoly, m: &BigInt) -> ZPoly {
    let half = m / 2;
    ZPoly::new(
        f.coeffs()
            .iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

/// Lifts `f ≡ g·h (mod q)` (with `h` monic, `g` carrying the leading coefficient of `f`) to
/// a factorization modulo `q^k`.
fn hensel_lift(f: &ZPoly, g: &ModPoly, h: &ModPoly, q: u64, k: u32) -> (ZPoly, ZPoly) {
    let (_, s, t) = mxgcd(g, h, q);
    let qb = BigInt::from(q);
    let mut g_big = lift_poly(g);
    let mut h_big = lift_poly(h);
    let lc = f.lc();
    // Force the exact leading coefficient onto g.
    let mut gc = g_big.coeffs().to_vec();
    *gc.last_mut().unwrap() = lc;
    g_big = ZPoly::new(gc);
    let mut modulus = qb.clone();
    for _ in 1..k {
        let e = f.sub(&g_big.mul(&h_big));
        let e_over = ZPoly::new(e.coeffs().iter().map(|c| c / &modulus).collect());
        let e_mod = reduce(&e_over, q);
        // σ·g + τ·h ≡ e with deg σ < deg h.
        let es = mmul(&e_mod, &s, q);
        let (quot, sigma) = mdivrem(&es, h, q);
        let tau = mtrim({
            let a = mmul(&e_mod, &t, q);
            let b = mmul(&quot, g, q);
            let n = a.len().max(b.len());
            (0..n).map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % q).collect()
        });
        // e = (es)·g + (et)·h = σ g + (et + quot·g)·h.
        h_big = h_big.add(&lift_poly(&sigma).scale(&modulus));
        // deg τ < deg g holds automatically, so the leading coefficient of g is preserved.
        debug_assert!(tau.len() < g.len());
        g_big = g_big.add(&lift_poly(&tau).scale(&modulus));
        modulus *= &qb;
    }
    (zmod(&g_big, &modulus), zmod(&h_big, &modulus))
}

fn mignotte_bound(f: &ZPoly) -> BigInt {
    let norm2: BigInt = f.coeffs().iter().map(|c| c * c).sum();
    let norm = norm2.sqrt() + 1;
    (BigInt::one() << f.deg()) * norm * f.lc().abs() * 2 + 1
}

fn is_squarefree_mod(f: &ZPoly, q: u64) -> bool {
    let fm = reduce(f, q);
    if fm.len() != f.coeffs().len() {
        return false;
    }
    mgcd(&fm, &mderiv(&fm, q), q).len() == 1
}

/// Irreducible factors of a primitive square-free polynomial with positive leading coefficient.
fn zassenhaus(f: &ZPoly) -> Vec<ZPoly> {
    let n = f.deg();
    if n <= 1 {
        return vec![f.primitive()];
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    // Try a few good primes and keep the one giving the fewest modular factors.
    let mut best: Option<(u64, Vec<ModPoly>)> = None;
    let mut tried = 0;
    let mut q = 3u64;
    while tried < 5 && q < 100_000 {
        if is_squarefree_mod(f, q) {
            let monic = mmonic(&reduce(f, q), q);
            let fac = factor_mod(&monic, q, &mut rng);
            tried += 1;
            if best.as_ref().is_none_or(|(_, b)| fac.len() < b.len()) {
                best = Some((q, fac));
            }
            if best.as_ref().unwrap().1.len() == 1 {
                break;
            }
        }
        q = primes::next_prime(q + 1);
    }
    let (q, modular) = best.expect("a good prime exists");
    if modular.len() == 1 {
        return vec![f.clone()];
    }
    let bound = mignotte_bound(f);
    let qb = BigInt::from(q);
    let mut k = 1u32;
    let mut modulus = qb.clone();
    while modulus <= bound {
        modulus *= &qb;
        k += 1;
    }
    let lifted = multi_lift(f, &modular, q, k);
    recombine(f, lifted, &modulus)
}

/// Lifts `f ≡ lc · ∏ g_i (mod q)` (monic `g_i`) to monic factors modulo `q^k`.
fn multi_lift(f: &ZPoly, factors: &[ModPoly], q: u64, k: u32) -> Vec<ZPoly> {
    let modulus = num_traits::pow(BigInt::from(q), k as usize);
    let mut out = Vec::new();
    let mut target = f.clone();
    for i in 0..factors.len() - 1 {
        let rest = factors[i + 1..].iter().fold(vec![1u64], |acc, g| mmul(&acc, g, q));
        // g carries the leading coefficient of the target.
        let lcm = reduce(&ZPoly::new(vec![target.lc()]), q)[0];
        let g: ModPoly = factors[i].iter().map(|c| c * lcm % q).collect();
        let (g_l, h_l) = hensel_lift(&target, &g, &rest, q, k);
        // Make g monic modulo q^k.
        let inv = g_l.lc().modinv(&modulus).expect("leading coefficient is a unit");
        out.push(zmod(&g_l.scale(&inv), &modulus));
        target = h_l;
        // The remaining target is monic; make that exact so later lifts see lc = 1.
        let mut tc = target.coeffs().to_vec();
        *tc.last_mut().unwrap() = BigInt::one();
        target = ZPoly::new(tc);
    }
    out.push(target);
    out
}

fn recombine(f: &ZPoly, mut lifted: Vec<ZPoly>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut result = Vec::new();
    let mut f = f.clone();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = false;
        for subset in combinations(lifted.len(), size) {
            let lc = f.lc();
            let prod = subset.iter().fold(ZPoly::new(vec![lc.clone()]), |acc, &i| zmod(&acc.mul(&lifted[i]), modulus));
            let cand = symmetric(&prod, modulus).primitive();
            if let Some(q) = f.div_exact(&cand) {
                result.push(cand);
                f = q.primitive();
                let keep: Vec<ZPoly> =
                    lifted.iter().enumerate().filter(|(i, _)| !subset.contains(i)).map(|(_, g)| g.clone()).collect();
                lifted = keep;
                found = true;
                break;
            }
        }
        if !found {
            size += 1;
        }
    }
    if f.deg() > 0 {
        result.push(f.primitive());
    }
    result
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(idx.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] != i + n - k {
                break;
            }
            if i == 0 && idx[0] == n - k {
                return out;
            }
        }
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

// ---------------------------------------------------------------------------------------
// Bivariate factorization.

fn kronecker(p: &IntPolynomial, base: u32) -> ZPoly {
    let mut v: BTreeMap<usize, BigInt> = BTreeMap::new();
    for (m, c) in p.terms() {
        *v.entry((m.0[0] + base * m.0[1]) as usize).or_default() += c;
    }
    let deg = v.keys().next_back().copied().unwrap_or(0);
    let mut coeffs = vec![BigInt::zero(); deg + 1];
    for (i, c) in v {
        coeffs[i] = c;
    }
    ZPoly::new(coeffs)
}

fn unkronecker(f: &ZPoly, base: u32) -> IntPolynomial {
    IntPolynomial::from_terms(
        2,
        f.coeffs()
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (Monomial(vec![i as u32 % base, i as u32 / base]), c.clone())),
    )
}

fn factor_bivariate(p: &IntPolynomial) -> Factorization {
    let mut content = p.content();
    let mut rest = p.div_scalar(&content);
    let mut factors: Vec<(IntPolynomial, u32)> = Vec::new();
    // Monomial content x1^a x2^b.
    for var in 0..2 {
        let low = rest.terms().keys().map(|m| m.0[var]).min().unwrap_or(0);
        if low > 0 {
            factors.push((IntPolynomial::var(2, var), low));
            let terms = rest.terms().iter().map(|(m, c)| {
                let mut e = m.0.clone();
                e[var] -= low;
                (Monomial(e), c.clone())
            });
            rest = IntPolynomial::from_terms(2, terms);
        }
    }
    if !rest.is_constant() {
        let base = rest.degree_in(0) + 1;
        let image = kronecker(&rest, base);
        let (_, parts) = factor_zpoly(&image);
        let mut pool: Vec<ZPoly> =
            parts.iter().flat_map(|(g, m)| std::iter::repeat_n(g.clone(), *m as usize)).collect();
        let mut found: Vec<IntPolynomial> = Vec::new();
        'outer: while !rest.is_constant() {
            for size in 1..=pool.len() {
                for subset in combinations(pool.len(), size) {
                    let prod = subset.iter().fold(ZPoly::one(), |acc, &i| acc.mul(&pool[i]));
                    let cand = unkronecker(&prod, base);
                    if cand.is_constant() || cand.degree_in(0) >= base {
                        continue;
                    }
                    if let Some(q) = rest.div_exact(&cand) {
                        found.push(cand);
                        rest = q;
                        pool = pool
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| !subset.contains(i))
                            .map(|(_, g)| g.clone())
                            .collect();
                        continue 'outer;
                    }
                }
            }
            // Every factor of `rest` decodes from some subset, so this is unreachable for
            // correct input; keep the remainder whole rather than loop.
            found.push(rest.clone());
            rest = IntPolynomial::constant(2, 1);
            break;
        }
        // `rest` is now ±1.
        if let Some((_, c)) = rest.terms().iter().next() {
            content *= c;
        }
        for f in found {
            let f = normalize_sign(f, &mut content);
            if let Some(slot) = factors.iter_mut().find(|(g, _)| *g == f) {
                slot.1 += 1;
            } else {
                factors.push((f, 1));
            }
        }
    } else if let Some((_, c)) = rest.terms().iter().next() {
        content *= c;
    }
    let mut out = Factorization { content, factors };
    sort_factors(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> IntPolynomial {
        IntPolynomial::parse(s, Some(2)).unwrap()
    }

    fn z(c: &[i64]) -> ZPoly {
        ZPoly::from_i64(c)
    }

    #[test]
    fn univariate_factorizations() {
        // x^4 - 1 = (x-1)(x+1)(x^2+1)
        let (c, f) = factor_zpoly(&z(&[-1, 0, 0, 0, 1]));
        assert_eq!(c, BigInt::one());
        assert_eq!(f, vec![(z(&[-1, 1]), 1), (z(&[1, 1]), 1), (z(&[1, 0, 1]), 1)]);
        // x^4 + 1 is irreducible over Q but splits modulo every prime.
        let (_, f) = factor_zpoly(&z(&[1, 0, 0, 0, 1]));
        assert_eq!(f.len(), 1);
        // 6x^2 - 6 = 6 (x - 1)(x + 1)
        let (c, f) = factor_zpoly(&z(&[-6, 0, 6]));
        assert_eq!(c, BigInt::from(6));
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn swinnerton_dyer_like_product() {
        // (x^2 - 2)(x^2 - 3)(x^3 - x - 1) · 5
        let f = z(&[-2, 0, 1]).mul(&z(&[-3, 0, 1])).mul(&z(&[-1, -1, 0, 1])).scale(&BigInt::from(5));
        let (c, parts) = factor_zpoly(&f);
        assert_eq!(c, BigInt::from(5));
        let prod = parts.iter().fold(ZPoly::new(vec![c]), |acc, (g, m)| (0..*m).fold(acc, |a, _| a.mul(g)));
        assert_eq!(prod, f);
        assert_eq!(parts.len(), 3);
    }

    #[test]
    fn non_monic_factors() {
        // (2x + 3)(3x^2 - 5)(7x - 1)
        let f = z(&[3, 2]).mul(&z(&[-5, 0, 3])).mul(&z(&[-1, 7]));
        let (c, parts) = factor_zpoly(&f);
        assert_eq!(c, BigInt::one());
        assert_eq!(parts.len(), 3);
    }

    #[test]
    fn bivariate_examples() {
        let f = factor(&p("x1^2 - x2^2")).unwrap();
        assert_eq!(f.content, BigInt::one());
        let mut got: Vec<String> = f.factors.iter().map(|(g, _)| g.to_string()).collect();
        got.sort();
        assert_eq!(got, vec!["x1 + x2", "x1 - x2"].into_iter().map(String::from).collect::<Vec<_>>());
        assert_eq!(f.product(2), p("x1^2 - x2^2"));

        let g = factor(&p("x1^2 + x2^2 + 1")).unwrap();
        assert_eq!(g.factors, vec![(p("x1^2 + x2^2 + 1"), 1)]);

        let h = factor(&p("6*x1")).unwrap();
        assert_eq!(h.content, BigInt::from(6));
        assert_eq!(h.factors, vec![(p("x1"), 1)]);
    }

    #[test]
    fn bivariate_with_multiplicity_and_monomials() {
        let q = p("x1 * x2^2 * (x1 - x2 + 1)^2 * (x1^3 - x2^2 - 2)");
        let f = factor(&q).unwrap();
        assert_eq!(f.product(2), q);
        assert_eq!(f.factors.iter().map(|(_, m)| m).sum::<u32>(), 1 + 2 + 2 + 1);
    }

    #[test]
    fn combination_enumeration() {
        assert_eq!(combinations(4, 2).len(), 6);
        assert_eq!(combinations(3, 3), vec![vec![0, 1, 2]]);
        assert_eq!(combinations(3, 1), vec![vec![0], vec![1], vec![2]]);
    }
}
