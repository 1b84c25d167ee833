//! p-adic dominance certificates: one monomial of `P` at the partial sums has strictly smaller
//! `ν_p` than every other, so the value cannot vanish.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{dominant_valuation, partial_sum, ser_display, CertError, CertOptions};
use crate::arith::primes::{is_prime, next_prime};
use crate::arith::{nu_p_int, BigRat, Extended};
use crate::poly::{IntPolynomial, Monomial};
use crate::series::{Preset, PrimeSet, SeriesFamily};

/// Values larger than this many bits are reported as nonzero without printing them.
const SHOW_BITS: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CertVerdict {
    NonvanishingCertified,
    Inconclusive,
}

impl CertVerdict {
    pub fn certified(self) -> bool {
        self == CertVerdict::NonvanishingCertified
    }
}

impl std::fmt::Display for CertVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CertVerdict::NonvanishingCertified => "NONVANISHING_CERTIFIED",
            CertVerdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

/// How the prime is chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeChoice {
    Fixed(u64),
    /// Scan the set for the first prime not dividing the leading coefficient.
    Scan(PrimeSet),
}

impl PrimeChoice {
    /// The prime choice implied by the family's hypothesis parameters.
    pub fn from_family(fam: &SeriesFamily) -> Self {
        match &fam.params().primes {
            PrimeSet::Single(p) => PrimeChoice::Fixed(*p),
            other => PrimeChoice::Scan(other.clone()),
        }
    }

    fn select(&self, lead: &BigInt, cap: usize) -> Result<u64, CertError> {
        let coprime = |p: u64| (lead.magnitude() % p) != BigUint::zero();
        match self {
            PrimeChoice::Fixed(p) => {
                if !is_prime(*p) {
                    return Err(crate::ArithError::InvalidPrime(*p).into());
                }
                Ok(*p)
            }
            PrimeChoice::Scan(PrimeSet::Single(p)) => Ok(*p),
            PrimeChoice::Scan(PrimeSet::List(ps)) => {
                ps.iter().copied().find(|&p| coprime(p)).ok_or(CertError::NoSuitablePrime { scanned: ps.len() })
            }
            PrimeChoice::Scan(PrimeSet::Generator { start }) => {
                let mut p = next_prime(*start);
                for _ in 0..cap {
                    if coprime(p) {
                        return Ok(p);
                    }
                    p = next_prime(p + 1);
                }
                Err(CertError::NoSuitablePrime { scanned: cap })
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateRow {
    pub monomial: Vec<u32>,
    #[serde(serialize_with = "ser_display")]
    pub coefficient: BigInt,
    /// `ν_p(C_i)`.
    #[serde(serialize_with = "ser_display")]
    pub valuation: BigInt,
}

/// Exact evaluation of `P` at the partial sums.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Crosscheck {
    pub evaluated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nonzero: Option<bool>,
    /// The reduced value, omitted when it is too long to print.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl Crosscheck {
    fn skipped(note: impl Into<String>) -> Self {
        Crosscheck { evaluated: false, nonzero: None, value: None, note: Some(note.into()) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub polynomial: String,
    pub n: u64,
    pub prime: u64,
    /// Exponents of the colex-leading monomial.
    pub leading: Vec<u32>,
    #[serde(serialize_with = "ser_display")]
    pub leading_coefficient: BigInt,
    /// `max_{n ≤ N} ν_p(a_{k,n})` for each series, as decimal strings.
    pub dominant_valuations: Vec<String>,
    pub rows: Vec<CertificateRow>,
    pub verdict: CertVerdict,
    pub crosscheck: Crosscheck,
}

struct CrossData {
    /// `u_k^e` and `v_k^e` for `e ≤ D`, where `α_{k,N} = u_k / v_k`.
    num_pows: Vec<Vec<BigInt>>,
    den_pows: Vec<Vec<BigInt>>,
    cache: HashMap<Vec<u32>, BigInt>,
}

/// Certificates for one family at one `N`, caching valuations and partial sums across
/// polynomials.
pub struct Certifier<'a> {
    fam: &'a SeriesFamily,
    n: u64,
    order: u32,
    choice: PrimeChoice,
    opts: CertOptions,
    maxima: HashMap<u64, Result<Vec<BigUint>, CertError>>,
    cross: Option<Result<CrossData, String>>,
}

/// The degree bound certificates enforce: 3 under the pair presets, `d` otherwise.
pub(crate) fn effective_order(fam: &SeriesFamily) -> u32 {
    match fam.preset() {
        Preset::K2 | Preset::K2Infinite => 3,
        _ => fam.params().d,
    }
}

impl<'a> Certifier<'a> {
    pub fn new(fam: &'a SeriesFamily, n: u64, opts: CertOptions) -> Result<Self, CertError> {
        if n == 0 {
            return Err(CertError::InvalidArgument("N must be at least 1".into()));
        }
        Ok(Certifier {
            fam,
            n,
            order: effective_order(fam),
            choice: PrimeChoice::from_family(fam),
            opts,
            maxima: HashMap::new(),
            cross: None,
        })
    }

    pub fn with_prime_choice(mut self, choice: PrimeChoice) -> Self {
        self.choice = choice;
        self
    }

    pub fn with_order(mut self, order: u32) -> Self {
        self.order = order;
        self.cross = None;
        self
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    fn maxima(&mut self, p: u64) -> Result<Vec<BigUint>, CertError> {
        let (fam, n) = (self.fam, self.n);
        self.maxima
            .entry(p)
            .or_insert_with(|| (1..=fam.k()).map(|k| dominant_valuation(fam, k, n, p)).collect())
            .clone()
    }

    pub fn certify(&mut self, poly: &IntPolynomial) -> Result<Certificate, CertError> {
        if poly.nvars() != self.fam.k() {
            return Err(CertError::VariableCount { expected: self.fam.k(), got: poly.nvars() });
        }
        if poly.is_zero() {
            return Err(CertError::ZeroPolynomial);
        }
        if poly.degree() > self.order {
            return Err(CertError::DegreeExceedsOrder { degree: poly.degree(), order: self.order });
        }
        let (lead, lead_c) = poly.colex_leading()?;
        let p = self.choice.select(&lead_c, self.opts.prime_scan_cap)?;
        let maxima = self.maxima(p)?;
        let lead_v = finite_valuation(&lead_c, p)?;
        let mut rows = Vec::new();
        for (m, c) in poly.terms() {
            if *m == lead {
                continue;
            }
            let mut v = BigInt::from(finite_valuation(c, p)?) - BigInt::from(lead_v.clone());
            for ((&j, &i), mk) in lead.exps().iter().zip(m.exps()).zip(&maxima) {
                v += (BigInt::from(j) - BigInt::from(i)) * BigInt::from(mk.clone());
            }
            rows.push(CertificateRow { monomial: m.exps().to_vec(), coefficient: c.clone(), valuation: v });
        }
        let verdict = if rows.iter().all(|r| r.valuation.is_positive()) {
            CertVerdict::NonvanishingCertified
        } else {
            CertVerdict::Inconclusive
        };
        let crosscheck = if self.opts.crosscheck { self.crosscheck(poly) } else { Crosscheck::skipped("disabled") };
        Ok(Certificate {
            polynomial: poly.to_string(),
            n: self.n,
            prime: p,
            leading: lead.exps().to_vec(),
            leading_coefficient: lead_c,
            dominant_valuations: maxima.iter().map(|m| m.to_string()).collect(),
            rows,
            verdict,
            crosscheck,
        })
    }

    fn cross_data(&mut self) -> Result<&mut CrossData, String> {
        if self.cross.is_none() {
            let built = self.build_cross();
            self.cross = Some(built);
        }
        match self.cross.as_mut().expect("just filled") {
            Ok(d) => Ok(d),
            Err(e) => Err(e.clone()),
        }
    }

    fn build_cross(&self) -> Result<CrossData, String> {
        let d = self.order as usize;
        let mut sums = Vec::new();
        let mut bits = 0u64;
        for k in 1..=self.fam.k() {
            let s = partial_sum(self.fam, k, self.n, self.opts.bit_cap).map_err(|e| e.to_string())?;
            bits = bits.saturating_add(s.value.numer().bits().max(s.value.denom().bits()));
            sums.push(s.value);
        }
        if bits.saturating_mul(d.max(1) as u64) > self.opts.bit_cap {
            return Err(format!("evaluation would need about {} bits, above the cap", bits.saturating_mul(d as u64)));
        }
        let pows = |base: &BigInt| {
            let mut v = vec![BigInt::one()];
            for e in 0..d {
                v.push(&v[e] * base);
            }
            v
        };
        Ok(CrossData {
            num_pows: sums.iter().map(|s| pows(s.numer())).collect(),
            den_pows: sums.iter().map(|s| pows(s.denom())).collect(),
            cache: HashMap::new(),
        })
    }

    /// `P(α_{1,N}, …, α_{K,N})` by clearing the common denominator `Π v_k^D`.
    fn crosscheck(&mut self, poly: &IntPolynomial) -> Crosscheck {
        let d = self.order as usize;
        let data = match self.cross_data() {
            Ok(data) => data,
            Err(e) => return Crosscheck::skipped(e),
        };
        let mut numer = BigInt::zero();
        for (m, c) in poly.terms() {
            let w = data.cache.entry(m.exps().to_vec()).or_insert_with(|| {
                let mut w = BigInt::one();
                for (k, &e) in m.exps().iter().enumerate() {
                    w *= &data.num_pows[k][e as usize];
                    w *= &data.den_pows[k][d - e as usize];
                }
                w
            });
            numer += c * &*w;
        }
        let nonzero = !numer.is_zero();
        let value = if numer.bits() > SHOW_BITS {
            None
        } else {
            let denom: BigInt = data.den_pows.iter().map(|p| p[d].clone()).product();
            let v = BigRat::new(numer, denom);
            (v.denom().bits() <= SHOW_BITS).then(|| v.to_string())
        };
        Crosscheck { evaluated: true, nonzero: Some(nonzero), value, note: None }
    }
}

fn finite_valuation(c: &BigInt, p: u64) -> Result<BigUint, CertError> {
    match nu_p_int(c, p)? {
        Extended::Finite(v) => Ok(v),
        _ => Err(CertError::ZeroPolynomial),
    }
}

/// One certificate, with the prime chosen from the family's parameters.
pub fn dominance_certificate(
    fam: &SeriesFamily,
    poly: &IntPolynomial,
    n: u64,
    choice: Option<PrimeChoice>,
    opts: &CertOptions,
) -> Result<Certificate, CertError> {
    let mut c = Certifier::new(fam, n, opts.clone())?;
    if let Some(choice) = choice {
        c = c.with_prime_choice(choice);
    }
    c.certify(poly)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowRow {
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl WindowRow {
    pub fn certified(&self) -> bool {
        self.certificate.as_ref().is_some_and(|c| c.verdict.certified())
    }
}

/// Certificates for one polynomial at every `N ≤ H`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WindowReport {
    pub polynomial: String,
    pub horizon: u64,
    pub rows: Vec<WindowRow>,
    /// Largest window `[N₁, H]` on which every `N` certified.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<[u64; 2]>,
}

pub fn certify_window(
    fam: &SeriesFamily,
    poly: &IntPolynomial,
    horizon: u64,
    opts: &CertOptions,
) -> Result<WindowReport, CertError> {
    if horizon == 0 {
        return Err(CertError::InvalidArgument("horizon must be at least 1".into()));
    }
    let mut rows = Vec::new();
    for n in 1..=horizon {
        let row = match dominance_certificate(fam, poly, n, None, opts) {
            Ok(c) => WindowRow { n, certificate: Some(c), error: None },
            Err(e @ (CertError::Precondition { .. } | CertError::NoSuitablePrime { .. })) => {
                WindowRow { n, certificate: None, error: Some(e.to_string()) }
            }
            Err(e) => return Err(e),
        };
        rows.push(row);
    }
    let start = rows.iter().rposition(|r| !r.certified()).map_or(1, |i| i as u64 + 2);
    let window = (start <= horizon).then_some([start, horizon]);
    Ok(WindowReport { polynomial: poly.to_string(), horizon, rows, window })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub q: u64,
    #[serde(serialize_with = "ser_display")]
    pub p: BigInt,
    pub reason: String,
}

/// `q·x − p` for `1 ≤ q ≤ height`, `|p| ≤ height·⌈|α_{1,N}| + 1⌉`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LinearScanReport {
    pub n: u64,
    pub height: u64,
    #[serde(serialize_with = "ser_display")]
    pub p_bound: BigInt,
    pub total: usize,
    pub certified: usize,
    pub inconclusive: Vec<ScanRow>,
}

impl LinearScanReport {
    pub fn all_certified(&self) -> bool {
        self.certified == self.total
    }
}

pub fn linear_scan(fam: &SeriesFamily, height: u64, n: u64, opts: &CertOptions) -> Result<LinearScanReport, CertError> {
    if fam.k() != 1 {
        return Err(CertError::InvalidArgument(format!("linear scans need K = 1, the family has K = {}", fam.k())));
    }
    if height == 0 {
        return Ok(LinearScanReport {
            n,
            height,
            p_bound: BigInt::zero(),
            total: 0,
            certified: 0,
            inconclusive: Vec::new(),
        });
    }
    let bound = abs_partial_sum_upper(fam, n, opts.bit_cap)?;
    let p_bound = BigInt::from(height) * (bound + BigRat::one()).ceil().to_integer();
    let mut cert = Certifier::new(fam, n, opts.clone())?.with_order(1);
    let mut report =
        LinearScanReport { n, height, p_bound: p_bound.clone(), total: 0, certified: 0, inconclusive: Vec::new() };
    let span = p_bound.to_i64().ok_or_else(|| CertError::InvalidArgument("scan bound too large".into()))?;
    for q in 1..=height {
        for p in -span..=span {
            let poly = IntPolynomial::from_terms(
                1,
                [(Monomial(vec![1]), BigInt::from(q)), (Monomial(vec![0]), BigInt::from(-p))],
            );
            report.total += 1;
            let reason = match cert.certify(&poly) {
                Ok(c) if c.verdict.certified() => {
                    report.certified += 1;
                    continue;
                }
                Ok(c) => {
                    let worst = c.rows.iter().map(|r| r.valuation.clone()).min().unwrap_or_default();
                    format!("row valuation {worst} is not positive")
                }
                Err(e) => e.to_string(),
            };
            report.inconclusive.push(ScanRow { q, p: BigInt::from(p), reason });
        }
    }
    Ok(report)
}

/// An upper bound on `|α_{1,N}|`: exact when the partial sum materializes, otherwise
/// `Σ |b_n| / 2^{min(bits(a_n), 64) − 1}`.
fn abs_partial_sum_upper(fam: &SeriesFamily, n: u64, bit_cap: u64) -> Result<BigRat, CertError> {
    if let Ok(s) = partial_sum(fam, 1, n, bit_cap) {
        return Ok(s.value.abs());
    }
    let mut acc = BigRat::zero();
    for i in 1..=n {
        let t = fam.term(1, i)?;
        let bits = t.a.bit_length().to_u64().unwrap_or(u64::MAX).min(64);
        acc += BigRat::new(t.b.abs(), BigInt::one() << (bits - 1));
    }
    Ok(acc)
}
