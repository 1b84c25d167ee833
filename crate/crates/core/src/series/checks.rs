//! Finite-horizon checkers for the hypotheses on a series family.
//!
//! Conditions quantified over all (large) indices are checked index by index and can be
//! FALSIFIED at a concrete index. Limit and limsup conditions can only be WITNESSED by a
//! growth heuristic or left UNKNOWN.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::log2::{log2_uint, refine, Bracket, Decision, PRECISIONS};
use crate::arith::{BigRat, FactoredInteger};

use super::family::{HypothesisParams, SeriesFamily};
use super::SeriesError;

/// Materialization budget (bits) for exact small-case comparisons.
const EXACT_BITS: u64 = 1 << 14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Witnessed,
    Falsified,
    Unknown,
}

impl Status {
    /// Combines statuses: any falsification wins, then any unknown.
    pub fn all(items: impl IntoIterator<Item = Status>) -> Status {
        let mut out = Status::Witnessed;
        for s in items {
            match s {
                Status::Falsified => return Status::Falsified,
                Status::Unknown => out = Status::Unknown,
                Status::Witnessed => {}
            }
        }
        out
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Witnessed => "WITNESSED",
            Status::Falsified => "FALSIFIED",
            Status::Unknown => "UNKNOWN",
        })
    }
}

/// The hypotheses a family can be checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Condition {
    /// `p ∤ gcd(a_{k,n}, b_{k,n})`.
    NumeratorCoprime,
    /// For each `N` in the window, exactly one `n ≤ N` attains `max ν_p(a_{k,n})`.
    UniqueMaxValuation,
    /// `max ν_p(a_{k,n}) − d·max ν_p(a_{k−1,n}) → ∞`.
    ValuationGapGrowth,
    /// `max ν_p(a_{k,n}) > d·max ν_p(a_{k−1,n})` for each `N` in the window.
    ValuationDominance,
    /// `max ν_p(a_{k,n}) / (1 + max ν_p(a_{k−1,n})) → ∞`.
    ValuationRatioGrowth,
    /// `limsup ν_p(a_n) = ∞`.
    ValuationUnbounded,
    /// Equal valuations at distinct indices never exceed `C`.
    RepeatedValuationsBounded,
    /// `ν_p(a_n)` is bounded and attains its maximum exactly once.
    BoundedUniqueMax,
    /// `n^{1+ε} ≤ a_n ≤ a_{n+1}`.
    EnvelopeGrowth,
    /// `a_n 2^{−(log2 a_n)^κ} ≤ |a_{k,n}| ≤ max{a_n 2^{(log2 a_n)^κ}, 2^{(Kd+1)^n / n^3}}`.
    EnvelopeSandwich,
    /// As above with the second bound `2^{A^n}`.
    EnvelopeSandwichA,
    /// `|b_{k,n}| ≤ 2^{(log2 a_n)^κ}`.
    NumeratorBound,
    /// `limsup a_n^{1/B^n} = ∞` for the base the theorem fixes.
    EnvelopeLimsup,
    /// `limsup a_n^{1/A^n} = ∞` for the configured `A`.
    EnvelopeLimsupA,
}

impl Condition {
    pub fn id(self) -> &'static str {
        match self {
            Condition::NumeratorCoprime => "numerator-coprime",
            Condition::UniqueMaxValuation => "unique-max-valuation",
            Condition::ValuationGapGrowth => "valuation-gap-growth",
            Condition::ValuationDominance => "valuation-dominance",
            Condition::ValuationRatioGrowth => "valuation-ratio-growth",
            Condition::ValuationUnbounded => "valuation-unbounded",
            Condition::RepeatedValuationsBounded => "repeated-valuations-bounded",
            Condition::BoundedUniqueMax => "bounded-unique-max",
            Condition::EnvelopeGrowth => "envelope-growth",
            Condition::EnvelopeSandwich => "envelope-sandwich",
            Condition::EnvelopeSandwichA => "envelope-sandwich-a",
            Condition::NumeratorBound => "numerator-bound",
            Condition::EnvelopeLimsup => "envelope-limsup",
            Condition::EnvelopeLimsupA => "envelope-limsup-a",
        }
    }

    /// Limit-type conditions are never FALSIFIED.
    pub fn is_limit(self) -> bool {
        matches!(
            self,
            Condition::ValuationGapGrowth
                | Condition::ValuationRatioGrowth
                | Condition::ValuationUnbounded
                | Condition::EnvelopeLimsup
                | Condition::EnvelopeLimsupA
        )
    }
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Outcome of one checker.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub condition: Condition,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub series: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime: Option<u64>,
    pub horizon: u64,
    /// Indices examined, inclusive.
    pub range: [u64; 2],
    pub status: Status,
    /// Counterexample index when FALSIFIED; witnessing indices otherwise.
    pub witnesses: Vec<u64>,
    /// Raw per-index statistic, as decimal strings.
    pub statistic: Vec<String>,
    pub detail: String,
}

impl CheckReport {
    fn new(condition: Condition, horizon: u64, range: [u64; 2]) -> Self {
        CheckReport {
            condition,
            series: None,
            prime: None,
            horizon,
            range,
            status: Status::Unknown,
            witnesses: Vec::new(),
            statistic: Vec::new(),
            detail: String::new(),
        }
    }

    fn series(mut self, k: usize) -> Self {
        self.series = Some(k);
        self
    }

    fn prime(mut self, p: u64) -> Self {
        self.prime = Some(p);
        self
    }

    fn finish(mut self, status: Status, detail: impl Into<String>) -> Self {
        self.status = status;
        self.detail = detail.into();
        self
    }
}

/// Which sequence plays the role of the envelope `a_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnvelopeSource {
    /// The family's shared envelope.
    Shared,
    /// `|a_{k,n}|` of one series, as in the single-series criteria.
    Own(usize),
}

impl EnvelopeSource {
    fn get(self, fam: &SeriesFamily, n: u64) -> Result<FactoredInteger, SeriesError> {
        match self {
            EnvelopeSource::Shared => fam.envelope(n),
            EnvelopeSource::Own(k) => fam.own_envelope(k, n),
        }
    }

    fn series(self) -> Option<usize> {
        match self {
            EnvelopeSource::Shared => None,
            EnvelopeSource::Own(k) => Some(k),
        }
    }
}

/// Second bound in the envelope sandwich.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SandwichMode {
    /// `2^{(Kd+1)^n / n^3}`.
    Standard { k: usize, d: u32 },
    /// `2^{A^n}`.
    Power { a: u64 },
}

fn check_range(lo: u64, hi: u64) -> Result<(), SeriesError> {
    if lo == 0 || lo > hi {
        return Err(SeriesError::Config(format!("invalid index range [{lo}, {hi}]")));
    }
    Ok(())
}

/// `ν_p(a_{k,n})` for `n = 1..=h`; `k = 0` is the constant sequence 1.
pub fn valuations(fam: &SeriesFamily, k: usize, p: u64, h: u64) -> Result<Vec<BigUint>, SeriesError> {
    if k == 0 {
        return Ok(vec![BigUint::zero(); h as usize]);
    }
    (1..=h).map(|n| Ok(fam.denominator(k, n)?.valuation(p))).collect()
}

/// Running maximum of `v[..N]` for every `N`, with the number of indices attaining it and
/// the first such index (1-based).
fn running_max(v: &[BigUint]) -> Vec<(BigUint, usize, u64)> {
    let mut out = Vec::with_capacity(v.len());
    let mut best = (BigUint::zero(), 0usize, 0u64);
    for (i, x) in v.iter().enumerate() {
        if i == 0 || *x > best.0 {
            best = (x.clone(), 1, i as u64 + 1);
        } else if *x == best.0 {
            best.1 += 1;
        }
        out.push(best.clone());
    }
    out
}

/// Unbounded-looking growth: the value at the horizon beats every value up to half the
/// horizon and reaches the threshold.
fn growth_status(stats: &[BigRat], threshold: &BigRat) -> (Status, String) {
    let Some(last) = stats.last() else {
        return (Status::Unknown, "empty horizon".into());
    };
    let half = stats.len() / 2;
    if let Some(i) = stats[..half].iter().position(|s| s >= last) {
        return (Status::Unknown, format!("value at the horizon does not exceed the value at N = {}", i + 1));
    }
    if last < threshold {
        return (Status::Unknown, format!("value at the horizon is below the threshold {threshold}"));
    }
    (Status::Witnessed, "growing up to the horizon".into())
}

fn rat(v: &BigUint) -> BigRat {
    BigRat::from_integer(BigInt::from(v.clone()))
}

fn show_rat(r: &BigRat) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        r.to_string()
    }
}

/// Approximate decimal rendering of an enclosure, for humans only.
fn show_bracket(b: &Bracket) -> String {
    let mid = (&b.lo + &b.hi) / BigRat::from_integer(2.into());
    match mid.to_f64() {
        Some(x) if x.is_finite() => format!("{x:.6e}"),
        _ => format!("~2^{}", mid.to_integer().bits()),
    }
}

/// `p ∤ gcd(a_{k,n}, b_{k,n})` for `n` in the range.
pub fn check_numerator_coprime(
    fam: &SeriesFamily,
    k: usize,
    p: u64,
    range: [u64; 2],
) -> Result<CheckReport, SeriesError> {
    check_range(range[0], range[1])?;
    let rep = CheckReport::new(Condition::NumeratorCoprime, range[1], range).series(k).prime(p);
    for n in range[0]..=range[1] {
        let t = fam.term(k, n)?;
        let b_divisible = (t.b.magnitude() % p).is_zero();
        if b_divisible && !t.a.valuation(p).is_zero() {
            let mut rep = rep.finish(Status::Falsified, format!("{p} divides both a_{{{k},{n}}} and b_{{{k},{n}}}"));
            rep.witnesses = vec![n];
            return Ok(rep);
        }
    }
    Ok(rep.finish(Status::Witnessed, format!("{p} never divides both numerator and denominator")))
}

/// For each `N` in the window, exactly one `n ≤ N` attains the maximal `ν_p(a_{k,n})`.
pub fn check_unique_max_valuation(
    fam: &SeriesFamily,
    k: usize,
    p: u64,
    window: [u64; 2],
) -> Result<CheckReport, SeriesError> {
    check_range(window[0], window[1])?;
    let v = valuations(fam, k, p, window[1])?;
    let maxima = running_max(&v);
    let mut rep = CheckReport::new(Condition::UniqueMaxValuation, window[1], window).series(k).prime(p);
    for n in window[0]..=window[1] {
        let (m, count, first) = &maxima[n as usize - 1];
        rep.statistic.push(m.to_string());
        if *count != 1 {
            rep.witnesses = vec![n];
            return Ok(rep.finish(
                Status::Falsified,
                format!("at N = {n} the maximum {m} is attained {count} times (first at n = {first})"),
            ));
        }
        rep.witnesses.push(*first);
    }
    Ok(rep.finish(Status::Witnessed, "unique maximizer for every N in the window"))
}

/// `g(N) = max ν_p(a_{k,n}) − d·max ν_p(a_{k−1,n})` grows without bound.
pub fn check_valuation_gap_growth(
    fam: &SeriesFamily,
    k: usize,
    p: u64,
    d: u32,
    horizon: u64,
    threshold: &BigRat,
) -> Result<CheckReport, SeriesError> {
    check_range(1, horizon)?;
    let cur = running_max(&valuations(fam, k, p, horizon)?);
    let prev = running_max(&valuations(fam, k - 1, p, horizon)?);
    let stats: Vec<BigRat> =
        cur.iter().zip(&prev).map(|(c, q)| rat(&c.0) - rat(&q.0) * BigRat::from_integer(d.into())).collect();
    let (status, detail) = growth_status(&stats, threshold);
    let mut rep = CheckReport::new(Condition::ValuationGapGrowth, horizon, [1, horizon]).series(k).prime(p);
    rep.statistic = stats.iter().map(show_rat).collect();
    if status == Status::Witnessed {
        rep.witnesses = vec![horizon];
    }
    Ok(rep.finish(status, detail))
}

/// `max ν_p(a_{k,n}) > d·max ν_p(a_{k−1,n})` for every `N` in the window.
pub fn check_valuation_dominance(
    fam: &SeriesFamily,
    k: usize,
    p: u64,
    d: u32,
    window: [u64; 2],
) -> Result<CheckReport, SeriesError> {
    check_range(window[0], window[1])?;
    let cur = running_max(&valuations(fam, k, p, window[1])?);
    let prev = running_max(&valuations(fam, k - 1, p, window[1])?);
    let mut rep = CheckReport::new(Condition::ValuationDominance, window[1], window).series(k).prime(p);
    for n in window[0]..=window[1] {
        let i = n as usize - 1;
        let lhs = &cur[i].0;
        let rhs = &prev[i].0 * d;
        rep.statistic.push(format!("{lhs} > {rhs}"));
        if *lhs <= rhs {
            rep.witnesses = vec![n];
            return Ok(rep.finish(Status::Falsified, format!("at N = {n}: {lhs} ≤ {d}·{}", prev[i].0)));
        }
        rep.witnesses.push(n);
    }
    Ok(rep.finish(Status::Witnessed, "strict inequality for every N in the window"))
}

/// `max ν_p(a_{k,n}) / (1 + max ν_p(a_{k−1,n}))` grows without bound.
pub fn check_valuation_ratio_growth(
    fam: &SeriesFamily,
    k: usize,
    p: u64,
    horizon: u64,
    threshold: &BigRat,
) -> Result<CheckReport, SeriesError> {
    check_range(1, horizon)?;
    let cur = running_max(&valuations(fam, k, p, horizon)?);
    let prev = running_max(&valuations(fam, k - 1, p, horizon)?);
    let stats: Vec<BigRat> = cur.iter().zip(&prev).map(|(c, q)| rat(&c.0) / (rat(&q.0) + BigRat::one())).collect();
    let (status, detail) = growth_status(&stats, threshold);
    let mut rep = CheckReport::new(Condition::ValuationRatioGrowth, horizon, [1, horizon]).series(k).prime(p);
    rep.statistic = stats.iter().map(show_rat).collect();
    if status == Status::Witnessed {
        rep.witnesses = vec![horizon];
    }
    Ok(rep.finish(status, detail))
}

/// `ν_p(a_{k,n})` is unbounded, by the same growth heuristic applied to its running maximum.
pub fn check_valuation_unbounded(
    fam: &SeriesFamily,
    k: usize,
    p: u64,
    horizon: u64,
    threshold: &BigRat,
) -> Result<CheckReport, SeriesError> {
    let mut rep = check_valuation_gap_growth(fam, k, p, 0, horizon, threshold)?;
    rep.condition = Condition::ValuationUnbounded;
    Ok(rep)
}

/// Whenever `ν_p(a_{k,m}) = ν_p(a_{k,n})` for `m ≠ n ≤ H`, the common value is at most `C`.
pub fn check_repeated_valuations_bounded(
    fam: &SeriesFamily,
    k: usize,
    p: u64,
    c_bound: u64,
    horizon: u64,
) -> Result<CheckReport, SeriesError> {
    check_range(1, horizon)?;
    let v = valuations(fam, k, p, horizon)?;
    let mut rep = CheckReport::new(Condition::RepeatedValuationsBounded, horizon, [1, horizon]).series(k).prime(p);
    rep.statistic = v.iter().map(|x| x.to_string()).collect();
    let cap = BigUint::from(c_bound);
    for n in 1..v.len() {
        for m in 0..n {
            if v[m] == v[n] && v[n] > cap {
                rep.witnesses = vec![m as u64 + 1, n as u64 + 1];
                return Ok(rep.finish(
                    Status::Falsified,
                    format!("ν_{p} equals {} at n = {} and n = {}, above C = {c_bound}", v[n], m + 1, n + 1),
                ));
            }
        }
    }
    Ok(rep.finish(Status::Witnessed, format!("no repeated valuation above C = {c_bound}")))
}

/// `ν_p(a_{k,n})` attains its maximum over `n ≤ H` exactly once, and that maximum is already
/// reached by `H/2` (boundedness heuristic).
pub fn check_bounded_unique_max(
    fam: &SeriesFamily,
    k: usize,
    p: u64,
    horizon: u64,
) -> Result<CheckReport, SeriesError> {
    check_range(1, horizon)?;
    let v = valuations(fam, k, p, horizon)?;
    let mut rep = CheckReport::new(Condition::BoundedUniqueMax, horizon, [1, horizon]).series(k).prime(p);
    rep.statistic = v.iter().map(|x| x.to_string()).collect();
    let max = v.iter().max().cloned().unwrap_or_default();
    let at: Vec<u64> = (1..=horizon).filter(|&n| v[n as usize - 1] == max).collect();
    if at.len() != 1 {
        rep.witnesses = at.iter().copied().take(2).collect();
        return Ok(rep
            .finish(Status::Falsified, format!("the maximum {max} is attained {} times up to the horizon", at.len())));
    }
    rep.witnesses = at.clone();
    if at[0] > horizon / 2 {
        return Ok(rep.finish(
            Status::Unknown,
            format!("the maximum {max} first appears at n = {} > H/2; boundedness not evident", at[0]),
        ));
    }
    Ok(rep.finish(Status::Witnessed, format!("maximum {max} attained only at n = {}", at[0])))
}

/// Sound `n^q ≤ x` for a positive rational `q`.
fn pow_le(n: u64, q: &BigRat, x: &FactoredInteger) -> Decision {
    let (u, v) = (q.numer().to_u32(), q.denom().to_u32());
    if let (Some(u), Some(v)) = (u, v) {
        if let Ok(xv) = x.materialize(EXACT_BITS / v.max(1) as u64) {
            let lhs = BigUint::from(n).pow(u);
            let rhs = xv.magnitude().pow(v);
            return Decision::from_bool(lhs <= rhs);
        }
    }
    refine(|prec| log2_uint(&BigUint::from(n), prec).scale(q).le(&x.log2_bracket(prec)))
}

fn or(a: Decision, b: Decision) -> Decision {
    match (a, b) {
        (Decision::True, _) | (_, Decision::True) => Decision::True,
        (Decision::False, Decision::False) => Decision::False,
        _ => Decision::Unknown,
    }
}

fn and(a: Decision, b: Decision) -> Decision {
    match (a, b) {
        (Decision::False, _) | (_, Decision::False) => Decision::False,
        (Decision::True, Decision::True) => Decision::True,
        _ => Decision::Unknown,
    }
}

/// `n^{1+ε} ≤ a_n ≤ a_{n+1}` for `n` in the range (the second inequality while `n + 1` is
/// in range).
pub fn check_envelope_growth(
    fam: &SeriesFamily,
    source: EnvelopeSource,
    epsilon: &BigRat,
    range: [u64; 2],
) -> Result<CheckReport, SeriesError> {
    check_range(range[0], range[1])?;
    let mut rep = CheckReport::new(Condition::EnvelopeGrowth, range[1], range);
    rep.series = source.series();
    let q = BigRat::one() + epsilon;
    let mut unknown = None;
    let mut next = source.get(fam, range[0])?;
    for n in range[0]..=range[1] {
        let cur = next;
        let lower = pow_le(n, &q, &cur);
        let mono = if n < range[1] {
            next = source.get(fam, n + 1)?;
            match cur.cmp_abs(&next) {
                Some(std::cmp::Ordering::Greater) => Decision::False,
                Some(_) => Decision::True,
                None => Decision::Unknown,
            }
        } else {
            next = cur.clone();
            Decision::True
        };
        rep.statistic.push(show_bracket(&cur.log2_bracket(PRECISIONS[0])));
        if lower == Decision::False {
            rep.witnesses = vec![n];
            return Ok(rep.finish(Status::Falsified, format!("a_{n} < n^(1+ε) at n = {n}")));
        }
        if mono == Decision::False {
            rep.witnesses = vec![n];
            return Ok(rep.finish(Status::Falsified, format!("a_{n} > a_{} at n = {n}", n + 1)));
        }
        if and(lower, mono) == Decision::Unknown && unknown.is_none() {
            unknown = Some(n);
        }
    }
    if let Some(n) = unknown {
        rep.witnesses = vec![n];
        return Ok(rep.finish(Status::Unknown, format!("enclosures could not decide at n = {n}")));
    }
    rep.witnesses = (range[0]..=range[1]).collect();
    Ok(rep.finish(Status::Witnessed, "statistic: log2 a_n"))
}

fn sandwich_bound(mode: SandwichMode, n: u64) -> BigRat {
    match mode {
        SandwichMode::Standard { k, d } => {
            let base = BigInt::from(k as u64 * d as u64 + 1);
            BigRat::new(num_traits::pow(base, n as usize), BigInt::from(n).pow(3))
        }
        SandwichMode::Power { a } => BigRat::from_integer(num_traits::pow(BigInt::from(a), n as usize)),
    }
}

/// The envelope sandwich for series `k`: `a_n 2^{−(log2 a_n)^κ} ≤ |a_{k,n}|` and
/// `|a_{k,n}| ≤ max{a_n 2^{(log2 a_n)^κ}, 2^{bound_n}}`.
pub fn check_envelope_sandwich(
    fam: &SeriesFamily,
    k: usize,
    kappa: &BigRat,
    mode: SandwichMode,
    range: [u64; 2],
) -> Result<CheckReport, SeriesError> {
    check_range(range[0], range[1])?;
    let cond = match mode {
        SandwichMode::Standard { .. } => Condition::EnvelopeSandwich,
        SandwichMode::Power { .. } => Condition::EnvelopeSandwichA,
    };
    let mut rep = CheckReport::new(cond, range[1], range).series(k);
    let mut unknown = None;
    for n in range[0]..=range[1] {
        let env = fam.envelope(n)?;
        let akn = fam.denominator(k, n)?;
        let bound = sandwich_bound(mode, n);
        let lower = refine(|prec| {
            let slack = env.log2_bracket(prec).pow_rat(kappa, prec);
            env.log2_ratio_bracket(&akn, prec).le(&slack)
        });
        let upper = refine(|prec| {
            let slack = env.log2_bracket(prec).pow_rat(kappa, prec);
            let near = akn.log2_ratio_bracket(&env, prec).le(&slack);
            let far = akn.log2_bracket(prec).le(&Bracket::exact(bound.clone()));
            or(near, far)
        });
        rep.statistic.push(show_bracket(&akn.log2_ratio_bracket(&env, PRECISIONS[0])));
        if lower == Decision::False {
            rep.witnesses = vec![n];
            return Ok(rep.finish(Status::Falsified, format!("lower bound fails at n = {n}")));
        }
        if upper == Decision::False {
            rep.witnesses = vec![n];
            return Ok(rep.finish(Status::Falsified, format!("upper bound fails at n = {n}")));
        }
        if and(lower, upper) == Decision::Unknown && unknown.is_none() {
            unknown = Some(n);
        }
    }
    if let Some(n) = unknown {
        rep.witnesses = vec![n];
        return Ok(rep.finish(Status::Unknown, format!("enclosures could not decide at n = {n}")));
    }
    rep.witnesses = (range[0]..=range[1]).collect();
    Ok(rep.finish(Status::Witnessed, "statistic: log2(|a_{k,n}| / a_n)"))
}

/// `|b_{k,n}| ≤ 2^{(log2 a_n)^κ}` for `n` in the range.
pub fn check_numerator_bound(
    fam: &SeriesFamily,
    k: usize,
    source: EnvelopeSource,
    kappa: &BigRat,
    range: [u64; 2],
) -> Result<CheckReport, SeriesError> {
    check_range(range[0], range[1])?;
    let mut rep = CheckReport::new(Condition::NumeratorBound, range[1], range).series(k);
    let mut unknown = None;
    for n in range[0]..=range[1] {
        let b = fam.term(k, n)?.b;
        let env = source.get(fam, n)?;
        let d = if b.abs().is_one() {
            Decision::True
        } else {
            refine(|prec| log2_uint(b.magnitude(), prec).le(&env.log2_bracket(prec).pow_rat(kappa, prec)))
        };
        rep.statistic.push(b.magnitude().bits().to_string());
        match d {
            Decision::False => {
                rep.witnesses = vec![n];
                return Ok(rep.finish(Status::Falsified, format!("|b_{{{k},{n}}}| too large at n = {n}")));
            }
            Decision::Unknown if unknown.is_none() => unknown = Some(n),
            _ => {}
        }
    }
    if let Some(n) = unknown {
        rep.witnesses = vec![n];
        return Ok(rep.finish(Status::Unknown, format!("enclosures could not decide at n = {n}")));
    }
    rep.witnesses = (range[0]..=range[1]).collect();
    Ok(rep.finish(Status::Witnessed, "statistic: bit length of |b_{k,n}|"))
}

/// `limsup a_n^{1/B^n} = ∞` via `y_n = log2(a_n) / B^n`: WITNESSED when the largest `y_n`
/// on `(H/2, H]` exceeds `growth_factor` times the largest on `[1, H/2]`.
pub fn check_limsup(
    fam: &SeriesFamily,
    source: EnvelopeSource,
    base: u64,
    horizon: u64,
    growth_factor: &BigRat,
    condition: Condition,
) -> Result<CheckReport, SeriesError> {
    check_range(1, horizon)?;
    let env: Vec<FactoredInteger> = (1..=horizon).map(|n| source.get(fam, n)).collect::<Result<_, _>>()?;
    let half = (horizon / 2) as usize;
    let mut rep = CheckReport::new(condition, horizon, [1, horizon]);
    rep.series = source.series();
    let mut status = Status::Unknown;
    let mut detail = String::new();
    for prec in PRECISIONS {
        let ys: Vec<Bracket> = env
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let scale = BigRat::new(BigInt::one(), num_traits::pow(BigInt::from(base), i + 1));
                a.log2_bracket(prec).scale(&scale)
            })
            .collect();
        rep.statistic = ys.iter().map(show_bracket).collect();
        let early_hi = ys[..half].iter().map(|y| y.hi.clone()).max().unwrap_or_else(BigRat::zero);
        let early_lo = ys[..half].iter().map(|y| y.lo.clone()).max().unwrap_or_else(BigRat::zero);
        let (late_i, late) =
            ys[half..].iter().enumerate().max_by(|a, b| a.1.lo.cmp(&b.1.lo)).expect("non-empty upper half");
        if late.lo > growth_factor * &early_hi {
            status = Status::Witnessed;
            rep.witnesses = vec![(half + late_i + 1) as u64];
            detail = format!("y_n = log2(a_n)/{base}^n grows by more than {growth_factor}x");
            break;
        }
        let late_hi = ys[half..].iter().map(|y| y.hi.clone()).max().expect("non-empty");
        if late_hi <= growth_factor * &early_lo {
            detail = format!("y_n = log2(a_n)/{base}^n does not grow by {growth_factor}x up to the horizon");
            break;
        }
        detail = "enclosures too wide to separate the halves".into();
    }
    Ok(rep.finish(status, detail))
}

/// Envelope checks bundled: growth, sandwich and numerator bound for every series.
pub fn check_envelope(
    fam: &SeriesFamily,
    params: &HypothesisParams,
    mode: SandwichMode,
    range: [u64; 2],
) -> Result<Vec<CheckReport>, SeriesError> {
    let mut out = vec![check_envelope_growth(fam, EnvelopeSource::Shared, &params.epsilon, range)?];
    for k in 1..=fam.k() {
        out.push(check_envelope_sandwich(fam, k, &params.kappa, mode, range)?);
    }
    for k in 1..=fam.k() {
        out.push(check_numerator_bound(fam, k, EnvelopeSource::Shared, &params.kappa, range)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::family::Term;
    use super::*;

    fn fam(k: usize, f: impl Fn(usize, u64) -> (i64, FactoredInteger) + Send + Sync + 'static) -> SeriesFamily {
        SeriesFamily::custom(
            "test",
            k,
            move |k, n| {
                let (b, a) = f(k, n);
                Ok(Term::new(b.into(), a))
            },
            None,
        )
    }

    fn pp(p: u64, e: u64) -> FactoredInteger {
        FactoredInteger::prime_power(p, e.into())
    }

    #[test]
    fn unique_max_examples() {
        let inc = fam(1, |_, n| (1, pp(2, n).mul(&pp(3, 1))));
        assert_eq!(check_unique_max_valuation(&inc, 1, 2, [1, 20]).unwrap().status, Status::Witnessed);
        let flat = fam(1, |_, _| (1, FactoredInteger::from_i64(6).unwrap()));
        let r = check_unique_max_valuation(&flat, 1, 2, [2, 5]).unwrap();
        assert_eq!(r.status, Status::Falsified);
        assert_eq!(r.witnesses, vec![2]);
    }

    #[test]
    fn gap_growth_examples() {
        let f = fam(2, |k, n| (1, pp(2, n.pow(k as u32)).mul(&pp(3, 1))));
        let one = BigRat::one();
        let r = check_valuation_gap_growth(&f, 2, 2, 1, 12, &one).unwrap();
        assert_eq!(r.status, Status::Witnessed);
        let expect: Vec<String> = (1..=12u64).map(|n| (n * n - n).to_string()).collect();
        assert_eq!(r.statistic, expect);
        let same = fam(2, |_, n| (1, pp(2, n)));
        assert_eq!(check_valuation_gap_growth(&same, 2, 2, 1, 12, &one).unwrap().status, Status::Unknown);
        assert_eq!(check_valuation_gap_growth(&same, 1, 2, 1, 12, &one).unwrap().status, Status::Witnessed);
    }

    #[test]
    fn dominance_examples() {
        let primes = crate::arith::primes::primes_from(2, 10);
        let f = fam(1, move |_, n| (1, pp(primes[n as usize - 1], 1)));
        let p5 = 11;
        let early = check_valuation_dominance(&f, 1, p5, 3, [1, 10]).unwrap();
        assert_eq!(early.status, Status::Falsified);
        assert_eq!(early.witnesses, vec![1]);
        assert_eq!(check_valuation_dominance(&f, 1, p5, 3, [5, 10]).unwrap().status, Status::Witnessed);
    }

    #[test]
    fn ratio_growth_examples() {
        let f = fam(2, |k, n| (1, pp(2, n.pow(k as u32))));
        let one = BigRat::one();
        assert_eq!(check_valuation_ratio_growth(&f, 2, 2, 12, &one).unwrap().status, Status::Witnessed);
        let bounded = fam(2, |_, n| (1, pp(2, n % 2 + 1)));
        assert_eq!(check_valuation_ratio_growth(&bounded, 2, 2, 12, &one).unwrap().status, Status::Unknown);
    }

    #[test]
    fn limsup_examples() {
        let two = BigRat::from_integer(2.into());
        let fact = fam(1, |_, n| (1, pp(2, (1..=n).product())));
        assert_eq!(
            check_limsup(&fact, EnvelopeSource::Shared, 3, 12, &two, Condition::EnvelopeLimsup).unwrap().status,
            Status::Witnessed
        );
        let lin = fam(1, |_, n| (1, pp(2, n)));
        assert_eq!(
            check_limsup(&lin, EnvelopeSource::Shared, 2, 20, &two, Condition::EnvelopeLimsup).unwrap().status,
            Status::Unknown
        );
        let dbl = fam(1, |_, n| (1, pp(2, 1 << n)));
        let r = check_limsup(&dbl, EnvelopeSource::Shared, 2, 15, &two, Condition::EnvelopeLimsup).unwrap();
        assert_eq!(r.status, Status::Unknown);
        assert!(r.statistic.iter().all(|s| s == "1.000000e0"), "{:?}", r.statistic);
    }

    #[test]
    fn envelope_growth_handles_equality() {
        // a_n = n^{3/2} exactly when n is a perfect square: equality is allowed.
        let f =
            fam(1, |_, n| (1, FactoredInteger::from_i64([1, 3, 6, 8, 12, 15, 19, 23, 27][n as usize - 1]).unwrap()));
        let half = BigRat::new(1.into(), 2.into());
        assert_eq!(check_envelope_growth(&f, EnvelopeSource::Shared, &half, [1, 9]).unwrap().status, Status::Witnessed);
        let bad = fam(1, |_, n| (1, FactoredInteger::from_i64(if n == 4 { 7 } else { 100 }).unwrap()));
        let r = check_envelope_growth(&bad, EnvelopeSource::Shared, &half, [4, 5]).unwrap();
        assert_eq!(r.status, Status::Falsified);
    }

    #[test]
    fn numerator_bound_and_coprime() {
        let f = fam(1, |_, n| (if n == 3 { 1 << 20 } else { -1 }, pp(3, 1 << n)));
        let half = BigRat::new(1.into(), 2.into());
        let r = check_numerator_bound(&f, 1, EnvelopeSource::Shared, &half, [1, 3]).unwrap();
        assert_eq!((r.status, r.witnesses.clone()), (Status::Falsified, vec![3]));
        let g = fam(1, |_, n| (if n == 2 { 6 } else { 1 }, pp(2, n)));
        let r = check_numerator_coprime(&g, 1, 2, [1, 4]).unwrap();
        assert_eq!((r.status, r.witnesses.clone()), (Status::Falsified, vec![2]));
    }
}
