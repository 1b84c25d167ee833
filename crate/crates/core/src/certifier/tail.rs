//! Tail majorants, the `Z_N` statistic, the analytic gap inequality and the growth
//! witnesses, all carried in the binary-log domain with dyadic brackets.

use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{ser_display, CertError};
use crate::arith::log2::{log2_rat, log2_uint, rat_pow_upper, refine, Bracket, Decision, PRECISIONS};
use crate::arith::BigRat;
use crate::poly::IntPolynomial;
use crate::series::checks::check_envelope;
use crate::series::{CheckReport, SandwichMode, SeriesFamily};

/// Terms beyond the head are summed from this many further indices by default.
pub const DEFAULT_TAIL_TERMS: u64 = 24;

/// Relative terms are rounded up to multiples of `2^-GRID`, keeping denominators small.
const GRID: i64 = 160;

/// Relative terms above `2^CEILING` are rejected.
const CEILING: i64 = 1 << 14;

/// Ratios within this much of each other count as non-increasing.
fn ratio_tolerance() -> BigRat {
    BigRat::new(BigInt::one(), BigInt::one() << 20u32)
}

/// A majorant is only fitted once this many consecutive ratios have been observed.
const MIN_RATIOS: usize = 3;

const EXP_STEPS: i64 = 64;

fn exp2_table() -> &'static [BigRat] {
    static TABLE: OnceLock<Vec<BigRat>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let two = BigRat::from_integer(2.into());
        (0..=EXP_STEPS).map(|j| rat_pow_upper(&two, &BigRat::new(j.into(), EXP_STEPS.into()), 64)).collect()
    })
}

fn pow2(e: &BigInt) -> BigRat {
    let mag = e.magnitude().to_u64().expect("exponent clamped by caller");
    let p = BigInt::one() << mag;
    if e.is_negative() {
        BigRat::new(BigInt::one(), p)
    } else {
        BigRat::from_integer(p)
    }
}

/// Upper bound on `2^x`, rounding `x` up to a multiple of 1/64; `x` must be moderate.
fn exp2_upper(x: &BigRat) -> BigRat {
    let scaled = (x * BigRat::from_integer(EXP_STEPS.into())).ceil().to_integer();
    let (q, r) = scaled.div_mod_floor(&BigInt::from(EXP_STEPS));
    &exp2_table()[r.to_usize().expect("remainder below 64")] * pow2(&q)
}

/// `exp2_upper` rounded up to the grid, with huge arguments rejected.
fn exp2_upper_clamped(x: &BigRat) -> Result<BigRat, CertError> {
    let unit = pow2(&BigInt::from(-GRID));
    if *x < BigRat::from_integer((-GRID).into()) {
        return Ok(unit);
    }
    if *x > BigRat::from_integer(CEILING.into()) {
        return Err(CertError::TailUnavailable("terms grow too fast to sum".into()));
    }
    Ok((exp2_upper(x) / &unit).ceil() * unit)
}

fn approx(x: &BigRat) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// How the terms beyond the cutoff were bounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Majorant {
    /// Ratios observed non-increasing; the remainder is bounded by the geometric series with
    /// the last observed ratio `2^{log2_ratio}`.
    Geometric { log2_ratio: String },
    /// Local decay exponents observed above `exponent > 1`; the remainder is bounded by
    /// `t_c · c / (exponent − 1)`.
    Power { exponent: String },
}

impl Majorant {
    pub fn assumption(&self) -> &'static str {
        match self {
            Majorant::Geometric { .. } => "consecutive term ratios stay non-increasing beyond the cutoff",
            Majorant::Power { .. } => "terms keep decaying at least as fast as the observed power beyond the cutoff",
        }
    }
}

/// `log2 Σ_{n ≥ start} t_n ≤ reference + log2(scaled)`, where the head up to `cutoff` is summed
/// with dyadic upper bounds and the remainder comes from `majorant`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LogTail {
    pub start: u64,
    /// Cutoff achieving the reported bound.
    pub cutoff: u64,
    /// Largest cutoff tried.
    pub max_cutoff: u64,
    #[serde(serialize_with = "ser_display")]
    pub reference: BigRat,
    #[serde(serialize_with = "ser_display")]
    pub scaled: BigRat,
    #[serde(serialize_with = "ser_display")]
    pub log2_upper: BigRat,
    pub majorant: Majorant,
    pub assumption: String,
}

impl LogTail {
    /// The bound as an exact rational, when its exponent is moderate.
    pub fn rational_upper(&self) -> Option<BigRat> {
        let bound = BigRat::from_integer((1i64 << 16).into());
        (self.reference.abs() <= bound).then(|| exp2_upper(&self.reference) * &self.scaled)
    }

    pub fn log2_approx(&self) -> f64 {
        approx(&self.log2_upper)
    }
}

/// Bounds `Σ_{n ≥ start} t_n` from brackets of `log2 t_n` for `n = start..=start+logs.len()−1`,
/// keeping the smallest bound over all cutoffs, so the result never grows with the cutoff.
pub(crate) fn log_tail(start: u64, logs: &[Bracket]) -> Result<LogTail, CertError> {
    if logs.len() <= MIN_RATIOS {
        return Err(CertError::TailUnavailable(format!(
            "at least {} terms are needed to fit a majorant",
            MIN_RATIOS + 1
        )));
    }
    let r = (&logs[0].hi * BigRat::from_integer(EXP_STEPS.into())).ceil() / BigRat::from_integer(EXP_STEPS.into());
    let tol = ratio_tolerance();
    let mut head = exp2_upper_clamped(&(&logs[0].hi - &r))?;
    let mut monotone = true;
    let mut s_min: Option<BigRat> = None;
    let mut best: Option<(BigRat, u64, Majorant)> = None;
    for i in 1..logs.len() {
        let n = start + i as u64;
        head += exp2_upper_clamped(&(&logs[i].hi - &r))?;
        let ratio = &logs[i] - &logs[i - 1];
        if i >= 2 {
            let prev = &logs[i - 1] - &logs[i - 2];
            if ratio.lo > &prev.hi + &tol {
                monotone = false;
            }
        }
        // local exponent of t_m ≈ m^{-s} between n−1 and n
        let step = log2_rat(&BigRat::new(BigInt::from(n), BigInt::from(n - 1)), PRECISIONS[0]).hi;
        let s = if ratio.hi.is_negative() && step.is_positive() { -&ratio.hi / &step } else { BigRat::zero() };
        s_min = Some(match s_min {
            Some(m) if m <= s => m,
            _ => s,
        });
        if i < MIN_RATIOS {
            continue;
        }
        let mut candidates = Vec::new();
        if monotone && ratio.hi.is_negative() {
            let rho = &ratio.hi;
            // Σ_{j ≥ 1} ρ^j = ρ/(1−ρ), at most 2ρ once ρ ≤ 1/2
            let tail_log = if *rho <= -BigRat::one() {
                Some(rho + BigRat::one())
            } else {
                let rho_up = exp2_upper(rho);
                (rho_up < BigRat::one()).then(|| rho - log2_rat(&(BigRat::one() - rho_up), PRECISIONS[0]).lo)
            };
            if let Some(t) = tail_log {
                candidates.push((&logs[i].hi + t, Majorant::Geometric { log2_ratio: rho.to_string() }));
            }
        }
        let s = s_min.clone().unwrap_or_default();
        if s > BigRat::one() {
            let tail_log =
                log2_uint(&BigUint::from(n), PRECISIONS[0]).hi - log2_rat(&(&s - BigRat::one()), PRECISIONS[0]).lo;
            candidates.push((&logs[i].hi + tail_log, Majorant::Power { exponent: s.to_string() }));
        }
        for (rem, maj) in candidates {
            let total = &head + exp2_upper_clamped(&(rem - &r))?;
            if best.as_ref().is_none_or(|(b, _, _)| total < *b) {
                best = Some((total, n, maj));
            }
        }
    }
    let (scaled, cutoff, majorant) =
        best.ok_or_else(|| CertError::TailUnavailable("terms show neither geometric nor summable power decay".into()))?;
    let log2_upper = &r + log2_rat(&scaled, PRECISIONS[0]).hi;
    Ok(LogTail {
        start,
        cutoff,
        max_cutoff: start + logs.len() as u64 - 1,
        assumption: majorant.assumption().to_string(),
        reference: r,
        scaled,
        log2_upper,
        majorant,
    })
}

/// Brackets of `log2 |b_{k,n} / a_{k,n}|` for `n = from..=to`.
fn series_logs(fam: &SeriesFamily, k: usize, from: u64, to: u64, prec: u32) -> Result<Vec<Bracket>, CertError> {
    (from..=to)
        .map(|n| {
            let t = fam.term(k, n)?;
            if t.b.is_zero() {
                return Err(CertError::TailUnavailable(format!("b_{{{k},{n}}} is zero")));
            }
            Ok(&log2_uint(t.b.magnitude(), prec) - &t.a.log2_bracket(prec))
        })
        .collect()
}

/// Which tail lemma the bound instantiates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TailKind {
    /// `Σ_{n ≥ N} |b_n/a_n| ≤ a_N^{−γ}`, for non-decreasing `a_n`.
    #[serde(rename = "gamma")]
    Gamma,
    /// `Σ_{n ≥ N} |b_n/a_n| ≤ 2^{(log2 a_N)^Γ} / a_N`, additionally needing `a_n ≥ 2^n`.
    #[serde(rename = "Gamma")]
    BigGamma,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TailBound {
    pub k: usize,
    pub n: u64,
    pub kind: TailKind,
    /// Least exponent making the lemma-shaped bound hold at this `N`, OBSERVED only.
    pub observed_exponent: Option<f64>,
    /// Rational upper bound on `Σ_{n ≥ N} |b_{k,n}/a_{k,n}|`, when printable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<String>,
    pub tail: LogTail,
}

impl TailBound {
    pub fn upper_rational(&self) -> Option<BigRat> {
        self.tail.rational_upper()
    }
}

/// Certified upper bound on `Σ_{n ≥ N} |b_{k,n}/a_{k,n}|`, summing exactly up to
/// `cutoff` (default `N + 24`) and bounding the rest by a fitted majorant.
pub fn tail_bound(
    fam: &SeriesFamily,
    k: usize,
    n: u64,
    kind: TailKind,
    cutoff: Option<u64>,
) -> Result<TailBound, CertError> {
    if n == 0 {
        return Err(CertError::InvalidArgument("N must be at least 1".into()));
    }
    let cutoff = cutoff.unwrap_or(n + DEFAULT_TAIL_TERMS).max(n + MIN_RATIOS as u64);
    let prec = PRECISIONS[0];
    let mut prev = fam.denominator(k, n)?.abs();
    for i in n..=cutoff {
        let a = fam.denominator(k, i)?.abs();
        if i > n
            && prev.cmp_abs(&a) != Some(std::cmp::Ordering::Less)
            && prev.cmp_abs(&a) != Some(std::cmp::Ordering::Equal)
        {
            return Err(CertError::HypothesisNotWitnessed(format!("a_{{{k},n}} is not non-decreasing at n = {i}")));
        }
        if kind == TailKind::BigGamma {
            let big = refine(|p| Bracket::from_int(i as i64).le(&a.log2_bracket(p)));
            if big != Decision::True {
                return Err(CertError::HypothesisNotWitnessed(format!("a_{{{k},{i}}} ≥ 2^{i} is not witnessed")));
            }
        }
        prev = a;
    }
    let logs = series_logs(fam, k, n, cutoff, prec)?;
    let tail = log_tail(n, &logs)?;
    let la = approx(&fam.denominator(k, n)?.log2_bracket(prec).lo);
    let lt = tail.log2_approx();
    let observed_exponent = match kind {
        TailKind::Gamma => (la > 0.0).then(|| -lt / la),
        TailKind::BigGamma => {
            let excess = lt + la;
            (la > 1.0).then(|| if excess > 1.0 { excess.ln() / la.ln() } else { 0.0 })
        }
    };
    Ok(TailBound { k, n, kind, observed_exponent, upper: tail.rational_upper().map(|r| r.to_string()), tail })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZStatistic {
    pub n: u64,
    pub m: u64,
    #[serde(serialize_with = "ser_display")]
    pub c: BigRat,
    /// Sound bracket of `log2 Z_N`, as decimal rationals; the upper end carries the tail majorant.
    #[serde(serialize_with = "ser_display")]
    pub log2_lower: BigRat,
    #[serde(serialize_with = "ser_display")]
    pub log2_upper: BigRat,
    pub log2_approx: f64,
    /// `2^{⌈log2_upper⌉}`, a rational upper bound on `Z_N` when it is printable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper: Option<String>,
    pub tail: LogTail,
}

impl ZStatistic {
    /// Upper bound on `Z_N` below `q` is certified.
    pub fn below(&self, q: &BigRat) -> bool {
        q.is_positive() && self.log2_upper < log2_rat(q, PRECISIONS[0]).lo
    }
}

/// `Z_N = 2^{N²(log2 a_{N−1})^c} (Π_{n<N} a_n)^{M+1} Σ_{n ≥ N} |b_n/a_n|` for series 1, with
/// `a_0 = 1`.
pub fn z_statistic(
    fam: &SeriesFamily,
    m: u64,
    c: &BigRat,
    n: u64,
    cutoff: Option<u64>,
) -> Result<ZStatistic, CertError> {
    if !(c.is_positive() && *c < BigRat::one()) {
        return Err(CertError::InvalidArgument(format!("c = {c} is not in (0, 1)")));
    }
    if n == 0 {
        return Err(CertError::InvalidArgument("N must be at least 1".into()));
    }
    let prec = PRECISIONS[0];
    let cutoff = cutoff.unwrap_or(n + DEFAULT_TAIL_TERMS).max(n + MIN_RATIOS as u64);
    let logs = series_logs(fam, 1, n, cutoff, prec)?;
    let tail = log_tail(n, &logs)?;
    let mut prod = Bracket::zero();
    for i in 1..n {
        prod = &prod + &fam.denominator(1, i)?.abs().log2_bracket(prec);
    }
    let prev = if n > 1 { fam.denominator(1, n - 1)?.abs().log2_bracket(prec) } else { Bracket::zero() };
    let front = prev.pow_rat(c, prec).scale(&BigRat::from_integer(BigInt::from(n) * BigInt::from(n)));
    let base = &front + &prod.scale(&BigRat::from_integer(BigInt::from(m + 1)));
    let log2_upper = &base.hi + &tail.log2_upper;
    let log2_lower = &base.lo + &logs[0].lo;
    let ceil = log2_upper.ceil().to_integer();
    let upper = (ceil.magnitude().bits() <= 16).then(|| pow2(&ceil).to_string());
    Ok(ZStatistic { n, m, c: c.clone(), log2_approx: approx(&log2_upper), log2_lower, log2_upper, upper, tail })
}

/// Outcome of the analytic gap inequality at one `N`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GapReport {
    pub polynomial: String,
    pub n: u64,
    pub d: u32,
    #[serde(serialize_with = "ser_display")]
    pub kappa: BigRat,
    /// Bound on every `|α_{k,N}|` fed to the Lipschitz constant.
    #[serde(serialize_with = "ser_display")]
    pub radius: BigRat,
    #[serde(serialize_with = "ser_display")]
    pub lipschitz_constant: BigRat,
    /// `log2` of the integrality lower bound `(Π a_n^K 2^{(K−1)(log2 a_n)^κ})^{−d}`, as `[lo, hi]`.
    pub log2_lower_bound: [String; 2],
    /// `log2` of `C·Σ_{n>N} 4^{(log2 a_n)^κ}/a_n`, as `[lo, hi]`.
    pub log2_majorant: [String; 2],
    pub log2_lower_bound_approx: f64,
    pub log2_majorant_approx: f64,
    pub holds: Decision,
    pub tail: LogTail,
    pub envelope: Vec<CheckReport>,
}

struct GapSides {
    lower: Bracket,
    majorant: Bracket,
    tail: LogTail,
}

fn gap_sides(
    fam: &SeriesFamily,
    n: u64,
    d: u32,
    kappa: &BigRat,
    log2_c: &Bracket,
    cutoff: u64,
    prec: u32,
) -> Result<GapSides, CertError> {
    let kk = BigRat::from_integer(BigInt::from(fam.k()));
    let k1 = BigRat::from_integer(BigInt::from(fam.k() - 1));
    let mut sum = Bracket::zero();
    for i in 1..=n {
        let l = fam.envelope(i)?.abs().log2_bracket(prec);
        sum = &sum + &(&l.scale(&kk) + &l.pow_rat(kappa, prec).scale(&k1));
    }
    let lower = -sum.scale(&BigRat::from_integer(BigInt::from(d)));
    let logs: Vec<Bracket> = (n + 1..=cutoff)
        .map(|i| {
            let l = fam.envelope(i)?.abs().log2_bracket(prec);
            Ok(&l.pow_rat(kappa, prec).scale(&BigRat::from_integer(2.into())) - &l)
        })
        .collect::<Result<_, CertError>>()?;
    let tail = log_tail(n + 1, &logs)?;
    let majorant = Bracket { lo: &log2_c.lo + &logs[0].lo, hi: &log2_c.hi + &tail.log2_upper };
    Ok(GapSides { lower, majorant, tail })
}

/// Whether `(Π_{n ≤ N} a_n^K 2^{(K−1)(log2 a_n)^κ})^{−d} > C·Σ_{n>N} 4^{(log2 a_n)^κ}/a_n`, with `d`
/// and `κ` from the family's parameters and `a_n` its shared envelope.
pub fn erdos_gap_check(fam: &SeriesFamily, poly: &IntPolynomial, n: u64) -> Result<GapReport, CertError> {
    if n == 0 {
        return Err(CertError::InvalidArgument("N must be at least 1".into()));
    }
    if poly.nvars() != fam.k() {
        return Err(CertError::VariableCount { expected: fam.k(), got: poly.nvars() });
    }
    if poly.is_zero() {
        return Err(CertError::ZeroPolynomial);
    }
    let params = fam.params();
    let d = params.d.max(poly.degree());
    let kappa = params.kappa.clone();
    let envelope = check_envelope(fam, params, SandwichMode::Standard { k: fam.k(), d }, [1, n])?;
    let mut radius = BigRat::one();
    for k in 1..=fam.k() {
        let logs = series_logs(fam, k, 1, 1 + DEFAULT_TAIL_TERMS, PRECISIONS[0])?;
        let whole = log_tail(1, &logs)?
            .rational_upper()
            .ok_or_else(|| CertError::TailUnavailable(format!("series {k} is too large to bound")))?;
        radius = radius.max(whole.ceil());
    }
    let c = poly.lipschitz_constant(&radius)?;
    let cutoff = n + 1 + DEFAULT_TAIL_TERMS;
    let mut sides = None;
    let holds = refine(|prec| {
        let log2_c = log2_rat(&c, prec);
        match gap_sides(fam, n, d, &kappa, &log2_c, cutoff, prec) {
            Ok(s) => {
                let h = if s.lower.lo > s.majorant.hi {
                    Decision::True
                } else if s.lower.hi <= s.majorant.lo {
                    Decision::False
                } else {
                    Decision::Unknown
                };
                sides = Some(Ok(s));
                h
            }
            Err(e) => {
                sides = Some(Err(e));
                Decision::False
            }
        }
    });
    let s = sides.expect("refine runs at least once")?;
    Ok(GapReport {
        polynomial: poly.to_string(),
        n,
        d,
        kappa,
        radius,
        lipschitz_constant: c,
        log2_lower_bound: [s.lower.lo.to_string(), s.lower.hi.to_string()],
        log2_majorant: [s.majorant.lo.to_string(), s.majorant.hi.to_string()],
        log2_lower_bound_approx: approx(&s.lower.lo),
        log2_majorant_approx: approx(&s.majorant.hi),
        holds,
        tail: s.tail,
        envelope,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryRow {
    pub n: u64,
    /// `a_N > (1+1/N²)^{(M+2)^N} max_{k0 ≤ n < N} a_n^{(M+2)^{N−n}}`.
    pub first: Decision,
    /// `a_N > (1+1/N²)^{(M+2)^N} Π_{k0 ≤ n < N} a_n^{M+1}`.
    pub second: Decision,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorollaryReport {
    pub m: u64,
    pub k0: u64,
    pub horizon: u64,
    pub rows: Vec<CorollaryRow>,
    /// Every `N` where both inequalities were certified.
    pub witnesses: Vec<u64>,
}

/// The two growth inequalities for every `k0 < N ≤ H`, on the shared envelope.
pub fn corollary_witnesses(fam: &SeriesFamily, m: u64, k0: u64, horizon: u64) -> Result<CorollaryReport, CertError> {
    if k0 == 0 {
        return Err(CertError::InvalidArgument("k0 must be at least 1".into()));
    }
    let env: Vec<_> = (1..=horizon).map(|n| fam.envelope(n).map(|a| a.abs())).collect::<Result<_, _>>()?;
    let base = BigUint::from(m + 2);
    let mut rows = Vec::new();
    for n in k0 + 1..=horizon {
        let growth = num_traits::pow(base.clone(), n as usize);
        let slack = |prec| {
            let q = BigRat::one() + BigRat::new(BigInt::one(), BigInt::from(n * n));
            log2_rat(&q, prec).scale_int(&growth)
        };
        let lhs = |prec| env[n as usize - 1].log2_bracket(prec);
        let first = refine(|prec| {
            let mut worst: Option<Bracket> = None;
            for i in k0..n {
                let w =
                    env[i as usize - 1].log2_bracket(prec).scale_int(&num_traits::pow(base.clone(), (n - i) as usize));
                worst = Some(match worst {
                    Some(b) => b.max(&w),
                    None => w,
                });
            }
            let rhs = &slack(prec) + &worst.expect("k0 < N");
            rhs.lt(&lhs(prec))
        });
        let second = refine(|prec| {
            let mut prod = Bracket::zero();
            for i in k0..n {
                prod = &prod + &env[i as usize - 1].log2_bracket(prec);
            }
            let rhs = &slack(prec) + &prod.scale_int(&BigUint::from(m + 1));
            rhs.lt(&lhs(prec))
        });
        rows.push(CorollaryRow { n, first, second });
    }
    let witnesses = rows.iter().filter(|r| r.first.is_true() && r.second.is_true()).map(|r| r.n).collect();
    Ok(CorollaryReport { m, k0, horizon, rows, witnesses })
}
