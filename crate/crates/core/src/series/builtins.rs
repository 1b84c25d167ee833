//! Registry of the named example families.

use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::primes::{factor_u64, is_prime, primes_from};
use crate::arith::FactoredInteger;

use super::family::{EnvelopeFn, HypothesisParams, PrimeSet, SeriesFamily, Term};
use super::seq::SeqExpr;
use super::sign::SignFunction;
use super::{Preset, SeriesError};

/// Constraints on parameter sequences are validated for `n` up to this index.
pub const VALIDATION_HORIZON: u64 = 16;

/// Primes precomputed for families indexed by a prime sequence.
const PRIME_CACHE: usize = 512;

pub const BUILTIN_NAMES: [&str; 13] = [
    "erdos",
    "ex-thm1",
    "ex-thm2-nk",
    "ex-thm2-nu2n",
    "ex-thm3",
    "zeta5",
    "ex-p-irr",
    "ex-p-transc",
    "ex-inf-linear",
    "ex-inf-alg",
    "ex-inf-k2",
    "ex-hk12",
    "table",
];

/// Parameters accepted by the builtin families. Each family reads only some of them and
/// rejects the rest.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinParams {
    /// Number of series `K`.
    #[serde(alias = "K", skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// The two indices `k ≠ l` for the pairwise families (default `[1, 2]`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exponents: Option<Vec<u32>>,
    /// Base sequence `a_n` (or `g(n)`).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<SeqExpr>,
    /// Exponent sequence `r_n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<SeqExpr>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    /// Magnitude of every numerator (default 1).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub numerator: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign: Option<SignFunction>,
    /// First prime of the prime sequence `p_n`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_start: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<TableSpec>,
}

/// Explicit finite terms: `b[k][n−1]`, `a[k][n−1]` and an optional envelope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableSpec {
    pub b: Vec<Vec<IntLit>>,
    pub a: Vec<Vec<IntLit>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub envelope: Option<Vec<IntLit>>,
}

/// An integer written either as a JSON number or as a decimal string.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IntLit {
    Small(i64),
    Big(String),
}

impl IntLit {
    pub fn value(&self) -> Result<BigInt, SeriesError> {
        match self {
            IntLit::Small(v) => Ok(BigInt::from(*v)),
            IntLit::Big(s) => s.trim().parse().map_err(|_| SeriesError::ParameterViolation {
                family: "table".into(),
                constraint: format!("'{s}' is not an integer"),
            }),
        }
    }
}

fn violation(family: &str, constraint: impl Into<String>) -> SeriesError {
    SeriesError::ParameterViolation { family: family.into(), constraint: constraint.into() }
}

struct Ctx<'a> {
    name: &'a str,
    params: &'a BuiltinParams,
}

impl Ctx<'_> {
    fn allow(&self, allowed: &[&str]) -> Result<(), SeriesError> {
        let p = self.params;
        let given = [
            ("k", p.k.is_some()),
            ("exponents", p.exponents.is_some()),
            ("a", p.a.is_some()),
            ("r", p.r.is_some()),
            ("z", p.z.is_some()),
            ("p", p.p.is_some()),
            ("numerator", p.numerator.is_some()),
            ("sign", p.sign.is_some()),
            ("prime_start", p.prime_start.is_some()),
            ("table", p.table.is_some()),
        ];
        for (key, present) in given {
            if present && !allowed.contains(&key) {
                return Err(violation(self.name, format!("parameter '{key}' is not used by this family")));
            }
        }
        Ok(())
    }

    fn seq(&self, given: &Option<SeqExpr>, default: &str) -> Arc<SeqExpr> {
        Arc::new(given.clone().unwrap_or_else(|| SeqExpr::parse(default).expect("valid default")))
    }

    fn k(&self, default: usize) -> Result<usize, SeriesError> {
        match self.params.k.unwrap_or(default) {
            0 => Err(violation(self.name, "K must be positive")),
            k => Ok(k),
        }
    }

    fn z(&self) -> Result<u64, SeriesError> {
        match self.params.z.unwrap_or(2) {
            z if z >= 2 => Ok(z),
            _ => Err(violation(self.name, "z must be at least 2")),
        }
    }

    fn numerator(&self) -> Result<i64, SeriesError> {
        match self.params.numerator.unwrap_or(1) {
            0 => Err(violation(self.name, "numerators must be nonzero")),
            m => Ok(m),
        }
    }

    fn sign(&self, default: SignFunction) -> SignFunction {
        self.params.sign.clone().unwrap_or(default)
    }

    fn prime_start(&self, default: u64, odd: bool) -> Result<u64, SeriesError> {
        let s = self.params.prime_start.unwrap_or(default);
        if odd && s < 3 {
            return Err(violation(self.name, "the prime sequence must consist of odd primes (prime_start ≥ 3)"));
        }
        Ok(s.max(2))
    }

    fn pair(&self) -> Result<[u32; 2], SeriesError> {
        let e = self.params.exponents.clone().unwrap_or_else(|| vec![1, 2]);
        match e.as_slice() {
            [k, l] if *k >= 1 && k < l => Ok([*k, *l]),
            _ => Err(violation(self.name, "exponents must be two increasing positive integers")),
        }
    }
}

/// Smallest prime dividing `z ≥ 2`.
fn least_prime_factor(z: u64) -> u64 {
    factor_u64(z)[0].0
}

fn z_factored(z: u64) -> FactoredInteger {
    FactoredInteger::from_bigint(&BigInt::from(z)).expect("z ≥ 2")
}

fn pow_u(x: &FactoredInteger, e: BigUint) -> Result<FactoredInteger, SeriesError> {
    Ok(x.pow(&e)?)
}

fn signed(sign: &SignFunction, magnitude: i64, k: usize, n: u64) -> BigInt {
    BigInt::from(sign.sign(k, n)) * BigInt::from(magnitude)
}

fn require_coprime(name: &str, a: &SeqExpr, to: &[u64], what: &str) -> Result<(), SeriesError> {
    for n in 1..=VALIDATION_HORIZON {
        let v = a.eval_nonzero(n)?;
        for &p in to {
            if !v.valuation(p).is_zero() {
                return Err(violation(name, format!("a_n must be {what}, but {p} divides a_{n}")));
            }
        }
    }
    Ok(())
}

fn sequence_values(r: &SeqExpr) -> Result<Vec<BigUint>, SeriesError> {
    (1..=VALIDATION_HORIZON).map(|n| r.eval_small(n)).collect()
}

fn require_strictly_increasing(name: &str, r: &SeqExpr) -> Result<(), SeriesError> {
    let v = sequence_values(r)?;
    if let Some(i) = v.windows(2).position(|w| w[0] >= w[1]) {
        return Err(violation(name, format!("r_n must be strictly increasing (fails at n = {})", i + 1)));
    }
    Ok(())
}

fn require_nondecreasing(name: &str, r: &SeqExpr) -> Result<(), SeriesError> {
    let v = sequence_values(r)?;
    if let Some(i) = v.windows(2).position(|w| w[0] > w[1]) {
        return Err(violation(name, format!("r_n must be non-decreasing (fails at n = {})", i + 1)));
    }
    Ok(())
}

fn require_pairwise_distinct(name: &str, r: &SeqExpr) -> Result<(), SeriesError> {
    let v = sequence_values(r)?;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            if v[i] == v[j] {
                return Err(violation(name, format!("r_n must be pairwise different (r_{} = r_{})", i + 1, j + 1)));
            }
        }
    }
    Ok(())
}

/// The primes `p_1, p_2, …` from a starting point, cached up to a fixed length.
#[derive(Clone)]
struct PrimeSeq {
    start: u64,
    cache: Arc<Vec<u64>>,
}

impl PrimeSeq {
    fn new(start: u64) -> Self {
        PrimeSeq { start, cache: Arc::new(primes_from(start, PRIME_CACHE)) }
    }

    fn first(&self, n: u64) -> Vec<u64> {
        if (n as usize) <= self.cache.len() {
            self.cache[..n as usize].to_vec()
        } else {
            primes_from(self.start, n as usize)
        }
    }

    fn nth(&self, n: u64) -> u64 {
        *self.first(n).last().expect("n ≥ 1")
    }

    /// `p_1 ⋯ p_n` in factored form.
    fn primorial(&self, n: u64) -> FactoredInteger {
        let f = self.first(n).into_iter().map(|p| (p, BigUint::one()));
        FactoredInteger::new(false, f, BigUint::one()).expect("nonzero")
    }
}

fn prime_power(p: u64, e: BigUint) -> FactoredInteger {
    FactoredInteger::prime_power(p, e)
}

/// Builds a named builtin family.
pub fn builtin_family(name: &str, params: &BuiltinParams) -> Result<SeriesFamily, SeriesError> {
    let cx = Ctx { name, params };
    let family = match name {
        "erdos" => erdos(&cx)?,
        "ex-thm1" => linear_nu_p(&cx)?,
        "ex-thm2-nk" => alg_indep_power(&cx)?,
        "ex-thm2-nu2n" => alg_indep_nu2(&cx)?,
        "ex-thm3" => pair_exponential(&cx)?,
        "zeta5" => zeta5(&cx)?,
        "ex-p-irr" => p_irrational(&cx, false)?,
        "ex-p-transc" => p_irrational(&cx, true)?,
        "ex-inf-linear" => infinite_linear(&cx)?,
        "ex-inf-alg" => infinite_alg(&cx)?,
        "ex-inf-k2" => infinite_pair(&cx)?,
        "ex-hk12" => prime_set_irrational(&cx)?,
        "table" => table(&cx)?,
        _ => {
            return Err(SeriesError::UnknownFamily {
                name: name.to_string(),
                available: BUILTIN_NAMES.iter().map(|s| s.to_string()).collect(),
            })
        }
    };
    Ok(family)
}

fn erdos(cx: &Ctx) -> Result<SeriesFamily, SeriesError> {
    cx.allow(&["k", "a", "p", "numerator", "sign"])?;
    if cx.k(1)? != 1 {
        return Err(violation(cx.name, "this family has a single series (K = 1)"));
    }
    let a = cx.seq(&cx.params.a, "2^(3^n)");
    let p = cx.params.p.unwrap_or(2);
    let sign = cx.sign(SignFunction::Constant { value: 0 });
    let m = cx.numerator()?;
    let fam =
        SeriesFamily::custom(cx.name, 1, move |k, n| Ok(Term::new(signed(&sign, m, k, n), a.eval_nonzero(n)?)), None)
            .with_preset(Preset::General)
            .with_params(HypothesisParams { primes: PrimeSet::Single(p), ..Default::default() })
            .with_description("Σ ±1/a_n, a single series whose envelope is its own denominator");
    Ok(fam)
}

fn linear_nu_p(cx: &Ctx) -> Result<SeriesFamily, SeriesError> {
    cx.allow(&["k", "a", "z", "p", "numerator", "sign"])?;
    let kk = cx.k(2)?;
    let z = cx.z()?;
    let p = cx.params.p.unwrap_or(2);
    if !is_prime(p) {
        return Err(violation(cx.name, format!("p = {p} is not prime")));
    }
    let a = cx.seq(&cx.params.a, "3^(n!)");
    let zprimes: Vec<u64> = factor_u64(z).into_iter().map(|(q, _)| q).collect();
    require_coprime(cx.name, &a, &zprimes, "coprime to z")?;
    let sign = cx.sign(SignFunction::KTimesN);
    let m = cx.numerator()?;
    let zf = z_factored(z);
    let a_env = a.clone();
    let term = move |k: usize, n: u64| {
        let nu = factor_u64(n).into_iter().find(|&(q, _)| q == p).map_or(0, |(_, e)| e as u64);
        let den = a.eval_nonzero(n)?.mul(&pow_u(&zf, BigUint::from(k as u64 * nu))?);
        Ok(Term::new(signed(&sign, m, k, n), den))
    };
    let env: Arc<EnvelopeFn> = Arc::new(move |n| a_env.eval_nonzero(n));
    Ok(SeriesFamily::custom(cx.name, kk, term, Some(env))
        .with_preset(Preset::General)
        .with_params(HypothesisParams { primes: PrimeSet::Single(least_prime_factor(z)), ..Default::default() })
        .with_description("α_k = Σ (−1)^{f_k(n)} / (a_n z^{k·ν_p(n)})"))
}

fn alg_indep_power(cx: &Ctx) -> Result<SeriesFamily, SeriesError> {
    cx.allow(&["k", "a", "numerator", "sign"])?;
    let kk = cx.k(2)?;
    let a = cx.seq(&cx.params.a, "3^(n!)");
    require_coprime(cx.name, &a, &[2], "odd")?;
    let sign = cx.sign(SignFunction::KTimesN);
    let m = cx.numerator()?;
    let a_env = a.clone();
    let term = move |k: usize, n: u64| {
        let e = BigUint::from(n).pow(k as u32);
        let den = a.eval_nonzero(n)?.mul(&prime_power(2, e));
        Ok(Term::new(signed(&sign, m, k, n), den))
    };
    let env: Arc<EnvelopeFn> = Arc::new(move |n| a_env.eval_nonzero(n));
    Ok(SeriesFamily::custom(cx.name, kk, term, Some(env))
        .with_preset(Preset::AlgIndep)
        .with_params(HypothesisParams::default())
        .with_description("α_k = Σ (−1)^{f_k(n)} / (a_n 2^{n^k}), a_n odd"))
}

fn alg_indep_nu2(cx: &Ctx) -> Result<SeriesFamily, SeriesError> {
    cx.allow(&["k", "a", "z", "numerator", "sign"])?;
    let kk = cx.k(2)?;
    let z = cx.z()?;
    let a = cx.seq(&cx.params.a, "3^(n!)");
    let zprimes: Vec<u64> = factor_u64(z).into_iter().map(|(q, _)| q).collect();
    require_coprime(cx.name, &a, &zprimes, "coprime to z")?;
    let sign = cx.sign(SignFunction::KTimesN);
    let m = cx.numerator()?;
    let zf = z_factored(z);
    let a_env = a.clone();
    let term = move |k: usize, n: u64| {
        let nu2 = BigUint::from(n.trailing_zeros() as u64);
        let den = a.eval_nonzero(n)?.mul(&pow_u(&zf, nu2.pow(k as u32))?);
        Ok(Term::new(signed(&sign, m, k, n), den))
    };
    let env: Arc<EnvelopeFn> = Arc::new(move |n| a_env.eval_nonzero(n));
    Ok(SeriesFamily::custom(cx.name, kk, term, Some(env))
        .with_preset(Preset::AlgIndep)
        .with_params(HypothesisParams { primes: PrimeSet::Single(least_prime_factor(z)), ..Default::default() })
        .with_description("α_k = Σ (−1)^{f_k(n)} / (a_n z^{ν_2(n)^k}), gcd(a_n, z) = 1"))
}

fn pair_exponential(cx: &Ctx) -> Result<SeriesFamily, SeriesError> {
    cx.allow(&["k", "exponents", "a", "z", "numerator", "sign"])?;
    if cx.k(2)? != 2 {
        return Err(violation(cx.name, "this family is a pair of series (K = 2)"));
    }
    let ks = cx.pair()?;
    let z = cx.z()?;
    let a = cx.seq(&cx.params.a, "3^((n+2)!)");
    let zprimes: Vec<u64> = factor_u64(z).into_iter().map(|(q, _)| q).collect();
    require_coprime(cx.name, &a, &zprimes, "coprime to z")?;
    let sign = cx.sign(SignFunction::KTimesN);
    let m = cx.numerator()?;
    let zf = z_factored(z);
    let a_env = a.clone();
    let term = move |i: usize, n: u64| {
        let k = ks[i - 1];
        let e = (BigUint::from(3u32).pow(k) - 1u32) * n;
        let den = a.eval_nonzero(n)?.mul(&pow_u(&zf, e)?);
        Ok(Term::new(signed(&sign, m, k as usize, n), den))
    };
    let env: Arc<EnvelopeFn> = Arc::new(move |n| a_env.eval_nonzero(n));
    Ok(SeriesFamily::custom(cx.name, 2, term, Some(env))
        .with_preset(Preset::K2)
        .with_params(HypothesisParams { d: 3, primes: PrimeSet::Single(least_prime_factor(z)), ..Default::default() })
        .with_description("α_k = Σ (−1)^{f_k(n)} / (a_n z^{(3^k − 1)n}) for two indices k < l"))
}

fn zeta5(cx: &Ctx) -> Result<SeriesFamily, SeriesError> {
    cx.allow(&["a", "numerator", "sign"])?;
    let g = cx.seq(&cx.params.a, "3^(3^n)");
    require_coprime(cx.name, &g, &[2], "odd")?;
    let sign = cx.sign(SignFunction::KTimesN);
    let m = cx.numerator()?;
    let term = move |k: usize, n: u64| {
        let n5 = FactoredInteger::from_bigint(&BigInt::from(n))?.pow(&BigUint::from(5u32))?;
        Ok(Term::new(signed(&sign, m, k, n), g.eval_nonzero(n)?.mul(&n5)))
    };
    Ok(SeriesFamily::custom(cx.name, 1, term, None)
        .with_preset(Preset::General)
        .with_params(HypothesisParams::default())
        .with_description("Σ (−1)^{f(n)} / (g(n) n^5), g(n) odd"))
}

fn p_irrational(cx: &Ctx, transcendence: bool) -> Result<SeriesFamily, SeriesError> {
    cx.allow(&["a", "r", "z", "numerator", "sign"])?;
    let z = cx.z()?;
    let a = cx.seq(&cx.params.a, "3^(n!)");
    let r = cx.seq(&cx.params.r, "n");
    let zprimes: Vec<u64> = factor_u64(z).into_iter().map(|(q, _)| q).collect();
    require_coprime(cx.name, &a, &zprimes, "coprime to z")?;
    require_pairwise_distinct(cx.name, &r)?;
    let sign = cx.sign(SignFunction::KTimesN);
    let m = cx.numerator()?;
    let zf = z_factored(z);
    let term = move |k: usize, n: u64| {
        let den = pow_u(&zf, r.eval_small(n)?)?.mul(&a.eval_nonzero(n)?);
        Ok(Term::new(signed(&sign, m, k, n), den))
    };
    let description = if transcendence {
        "Σ ±1/(z^{r_n} a_n) with pairwise different r_n, tested for transcendence growth"
    } else {
        "Σ ±1/(z^{r_n} a_n) with pairwise different r_n"
    };
    Ok(SeriesFamily::custom(cx.name, 1, term, None)
        .with_preset(Preset::PIrrational)
        .with_params(HypothesisParams {
            primes: PrimeSet::Single(least_prime_factor(z)),
            transcendence,
            ..Default::default()
        })
        .with_description(description))
}

fn infinite_linear(cx: &Ctx) -> Result<SeriesFamily, SeriesError> {
    cx.allow(&["k", "r", "prime_start", "numerator", "sign"])?;
    let kk = cx.k(2)?;
    let r = cx.seq(&cx.params.r, "n*3^n");
    require_strictly_increasing(cx.name, &r)?;
    if r.eval_small(1)?.is_zero() {
        return Err(violation(cx.name, "r_n must be positive"));
    }
    let primes = PrimeSeq::new(cx.prime_start(2, false)?);
    let sign = cx.sign(SignFunction::KTimesN);
    let m = cx.numerator()?;
    let (r_env, primes_env) = (r.clone(), primes.clone());
    let term = move |k: usize, n: u64| {
        let e = r.eval_small(n)? + k as u64;
        Ok(Term::new(signed(&sign, m, k, n), prime_power(primes.nth(n), e)))
    };
    let env: Arc<EnvelopeFn> = Arc::new(move |n| Ok(prime_power(primes_env.nth(n), r_env.eval_small(n)?)));
    let start = primes_start(cx, 2)?;
    Ok(SeriesFamily::custom(cx.name, kk, term, Some(env))
        .with_preset(Preset::GeneralInfinite)
        .with_params(HypothesisParams { primes: PrimeSet::Generator { start }, ..Default::default() })
        .with_description("α_k = Σ (−1)^{f_k(n)} / p_n^{k + r_n}, envelope p_n^{r_n}"))
}

fn primes_start(cx: &Ctx, default: u64) -> Result<u64, SeriesError> {
    cx.prime_start(default, default > 2)
}

fn infinite_alg(cx: &Ctx) -> Result<SeriesFamily, SeriesError> {
    cx.allow(&["k", "r", "prime_start", "numerator", "sign"])?;
    let kk = cx.k(2)?;
    let r = cx.seq(&cx.params.r, "n!");
    require_nondecreasing(cx.name, &r)?;
    let start = primes_start(cx, 3)?;
    let primes = PrimeSeq::new(start);
    let sign = cx.sign(SignFunction::KTimesN);
    let m = cx.numerator()?;
    let r_env = r.clone();
    let term = move |k: usize, n: u64| {
        let two = prime_power(2, r.eval_small(n)?);
        let rest = if k == 1 {
            prime_power(primes.nth(n), BigUint::one())
        } else {
            primes.primorial(n).pow(&BigUint::from(n).pow(k as u32 - 1))?
        };
        Ok(Term::new(signed(&sign, m, k, n), two.mul(&rest)))
    };
    let env: Arc<EnvelopeFn> = Arc::new(move |n| Ok(prime_power(2, r_env.eval_small(n)?)));
    Ok(SeriesFamily::custom(cx.name, kk, term, Some(env))
        .with_preset(Preset::AlgIndepInfinite)
        .with_params(HypothesisParams { primes: PrimeSet::Generator { start }, ..Default::default() })
        .with_description("a_{1,n} = 2^{r_n} p_n, a_{k,n} = 2^{r_n} (p_1⋯p_n)^{n^{k−1}}, envelope 2^{r_n}"))
}

fn infinite_pair(cx: &Ctx) -> Result<SeriesFamily, SeriesError> {
    cx.allow(&["k", "exponents", "r", "prime_start", "numerator", "sign"])?;
    if cx.k(2)? != 2 {
        return Err(violation(cx.name, "this family is a pair of series (K = 2)"));
    }
    let ks = cx.pair()?;
    let r = cx.seq(&cx.params.r, "(n+2)!");
    require_nondecreasing(cx.name, &r)?;
    let start = primes_start(cx, 3)?;
    let primes = PrimeSeq::new(start);
    let sign = cx.sign(SignFunction::KTimesN);
    let m = cx.numerator()?;
    let r_env = r.clone();
    let term = move |i: usize, n: u64| {
        let k = ks[i - 1];
        let e = BigUint::from(3u32).pow(k) - 1u32;
        let den = prime_power(2, r.eval_small(n)?).mul(&prime_power(primes.nth(n), e));
        Ok(Term::new(signed(&sign, m, k as usize, n), den))
    };
    let env: Arc<EnvelopeFn> = Arc::new(move |n| Ok(prime_power(2, r_env.eval_small(n)?)));
    Ok(SeriesFamily::custom(cx.name, 2, term, Some(env))
        .with_preset(Preset::K2Infinite)
        .with_params(HypothesisParams { d: 3, primes: PrimeSet::Generator { start }, ..Default::default() })
        .with_description("α_k = Σ (−1)^{f_k(n)} / (2^{r_n} p_n^{3^k − 1}) for two indices k < l"))
}

fn prime_set_irrational(cx: &Ctx) -> Result<SeriesFamily, SeriesError> {
    cx.allow(&["a", "prime_start", "numerator", "sign"])?;
    let a = cx.seq(&cx.params.a, "2^(n!)");
    let start = cx.prime_start(3, false)?;
    let primes = PrimeSeq::new(start);
    require_coprime(cx.name, &a, &primes.first(VALIDATION_HORIZON), "coprime to every p_n")?;
    let sign = cx.sign(SignFunction::KTimesN);
    let m = cx.numerator()?;
    let term = move |k: usize, n: u64| {
        let pn = prime_power(primes.nth(n), BigUint::one());
        let den = match k {
            1 => a.eval_nonzero(n)?.mul(&pn),
            _ => a.eval_nonzero(n)?.mul(&pn).mul(&primes.primorial(n)),
        };
        Ok(Term::new(signed(&sign, m, k, n), den))
    };
    Ok(SeriesFamily::custom(cx.name, 2, term, None)
        .with_preset(Preset::PSetIrrational)
        .with_params(HypothesisParams { primes: PrimeSet::Generator { start }, ..Default::default() })
        .with_description("the sequences a_n p_n and a_n p_n^2 p_{n−1}⋯p_1, each on its own"))
}

fn table(cx: &Ctx) -> Result<SeriesFamily, SeriesError> {
    cx.allow(&["p", "prime_start", "table"])?;
    let spec = cx.params.table.as_ref().ok_or_else(|| violation(cx.name, "a 'table' parameter is required"))?;
    let kk = spec.a.len();
    if kk == 0 || spec.b.len() != kk {
        return Err(violation(cx.name, "table needs the same positive number of 'a' and 'b' rows"));
    }
    let len = spec.a[0].len();
    let mut rows = Vec::with_capacity(kk);
    for (brow, arow) in spec.b.iter().zip(&spec.a) {
        if brow.len() != len || arow.len() != len {
            return Err(violation(cx.name, "all table rows must have the same length"));
        }
        let mut row = Vec::with_capacity(len);
        for (b, a) in brow.iter().zip(arow) {
            let (b, a) = (b.value()?, a.value()?);
            if b.is_zero() || a.is_zero() {
                return Err(violation(cx.name, "table entries must be nonzero"));
            }
            row.push(Term::new(b, FactoredInteger::from_bigint(&a)?));
        }
        rows.push(row);
    }
    let env = match &spec.envelope {
        None => None,
        Some(e) if e.len() != len => return Err(violation(cx.name, "envelope length must match the rows")),
        Some(e) => {
            let vals = e
                .iter()
                .map(|v| {
                    let v = v.value()?;
                    if v <= BigInt::zero() {
                        return Err(violation("table", "envelope entries must be positive"));
                    }
                    Ok(FactoredInteger::from_bigint(&v)?)
                })
                .collect::<Result<Vec<_>, SeriesError>>()?;
            let name = cx.name.to_string();
            let f: Arc<EnvelopeFn> = Arc::new(move |n| {
                vals.get(n as usize - 1).cloned().ok_or(SeriesError::TermUnavailable { family: name.clone(), k: 0, n })
            });
            Some(f)
        }
    };
    let name = cx.name.to_string();
    let rows = Arc::new(rows);
    let term = move |k: usize, n: u64| {
        rows[k - 1].get(n as usize - 1).cloned().ok_or(SeriesError::TermUnavailable { family: name.clone(), k, n })
    };
    let primes = match (cx.params.p, cx.params.prime_start) {
        (Some(p), _) => PrimeSet::Single(p),
        (None, Some(start)) => PrimeSet::Generator { start },
        (None, None) => PrimeSet::Single(2),
    };
    primes.validate()?;
    Ok(SeriesFamily::custom(cx.name, kk, term, env)
        .with_preset(Preset::General)
        .with_params(HypothesisParams { primes, ..Default::default() })
        .with_description(format!("{kk} explicit series of {len} terms")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(json: &str) -> BuiltinParams {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn power_family_term() {
        let fam = builtin_family("ex-thm2-nk", &params(r#"{"a":"3^(n!)","K":2}"#)).unwrap();
        let t = fam.term(1, 3).unwrap();
        assert_eq!(t.b, BigInt::from(-1));
        assert_eq!(t.a.valuation(3), BigUint::from(6u32));
        assert_eq!(t.a.valuation(2), BigUint::from(3u32));
        assert!(t.a.residual().is_one());
        assert_eq!(fam.term(2, 3).unwrap().a.valuation(2), BigUint::from(9u32));
    }

    #[test]
    fn zeta5_with_trivial_weights() {
        let fam = builtin_family("zeta5", &params(r#"{"a":"1","sign":{"rule":"constant","value":0}}"#)).unwrap();
        for n in 1..=6u64 {
            let t = fam.term(1, n).unwrap();
            assert_eq!(t.b, BigInt::one());
            assert_eq!(t.a.materialize(64).unwrap(), BigInt::from(n.pow(5)));
        }
    }

    #[test]
    fn unknown_name() {
        match builtin_family("nope", &BuiltinParams::default()) {
            Err(SeriesError::UnknownFamily { available, .. }) => assert_eq!(available.len(), BUILTIN_NAMES.len()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn constraint_violations_are_named() {
        let even = builtin_family("ex-thm2-nk", &params(r#"{"a":"2*n"}"#)).unwrap_err();
        assert!(even.to_string().contains("odd"), "{even}");
        let repeat = builtin_family("ex-p-irr", &params(r#"{"r":"2"}"#)).unwrap_err();
        assert!(repeat.to_string().contains("pairwise"), "{repeat}");
        let gcd = builtin_family("ex-thm2-nu2n", &params(r#"{"z":6,"a":"3^n"}"#)).unwrap_err();
        assert!(gcd.to_string().contains("coprime"), "{gcd}");
        let unused = builtin_family("zeta5", &params(r#"{"z":3}"#)).unwrap_err();
        assert!(unused.to_string().contains("'z'"), "{unused}");
        let flat = builtin_family("ex-inf-linear", &params(r#"{"r":"5"}"#)).unwrap_err();
        assert!(flat.to_string().contains("strictly increasing"), "{flat}");
    }

    #[test]
    fn every_builtin_constructs_with_defaults() {
        for name in BUILTIN_NAMES.iter().filter(|n| **n != "table") {
            let fam = builtin_family(name, &BuiltinParams::default()).unwrap();
            for k in 1..=fam.k() {
                for n in 1..=12 {
                    let t = fam.term(k, n).unwrap();
                    assert!(!t.b.is_zero());
                    assert!(!t.a.is_negative());
                }
            }
            fam.envelope(12).unwrap();
        }
    }

    #[test]
    fn infinite_prime_families() {
        let fam = builtin_family("ex-inf-alg", &BuiltinParams::default()).unwrap();
        // a_{2,3} = 2^{3!} (3·5·7)^3
        let t = fam.term(2, 3).unwrap();
        assert_eq!(t.a.valuation(2), BigUint::from(6u32));
        for p in [3u64, 5, 7] {
            assert_eq!(t.a.valuation(p), BigUint::from(3u32));
        }
        let hk = builtin_family("ex-hk12", &BuiltinParams::default()).unwrap();
        // a_{2,3} = a_3 · 7 · (3·5·7): the newest prime appears squared.
        let t = hk.term(2, 3).unwrap();
        assert_eq!(t.a.valuation(7), BigUint::from(2u32));
        assert_eq!(t.a.valuation(3), BigUint::one());
    }

    #[test]
    fn table_family() {
        let fam = builtin_family("table", &params(r#"{"table":{"b":[[1,-1,"1"]],"a":[[2,4,"8"]]}}"#)).unwrap();
        assert_eq!(fam.term(1, 2).unwrap().b, BigInt::from(-1));
        assert!(matches!(fam.term(1, 4), Err(SeriesError::TermUnavailable { .. })));
    }
}
