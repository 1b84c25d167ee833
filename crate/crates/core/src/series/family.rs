use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{primes, BigRat, FactoredInteger};

use super::{Preset, SeriesError};

/// One term `b / a` of a series: signed numerator, positive denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub b: BigInt,
    pub a: FactoredInteger,
}

impl Term {
    pub fn new(b: BigInt, a: FactoredInteger) -> Self {
        let b = if a.is_negative() { -b } else { b };
        Term { b, a: a.abs() }
    }

    pub fn as_rational(&self, bit_cap: u64) -> Result<BigRat, SeriesError> {
        let a = self.a.materialize(bit_cap)?;
        Ok(BigRat::new(self.b.clone(), a))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}", self.b, self.a)
    }
}

/// The primes a hypothesis is checked against.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeSet {
    Single(u64),
    List(Vec<u64>),
    /// Increasing primes from `start`; checks use the first `sample` of them.
    Generator {
        start: u64,
    },
}

impl PrimeSet {
    /// The concrete primes to test, taking `sample` from a generator.
    pub fn sample(&self, sample: usize) -> Vec<u64> {
        match self {
            PrimeSet::Single(p) => vec![*p],
            PrimeSet::List(ps) => ps.clone(),
            PrimeSet::Generator { start } => primes::primes_from(*start, sample),
        }
    }

    pub fn validate(&self) -> Result<(), SeriesError> {
        let bad = match self {
            PrimeSet::Single(p) => (!primes::is_prime(*p)).then_some(*p),
            PrimeSet::List(ps) => ps.iter().copied().find(|&p| !primes::is_prime(p)),
            PrimeSet::Generator { .. } => None,
        };
        match bad {
            Some(p) => Err(SeriesError::Arith(crate::ArithError::InvalidPrime(p))),
            None => Ok(()),
        }
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeSet::Single(p) => write!(f, "{p}"),
            PrimeSet::List(ps) => {
                let s: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "[{}]", s.join(", "))
            }
            PrimeSet::Generator { start } => write!(f, "primes from {start}"),
        }
    }
}

/// Numeric parameters of the hypotheses, with the defaults used by the builtin presets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisParams {
    /// Degree bound for the polynomials a certificate rules out.
    pub d: u32,
    pub epsilon: BigRat,
    pub kappa: BigRat,
    /// Base of the growth test `limsup a_n^{1/A^n} = ∞`.
    pub a_base: u64,
    /// Bound on repeated valuations for the single-prime irrationality criterion.
    pub c_bound: u64,
    /// Factor by which late statistics must beat early ones to count as growth.
    pub growth_factor: BigRat,
    /// Smallest value a growing statistic must reach at the horizon.
    pub threshold: BigRat,
    pub primes: PrimeSet,
    pub prime_sample: usize,
    /// Also test the growth needed for transcendence (single-prime and prime-set presets).
    pub transcendence: bool,
}

impl Default for HypothesisParams {
    fn default() -> Self {
        HypothesisParams {
            d: 1,
            epsilon: BigRat::new(1.into(), 2.into()),
            kappa: BigRat::new(1.into(), 2.into()),
            a_base: 4,
            c_bound: 1,
            growth_factor: BigRat::from_integer(2.into()),
            threshold: BigRat::one(),
            primes: PrimeSet::Single(2),
            prime_sample: 3,
            transcendence: false,
        }
    }
}

pub type TermFn = dyn Fn(usize, u64) -> Result<Term, SeriesError> + Send + Sync;
pub type EnvelopeFn = dyn Fn(u64) -> Result<FactoredInteger, SeriesError> + Send + Sync;

/// `K` rational series `α_k = Σ_n b_{k,n} / a_{k,n}` sharing a growth envelope `a_n`.
///
/// Indices are 1-based: `k ∈ 1..=K`, `n ≥ 1`.
#[derive(Clone)]
pub struct SeriesFamily {
    name: String,
    k: usize,
    term: Arc<TermFn>,
    envelope: Option<Arc<EnvelopeFn>>,
    preset: Preset,
    params: HypothesisParams,
    description: String,
}

impl fmt::Debug for SeriesFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SeriesFamily")
            .field("name", &self.name)
            .field("k", &self.k)
            .field("preset", &self.preset)
            .field("params", &self.params)
            .finish()
    }
}

impl SeriesFamily {
    /// A family from arbitrary term and envelope functions. Without an envelope, each
    /// series is its own envelope (`a_n = |a_{1,n}|`).
    pub fn custom(
        name: impl Into<String>,
        k: usize,
        term: impl Fn(usize, u64) -> Result<Term, SeriesError> + Send + Sync + 'static,
        envelope: Option<Arc<EnvelopeFn>>,
    ) -> Self {
        SeriesFamily {
            name: name.into(),
            k,
            term: Arc::new(term),
            envelope,
            preset: Preset::General,
            params: HypothesisParams::default(),
            description: String::new(),
        }
    }

    pub fn with_preset(mut self, preset: Preset) -> Self {
        self.preset = preset;
        self
    }

    pub fn with_params(mut self, params: HypothesisParams) -> Self {
        self.params = params;
        self
    }

    pub fn with_description(mut self, d: impl Into<String>) -> Self {
        self.description = d.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Number of series `K`.
    pub fn k(&self) -> usize {
        self.k
    }

    /// Preset the family is designed for.
    pub fn preset(&self) -> Preset {
        self.preset
    }

    /// Default hypothesis parameters.
    pub fn params(&self) -> &HypothesisParams {
        &self.params
    }

    pub fn description(&self) -> &str {
        &self.description
    }

    pub fn params_mut(&mut self) -> &mut HypothesisParams {
        &mut self.params
    }

    pub fn term(&self, k: usize, n: u64) -> Result<Term, SeriesError> {
        if k == 0 || k > self.k {
            return Err(SeriesError::SeriesIndex { k, count: self.k });
        }
        if n == 0 {
            return Err(SeriesError::TermUnavailable { family: self.name.clone(), k, n });
        }
        (self.term)(k, n)
    }

    /// Denominator `|a_{k,n}|`.
    pub fn denominator(&self, k: usize, n: u64) -> Result<FactoredInteger, SeriesError> {
        Ok(self.term(k, n)?.a)
    }

    /// The shared growth envelope `a_n`.
    pub fn envelope(&self, n: u64) -> Result<FactoredInteger, SeriesError> {
        match &self.envelope {
            Some(f) => f(n),
            None => Ok(self.term(1, n)?.a),
        }
    }

    /// Envelope for series `k` when the series are treated one at a time.
    pub fn own_envelope(&self, k: usize, n: u64) -> Result<FactoredInteger, SeriesError> {
        Ok(self.term(k, n)?.a)
    }

    pub fn has_shared_envelope(&self) -> bool {
        self.envelope.is_some()
    }
}
