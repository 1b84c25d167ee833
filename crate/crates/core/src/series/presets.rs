//! Hypothesis lists of the criteria, run against a family.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::checks::{
    check_bounded_unique_max, check_envelope_growth, check_envelope_sandwich, check_limsup, check_numerator_bound,
    check_numerator_coprime, check_repeated_valuations_bounded, check_unique_max_valuation, check_valuation_dominance,
    check_valuation_gap_growth, check_valuation_ratio_growth, check_valuation_unbounded, CheckReport, Condition,
    EnvelopeSource, SandwichMode, Status,
};
use super::family::{HypothesisParams, PrimeSet, SeriesFamily};
use super::SeriesError;

/// A criterion, named by its configuration key.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Preset {
    /// Non-vanishing of polynomials of degree ≤ d, one prime.
    #[serde(rename = "thm-general")]
    General,
    /// Algebraic independence, one prime.
    #[serde(rename = "thm-alg-indep")]
    AlgIndep,
    /// Non-degenerate independence of a pair, one prime.
    #[serde(rename = "thm-K2")]
    K2,
    #[serde(rename = "thm-general-infinite")]
    GeneralInfinite,
    #[serde(rename = "thm-alg-indep-infinite")]
    AlgIndepInfinite,
    #[serde(rename = "thm-K2-infinite")]
    K2Infinite,
    /// Single-series irrationality relative to one prime.
    #[serde(rename = "thm-p-irrational")]
    PIrrational,
    /// Single-series irrationality relative to a set of primes.
    #[serde(rename = "thm-P-irrational")]
    PSetIrrational,
}

pub const PRESET_NAMES: [&str; 8] = [
    "thm-general",
    "thm-alg-indep",
    "thm-K2",
    "thm-general-infinite",
    "thm-alg-indep-infinite",
    "thm-K2-infinite",
    "thm-p-irrational",
    "thm-P-irrational",
];

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::General,
        Preset::AlgIndep,
        Preset::K2,
        Preset::GeneralInfinite,
        Preset::AlgIndepInfinite,
        Preset::K2Infinite,
        Preset::PIrrational,
        Preset::PSetIrrational,
    ];

    pub fn name(self) -> &'static str {
        PRESET_NAMES[Preset::ALL.iter().position(|p| *p == self).expect("listed")]
    }

    /// Whether the criterion quantifies over a set of primes.
    pub fn is_infinite(self) -> bool {
        matches!(self, Preset::GeneralInfinite | Preset::AlgIndepInfinite | Preset::K2Infinite | Preset::PSetIrrational)
    }

    /// Whether the criterion needs the degree bound `d` as input.
    pub fn needs_degree(self) -> bool {
        matches!(self, Preset::General | Preset::GeneralInfinite)
    }

    /// The conditions this preset checks, in report order.
    pub fn conditions(self) -> Vec<Condition> {
        use Condition::*;
        match self {
            Preset::General => vec![
                NumeratorCoprime,
                UniqueMaxValuation,
                ValuationGapGrowth,
                EnvelopeGrowth,
                EnvelopeSandwich,
                NumeratorBound,
                EnvelopeLimsup,
            ],
            Preset::AlgIndep | Preset::AlgIndepInfinite => vec![
                NumeratorCoprime,
                UniqueMaxValuation,
                ValuationRatioGrowth,
                EnvelopeGrowth,
                NumeratorBound,
                EnvelopeSandwichA,
                EnvelopeLimsupA,
            ],
            Preset::K2 => vec![
                NumeratorCoprime,
                UniqueMaxValuation,
                ValuationGapGrowth,
                EnvelopeGrowth,
                EnvelopeSandwich,
                NumeratorBound,
                EnvelopeLimsup,
                EnvelopeLimsupA,
            ],
            Preset::GeneralInfinite => vec![
                NumeratorCoprime,
                UniqueMaxValuation,
                ValuationDominance,
                EnvelopeGrowth,
                EnvelopeSandwich,
                NumeratorBound,
                EnvelopeLimsup,
            ],
            Preset::K2Infinite => vec![
                NumeratorCoprime,
                UniqueMaxValuation,
                ValuationDominance,
                EnvelopeGrowth,
                EnvelopeSandwich,
                NumeratorBound,
                EnvelopeLimsup,
                EnvelopeLimsupA,
            ],
            Preset::PIrrational => vec![
                NumeratorCoprime,
                ValuationUnbounded,
                RepeatedValuationsBounded,
                EnvelopeGrowth,
                NumeratorBound,
                EnvelopeLimsup,
            ],
            Preset::PSetIrrational => {
                vec![NumeratorCoprime, BoundedUniqueMax, EnvelopeGrowth, NumeratorBound, EnvelopeLimsup]
            }
        }
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Preset {
    type Err = SeriesError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PRESET_NAMES
            .iter()
            .position(|n| *n == s)
            .map(|i| Preset::ALL[i])
            .ok_or_else(|| SeriesError::Config(format!("unknown preset '{s}' (known: {})", PRESET_NAMES.join(", "))))
    }
}

/// Horizon, window and parameters for one preset run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckConfig {
    pub horizon: u64,
    /// "Sufficiently large" indices; defaults to `[max(1, H/2), H]`.
    pub window: Option<[u64; 2]>,
    pub params: HypothesisParams,
}

impl CheckConfig {
    pub fn new(horizon: u64, params: HypothesisParams) -> Self {
        CheckConfig { horizon, window: None, params }
    }

    pub fn window(&self) -> [u64; 2] {
        self.window.unwrap_or([(self.horizon / 2).max(1), self.horizon])
    }

    fn validate(&self) -> Result<(), SeriesError> {
        let [lo, hi] = self.window();
        if self.horizon == 0 {
            return Err(SeriesError::Config("horizon must be positive".into()));
        }
        if lo == 0 || lo > hi || hi > self.horizon {
            return Err(SeriesError::Config(format!(
                "window [{lo}, {hi}] must satisfy 1 ≤ start ≤ end ≤ horizon {}",
                self.horizon
            )));
        }
        if self.params.d == 0 {
            return Err(SeriesError::Config("d must be positive".into()));
        }
        let kappa = &self.params.kappa;
        if *kappa <= num_traits::Zero::zero() || *kappa >= num_traits::One::one() {
            return Err(SeriesError::Config("kappa must lie in (0, 1)".into()));
        }
        if self.params.epsilon <= num_traits::Zero::zero() {
            return Err(SeriesError::Config("epsilon must be positive".into()));
        }
        self.params.primes.validate()
    }
}

/// All check reports of one preset, with the combined verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PresetReport {
    pub preset: Preset,
    pub family: String,
    pub horizon: u64,
    pub window: [u64; 2],
    pub primes: Vec<u64>,
    pub checks: Vec<CheckReport>,
    pub verdict: Status,
}

/// Runs every hypothesis of `preset` on `fam`.
pub fn run_preset(fam: &SeriesFamily, preset: Preset, cfg: &CheckConfig) -> Result<PresetReport, SeriesError> {
    cfg.validate()?;
    let h = cfg.horizon;
    let window = cfg.window();
    let mut params = cfg.params.clone();
    let kk = fam.k();
    if matches!(preset, Preset::K2 | Preset::K2Infinite) {
        if kk != 2 {
            return Err(SeriesError::Config(format!("{preset} needs exactly two series, family has {kk}")));
        }
        params.d = 3;
    }
    let primes = match (&params.primes, preset.is_infinite()) {
        (PrimeSet::Single(_), true) => {
            return Err(SeriesError::Config(format!("{preset} needs a list or generator of primes")))
        }
        (PrimeSet::List(ps), false) if ps.len() != 1 => {
            return Err(SeriesError::Config(format!("{preset} uses exactly one prime")))
        }
        (set, _) => set.sample(params.prime_sample),
    };
    let all = [1, h];
    let mut checks = Vec::new();
    let growth = &params.growth_factor;
    let threshold = &params.threshold;
    match preset {
        Preset::General | Preset::K2 | Preset::AlgIndep => {
            let p = primes[0];
            for k in 1..=kk {
                checks.push(check_numerator_coprime(fam, k, p, all)?);
                checks.push(check_unique_max_valuation(fam, k, p, window)?);
                checks.push(match preset {
                    Preset::AlgIndep => check_valuation_ratio_growth(fam, k, p, h, threshold)?,
                    _ => check_valuation_gap_growth(fam, k, p, params.d, h, threshold)?,
                });
            }
        }
        Preset::GeneralInfinite | Preset::K2Infinite | Preset::AlgIndepInfinite => {
            for &p in &primes {
                for k in 1..=kk {
                    checks.push(check_numerator_coprime(fam, k, p, all)?);
                    checks.push(check_unique_max_valuation(fam, k, p, window)?);
                    match preset {
                        Preset::AlgIndepInfinite if k > 1 => {
                            checks.push(check_valuation_ratio_growth(fam, k, p, h, threshold)?)
                        }
                        Preset::AlgIndepInfinite => {}
                        _ => checks.push(check_valuation_dominance(fam, k, p, params.d, window)?),
                    }
                }
            }
        }
        Preset::PIrrational | Preset::PSetIrrational => {
            for k in 1..=kk {
                let own = EnvelopeSource::Own(k);
                let range = if preset == Preset::PIrrational { window } else { all };
                for &p in &primes {
                    checks.push(check_numerator_coprime(fam, k, p, all)?);
                    if preset == Preset::PIrrational {
                        checks.push(check_valuation_unbounded(fam, k, p, h, threshold)?);
                        checks.push(check_repeated_valuations_bounded(fam, k, p, params.c_bound, h)?);
                    } else {
                        checks.push(check_bounded_unique_max(fam, k, p, h)?);
                    }
                }
                checks.push(check_envelope_growth(fam, own, &params.epsilon, range)?);
                checks.push(check_numerator_bound(fam, k, own, &params.kappa, range)?);
                checks.push(check_limsup(fam, own, 2, h, growth, Condition::EnvelopeLimsup)?);
                if params.transcendence {
                    checks.push(check_limsup(fam, own, params.a_base, h, growth, Condition::EnvelopeLimsupA)?);
                }
            }
            return Ok(finish(fam, preset, cfg, window, primes, checks));
        }
    }

    // Shared-envelope hypotheses.
    let shared = EnvelopeSource::Shared;
    let kd1 = kk as u64 * params.d as u64 + 1;
    checks.push(check_envelope_growth(fam, shared, &params.epsilon, window)?);
    let mode = match preset {
        Preset::AlgIndep | Preset::AlgIndepInfinite => SandwichMode::Power { a: params.a_base },
        _ => SandwichMode::Standard { k: kk, d: params.d },
    };
    for k in 1..=kk {
        checks.push(check_envelope_sandwich(fam, k, &params.kappa, mode, window)?);
    }
    for k in 1..=kk {
        checks.push(check_numerator_bound(fam, k, shared, &params.kappa, window)?);
    }
    match preset {
        Preset::AlgIndep | Preset::AlgIndepInfinite => {
            checks.push(check_limsup(fam, shared, params.a_base, h, growth, Condition::EnvelopeLimsupA)?)
        }
        Preset::K2 | Preset::K2Infinite => {
            checks.push(check_limsup(fam, shared, kd1, h, growth, Condition::EnvelopeLimsup)?);
            checks.push(check_limsup(fam, shared, params.a_base, h, growth, Condition::EnvelopeLimsupA)?);
        }
        _ => checks.push(check_limsup(fam, shared, kd1, h, growth, Condition::EnvelopeLimsup)?),
    }
    Ok(finish(fam, preset, cfg, window, primes, checks))
}

fn finish(
    fam: &SeriesFamily,
    preset: Preset,
    cfg: &CheckConfig,
    window: [u64; 2],
    primes: Vec<u64>,
    checks: Vec<CheckReport>,
) -> PresetReport {
    let verdict = Status::all(checks.iter().map(|c| c.status));
    PresetReport { preset, family: fam.name().to_string(), horizon: cfg.horizon, window, primes, checks, verdict }
}
