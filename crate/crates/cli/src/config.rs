//! Run configuration: which family, which hypotheses, which polynomials and horizons.

use std::path::Path;
use std::str::FromStr;

use irrcert_core::arith::DEFAULT_BIT_CAP;
use irrcert_core::certifier::TailKind;
use irrcert_core::poly::IntPolynomial;
use irrcert_core::series::{builtin_family, BuiltinParams, HypothesisParams, Preset, PrimeSet, SeriesFamily};
use irrcert_core::BigRat;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: line {line}, column {column}: {message}")]
    Parse { path: String, line: usize, column: usize, message: String },
    #[error("field '{field}': {message}")]
    Field { field: String, message: String },
}

pub(crate) fn field(name: &str, message: impl Into<String>) -> ConfigError {
    ConfigError::Field { field: name.to_string(), message: message.into() }
}

/// Family name plus builtin parameters; `table` takes explicit terms in `params.table`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub name: String,
    #[serde(default)]
    pub params: BuiltinParams,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PrimesSpec {
    Single(u64),
    List(Vec<u64>),
    From { from: u64 },
}

/// Overrides for the family's hypothesis parameters; rationals are written as "a/b".
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypothesisSpec {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a_base: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_bound: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub growth_factor: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub primes: Option<PrimesSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prime_sample: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub transcendence: Option<bool>,
}

fn rational(name: &str, text: &Option<String>) -> Result<Option<BigRat>, ConfigError> {
    text.as_ref()
        .map(|t| BigRat::from_str(t.trim()).map_err(|e| field(name, format!("'{t}' is not a rational: {e}"))))
        .transpose()
}

impl HypothesisSpec {
    pub fn apply(&self, base: &HypothesisParams) -> Result<HypothesisParams, ConfigError> {
        let mut p = base.clone();
        if let Some(d) = self.d {
            p.d = d;
        }
        if let Some(v) = rational("hypothesis.epsilon", &self.epsilon)? {
            p.epsilon = v;
        }
        if let Some(v) = rational("hypothesis.kappa", &self.kappa)? {
            p.kappa = v;
        }
        if let Some(v) = rational("hypothesis.growth_factor", &self.growth_factor)? {
            p.growth_factor = v;
        }
        if let Some(v) = rational("hypothesis.threshold", &self.threshold)? {
            p.threshold = v;
        }
        if let Some(a) = self.a_base {
            p.a_base = a;
        }
        if let Some(c) = self.c_bound {
            p.c_bound = c;
        }
        if let Some(s) = self.prime_sample {
            p.prime_sample = s;
        }
        if let Some(t) = self.transcendence {
            p.transcendence = t;
        }
        if let Some(primes) = &self.primes {
            p.primes = match primes {
                PrimesSpec::Single(q) => PrimeSet::Single(*q),
                PrimesSpec::List(qs) => PrimeSet::List(qs.clone()),
                PrimesSpec::From { from } => PrimeSet::Generator { start: *from },
            };
            p.primes.validate().map_err(|e| field("hypothesis.primes", e.to_string()))?;
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ZSpec {
    pub m: u64,
    pub c: String,
}

impl Default for ZSpec {
    fn default() -> Self {
        ZSpec { m: 1, c: "1/2".into() }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum TailSpec {
    #[default]
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "Gamma")]
    BigGamma,
}

impl From<TailSpec> for TailKind {
    fn from(t: TailSpec) -> Self {
        match t {
            TailSpec::Gamma => TailKind::Gamma,
            TailSpec::BigGamma => TailKind::BigGamma,
        }
    }
}

fn default_version() -> u32 {
    SCHEMA_VERSION
}

fn default_bit_cap() -> u64 {
    DEFAULT_BIT_CAP
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "default_version")]
    pub version: u32,
    pub family: FamilySpec,
    pub horizon: u64,
    /// "Sufficiently large" indices; defaults to `[max(1, H/2), H]`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<[u64; 2]>,
    /// Presets to check; defaults to the family's own.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub presets: Vec<String>,
    #[serde(default)]
    pub hypothesis: HypothesisSpec,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub polynomials: Vec<String>,
    /// Certificate horizons `[A, B]`; defaults to the window.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certify_range: Option<[u64; 2]>,
    /// Also run the analytic gap inequality for every certificate.
    #[serde(default, skip_serializing_if = "is_false")]
    pub gap_check: bool,
    /// Height of the linear scan in `examples`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<u64>,
    #[serde(default)]
    pub z: ZSpec,
    #[serde(default)]
    pub tail_kind: TailSpec,
    #[serde(default = "default_bit_cap")]
    pub bit_cap: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<String>,
}

impl RunConfig {
    /// A configuration for a builtin family with default parameters.
    pub fn builtin(name: &str, horizon: u64) -> Self {
        RunConfig {
            version: SCHEMA_VERSION,
            family: FamilySpec { name: name.to_string(), params: BuiltinParams::default() },
            horizon,
            window: None,
            presets: Vec::new(),
            hypothesis: HypothesisSpec::default(),
            polynomials: Vec::new(),
            certify_range: None,
            gap_check: false,
            height: None,
            z: ZSpec::default(),
            tail_kind: TailSpec::Gamma,
            bit_cap: DEFAULT_BIT_CAP,
            output: None,
        }
    }

    pub fn from_json(text: &str, path: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
            path: path.to_string(),
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        if cfg.version != SCHEMA_VERSION {
            return Err(field("version", format!("unsupported version {}, expected {SCHEMA_VERSION}", cfg.version)));
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io { path: shown.clone(), source })?;
        Self::from_json(&text, &shown)
    }

    pub fn window(&self) -> [u64; 2] {
        self.window.unwrap_or([(self.horizon / 2).max(1), self.horizon])
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.horizon == 0 {
            return Err(field("horizon", "must be positive"));
        }
        let [a, b] = self.window();
        if a == 0 || a > b || b > self.horizon {
            return Err(field("window", format!("[{a}, {b}] must satisfy 1 ≤ A ≤ B ≤ horizon {}", self.horizon)));
        }
        if let Some([a, b]) = self.certify_range {
            if a == 0 || a > b {
                return Err(field("certify_range", format!("[{a}, {b}] must satisfy 1 ≤ A ≤ B")));
            }
        }
        if self.bit_cap == 0 {
            return Err(field("bit_cap", "must be positive"));
        }
        Ok(())
    }

    /// The family with hypothesis overrides applied.
    pub fn family(&self) -> Result<SeriesFamily, ConfigError> {
        let fam = builtin_family(&self.family.name, &self.family.params).map_err(|e| field("family", e.to_string()))?;
        let params = self.hypothesis.apply(fam.params())?;
        Ok(fam.with_params(params))
    }

    /// Requested presets, or the family's own. Presets named explicitly that need `d` must
    /// be given it.
    pub fn presets(&self, fam: &SeriesFamily) -> Result<Vec<Preset>, ConfigError> {
        // A family's own preset comes with its own degree bound.
        if self.presets.is_empty() {
            return Ok(vec![fam.preset()]);
        }
        let presets = self
            .presets
            .iter()
            .map(|s| Preset::from_str(s).map_err(|e| field("presets", e.to_string())))
            .collect::<Result<Vec<_>, _>>()?;
        for p in &presets {
            if p.needs_degree() && self.hypothesis.d.is_none() {
                return Err(field("hypothesis.d", format!("preset {p} needs the degree bound d")));
            }
        }
        Ok(presets)
    }

    pub fn polynomials(&self, nvars: usize) -> Result<Vec<IntPolynomial>, ConfigError> {
        self.polynomials
            .iter()
            .map(|t| IntPolynomial::parse(t, Some(nvars)).map_err(|e| field("polynomials", format!("'{t}': {e}"))))
            .collect()
    }

    pub fn certify_range(&self) -> [u64; 2] {
        self.certify_range.unwrap_or_else(|| self.window())
    }

    pub fn z_c(&self) -> Result<BigRat, ConfigError> {
        BigRat::from_str(self.z.c.trim()).map_err(|e| field("z.c", format!("'{}' is not a rational: {e}", self.z.c)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_parses() {
        let cfg =
            RunConfig::from_json(r#"{"family": {"name": "erdos", "params": {"a": "2^(2^n)"}}, "horizon": 8}"#, "t")
                .unwrap();
        assert_eq!(cfg.window(), [4, 8]);
        let fam = cfg.family().unwrap();
        assert_eq!(fam.k(), 1);
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = RunConfig::from_json("{\n  \"family\": 3\n}", "bad.json").unwrap_err();
        assert!(matches!(err, ConfigError::Parse { line: 2, .. }), "{err}");
        let err = RunConfig::from_json(r#"{"family": {"name": "erdos"}, "horizon": 8, "colour": 1}"#, "t").unwrap_err();
        assert!(err.to_string().contains("colour"));
    }

    #[test]
    fn degree_bound_is_required_for_the_general_preset() {
        let cfg =
            RunConfig::from_json(r#"{"family": {"name": "erdos"}, "horizon": 8, "presets": ["thm-general"]}"#, "t")
                .unwrap();
        let fam = cfg.family().unwrap();
        assert!(matches!(cfg.presets(&fam), Err(ConfigError::Field { .. })));
    }
}
