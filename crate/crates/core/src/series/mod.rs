//! Families of rational series, their sign functions, and finite-horizon checkers for the
//! hypotheses of the independence criteria.

mod builtins;
pub mod checks;
mod family;
mod presets;
mod seq;
mod sign;

use thiserror::Error;

use crate::arith::ArithError;

pub use builtins::{builtin_family, BuiltinParams, IntLit, TableSpec, BUILTIN_NAMES, VALIDATION_HORIZON};
pub use checks::{CheckReport, Condition, EnvelopeSource, SandwichMode, Status};
pub use family::{EnvelopeFn, HypothesisParams, PrimeSet, SeriesFamily, Term, TermFn};
pub use presets::{run_preset, CheckConfig, Preset, PresetReport, PRESET_NAMES};
pub use seq::{factorial, SeqExpr};
pub use sign::SignFunction;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SeriesError {
    #[error("unknown family '{name}' (available: {})", available.join(", "))]
    UnknownFamily { name: String, available: Vec<String> },
    #[error("family '{family}': {constraint}")]
    ParameterViolation { family: String, constraint: String },
    #[error("sequence '{expr}' at n = {n}: {message}")]
    Sequence { expr: String, n: u64, message: String },
    #[error("sequence '{expr}', column {column}: {message}")]
    SequenceSyntax { expr: String, column: usize, message: String },
    #[error("family '{family}' has no term for k = {k}, n = {n}")]
    TermUnavailable { family: String, k: usize, n: u64 },
    #[error("series index {k} out of range 1..={count}")]
    SeriesIndex { k: usize, count: usize },
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
}
