//! The JSON report and its human-readable rendering.

use std::collections::BTreeMap;
use std::fmt::Write;

use irrcert_core::arith::log2::Decision;
use irrcert_core::certifier::{Certificate, GapReport, LinearScanReport, TailBound, ZStatistic};
use irrcert_core::curve::{CurveAnalysis, GateReport, GateVerdict};
use irrcert_core::series::{PresetReport, Status};
use serde::Serialize;

use crate::config::SCHEMA_VERSION;

/// One computed item, tagged by `result`.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "result", rename_all = "snake_case")]
pub enum ResultEntry {
    Check(PresetReport),
    Certificate(Certificate),
    CertificateError { polynomial: String, n: u64, error: String },
    Gate(GateReport),
    Gap(GapReport),
    GapError { polynomial: String, n: u64, error: String },
    Curve(CurveAnalysis),
    CurveError { polynomial: String, error: String },
    Scan(LinearScanReport),
    ZStatistic(ZStatistic),
    ZError { n: u64, error: String },
    Tail(TailBound),
    TailError { k: usize, n: u64, error: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Unknown,
    Fail,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Unknown => 1,
            Verdict::Fail => 2,
        }
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Counts {
    pub certified: usize,
    pub inconclusive: usize,
    pub errors: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub command: String,
    /// Combined status of each preset checked.
    pub presets: BTreeMap<String, Status>,
    pub certificates: Counts,
    pub gates: BTreeMap<String, GateVerdict>,
    pub verdict: Verdict,
    pub exit_code: i32,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: u32,
    pub config: serde_json::Value,
    pub results: Vec<ResultEntry>,
    pub summary: Summary,
}

impl Report {
    pub fn new(command: &str, config: serde_json::Value, results: Vec<ResultEntry>) -> Self {
        let summary = summarize(command, &results);
        Report { version: SCHEMA_VERSION, config, results, summary }
    }

    pub fn exit_code(&self) -> i32 {
        self.summary.exit_code
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn summarize(command: &str, results: &[ResultEntry]) -> Summary {
    let mut presets = BTreeMap::new();
    let mut counts = Counts::default();
    let mut gates = BTreeMap::new();
    let mut verdict = Verdict::Pass;
    let mut raise = |v: Verdict| verdict = verdict.max(v);
    for r in results {
        match r {
            ResultEntry::Check(c) => {
                let entry = presets.entry(c.preset.name().to_string()).or_insert(Status::Witnessed);
                *entry = Status::all([*entry, c.verdict]);
                raise(match c.verdict {
                    Status::Witnessed => Verdict::Pass,
                    Status::Unknown => Verdict::Unknown,
                    Status::Falsified => Verdict::Fail,
                });
            }
            ResultEntry::Certificate(c) => {
                if c.verdict.certified() {
                    counts.certified += 1;
                } else {
                    counts.inconclusive += 1;
                    raise(Verdict::Unknown);
                }
            }
            ResultEntry::CertificateError { .. } => {
                counts.errors += 1;
                raise(Verdict::Unknown);
            }
            ResultEntry::Gate(g) => {
                gates.insert(g.polynomial.clone(), g.verdict);
                raise(match g.verdict {
                    GateVerdict::DegreeGatePass | GateVerdict::GenusGatePass => Verdict::Pass,
                    GateVerdict::GateUnknown => Verdict::Unknown,
                    GateVerdict::GateFail => Verdict::Fail,
                });
            }
            ResultEntry::Scan(s) => {
                counts.certified += s.certified;
                counts.inconclusive += s.inconclusive.len();
                if !s.all_certified() {
                    raise(Verdict::Unknown);
                }
            }
            ResultEntry::GapError { .. }
            | ResultEntry::CurveError { .. }
            | ResultEntry::ZError { .. }
            | ResultEntry::TailError { .. } => raise(Verdict::Unknown),
            ResultEntry::Gap(_) | ResultEntry::Curve(_) | ResultEntry::ZStatistic(_) | ResultEntry::Tail(_) => {}
        }
    }
    Summary {
        command: command.to_string(),
        presets,
        certificates: counts,
        gates,
        verdict,
        exit_code: verdict.exit_code(),
    }
}

fn decision(d: Decision) -> &'static str {
    match d {
        Decision::True => "holds",
        Decision::False => "fails",
        Decision::Unknown => "undecided",
    }
}

/// One line per result, then the summary.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    for r in &report.results {
        let _ = match r {
            ResultEntry::Check(c) => {
                let _ = writeln!(
                    out,
                    "check {} on {} (H = {}, window {:?}): {}",
                    c.preset, c.family, c.horizon, c.window, c.verdict
                );
                for ch in &c.checks {
                    let series = ch.series.map(|k| format!(" k={k}")).unwrap_or_default();
                    let prime = ch.prime.map(|p| format!(" p={p}")).unwrap_or_default();
                    let _ = writeln!(out, "  {:<28}{series}{prime}: {} {}", ch.condition.id(), ch.status, ch.detail);
                }
                Ok(())
            }
            ResultEntry::Certificate(c) => {
                let cross = match (c.crosscheck.nonzero, &c.crosscheck.value) {
                    (Some(true), Some(v)) => format!(", value {v}"),
                    (Some(true), None) => ", value nonzero".to_string(),
                    (Some(false), _) => ", value ZERO".to_string(),
                    (None, _) => String::new(),
                };
                writeln!(out, "certificate {} at N = {} (p = {}): {}{cross}", c.polynomial, c.n, c.prime, c.verdict)
            }
            ResultEntry::CertificateError { polynomial, n, error } => {
                writeln!(out, "certificate {polynomial} at N = {n}: error: {error}")
            }
            ResultEntry::Gate(g) => {
                let reason = g.reason.as_deref().map(|r| format!(" ({r})")).unwrap_or_default();
                writeln!(out, "gate {} (order {}): {}{reason}", g.polynomial, g.order, g.verdict)
            }
            ResultEntry::Gap(g) => writeln!(
                out,
                "gap {} at N = {}: {} (log2 lower bound ≈ {:.3}, log2 majorant ≈ {:.3})",
                g.polynomial,
                g.n,
                decision(g.holds),
                g.log2_lower_bound_approx,
                g.log2_majorant_approx
            ),
            ResultEntry::GapError { polynomial, n, error } => {
                writeln!(out, "gap {polynomial} at N = {n}: error: {error}")
            }
            ResultEntry::Curve(a) => {
                let genus = a.genus.as_ref().map(|g| g.to_string()).unwrap_or_else(|| "per component".into());
                writeln!(
                    out,
                    "curve {}: degree {}, genus {genus}, {} singular point(s){}",
                    a.polynomial,
                    a.degree,
                    a.singular_points.len(),
                    if a.smooth { ", smooth" } else { "" }
                )
            }
            ResultEntry::CurveError { polynomial, error } => writeln!(out, "curve {polynomial}: error: {error}"),
            ResultEntry::Scan(s) => {
                writeln!(out, "linear scan at N = {}, height {}: {}/{} certified", s.n, s.height, s.certified, s.total)
            }
            ResultEntry::ZStatistic(z) => {
                writeln!(out, "Z_{} (M = {}, c = {}): log2 ≤ {:.3}", z.n, z.m, z.c, z.log2_approx)
            }
            ResultEntry::ZError { n, error } => writeln!(out, "Z_{n}: error: {error}"),
            ResultEntry::Tail(t) => writeln!(
                out,
                "tail k = {} from N = {}: log2 ≤ {:.3} ({})",
                t.k,
                t.n,
                t.tail.log2_approx(),
                t.tail.assumption
            ),
            ResultEntry::TailError { k, n, error } => writeln!(out, "tail k = {k} from N = {n}: error: {error}"),
        };
    }
    let s = &report.summary;
    let _ = writeln!(
        out,
        "summary: {:?} (certified {}, inconclusive {}, errors {})",
        s.verdict, s.certificates.certified, s.certificates.inconclusive, s.certificates.errors
    );
    out
}
