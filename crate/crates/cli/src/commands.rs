//! The subcommands. Each turns a validated configuration into a [`Report`].

use irrcert_core::certifier::{
    dominance_certificate, erdos_gap_check, linear_scan, tail_bound, z_statistic, CertOptions, Certifier,
};
use irrcert_core::curve::{genus, nondegenerate_gate};
use irrcert_core::poly::{IntPolynomial, Monomial};
use irrcert_core::series::{run_preset, CheckConfig, Preset, SeriesFamily};
use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::config::{field, ConfigError, RunConfig};
use crate::report::{Report, ResultEntry};

/// Default height of the linear scan run by `examples`.
pub const DEFAULT_SCAN_HEIGHT: u64 = 10;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 64,
            CliError::Config(_) => 65,
            CliError::Internal(_) => 70,
        }
    }
}

fn echo(cfg: &RunConfig) -> serde_json::Value {
    serde_json::to_value(cfg).expect("config serializes")
}

fn options(cfg: &RunConfig) -> CertOptions {
    CertOptions { bit_cap: cfg.bit_cap, ..CertOptions::default() }
}

fn check_entries(cfg: &RunConfig, fam: &SeriesFamily, presets: &[Preset]) -> Result<Vec<ResultEntry>, CliError> {
    let cc = CheckConfig { horizon: cfg.horizon, window: cfg.window, params: fam.params().clone() };
    presets
        .iter()
        .map(|&p| {
            run_preset(fam, p, &cc)
                .map(ResultEntry::Check)
                .map_err(|e| CliError::Config(field("family", e.to_string())))
        })
        .collect()
}

pub fn cmd_check(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let fam = cfg.family()?;
    let presets = cfg.presets(&fam)?;
    let results = check_entries(cfg, &fam, &presets)?;
    Ok(Report::new("check", echo(cfg), results))
}

pub fn cmd_certify(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let fam = cfg.family()?;
    let presets = cfg.presets(&fam)?;
    let polys = cfg.polynomials(fam.k())?;
    if polys.is_empty() {
        return Err(CliError::Usage("certify needs at least one polynomial (--poly or \"polynomials\")".into()));
    }
    let d = fam.params().d;
    let pair = presets.iter().any(|p| matches!(p, Preset::K2 | Preset::K2Infinite));
    for p in &polys {
        if p.degree() > d {
            return Err(field("polynomials", format!("'{p}' has degree {} above d = {d}", p.degree())).into());
        }
    }
    let order = if pair { 3 } else { d };
    // Gated polynomials are settled by the curve test alone.
    let gated: Vec<bool> = polys.iter().map(|p| pair && p.degree() > 3).collect();
    let opts = options(cfg);
    let [a, b] = cfg.certify_range();
    let ns: Vec<u64> = (a..=b).collect();

    let per_n: Vec<Vec<Vec<ResultEntry>>> = ns
        .par_iter()
        .map(|&n| {
            let mut certifier = Certifier::new(&fam, n, opts.clone()).map(|c| c.with_order(order));
            polys
                .iter()
                .zip(&gated)
                .map(|(p, &g)| {
                    let mut out = Vec::new();
                    if g {
                        return out;
                    }
                    let cert = match certifier.as_mut() {
                        Ok(c) => c.certify(p),
                        Err(e) => Err(e.clone()),
                    };
                    out.push(match cert {
                        Ok(c) => ResultEntry::Certificate(c),
                        Err(e) => ResultEntry::CertificateError { polynomial: p.to_string(), n, error: e.to_string() },
                    });
                    if cfg.gap_check {
                        out.push(match erdos_gap_check(&fam, p, n) {
                            Ok(r) => ResultEntry::Gap(r),
                            Err(e) => ResultEntry::GapError { polynomial: p.to_string(), n, error: e.to_string() },
                        });
                    }
                    out
                })
                .collect()
        })
        .collect();

    let mut results = Vec::new();
    for (i, p) in polys.iter().enumerate() {
        if gated[i] {
            let gate =
                nondegenerate_gate(p, d).map_err(|e| CliError::Config(field("polynomials", format!("'{p}': {e}"))))?;
            results.push(ResultEntry::Gate(gate));
            continue;
        }
        for row in &per_n {
            results.extend(row[i].iter().cloned());
        }
    }
    Ok(Report::new("certify", echo(cfg), results))
}

pub fn cmd_genus(polys: &[String]) -> Result<Report, CliError> {
    if polys.is_empty() {
        return Err(CliError::Usage("genus needs at least one polynomial (--poly)".into()));
    }
    let mut results = Vec::new();
    for text in polys {
        let p = IntPolynomial::parse(text, Some(2)).map_err(|e| field("polynomials", format!("'{text}': {e}")))?;
        results.push(match genus(&p) {
            Ok(a) => ResultEntry::Curve(a),
            Err(e) => ResultEntry::CurveError { polynomial: p.to_string(), error: e.to_string() },
        });
    }
    Ok(Report::new("genus", json!({ "polynomials": polys }), results))
}

/// `x_1 + ⋯ + x_K − 1`.
fn unit_sum(k: usize) -> IntPolynomial {
    let mut terms: Vec<(Monomial, BigInt)> = (0..k)
        .map(|i| {
            let mut e = vec![0u32; k];
            e[i] = 1;
            (Monomial(e), BigInt::from(1))
        })
        .collect();
    terms.push((Monomial(vec![0; k]), BigInt::from(-1)));
    IntPolynomial::from_terms(k, terms)
}

/// Hypothesis checks for a builtin example, then a linear scan (`K = 1`) or a certificate
/// for `x_1 + ⋯ + x_K − 1` at the horizon.
pub fn cmd_examples(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let mut cfg = cfg.clone();
    let fam = cfg.family()?;
    if cfg.hypothesis.d.is_none() {
        cfg.hypothesis.d = Some(fam.params().d);
    }
    let presets = cfg.presets(&fam)?;
    let mut results = check_entries(&cfg, &fam, &presets)?;
    let opts = options(&cfg);
    if fam.k() == 1 {
        let height = cfg.height.unwrap_or(DEFAULT_SCAN_HEIGHT);
        let scan = linear_scan(&fam, height, cfg.horizon, &opts).map_err(|e| CliError::Internal(e.to_string()))?;
        results.push(ResultEntry::Scan(scan));
    } else {
        let p = unit_sum(fam.k());
        results.push(match dominance_certificate(&fam, &p, cfg.horizon, None, &opts) {
            Ok(c) => ResultEntry::Certificate(c),
            Err(e) => ResultEntry::CertificateError { polynomial: p.to_string(), n: cfg.horizon, error: e.to_string() },
        });
    }
    Ok(Report::new("examples", echo(&cfg), results))
}

/// `Z_N` for every `N` in the window.
pub fn cmd_zstat(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let fam = cfg.family()?;
    let c = cfg.z_c()?;
    let [a, b] = cfg.window();
    let results = (a..=b)
        .into_par_iter()
        .map(|n| match z_statistic(&fam, cfg.z.m, &c, n, None) {
            Ok(z) => ResultEntry::ZStatistic(z),
            Err(e) => ResultEntry::ZError { n, error: e.to_string() },
        })
        .collect();
    Ok(Report::new("zstat", echo(cfg), results))
}

/// Tail bounds for every series and every `N` in the window.
pub fn cmd_tails(cfg: &RunConfig) -> Result<Report, CliError> {
    cfg.validate()?;
    let fam = cfg.family()?;
    let [a, b] = cfg.window();
    let jobs: Vec<(usize, u64)> = (1..=fam.k()).flat_map(|k| (a..=b).map(move |n| (k, n))).collect();
    let results = jobs
        .par_iter()
        .map(|&(k, n)| match tail_bound(&fam, k, n, cfg.tail_kind.into(), None) {
            Ok(t) => ResultEntry::Tail(t),
            Err(e) => ResultEntry::TailError { k, n, error: e.to_string() },
        })
        .collect();
    Ok(Report::new("tails", echo(cfg), results))
}
