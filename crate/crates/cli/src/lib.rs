//! Command-line front end: configuration, subcommands and reports.

pub mod commands;
pub mod config;
pub mod report;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::{CliError, DEFAULT_SCAN_HEIGHT};
pub use config::{ConfigError, RunConfig, SCHEMA_VERSION};
pub use report::{render_text, Report, ResultEntry, Verdict};

#[derive(Debug, Parser)]
#[command(name = "irrcert", version, about = "Finite-horizon irrationality and independence certificates")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: CommonOpts,
}

#[derive(Debug, Default, clap::Args)]
pub struct CommonOpts {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, value_name = "N")]
    pub horizon: Option<u64>,
    /// Index window A:B for the "sufficiently large" conditions.
    #[arg(long, global = true, value_name = "A:B", value_parser = parse_window)]
    pub window: Option<[u64; 2]>,
    /// Polynomial in x1, x2, ...; repeatable.
    #[arg(long = "poly", global = true, value_name = "EXPR")]
    pub polys: Vec<String>,
    #[arg(long, global = true, value_name = "NAME")]
    pub preset: Vec<String>,
    /// Worker threads for independent computations.
    #[arg(long, global = true, value_name = "N", default_value_t = 1)]
    pub jobs: usize,
    /// Also write the JSON report here ("-" for stdout instead of the text summary).
    #[arg(long, global = true, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Largest exact value materialized, in bits.
    #[arg(long, global = true, value_name = "N")]
    pub bit_cap: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the hypotheses of the selected presets.
    Check,
    /// Dominance certificates for every polynomial and every N in the certificate range.
    Certify {
        /// Also run the analytic gap inequality.
        #[arg(long)]
        gap: bool,
    },
    /// Genus and singularities of plane curves given by --poly.
    Genus,
    /// Run a builtin example end to end.
    Examples {
        name: String,
        /// Height of the linear scan for single series.
        #[arg(long)]
        height: Option<u64>,
    },
    /// The Z_N statistic over the window.
    Zstat,
    /// Tail bounds over the window.
    Tails,
}

fn parse_window(s: &str) -> Result<[u64; 2], String> {
    let (a, b) = s.split_once(':').ok_or_else(|| format!("expected A:B, got '{s}'"))?;
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("'{t}': {e}"));
    Ok([num(a)?, num(b)?])
}

fn base_config(opts: &CommonOpts) -> Result<Option<RunConfig>, CliError> {
    opts.config.as_deref().map(RunConfig::load).transpose().map_err(CliError::from)
}

/// Applies command-line overrides on top of the configuration file.
fn overlay(mut cfg: RunConfig, opts: &CommonOpts) -> RunConfig {
    if let Some(h) = opts.horizon {
        cfg.horizon = h;
    }
    if opts.window.is_some() {
        cfg.window = opts.window;
    }
    if !opts.polys.is_empty() {
        cfg.polynomials = opts.polys.clone();
    }
    if !opts.preset.is_empty() {
        cfg.presets = opts.preset.clone();
    }
    if let Some(b) = opts.bit_cap {
        cfg.bit_cap = b;
    }
    cfg
}

/// Builds the report for a parsed command line.
pub fn execute(cli: &Cli) -> Result<Report, CliError> {
    let opts = &cli.opts;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs.max(1))
        .build()
        .map_err(|e| CliError::Internal(e.to_string()))?;
    pool.install(|| match &cli.command {
        Command::Genus => {
            let mut polys = match base_config(opts)? {
                Some(cfg) => cfg.polynomials,
                None => Vec::new(),
            };
            if !opts.polys.is_empty() {
                polys = opts.polys.clone();
            }
            commands::cmd_genus(&polys)
        }
        Command::Examples { name, height } => {
            let horizon = opts.horizon.ok_or_else(|| CliError::Usage("examples needs --horizon".into()))?;
            let mut cfg = match base_config(opts)? {
                Some(mut cfg) => {
                    cfg.family.name = name.clone();
                    cfg
                }
                None => RunConfig::builtin(name, horizon),
            };
            if height.is_some() {
                cfg.height = *height;
            }
            commands::cmd_examples(&overlay(cfg, opts))
        }
        command => {
            let cfg = base_config(opts)?
                .ok_or_else(|| CliError::Usage(format!("{} needs --config", command_name(command))))?;
            let mut cfg = overlay(cfg, opts);
            match command {
                Command::Check => commands::cmd_check(&cfg),
                Command::Certify { gap } => {
                    cfg.gap_check |= gap;
                    commands::cmd_certify(&cfg)
                }
                Command::Zstat => commands::cmd_zstat(&cfg),
                Command::Tails => commands::cmd_tails(&cfg),
                Command::Genus | Command::Examples { .. } => unreachable!(),
            }
        }
    })
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Check => "check",
        Command::Certify { .. } => "certify",
        Command::Genus => "genus",
        Command::Examples { .. } => "examples",
        Command::Zstat => "zstat",
        Command::Tails => "tails",
    }
}
