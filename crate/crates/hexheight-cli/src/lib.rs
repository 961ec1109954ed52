//! Command implementations for the `hexheight` binary.
//!
//! Every subcommand builds a list of typed rows, rendered either as CSV
//! (with a `# seed=…` comment line on randomized suites) or as JSON lines.
//! Exact rational values are serialized as `p/q` strings, never decimals.
//! Exit status: 0 on success, 2 when a theorem-backed check came out false
//! (an implementation bug, not a usage problem), 1 for usage or I/O errors.

pub mod commands;
pub mod output;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    #[value(name = "json-lines", alias = "jsonl")]
    JsonLines,
}

/// Exact periodic quadratic forms, their Fourier expansions, and Bernoulli
/// local height bounds.
#[derive(Debug, Parser)]
#[command(name = "hexheight", version, max_term_width = 100)]
pub struct Cli {
    #[command(subcommand)]
    pub cmd: Cmd,

    /// Seed for randomized suites (printed in the output header).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write output to this file (atomically) instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Add a quadrature-oracle column to `fourier`.
    #[arg(long, global = true)]
    pub oracle: bool,

    /// log2 of the quadrature grid size.
    #[arg(long, global = true, default_value_t = 11)]
    pub grid_exponent: u32,

    /// Trial count for randomized suites.
    #[arg(long, global = true, default_value_t = 100)]
    pub trials: u32,
}

#[derive(Debug, Subcommand)]
pub enum Cmd {
    /// Gauss-reduce a positive definite triple, reporting the transform.
    Reduce { a: i64, b: i64, c: i64 },
    /// Evaluate the periodic minimum L at a rational point.
    EvalL {
        a: i64,
        b: i64,
        c: i64,
        /// x coordinate, e.g. 1/2 or -3/7.
        x: String,
        /// y coordinate.
        y: String,
    },
    /// Closed-form Fourier coefficients for |m|, |n| ≤ max-index.
    Fourier {
        a: i64,
        b: i64,
        c: i64,
        #[arg(long, default_value_t = 6)]
        max_index: u32,
    },
    /// Hexagon vertices and the octagon/triangle decomposition.
    Hexagon { a: i64, b: i64, c: i64 },
    /// Closed-form vs direct d-torsion average of L at a point.
    AvgD {
        a: i64,
        b: i64,
        c: i64,
        x: String,
        y: String,
        d: u32,
    },
    /// Randomized pairwise lower-bound suite at one place.
    LocalBounds {
        a: i64,
        b: i64,
        c: i64,
        /// Points per trial (distinct residues; at most D of them exist).
        #[arg(long, default_value_t = 4)]
        points: u32,
        /// Torsion order; defaults to 2Δ.
        #[arg(long)]
        d: Option<u32>,
    },
    /// Tropical theta identities for one (Q, w, n).
    Theta {
        /// Symmetric positive definite matrix, rows split by ';', e.g. "2,1;1,5".
        #[arg(long)]
        matrix: String,
        /// Valuation vector, e.g. "1/2,0".
        #[arg(long)]
        vector: String,
        /// Integer translation vector, e.g. "1,-1".
        #[arg(long)]
        translate: String,
    },
    /// Run a scenario file (TOML) through the estimate chain.
    Simulate { file: PathBuf },
    /// Check the Hölder-type inequality for a ramification profile.
    Holder {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta: f64,
        /// Branch indices e_w (positive reals).
        #[arg(required = true)]
        e: Vec<f64>,
    },
}

/// Runs a parsed invocation. `Ok(true)` means every theorem-backed check in
/// the output holds.
pub fn run(cli: &Cli) -> Result<bool> {
    let rendered = match &cli.cmd {
        Cmd::Reduce { a, b, c } => {
            let rows = vec![commands::reduce(*a, *b, *c)?];
            output::render(&rows, cli.format, None)
        }
        Cmd::EvalL { a, b, c, x, y } => {
            let rows = vec![commands::eval_l(*a, *b, *c, x, y)?];
            output::render(&rows, cli.format, None)
        }
        Cmd::Fourier { a, b, c, max_index } => {
            let rows = commands::fourier(
                *a,
                *b,
                *c,
                *max_index,
                cli.oracle,
                cli.grid_exponent,
            )?;
            output::render(&rows, cli.format, None)
        }
        Cmd::Hexagon { a, b, c } => {
            let rows = commands::hexagon(*a, *b, *c)?;
            output::render(&rows, cli.format, None)
        }
        Cmd::AvgD { a, b, c, x, y, d } => {
            let rows = vec![commands::avg_d(*a, *b, *c, x, y, *d)?];
            output::render(&rows, cli.format, None)
        }
        Cmd::LocalBounds { a, b, c, points, d } => {
            let rows = commands::local_bounds(*a, *b, *c, *points, *d, cli.trials, cli.seed)?;
            output::render(&rows, cli.format, Some(format!("seed={}", cli.seed)))
        }
        Cmd::Theta {
            matrix,
            vector,
            translate,
        } => {
            let rows = vec![commands::theta(matrix, vector, translate)?];
            output::render(&rows, cli.format, None)
        }
        Cmd::Simulate { file } => {
            let text = std::fs::read_to_string(file)
                .with_context(|| format!("reading scenario file {}", file.display()))?;
            let cfg = hexheight::global_model::ScenarioConfig::from_toml(&text)?;
            let rows = hexheight::global_model::run_scenario(&cfg)?;
            output::render(&rows, cli.format, Some(format!("seed={}", cfg.seed)))
        }
        Cmd::Holder { alpha, beta, e } => {
            let rows = vec![commands::holder(*alpha, *beta, e)?];
            output::render(&rows, cli.format, None)
        }
    };
    let (text, all_hold) = rendered?;
    output::emit(&text, cli.out.as_deref())?;
    Ok(all_hold)
}

/// Splits "p,q,r" into rationals.
pub fn parse_rationals(s: &str) -> Result<Vec<hexheight::rational::Rat>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<hexheight::rational::Rat>()
                .with_context(|| format!("invalid rational {tok:?}"))
        })
        .collect()
}

/// Splits "n1,n2" into integers.
pub fn parse_integers(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<i64>()
                .with_context(|| format!("invalid integer {tok:?}"))
        })
        .collect()
}

/// Parses one rational CLI argument.
pub fn parse_rational(s: &str) -> Result<hexheight::rational::Rat> {
    let v = parse_rationals(s)?;
    if v.len() != 1 {
        bail!("expected one rational, got {s:?}");
    }
    Ok(v.into_iter().next().unwrap())
}
