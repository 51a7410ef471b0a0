//! `cakecut`: exact evaluation, cutting, slicing and fair division on the unit cake.

mod configs;
mod render;

use std::process::ExitCode;

use cakecut::config::{parse_valuation, ConfigError};
use cakecut::foundations::{disjoint_union_witness, removed_mass, FoundationsError};
use cakecut::interval::IntervalError;
use cakecut::protocols::{cut_and_choose, last_diminisher, moving_knife, players_from};
use cakecut::rational::ParseRationalError;
use cakecut::{parse_rational, CdfSide, IntervalSet, ProtocolError, Rational, ValuationError};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::One;
use serde_json::json;

use render::Render;

#[derive(Debug, Parser)]
#[command(name = "cakecut", version, about = "Exact cake cutting on [0,1]")]
struct Cli {
    /// Emit a JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Tolerance for values that involve a Cantor part, as p/q.
    #[arg(long, global = true, default_value = "1/1099511627776")]
    tol: String,

    /// Add a decimal rendering with this many digits.
    #[arg(long, global = true, value_name = "K")]
    approx: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Value of a set under a valuation.
    Evaluate { config: String, set: String },
    /// Distribution function F(x), or its left limit F(x-).
    Cdf {
        config: String,
        x: String,
        #[arg(long, value_enum, default_value_t = Side::At)]
        side: Side,
    },
    /// Prefix of a set holding the fraction alpha of its value.
    Cut { config: String, set: String, alpha: String },
    /// Partition of [0,1] into pieces worth at most epsilon.
    Slice { config: String, epsilon: String },
    /// Run a fair-division protocol, one config per player.
    Protocol {
        #[arg(value_enum)]
        name: ProtocolName,
        #[arg(required = true)]
        configs: Vec<String>,
    },
    /// Remaining and removed length of the Cantor iterates A_0..A_n.
    Cantor { p: String, n_max: u32 },
    /// The n-component disjoint union of dyadic intervals.
    Witness { n: u32 },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Side {
    At,
    Left,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ProtocolName {
    CutAndChoose,
    LastDiminisher,
    MovingKnife,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Parse(String),
    #[error("{0}")]
    Domain(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Parse(_) => 2,
        }
    }
}

fn rational_arg(field: &str, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).map_err(|e: ParseRationalError| CliError::Parse(format!("{field}: {e}")))
}

fn set_arg(field: &str, text: &str) -> Result<IntervalSet, CliError> {
    text.parse().map_err(|e: IntervalError| match e {
        IntervalError::Parse(_) => CliError::Parse(format!("{field}: {e}")),
        _ => CliError::Domain(format!("{field}: {e}")),
    })
}

fn domain(e: impl Into<DomainError>) -> CliError {
    CliError::Domain(e.into().0)
}

struct DomainError(String);

impl From<ValuationError> for DomainError {
    fn from(e: ValuationError) -> Self {
        DomainError(e.to_string())
    }
}

impl From<ProtocolError> for DomainError {
    fn from(e: ProtocolError) -> Self {
        DomainError(e.to_string())
    }
}

impl From<FoundationsError> for DomainError {
    fn from(e: FoundationsError) -> Self {
        DomainError(e.to_string())
    }
}

fn config_error(path: &str, e: ConfigError) -> CliError {
    let message = format!("{path}: {e}");
    if e.is_parse_error() {
        CliError::Parse(message)
    } else {
        CliError::Domain(message)
    }
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let tol = rational_arg("--tol", &cli.tol)?;
    let out = Render::new(cli.json, cli.approx);
    let load = |path: &str| {
        let text = configs::source(path).map_err(|e| CliError::Parse(format!("{path}: {e}")))?;
        parse_valuation(&text).map_err(|e| config_error(path, e))
    };
    match &cli.command {
        Command::Evaluate { config, set } => {
            let v = load(config)?;
            let a = set_arg("set", set)?;
            let value = v.evaluate(&a, &tol).map_err(domain)?;
            out.value("evaluate", json!({ "set": a.to_string() }), &value);
        }
        Command::Cdf { config, x, side } => {
            let v = load(config)?;
            let x = rational_arg("x", x)?;
            let (side, name) = match side {
                Side::At => (CdfSide::At, "at"),
                Side::Left => (CdfSide::LeftLimit, "left"),
            };
            let value = v.cdf(&x, side, &tol).map_err(domain)?;
            out.value(
                "cdf",
                json!({ "x": render::rational(&x), "side": name }),
                &value,
            );
        }
        Command::Cut { config, set, alpha } => {
            let v = load(config)?;
            let a = set_arg("set", set)?;
            let alpha = rational_arg("alpha", alpha)?;
            let cut = v.cut_point(&a, &alpha, &tol).map_err(domain)?;
            let value = v.evaluate(&cut.piece, &tol).map_err(domain)?;
            out.cut(&cut, &value);
        }
        Command::Slice { config, epsilon } => {
            let v = load(config)?;
            let epsilon = rational_arg("epsilon", epsilon)?;
            let pieces = v.slice(&epsilon, &tol).map_err(domain)?;
            let valued = pieces
                .into_iter()
                .map(|p| {
                    let value = v.evaluate(&p, &tol)?;
                    Ok((p, value))
                })
                .collect::<Result<Vec<_>, ValuationError>>()
                .map_err(domain)?;
            out.slice(&epsilon, &valued);
        }
        Command::Protocol { name, configs } => {
            let valuations = configs
                .iter()
                .map(|c| load(c))
                .collect::<Result<Vec<_>, _>>()?;
            let players = players_from(valuations);
            let alloc = match name {
                ProtocolName::CutAndChoose => match players.as_slice() {
                    [p1, p2] => cut_and_choose(p1, p2, &tol),
                    _ => {
                        return Err(CliError::Domain(format!(
                            "cut-and-choose takes exactly 2 players, got {}",
                            players.len()
                        )))
                    }
                },
                ProtocolName::LastDiminisher => last_diminisher(&players, &tol),
                ProtocolName::MovingKnife => moving_knife(&players, &tol),
            }
            .map_err(domain)?;
            out.protocol(&alloc.report(&players, &tol));
        }
        Command::Cantor { p, n_max } => {
            let p = rational_arg("p", p)?;
            let rows = (0..=*n_max)
                .map(|n| {
                    let removed = removed_mass(&p, n)?;
                    let remaining = Rational::one() - &removed;
                    Ok((n, BigInt::one() << n as usize, remaining, removed))
                })
                .collect::<Result<Vec<_>, FoundationsError>>()
                .map_err(domain)?;
            out.cantor(&p, &rows);
        }
        Command::Witness { n } => {
            out.witness(*n, &disjoint_union_witness(*n));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
