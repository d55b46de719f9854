//! Pseudoflow polyhedra for network-flow instances.
//!
//! A min-cost flow, max flow, or assignment instance induces a polyhedron
//! over arc flows plus two nonnegative slack variables per node that absorb
//! any violation of flow balance. This crate builds that polyhedron,
//! enumerates and classifies its circuits (sparse ±1 kernel directions),
//! traces the circuit walks performed by four classical combinatorial
//! algorithms, and checks that maximal-step circuit augmentation under
//! suitable objectives and pivot rules reproduces those walks step by step.
//!
//! All arithmetic is exact: coordinates, costs, and step lengths are
//! arbitrary-precision rationals, and the vertex/edge tests are rank
//! computations over exact rationals. There is no tolerance parameter
//! anywhere in the crate.

pub mod algorithms;
pub mod circuits;
pub mod dot;
pub mod geometry;
pub mod instances;
pub mod json;
pub mod network;
pub mod pivot;
pub mod trace;
pub mod verify;

/// Exact scalar used for every coordinate, cost, and step length.
pub type Rational = num_rational::BigRational;

use num_traits::{One, Zero};

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("invalid instance: {0}")]
    Validation(String),
    #[error("infeasible instance: {0}")]
    Infeasible(String),
    #[error("infeasible point: {0}")]
    InfeasiblePoint(String),
    #[error("{algorithm} does not apply to an instance of this kind")]
    KindMismatch { algorithm: String },
    #[error(
        "size guard exceeded: {coords} coordinates > limit {limit} \
         (set CIRCUITFLOW_SIZE_GUARD to raise it)"
    )]
    SizeGuard { coords: usize, limit: usize },
    #[error("{0}")]
    BadArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Integer rational zero.
pub fn rat_zero() -> Rational {
    Rational::zero()
}

/// Integer rational one.
pub fn rat_one() -> Rational {
    Rational::one()
}

/// Rational from a machine integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Parses a rational written as `p` or `p/q` in decimal.
pub fn parse_rational(text: &str) -> std::result::Result<Rational, String> {
    use num_bigint::BigInt;
    use std::str::FromStr;
    let parse_int = |s: &str| BigInt::from_str(s.trim()).map_err(|e| e.to_string());
    match text.split_once('/') {
        None => Ok(Rational::from_integer(parse_int(text)?)),
        Some((num, den)) => {
            let den = parse_int(den)?;
            if den.is_zero() {
                return Err("zero denominator".to_string());
            }
            Ok(Rational::new(parse_int(num)?, den))
        }
    }
}

/// Formats a rational as `p` or `p/q` (always fully reduced).
pub fn format_rational(value: &Rational) -> String {
    value.to_string()
}

/// Reads the enumeration size-guard override from the environment.
pub(crate) fn size_guard(default: usize) -> usize {
    match std::env::var("CIRCUITFLOW_SIZE_GUARD") {
        Ok(text) => text.parse().unwrap_or(default),
        Err(_) => default,
    }
}
