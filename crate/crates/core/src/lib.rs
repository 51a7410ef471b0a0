//! Exact measure-theoretic engine for cake cutting on `[0,1]`.
//!
//! * [`interval`]: the algebra of finite unions of intervals, exactly.
//! * [`valuation`]: normalized measures given by atoms, piecewise-constant
//!   densities and Cantor components; distribution functions, cuts, slicing.
//! * [`foundations`]: Cantor iterates, the disjoint-union witness and
//!   relative frequencies.
//! * [`protocols`]: cut & choose, last diminisher, moving knife, and
//!   fairness checks.
//! * [`config`]: the JSON valuation file format.

pub mod config;
pub mod foundations;
pub mod interval;
pub mod protocols;
pub mod rational;
pub mod valuation;

pub use interval::{EndKind, Endpoint, Interval, IntervalError, IntervalSet};
pub use protocols::{Allocation, Player, ProtocolError, TraceEvent};
pub use rational::{format_rational, parse_rational, ratio, Rational};
pub use valuation::{CdfSide, CdfValue, Valuation, ValuationError};
