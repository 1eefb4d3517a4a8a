//! Exact truncated power series for interpolating statistics.

pub mod catalog;
pub mod cli;
pub mod deformed_entropy;
pub mod error;
pub mod logseries;
pub mod oeis;
pub mod polynomial;
pub mod rational;
pub mod series;
pub mod statistics;
pub mod umbral;
pub mod verify;

pub use error::{Error, Result};
pub use logseries::LogSeries;
pub use polynomial::Polynomial;
pub use rational::Rational;
pub use series::TruncatedSeries;
