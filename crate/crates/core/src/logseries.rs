//! Series of the form `A(p) + B(p)·log p`.
//!
//! Entropy-type quantities (the Legendre transform `F - w·log X`, the
//! φ-logarithm, the φ-entropy) all live in this algebra with a single `log`
//! generator. Both parts always share one truncation order.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::series::TruncatedSeries;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LogSeries {
    plain: TruncatedSeries,
    log: TruncatedSeries,
}

impl LogSeries {
    /// Builds `plain + log·log p`, truncating both parts to the smaller order.
    pub fn new(plain: TruncatedSeries, log: TruncatedSeries) -> Self {
        let n = plain.order().min(log.order());
        Self {
            plain: plain.truncate(n),
            log: log.truncate(n),
        }
    }

    pub fn from_plain(plain: TruncatedSeries) -> Self {
        let n = plain.order();
        Self::new(plain, TruncatedSeries::zero(n))
    }

    /// `log p` on its own.
    pub fn log_p(order: usize) -> Self {
        Self::new(TruncatedSeries::zero(order), TruncatedSeries::one(order))
    }

    pub fn plain(&self) -> &TruncatedSeries {
        &self.plain
    }

    pub fn log_part(&self) -> &TruncatedSeries {
        &self.log
    }

    pub fn order(&self) -> usize {
        self.plain.order()
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self {
            plain: self.plain.truncate(order),
            log: self.log.truncate(order),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.plain.add(&other.plain), self.log.add(&other.log))
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.plain.sub(&other.plain), self.log.sub(&other.log))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.plain.scale(c), self.log.scale(c))
    }

    /// Multiplies both parts by an ordinary series.
    pub fn mul_series(&self, s: &TruncatedSeries) -> Self {
        Self::new(self.plain.mul(s), self.log.mul(s))
    }

    /// Multiplication by `p`; the order rises by one.
    pub fn mul_x(&self) -> Self {
        Self::new(self.plain.mul_x(), self.log.mul_x())
    }

    pub fn agrees_with(&self, other: &Self) -> bool {
        self.plain.agrees_with(&other.plain) && self.log.agrees_with(&other.log)
    }

    /// Substitutes `p = u(X)` with `u = X·U(X)`, `U(0) = 1`.
    ///
    /// `log u(X) = log X + log U(X)`, so the result is
    /// `A(u) + B(u)·log U` in the plain part and `B(u)` in the log part. A
    /// linear coefficient other than one would introduce the constant
    /// `log u_1`, which this algebra cannot hold.
    pub fn compose(&self, u: &TruncatedSeries) -> Result<Self> {
        if !u.constant_term().is_zero() {
            return Err(Error::NonzeroConstant(u.constant_term().clone()));
        }
        let u1 = u.coeff(1).cloned().unwrap_or_else(Rational::zero);
        if u1.is_zero() {
            return Err(Error::NotDelta);
        }
        if !u1.is_one() {
            return Err(Error::NonUnitLinear(u1));
        }
        let a_u = self.plain.compose(u)?;
        let b_u = self.log.compose(u)?;
        // log(u/X) is only known through order N - 1
        let log_unit = u.div_x()?.log()?;
        let correction = if b_u.constant_term().is_zero() {
            // B(u) = X·C(X): the product regains the lost order
            b_u.div_x()?.mul(&log_unit).mul_x()
        } else {
            b_u.mul(&log_unit)
        };
        let plain = a_u.add(&correction);
        Ok(Self::new(plain, b_u))
    }

    /// `d/dp (A + B log p) = A' + B' log p + B/p`. Requires `B(0) = 0`.
    pub fn derivative(&self) -> Result<Self> {
        if !self.log.constant_term().is_zero() {
            return Err(Error::LogPartConstant(self.log.constant_term().clone()));
        }
        let b_over_p = self.log.div_x()?;
        Ok(Self::new(
            self.plain.derivative().add(&b_over_p),
            self.log.derivative(),
        ))
    }
}

impl fmt::Debug for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LogSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] + [{}]·log p", self.plain, self.log)
    }
}

#[derive(Serialize, Deserialize)]
struct LogSeriesJson {
    plain: TruncatedSeries,
    log: TruncatedSeries,
}

impl Serialize for LogSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LogSeriesJson {
            plain: self.plain.clone(),
            log: self.log.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LogSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = LogSeriesJson::deserialize(d)?;
        if raw.plain.order() != raw.log.order() {
            return Err(serde::de::Error::custom(
                "plain and log parts must share one truncation order",
            ));
        }
        Ok(Self {
            plain: raw.plain,
            log: raw.log,
        })
    }
}
