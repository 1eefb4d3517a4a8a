//! Truncated formal power series over exact rationals.
//!
//! A [`TruncatedSeries`] of order `N` stores `c_0..=c_N`; coefficients past
//! `N` are unknown rather than zero. Every operation reports its result only
//! through the order at which it is actually determined by its inputs.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::rational::{factorial, int, write_terms, Rational};

/// Default truncation order for catalog builds and CLI expansions.
pub const DEFAULT_ORDER: usize = 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncatedSeries {
    coeffs: Vec<Rational>,
}

impl TruncatedSeries {
    /// Builds a series of the given order. Missing coefficients are zero,
    /// extra ones are dropped.
    pub fn new(mut coeffs: Vec<Rational>, order: usize) -> Self {
        coeffs.resize(order + 1, Rational::zero());
        Self { coeffs }
    }

    /// Series whose order is `coeffs.len() - 1`. Panics on an empty vector.
    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        Self { coeffs }
    }

    pub fn from_fn(order: usize, f: impl FnMut(usize) -> Rational) -> Self {
        Self {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn from_ints(coeffs: &[i64], order: usize) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect(), order)
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: usize) -> Self {
        Self::new(vec![c], order)
    }

    /// The series `X`.
    pub fn x(order: usize) -> Self {
        Self::monomial(Rational::one(), 1, order)
    }

    pub fn monomial(c: Rational, k: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// `1 / (1 - X)` through `order`.
    pub fn geometric(order: usize) -> Self {
        Self::from_fn(order, |_| Rational::one())
    }

    /// `exp(X)` through `order`.
    pub fn exp_x(order: usize) -> Self {
        Self::from_fn(order, |k| factorial(k).recip())
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rational> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&Rational> {
        self.coeffs.get(k)
    }


    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Index of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise truncation order");
        Self {
            coeffs: self.coeffs[..=order].to_vec(),
        }
    }

    /// True when both series agree through the smaller of the two orders.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let n = self.order().min(other.order());
        self.coeffs[..=n] == other.coeffs[..=n]
    }

    /// First index (up to the common order) where the series differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&k| self.coeffs[k] != other.coeffs[k])
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| &self.coeffs[k] + &other.coeffs[k])
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        Self::from_fn(n, |k| &self.coeffs[k] - &other.coeffs[k])
    }

    /// Cauchy product through `min(order_a, order_b)`.
    pub fn mul(&self, other: &Self) -> Self {
        let n = self.order().min(other.order());
        let mut out = vec![Rational::zero(); n + 1];
        for (i, a) in self.coeffs[..=n].iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Self { coeffs: out }
    }

    pub fn pow_int(&self, k: usize) -> Self {
        let mut acc = Self::one(self.order());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Multiplication by `X`; the order rises by one.
    pub fn mul_x(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// Division by `X`. Requires `c_0 = 0` and order at least one; the order
    /// drops by one.
    pub fn div_x(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant(self.coeffs[0].clone()));
        }
        if self.order() == 0 {
            return Err(Error::OrderExceeded {
                requested: 1,
                order: 0,
            });
        }
        Ok(Self {
            coeffs: self.coeffs[1..].to_vec(),
        })
    }

    /// `outer(inner(X))` by Horner's scheme in the series ring.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant(inner.coeffs[0].clone()));
        }
        let n = self.order().min(inner.order());
        let inner = inner.truncate(n);
        let mut acc = Self::constant(self.coeffs[n].clone(), n);
        for k in (0..n).rev() {
            acc = acc.mul(&inner);
            acc.coeffs[0] += &self.coeffs[k];
        }
        Ok(acc)
    }

    /// `exp(s)` for `s(0) = 0`, via `E' = s' E`.
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant(self.coeffs[0].clone()));
        }
        let n = self.order();
        let mut e = vec![Rational::zero(); n + 1];
        e[0] = Rational::one();
        for m in 1..=n {
            let mut acc = Rational::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    acc += int(k as i64) * &self.coeffs[k] * &e[m - k];
                }
            }
            e[m] = acc / int(m as i64);
        }
        Ok(Self { coeffs: e })
    }

    /// `log(s)` for `s(0) = 1`, via `s L' = s'`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::ConstantNotOne(self.coeffs[0].clone()));
        }
        let n = self.order();
        let mut l = vec![Rational::zero(); n + 1];
        for m in 1..=n {
            let mut acc = int(m as i64) * &self.coeffs[m];
            for k in 1..m {
                if !self.coeffs[m - k].is_zero() {
                    acc -= int(k as i64) * &l[k] * &self.coeffs[m - k];
                }
            }
            l[m] = acc / int(m as i64);
        }
        Ok(Self { coeffs: l })
    }

    /// `s^r = exp(r log s)` for `s(0) = 1`.
    pub fn pow_rational(&self, r: &Rational) -> Result<Self> {
        self.log()?.scale(r).exp()
    }

    /// Formal derivative. An order-`N` series yields order `N - 1`; an
    /// order-0 series is treated as a constant and yields the zero series.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (1..self.coeffs.len())
                .map(|k| int(k as i64) * &self.coeffs[k])
                .collect(),
        }
    }

    /// Antiderivative with zero constant, reported at the input order.
    pub fn integrate(&self) -> Self {
        Self::from_fn(self.order(), |k| {
            if k == 0 {
                Rational::zero()
            } else {
                &self.coeffs[k - 1] / int(k as i64)
            }
        })
    }

    /// Antiderivative with zero constant at order `N + 1`, which is fully
    /// determined by an order-`N` input.
    pub fn integrate_exact(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c / int(k as i64 + 1));
        }
        Self { coeffs }
    }

    /// Multiplicative inverse for `s(0) != 0`.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::NotInvertible);
        }
        let inv0 = c0.recip();
        let n = self.order();
        let mut r = vec![Rational::zero(); n + 1];
        r[0] = inv0.clone();
        for m in 1..=n {
            let mut acc = Rational::zero();
            for k in 1..=m {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &r[m - k];
                }
            }
            r[m] = -acc * &inv0;
        }
        Ok(Self { coeffs: r })
    }

    /// `self / other` for `other(0) != 0`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.reciprocal()?))
    }

    /// Compositional inverse of a delta series.
    ///
    /// Coefficients are solved one order at a time from `[X^k] s(t(X)) = 0`;
    /// only the linear term of `s` involves the unknown `t_k`. Both
    /// `s∘t = X` and `t∘s = X` are checked before returning.
    pub fn lagrange_invert(&self) -> Result<Self> {
        if !self.coeffs[0].is_zero() {
            return Err(Error::NonzeroConstant(self.coeffs[0].clone()));
        }
        let n = self.order();
        if n == 0 {
            return Err(Error::OrderExceeded {
                requested: 1,
                order: 0,
            });
        }
        if self.coeffs[1].is_zero() {
            return Err(Error::NotDelta);
        }
        let s1_inv = self.coeffs[1].recip();
        // powers[j][m] = [X^m] t^j, filled one column m at a time; column m
        // of t^j (j ≥ 2) only needs t_1..t_{m-1}.
        let mut powers = vec![vec![Rational::zero(); n + 1]; n + 1];
        powers[0][0] = Rational::one();
        powers[1][1] = s1_inv.clone();
        let mut composed = vec![Rational::zero(); n + 1];
        composed[1] = &self.coeffs[1] * &s1_inv;
        for m in 2..=n {
            for j in 2..=m {
                let mut acc = Rational::zero();
                for i in 1..=m + 1 - j {
                    let (a, b) = (&powers[1][i], &powers[j - 1][m - i]);
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                powers[j][m] = acc;
            }
            let ck = (2..=m).fold(Rational::zero(), |acc, j| {
                if self.coeffs[j].is_zero() {
                    acc
                } else {
                    acc + &self.coeffs[j] * &powers[j][m]
                }
            });
            powers[1][m] = -&ck * &s1_inv;
            composed[m] = ck + &self.coeffs[1] * &powers[1][m];
        }
        let t = Self {
            coeffs: powers.swap_remove(1),
        };
        let x = Self::x(n);
        if Self::from_coeffs(composed) != x || t.compose(self)? != x {
            return Err(Error::Inconsistent(
                "compositional inverse failed the round-trip check".into(),
            ));
        }
        Ok(t)
    }

    /// Exact partial sum `Σ_{k≤N} c_k x^k`.
    pub fn evaluate(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Partial sum in double precision.
    pub fn evaluate_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + crate::rational::to_f64(c))
    }

    /// Applies `c_n ↦ n^m c_n`.
    pub fn twist(&self, m: u32) -> Self {
        Self::from_fn(self.order(), |k| {
            &self.coeffs[k] * num_traits::pow(int(k as i64), m as usize)
        })
    }

    /// Replaces `X` by `λX`.
    pub fn rescale(&self, lambda: &Rational) -> Self {
        let mut p = Rational::one();
        Self::from_fn(self.order(), |k| {
            if k > 0 {
                p *= lambda;
            }
            &self.coeffs[k] * &p
        })
    }
}

impl Add for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn add(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::add(self, rhs)
    }
}

impl Sub for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn sub(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::sub(self, rhs)
    }
}

impl Mul for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn mul(self, rhs: Self) -> TruncatedSeries {
        TruncatedSeries::mul(self, rhs)
    }
}

impl Neg for &TruncatedSeries {
    type Output = TruncatedSeries;
    fn neg(self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl fmt::Debug for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !write_terms(f, self.coeffs.iter().enumerate(), "X")? {
            write!(f, "0")?;
        }
        write!(f, " + O(X^{})", self.order() + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct SeriesJson {
    order: usize,
    #[serde(with = "crate::rational::serde_str::vec")]
    coeffs: Vec<Rational>,
}

impl Serialize for TruncatedSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SeriesJson {
            order: self.order(),
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SeriesJson::deserialize(d)?;
        if raw.coeffs.len() != raw.order + 1 {
            return Err(serde::de::Error::custom(format!(
                "series of order {} needs {} coefficients, got {}",
                raw.order,
                raw.order + 1,
                raw.coeffs.len()
            )));
        }
        Ok(Self { coeffs: raw.coeffs })
    }
}
