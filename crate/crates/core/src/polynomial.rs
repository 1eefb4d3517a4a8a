//! Dense univariate polynomials with rational coefficients.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{int, write_terms, Rational};

/// Index `k` holds the coefficient of `x^k`; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<Rational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| int(c)).collect())
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(int(1))
    }

    /// `c·x^k`.
    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// `x^k`.
    pub fn power(k: usize) -> Self {
        Self::monomial(int(1), k)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    /// Multiplication by `x`.
    pub fn mul_x(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    /// `D = d/dx`.
    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| int(k as i64) * c)
                .collect(),
        )
    }

    /// `D^k`, using `D^k x^n = (n)_k x^{n-k}`.
    pub fn derivative_n(&self, k: usize) -> Self {
        if k >= self.coeffs.len() {
            return Self::zero();
        }
        Self::new(
            (k..self.coeffs.len())
                .map(|n| {
                    let falling: i64 = (0..k as i64).map(|j| n as i64 - j).product();
                    int(falling) * &self.coeffs[n]
                })
                .collect(),
        )
    }

    pub fn evaluate(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    /// Falling factorial `(x)_n = x(x-1)…(x-n+1)`.
    pub fn falling_factorial(n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, j| {
            acc.mul(&Self::new(vec![int(-(j as i64)), int(1)]))
        })
    }

    /// Rising factorial `x^{(n)} = x(x+1)…(x+n-1)`.
    pub fn rising_factorial(n: usize) -> Self {
        (0..n).fold(Self::one(), |acc, j| {
            acc.mul(&Self::new(vec![int(j as i64), int(1)]))
        })
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !write_terms(f, self.coeffs.iter().enumerate().rev(), "x")? {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct PolynomialJson {
    #[serde(with = "crate::rational::serde_str::vec")]
    coeffs: Vec<Rational>,
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PolynomialJson {
            coeffs: self.coeffs.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        Ok(Self::new(PolynomialJson::deserialize(d)?.coeffs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn trimming_and_degree() {
        let p = Polynomial::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert_eq!(Polynomial::from_ints(&[0, 0]).degree(), None);
    }

    #[test]
    fn derivatives() {
        let p = Polynomial::power(3);
        assert_eq!(p.derivative(), Polynomial::from_ints(&[0, 0, 3]));
        assert_eq!(p.derivative_n(2), Polynomial::from_ints(&[0, 6]));
        assert_eq!(p.derivative_n(4), Polynomial::zero());
    }

    #[test]
    fn factorials() {
        assert_eq!(
            Polynomial::falling_factorial(3),
            Polynomial::from_ints(&[0, 2, -3, 1])
        );
        assert_eq!(
            Polynomial::rising_factorial(3),
            Polynomial::from_ints(&[0, 2, 3, 1])
        );
        assert_eq!(
            Polynomial::falling_factorial(3).evaluate(&rat(1, 2)),
            rat(3, 8)
        );
    }

    #[test]
    fn json_schema() {
        let p = Polynomial::new(vec![rat(1, 2), int(0), int(-1)]);
        let j = serde_json::to_value(&p).unwrap();
        assert_eq!(j, serde_json::json!({"coeffs": ["1/2", "0", "-1"]}));
        assert_eq!(serde_json::from_value::<Polynomial>(j).unwrap(), p);
    }
}
