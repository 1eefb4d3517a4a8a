//! The space of interpolating statistics.
//!
//! A statistics is stored by its free energy `F(X) = log z(X)` with
//! `F(0) = 0` and `[X]F = 1`. The weight function `w = X·F'`, the partition
//! function `z = e^F` and the inverse weight `X(w)` are derived once on
//! construction.

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::logseries::LogSeries;
use crate::polynomial::Polynomial;
use crate::rational::{factorial, int, rat, Rational};
use crate::series::TruncatedSeries;
use crate::umbral::{conjugate_sequence, DeltaSeries};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statistics {
    name: String,
    f: TruncatedSeries,
    w: TruncatedSeries,
    z: TruncatedSeries,
    x_of_w: TruncatedSeries,
}

fn check_normalized(f: &TruncatedSeries) -> Result<()> {
    if !f.constant_term().is_zero() {
        return Err(Error::NotNormalized(format!(
            "F(0) = {}, expected 0",
            f.constant_term()
        )));
    }
    match f.coeff(1) {
        Some(c) if c.is_one() => Ok(()),
        Some(c) => Err(Error::NotNormalized(format!("[X]F = {c}, expected 1"))),
        None => Err(Error::NotNormalized("order must be at least 1".into())),
    }
}

/// `w = X·F'`, keeping the order of `F`.
fn weight_from_free_energy(f: &TruncatedSeries) -> TruncatedSeries {
    TruncatedSeries::from_fn(f.order(), |k| int(k as i64) * &f.coeffs()[k])
}

/// `F = Σ (w_n/n) X^n`.
fn free_energy_from_weight(w: &TruncatedSeries) -> TruncatedSeries {
    TruncatedSeries::from_fn(w.order(), |k| {
        if k == 0 {
            Rational::zero()
        } else {
            &w.coeffs()[k] / int(k as i64)
        }
    })
}

/// Series with zero constant term and the given coefficients from `X^1` on.
fn from_index_one(list: &[Rational]) -> TruncatedSeries {
    let mut coeffs = vec![Rational::zero()];
    coeffs.extend(list.iter().cloned());
    TruncatedSeries::from_coeffs(coeffs)
}

impl Statistics {
    /// Builds a statistics from its free energy, which must be normalized.
    pub fn from_free_energy(name: impl Into<String>, f: TruncatedSeries) -> Result<Self> {
        check_normalized(&f)?;
        let w = weight_from_free_energy(&f);
        let z = f.exp()?;
        let x_of_w = w.lagrange_invert()?;
        Ok(Self {
            name: name.into(),
            f,
            w,
            z,
            x_of_w,
        })
    }

    /// Rescales `X ↦ X/F_1` first when `[X]F ≠ 1`. Returns the statistics and
    /// the factor `F_1` that was divided out.
    pub fn from_free_energy_normalized(
        name: impl Into<String>,
        f: TruncatedSeries,
    ) -> Result<(Self, Rational)> {
        let f1 = f.coeff(1).cloned().unwrap_or_else(Rational::zero);
        if f1.is_zero() {
            return Err(Error::NotNormalized("[X]F = 0 cannot be rescaled".into()));
        }
        let scaled = f.rescale(&f1.recip());
        Ok((Self::from_free_energy(name, scaled)?, f1))
    }

    /// Builds a statistics from its weight function `w = X + …`.
    pub fn from_weight(name: impl Into<String>, w: TruncatedSeries) -> Result<Self> {
        Self::from_free_energy(name, free_energy_from_weight(&w))
    }

    /// Builds a statistics from its partition function `z = 1 + X + …`.
    pub fn from_partition_function(name: impl Into<String>, z: TruncatedSeries) -> Result<Self> {
        if !z.constant_term().is_one() {
            return Err(Error::ConstantNotOne(z.constant_term().clone()));
        }
        Self::from_free_energy(name, z.log()?)
    }

    /// `w_list = (w_1, w_2, …)`; the order is the list length.
    pub fn from_cluster(w_list: &[Rational]) -> Result<Self> {
        Self::from_weight("custom", from_index_one(w_list))
    }

    /// `W_list = (W_1, W_2, …)`; `F = log(1 + Σ W_n X^n)`.
    pub fn from_occupation(big_w_list: &[Rational]) -> Result<Self> {
        let mut z = from_index_one(big_w_list);
        z = z.add(&TruncatedSeries::one(z.order()));
        Self::from_partition_function("custom", z)
    }

    /// A statistics with `w_2..w_{max_index}` drawn as small random rationals
    /// and all later cluster coefficients zero.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, order: usize, max_index: usize) -> Result<Self> {
        let w = TruncatedSeries::from_fn(order, |k| match k {
            0 => Rational::zero(),
            1 => Rational::one(),
            k if k <= max_index => random_rational(rng),
            _ => Rational::zero(),
        });
        Self::from_weight("random", w)
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.f.order()
    }

    /// Recomputes every cache at a lower order.
    pub fn truncate(&self, order: usize) -> Result<Self> {
        Self::from_free_energy(self.name.clone(), self.f.truncate(order))
    }

    pub fn free_energy(&self) -> &TruncatedSeries {
        &self.f
    }

    pub fn weight(&self) -> &TruncatedSeries {
        &self.w
    }

    pub fn partition_function(&self) -> &TruncatedSeries {
        &self.z
    }

    pub fn x_of_w(&self) -> &TruncatedSeries {
        &self.x_of_w
    }

    /// `F` as a delta series, the input of the umbral constructions.
    pub fn free_energy_delta(&self) -> DeltaSeries {
        DeltaSeries::new(self.f.clone()).expect("normalized free energy is a delta series")
    }

    /// Occupation numbers `W_1, …, W_N`.
    pub fn occupation_numbers(&self) -> Vec<Rational> {
        self.z.coeffs()[1..].to_vec()
    }

    /// Cluster coefficients `w_1, …, w_N`.
    pub fn cluster_coefficients(&self) -> Vec<Rational> {
        self.w.coeffs()[1..].to_vec()
    }

    /// Dual cluster coefficients: the coefficients of `X(w)` from `w^1` on.
    pub fn dual_cluster_coefficients(&self) -> Vec<Rational> {
        self.x_of_w.coeffs()[1..].to_vec()
    }

    /// Checks that the caches satisfy `w = X·F'`, `z = e^F` and
    /// `w(X(w)) = w` through the stored order.
    pub fn validate(&self) -> Result<()> {
        check_normalized(&self.f)?;
        let n = self.order();
        let fail = |what: &str| Err(Error::Inconsistent(format!("{what} in `{}`", self.name)));
        if self.w != weight_from_free_energy(&self.f) {
            return fail("w ≠ X·F'");
        }
        if self.z != self.f.exp()? {
            return fail("z ≠ exp(F)");
        }
        if self.w.compose(&self.x_of_w)? != TruncatedSeries::x(n) {
            return fail("w(X(w)) ≠ w");
        }
        Ok(())
    }

    /// `⎡N;k⎤ = W_k(N)`: the coefficient of `X^k` in `z(X)^N` as a polynomial
    /// in `N`.
    pub fn occupation_polynomial(&self, k: usize) -> Result<Polynomial> {
        let seq = conjugate_sequence(&self.free_energy_delta(), k)?;
        Ok(seq.polys()[k].scale(&factorial(k).recip()))
    }

    /// All `W_0(N), …, W_k(N)` at once.
    pub fn occupation_polynomials(&self, k: usize) -> Result<Vec<Polynomial>> {
        let seq = conjugate_sequence(&self.free_energy_delta(), k)?;
        Ok(seq
            .polys()
            .iter()
            .enumerate()
            .map(|(i, p)| p.scale(&factorial(i).recip()))
            .collect())
    }

    /// `W_k(N_1 + N_2) = Σ_i W_i(N_1) W_{k-i}(N_2)`.
    pub fn occupation_recursion_check(
        &self,
        n1: &Rational,
        n2: &Rational,
        k: usize,
    ) -> Result<bool> {
        let polys = self.occupation_polynomials(k)?;
        let lhs = polys[k].evaluate(&(n1 + n2));
        let rhs = (0..=k).fold(Rational::zero(), |acc, i| {
            acc + polys[i].evaluate(n1) * polys[k - i].evaluate(n2)
        });
        Ok(lhs == rhs)
    }

    /// The statistics whose weight function is the inverse `X(w)`.
    pub fn dual(&self) -> Result<Self> {
        Self::from_weight(format!("dual({})", self.name), self.x_of_w.clone())
    }

    /// Weight function `v(w(X))`.
    pub fn group_compose(&self, other: &Self) -> Result<Self> {
        Self::from_weight(
            format!("{}∘{}", self.name, other.name),
            self.w.compose(&other.w)?,
        )
    }

    /// `v ∘_m w = v^{(m)} ∘ w^{(m)}` with `w^{(m)} = X + Σ n^m w_n X^n`.
    pub fn group_compose_m(&self, other: &Self, m: u32) -> Result<Self> {
        Self::from_weight(
            format!("{}∘_{m}{}", self.name, other.name),
            self.w.twist(m).compose(&other.w.twist(m))?,
        )
    }

    /// `H(X) = F(X) - w(X)·log X`.
    pub fn entropy(&self) -> LogSeries {
        LogSeries::new(self.f.clone(), self.w.scale(&int(-1)))
    }

    /// Partial sums `(X, z(X), F(X))`.
    pub fn spectral_samples(&self, xs: &[Rational]) -> Vec<SpectralSample> {
        xs.iter()
            .map(|x| SpectralSample {
                x: x.clone(),
                z: self.z.evaluate(x),
                y: self.f.evaluate(x),
            })
            .collect()
    }

    /// Partial sum of `w` at `X`.
    pub fn mean_occupation(&self, x: &Rational) -> Rational {
        self.w.evaluate(x)
    }
}

/// Numerator in `[-5, 5]`, denominator in `[1, 4]`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R) -> Rational {
    rat(rng.gen_range(-5..=5), rng.gen_range(1..=4))
}

/// Deformed Chu–Vandermonde: `Σ_{i+j=n} ⎡x;i⎤⎡y;j⎤ = ⎡x+y;n⎤`.
pub fn chu_vandermonde_holds(
    stat: &Statistics,
    x: &Rational,
    y: &Rational,
    n: usize,
) -> Result<bool> {
    stat.occupation_recursion_check(x, y, n)
}

/// Wu's count `(1/n!)·∏_{j<n} (g + (n-1)(1-β) - j)`.
pub fn haldane_wu_w(g: &Rational, n: usize, beta: &Rational) -> Rational {
    let top = g + int(n as i64 - 1) * (Rational::one() - beta);
    let prod = (0..n).fold(Rational::one(), |acc, j| acc * (&top - int(j as i64)));
    prod / factorial(n)
}

/// Gentile statistics with at most `p` particles per state:
/// `z = 1 + X + … + X^p`.
pub fn gentile_statistics(p: usize, order: usize) -> Result<Statistics> {
    if p < 1 {
        return Err(Error::InvalidParam("Gentile p must be at least 1".into()));
    }
    let z = TruncatedSeries::from_fn(order, |k| {
        if k <= p {
            Rational::one()
        } else {
            Rational::zero()
        }
    });
    Statistics::from_partition_function(format!("gentile(p={p})"), z)
}

/// One point on the spectral curves `z = z(X)` and `e^Y = z(X)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpectralSample {
    #[serde(rename = "X", with = "crate::rational::serde_str")]
    pub x: Rational,
    #[serde(with = "crate::rational::serde_str")]
    pub z: Rational,
    #[serde(rename = "Y", with = "crate::rational::serde_str")]
    pub y: Rational,
}

#[derive(Serialize, Deserialize)]
struct StatisticsJson {
    name: String,
    order: usize,
    #[serde(rename = "F")]
    f: TruncatedSeries,
    w: TruncatedSeries,
    #[serde(rename = "X_of_w")]
    x_of_w: TruncatedSeries,
    #[serde(rename = "W", with = "crate::rational::serde_str::vec")]
    big_w: Vec<Rational>,
    #[serde(with = "crate::rational::serde_str::vec")]
    w_cluster: Vec<Rational>,
}

impl Serialize for Statistics {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        StatisticsJson {
            name: self.name.clone(),
            order: self.order(),
            f: self.f.clone(),
            w: self.w.clone(),
            x_of_w: self.x_of_w.clone(),
            big_w: self.occupation_numbers(),
            w_cluster: self.cluster_coefficients(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Statistics {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = StatisticsJson::deserialize(d)?;
        if raw.f.order() != raw.order {
            return Err(D::Error::custom("F order does not match `order`"));
        }
        let z = raw.f.exp().map_err(D::Error::custom)?;
        let stat = Statistics {
            name: raw.name,
            f: raw.f,
            w: raw.w,
            z,
            x_of_w: raw.x_of_w,
        };
        stat.validate().map_err(D::Error::custom)?;
        if stat.occupation_numbers() != raw.big_w || stat.cluster_coefficients() != raw.w_cluster {
            return Err(D::Error::custom("W or w_cluster inconsistent with F"));
        }
        Ok(stat)
    }
}
