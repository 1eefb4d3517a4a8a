//! Deformed exponentials, deformed logarithms and φ-entropies.
//!
//! A deformation is `φ_T(p) = p - Σ_{n≥2} T_{n-1} p^n`. The map `g` sends it
//! to the statistics whose inverse weight is `X_φ(p) = exp(ln⁰_φ(p))`, and `f`
//! sends it to the entropy density with `1 + Σ s_n p^n = 1/(1 - Σ T_n p^n)`.
//!
//! Constants such as `log X(1)` are dropped throughout: `ln⁰_φ` and `H⁰_φ`
//! are the constant-free forms, and an exact `c₀` can be supplied by callers
//! who know it.

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::logseries::LogSeries;
use crate::rational::{int, to_f64, Rational};
use crate::series::TruncatedSeries;
use crate::statistics::Statistics;

/// `φ_T(p) = p - Σ_{n≥2} T_{n-1} p^n` through `p^order`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PhiJson", into = "PhiJson")]
pub struct PhiSeries {
    order: usize,
    t: Vec<Rational>,
}

#[derive(Serialize, Deserialize)]
struct PhiJson {
    order: usize,
    #[serde(rename = "T", with = "crate::rational::serde_str::vec")]
    t: Vec<Rational>,
}

impl TryFrom<PhiJson> for PhiSeries {
    type Error = Error;
    fn try_from(j: PhiJson) -> Result<Self> {
        Self::new(j.t, j.order)
    }
}

impl From<PhiSeries> for PhiJson {
    fn from(p: PhiSeries) -> Self {
        PhiJson {
            order: p.order,
            t: p.t,
        }
    }
}

impl PhiSeries {
    /// `t = (T_1, …)`; padded with zeros or truncated to `order - 1` entries.
    pub fn new(mut t: Vec<Rational>, order: usize) -> Result<Self> {
        if order < 1 {
            return Err(Error::InvalidParam("φ needs order at least 1".into()));
        }
        t.resize(order - 1, Rational::zero());
        Ok(Self { order, t })
    }

    /// `φ = p`.
    pub fn identity(order: usize) -> Self {
        Self {
            order,
            t: vec![Rational::zero(); order.saturating_sub(1)],
        }
    }

    /// Reads `T` off a series with `φ(0) = 0`, `φ'(0) = 1`.
    pub fn from_series(phi: &TruncatedSeries) -> Result<Self> {
        if !phi.constant_term().is_zero() {
            return Err(Error::NonzeroConstant(phi.constant_term().clone()));
        }
        match phi.coeff(1) {
            Some(c) if c.is_one() => {}
            Some(c) => return Err(Error::NonUnitLinear(c.clone())),
            None => return Err(Error::NotDelta),
        }
        let t = phi.coeffs()[2..].iter().map(|c| -c).collect();
        Ok(Self {
            order: phi.order(),
            t,
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// `T_1, …, T_{order-1}`.
    pub fn t(&self) -> &[Rational] {
        &self.t
    }

    pub fn series(&self) -> TruncatedSeries {
        TruncatedSeries::from_fn(self.order, |k| match k {
            0 => Rational::zero(),
            1 => Rational::one(),
            k => -&self.t[k - 2],
        })
    }

    /// `p/φ(p) = 1/(1 - Σ T_n p^n)`, known through `p^{order-1}`.
    fn p_over_phi(&self) -> TruncatedSeries {
        let mut denom = vec![Rational::one()];
        denom.extend(self.t.iter().map(|c| -c));
        TruncatedSeries::new(denom, self.order - 1)
            .reciprocal()
            .expect("constant term is one")
    }
}

/// `a_1, …, a_{n_max}` with `ln⁰_φ(p) = log p + Σ a_n p^n/n`.
pub fn a_from_phi(phi: &PhiSeries, n_max: usize) -> Result<Vec<Rational>> {
    let q = phi.p_over_phi();
    if n_max > q.order() {
        return Err(Error::OrderExceeded {
            requested: n_max,
            order: q.order(),
        });
    }
    Ok(q.coeffs()[1..=n_max].to_vec())
}

/// `ln⁰_φ(p) = ∫ du/φ(u)` without its constant, known through `p^{order-1}`.
pub fn ln_phi(phi: &PhiSeries) -> LogSeries {
    let q = phi.p_over_phi();
    let plain = TruncatedSeries::from_fn(q.order(), |k| {
        if k == 0 {
            Rational::zero()
        } else {
            &q.coeffs()[k] / int(k as i64)
        }
    });
    let n = plain.order();
    LogSeries::new(plain, TruncatedSeries::one(n))
}

/// `log X(p)` read from the cached inverse weight of a statistics.
pub fn ln_phi_of_statistics(stat: &Statistics) -> Result<LogSeries> {
    let unit = stat.x_of_w().div_x()?.log()?;
    let n = unit.order();
    Ok(LogSeries::new(unit, TruncatedSeries::one(n)))
}

/// `X_φ(p) = p·exp(Σ a_n p^n/n)`.
pub fn x_from_phi(phi: &PhiSeries) -> TruncatedSeries {
    ln_phi(phi)
        .plain()
        .exp()
        .expect("ln⁰_φ has zero constant plain part")
        .mul_x()
}

/// The statistics with inverse weight `X_φ`.
pub fn map_g(phi: &PhiSeries) -> Result<Statistics> {
    Statistics::from_weight("g(φ)", x_from_phi(phi).lagrange_invert()?)
}

/// `φ(u) = X(u)/X'(u)`.
pub fn map_g_inverse(stat: &Statistics) -> Result<PhiSeries> {
    let x = stat.x_of_w();
    let ratio = x.div_x()?.div(&x.derivative())?;
    PhiSeries::from_series(&ratio.mul_x())
}

/// The inverse of `ln⁰_φ` in exponential variables: with `q = X_φ(p)`, `p`
/// as a series in `q`. This is the weight function `w(q)`.
pub fn exp_phi(phi: &PhiSeries) -> Result<TruncatedSeries> {
    x_from_phi(phi).lagrange_invert()
}

/// `ξ_φ(u) = ∫_0^u v/φ(v) dv`, computed as the integral and as `F(X(u))`.
pub fn xi(phi: &PhiSeries) -> Result<TruncatedSeries> {
    let by_integral = xi_integral(phi);
    let stat = map_g(phi)?;
    let by_composition = stat.free_energy().compose(&x_from_phi(phi))?;
    if by_integral != by_composition {
        return Err(Error::Inconsistent(format!(
            "ξ routes disagree at X^{}",
            by_integral.first_difference(&by_composition).unwrap_or(0)
        )));
    }
    Ok(by_integral)
}

fn xi_integral(phi: &PhiSeries) -> TruncatedSeries {
    phi.p_over_phi().integrate_exact()
}

/// `χ(u) = 1/ξ(1/u)` by partial sums.
pub fn chi(phi: &PhiSeries, u: &Rational) -> Result<Rational> {
    if u.is_zero() {
        return Err(Error::InvalidParam("χ needs u ≠ 0".into()));
    }
    let v = xi_integral(phi).evaluate(&u.recip());
    if v.is_zero() {
        return Err(Error::ZeroEvaluation);
    }
    Ok(v.recip())
}

/// `H⁰_φ(p) = F(X(p)) - p·log X(p)`, the φ-entropy without its linear
/// constant. The full entropy is `H⁰_φ - c₀·p`.
pub fn phi_entropy(phi: &PhiSeries) -> Result<LogSeries> {
    let x = x_from_phi(phi);
    let xi = xi(phi)?;
    let p_log_unit = x.div_x()?.log()?.mul_x();
    let n = xi.order();
    Ok(LogSeries::new(
        xi.sub(&p_log_unit),
        TruncatedSeries::x(n).scale(&int(-1)),
    ))
}

/// `H_φ = H⁰_φ - c₀·p`.
pub fn full_phi_entropy(h0: &LogSeries, c0: &Rational) -> LogSeries {
    let n = h0.order();
    h0.sub(&LogSeries::from_plain(TruncatedSeries::x(n).scale(c0)))
}

/// `-p(log p + Σ a_n p^n/(n(n+1)))`, the integrated form of the gradient
/// equation. It differs from [`phi_entropy`] by exactly `p`.
pub fn phi_entropy_integral(phi: &PhiSeries) -> LogSeries {
    EntropyDensity::new(phi.p_over_phi().coeffs()[1..].to_vec()).log_series()
}

/// `d/dp H⁰_φ = -ln⁰_φ + const`, compared on log parts and on every
/// non-constant plain coefficient.
pub fn entropy_gradient_check(phi: &PhiSeries) -> Result<bool> {
    let grad = phi_entropy(phi)?.derivative()?;
    let target = ln_phi(phi).scale(&int(-1));
    let n = grad.order().min(target.order());
    let (grad, target) = (grad.truncate(n), target.truncate(n));
    let plain_ok = (1..=n).all(|k| grad.plain().coeffs()[k] == target.plain().coeffs()[k]);
    Ok(plain_ok && grad.log_part() == target.log_part())
}

/// `1 + Σ s_n p^n = 1/(1 - Σ T_n p^n)`, same length as `t`.
pub fn s_from_t(t: &[Rational]) -> Vec<Rational> {
    reciprocal_tail(t, true)
}

/// Inverse of [`s_from_t`].
pub fn t_from_s(s: &[Rational]) -> Vec<Rational> {
    reciprocal_tail(s, false)
}

fn reciprocal_tail(list: &[Rational], negate_input: bool) -> Vec<Rational> {
    let mut coeffs = vec![Rational::one()];
    coeffs.extend(list.iter().map(|c| if negate_input { -c } else { c.clone() }));
    let r = TruncatedSeries::from_coeffs(coeffs)
        .reciprocal()
        .expect("constant term is one");
    r.coeffs()[1..]
        .iter()
        .map(|c| if negate_input { c.clone() } else { -c })
        .collect()
}

/// `H_s(p) = -p(log p + Σ s_n p^n/(n(n+1)))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EntropyDensity {
    #[serde(with = "crate::rational::serde_str::vec")]
    s: Vec<Rational>,
}

impl EntropyDensity {
    pub fn new(s: Vec<Rational>) -> Self {
        Self { s }
    }

    pub fn s(&self) -> &[Rational] {
        &self.s
    }

    /// Known through `p^{len(s)+1}`.
    pub fn log_series(&self) -> LogSeries {
        let order = self.s.len() + 1;
        let plain = TruncatedSeries::from_fn(order, |k| {
            if k < 2 {
                Rational::zero()
            } else {
                let n = (k - 1) as i64;
                -&self.s[k - 2] / int(n * (n + 1))
            }
        });
        LogSeries::new(plain, TruncatedSeries::x(order).scale(&int(-1)))
    }

    /// Reads `s` back from `H⁰ = H_s + p`, the inverse of [`Self::log_series`]
    /// after the shift.
    pub fn from_normalized_entropy(h0: &LogSeries) -> Result<Self> {
        let n = h0.order();
        let expected_log = TruncatedSeries::x(n).scale(&int(-1));
        if h0.log_part() != &expected_log {
            return Err(Error::Inconsistent("log part of H⁰ must be -p".into()));
        }
        let plain = h0.plain();
        if !plain.constant_term().is_zero() || plain.coeffs().get(1) != Some(&int(1)) {
            return Err(Error::Inconsistent("H⁰ must start with p".into()));
        }
        let s = (2..=n)
            .map(|k| {
                let m = (k - 1) as i64;
                -&plain.coeffs()[k] * int(m * (m + 1))
            })
            .collect();
        Ok(Self { s })
    }
}

/// `f(φ)`: the entropy density with `s = s_from_t(T)`.
pub fn map_f(phi: &PhiSeries) -> EntropyDensity {
    EntropyDensity::new(s_from_t(phi.t()))
}

/// `f⁻¹(H_s)`.
pub fn map_f_inverse(h: &EntropyDensity) -> PhiSeries {
    let t = t_from_s(h.s());
    let order = t.len() + 1;
    PhiSeries { order, t }
}

/// `h = f∘g⁻¹`, computed from a statistics through the Legendre form
/// `F(X(p)) - p·log X(p)` alone.
pub fn map_h(stat: &Statistics) -> Result<EntropyDensity> {
    let x = stat.x_of_w();
    let plain = stat
        .free_energy()
        .compose(x)?
        .sub(&x.div_x()?.log()?.mul_x());
    let n = plain.order();
    EntropyDensity::from_normalized_entropy(&LogSeries::new(
        plain,
        TruncatedSeries::x(n).scale(&int(-1)),
    ))
}

/// `τ = g⁻¹∘σ∘g` on deformations.
pub fn tau(phi: &PhiSeries) -> Result<PhiSeries> {
    map_g_inverse(&map_g(phi)?.dual()?)
}

/// `ρ = f∘τ∘f⁻¹` on entropy densities.
pub fn rho(h: &EntropyDensity) -> Result<EntropyDensity> {
    Ok(map_f(&tau(&map_f_inverse(h))?))
}

/// Outcome of comparing `F - w·log X` against `H_φ(w(X))`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MainTheoremReport {
    /// `H(X) = H⁰_φ(w(X))` with `H⁰` built from the entropy density.
    pub normalized: bool,
    /// ξ-route and integral-route `H⁰` agree.
    pub routes_agree: bool,
    /// With a registered `c₀`: `H(X) = H_φ(w(X)) + c₀·w(X)`. Without one:
    /// the difference lies in the span of `w(X)`.
    pub with_constant: bool,
    #[serde(with = "crate::rational::serde_str::option")]
    pub c0: Option<Rational>,
}

impl MainTheoremReport {
    pub fn holds(&self) -> bool {
        self.normalized && self.routes_agree && self.with_constant
    }
}

/// Checks the Legendre-transform theorem for one statistics.
pub fn main_theorem_check(stat: &Statistics, c0: Option<&Rational>) -> Result<MainTheoremReport> {
    let n = stat.order();
    let h = stat.entropy();
    let phi = map_g_inverse(stat)?;
    let w = stat.weight();

    let from_density = phi_entropy_integral(&phi).add(&LogSeries::from_plain(TruncatedSeries::x(
        phi.order(),
    )));
    let via_xi = phi_entropy(&phi)?;
    let routes_agree = from_density == via_xi;

    let composed = from_density.compose(w)?;
    let m = composed.order().min(n);
    let normalized = composed.truncate(m) == h.truncate(m);

    let with_constant = match c0 {
        Some(c) => {
            let full = full_phi_entropy(&via_xi, c).compose(w)?;
            let rhs = full.add(&LogSeries::from_plain(w.scale(c)));
            rhs.truncate(m) == h.truncate(m)
        }
        None => {
            let diff = h.truncate(m).sub(&via_xi.compose(w)?.truncate(m));
            let lambda = diff.plain().coeff(1).cloned().unwrap_or_else(Rational::zero);
            diff.log_part().is_zero()
                && diff.plain() == &w.truncate(m).scale(&lambda)
        }
    };
    Ok(MainTheoremReport {
        normalized,
        routes_agree,
        with_constant,
        c0: c0.cloned(),
    })
}

/// `p_i = w(e^{-(a + b E_i)})` with the residuals of the two constraints.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaxEntEvaluation {
    pub p: Vec<f64>,
    /// `Σ p_i - 1`.
    pub norm_residual: f64,
    /// `Σ p_i E_i - E`.
    pub energy_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MaxEntSolution {
    pub a: f64,
    pub b: f64,
    pub iterations: usize,
    pub evaluation: MaxEntEvaluation,
}

/// Double-precision partial sums of `w` and `w'`.
struct WeightF64 {
    w: Vec<f64>,
}

impl WeightF64 {
    fn new(stat: &Statistics) -> Self {
        Self {
            w: stat.weight().coeffs().iter().map(to_f64).collect(),
        }
    }

    fn value(&self, q: f64) -> f64 {
        self.w.iter().rev().fold(0.0, |acc, c| acc * q + c)
    }

    fn slope(&self, q: f64) -> f64 {
        self.w
            .iter()
            .enumerate()
            .skip(1)
            .rev()
            .fold(0.0, |acc, (k, c)| acc * q + k as f64 * c)
    }
}

/// Evaluates the stationary distribution at given multipliers.
pub fn max_entropy_distribution(
    stat: &Statistics,
    energies: &[f64],
    target_energy: f64,
    a: f64,
    b: f64,
) -> MaxEntEvaluation {
    evaluate(&WeightF64::new(stat), energies, target_energy, a, b)
}

fn evaluate(w: &WeightF64, energies: &[f64], target: f64, a: f64, b: f64) -> MaxEntEvaluation {
    let p: Vec<f64> = energies
        .iter()
        .map(|e| w.value((-(a + b * e)).exp()))
        .collect();
    let norm_residual = p.iter().sum::<f64>() - 1.0;
    let energy_residual = p.iter().zip(energies).map(|(p, e)| p * e).sum::<f64>() - target;
    MaxEntEvaluation {
        p,
        norm_residual,
        energy_residual,
    }
}

fn residual_norm(e: &MaxEntEvaluation) -> f64 {
    e.norm_residual.hypot(e.energy_residual)
}

pub const NEWTON_TOLERANCE: f64 = 1e-10;
pub const NEWTON_MAX_ITERATIONS: usize = 100;

/// Damped Newton iteration on `(a, b)` for `Σ p_i = 1`, `Σ p_i E_i = E`.
pub fn solve_max_entropy(
    stat: &Statistics,
    energies: &[f64],
    target_energy: f64,
    a0: f64,
    b0: f64,
) -> Result<MaxEntSolution> {
    let w = WeightF64::new(stat);
    let (mut a, mut b) = (a0, b0);
    let mut current = evaluate(&w, energies, target_energy, a, b);
    for iteration in 0..NEWTON_MAX_ITERATIONS {
        let r = residual_norm(&current);
        if r < NEWTON_TOLERANCE {
            return Ok(MaxEntSolution {
                a,
                b,
                iterations: iteration,
                evaluation: current,
            });
        }
        // ∂p_i/∂a = -q w'(q), ∂p_i/∂b = -q E_i w'(q)
        let (mut j11, mut j12, mut j22) = (0.0, 0.0, 0.0);
        for e in energies {
            let q = (-(a + b * e)).exp();
            let d = -q * w.slope(q);
            j11 += d;
            j12 += d * e;
            j22 += d * e * e;
        }
        let det = j11 * j22 - j12 * j12;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let (r1, r2) = (current.norm_residual, current.energy_residual);
        let da = -(j22 * r1 - j12 * r2) / det;
        let db = -(j11 * r2 - j12 * r1) / det;
        let mut step = 1.0;
        loop {
            let trial = evaluate(&w, energies, target_energy, a + step * da, b + step * db);
            if residual_norm(&trial) < r || step < 1e-6 {
                a += step * da;
                b += step * db;
                current = trial;
                break;
            }
            step /= 2.0;
        }
    }
    let residual = residual_norm(&current);
    if residual < NEWTON_TOLERANCE {
        return Ok(MaxEntSolution {
            a,
            b,
            iterations: NEWTON_MAX_ITERATIONS,
            evaluation: current,
        });
    }
    Err(Error::NoConvergence {
        iterations: NEWTON_MAX_ITERATIONS,
        residual,
        a,
        b,
    })
}
