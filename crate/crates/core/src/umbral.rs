//! Umbral calculus on polynomial sequences.
//!
//! Series here always carry ordinary coefficients: `h(t) = Σ h_k t^k`. An
//! operator `h(D)` acts on a polynomial as `Σ h_k D^k`, so the factorials of
//! the exponential convention enter only through `D^k x^n = (n)_k x^{n-k}`.
//! Linear functionals `⟨L | p⟩` are realised as "apply `L`, evaluate at 0".

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polynomial::Polynomial;
use crate::rational::{binomial, factorial, int, Rational};
use crate::series::TruncatedSeries;

/// A series with zero constant term and nonzero linear term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaSeries(TruncatedSeries);

impl DeltaSeries {
    pub fn new(series: TruncatedSeries) -> Result<Self> {
        if !series.constant_term().is_zero() {
            return Err(Error::NonzeroConstant(series.constant_term().clone()));
        }
        match series.coeff(1) {
            Some(c) if !c.is_zero() => Ok(Self(series)),
            _ => Err(Error::NotDelta),
        }
    }

    /// The identity delta series `t`.
    pub fn identity(order: usize) -> Self {
        Self(TruncatedSeries::x(order))
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.0
    }

    pub fn order(&self) -> usize {
        self.0.order()
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self(self.0.lagrange_invert()?))
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &DeltaSeries) -> Result<Self> {
        Self::new(self.0.compose(&inner.0)?)
    }
}

/// A series with nonzero constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvertibleSeries(TruncatedSeries);

impl InvertibleSeries {
    pub fn new(series: TruncatedSeries) -> Result<Self> {
        if series.constant_term().is_zero() {
            return Err(Error::NotInvertible);
        }
        Ok(Self(series))
    }

    pub fn one(order: usize) -> Self {
        Self(TruncatedSeries::one(order))
    }

    pub fn series(&self) -> &TruncatedSeries {
        &self.0
    }
}

/// Polynomials `p_0, …, p_n` with `deg p_k = k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Polynomial>", into = "Vec<Polynomial>")]
pub struct PolynomialSequence {
    polys: Vec<Polynomial>,
}

impl TryFrom<Vec<Polynomial>> for PolynomialSequence {
    type Error = Error;
    fn try_from(polys: Vec<Polynomial>) -> Result<Self> {
        Self::new(polys)
    }
}

impl From<PolynomialSequence> for Vec<Polynomial> {
    fn from(s: PolynomialSequence) -> Self {
        s.polys
    }
}

impl PolynomialSequence {
    pub fn new(polys: Vec<Polynomial>) -> Result<Self> {
        for (k, p) in polys.iter().enumerate() {
            if p.degree() != Some(k) {
                return Err(Error::InvalidParam(format!(
                    "p_{k} must have degree {k}, got {:?}",
                    p.degree()
                )));
            }
        }
        Ok(Self { polys })
    }

    /// `x^0, …, x^n`.
    pub fn powers(n: usize) -> Self {
        Self {
            polys: (0..=n).map(Polynomial::power).collect(),
        }
    }

    pub fn polys(&self) -> &[Polynomial] {
        &self.polys
    }

    pub fn get(&self, k: usize) -> Option<&Polynomial> {
        self.polys.get(k)
    }

    /// Index of the last polynomial.
    pub fn max_index(&self) -> usize {
        self.polys.len() - 1
    }

    /// `p_0 = 1` and `p_k(0) = 0` for `k ≥ 1`.
    pub fn is_binomial_normalized(&self) -> bool {
        self.polys.first() == Some(&Polynomial::one())
            && self.polys.iter().skip(1).all(|p| p.coeff(0).is_zero())
    }

    /// Row `n` holds the coefficients of `p_n` in the monomial basis.
    pub fn coefficient_matrix(&self) -> Vec<Vec<Rational>> {
        self.polys
            .iter()
            .enumerate()
            .map(|(n, p)| (0..=n).map(|k| p.coeff(k)).collect())
            .collect()
    }

    /// Checks `p_n(a+b) = Σ C(n,k) p_k(a) p_{n-k}(b)` for every `n`.
    pub fn binomial_identity_holds(&self, a: &Rational, b: &Rational) -> bool {
        let sum = a + b;
        let pa: Vec<_> = self.polys.iter().map(|p| p.evaluate(a)).collect();
        let pb: Vec<_> = self.polys.iter().map(|p| p.evaluate(b)).collect();
        (0..self.polys.len()).all(|n| {
            let rhs = (0..=n).fold(Rational::zero(), |acc, k| {
                acc + binomial(&int(n as i64), k) * &pa[k] * &pb[n - k]
            });
            self.polys[n].evaluate(&sum) == rhs
        })
    }
}

fn check_index(n: usize, order: usize) -> Result<()> {
    if n > order {
        return Err(Error::OrderExceeded {
            requested: n,
            order,
        });
    }
    Ok(())
}

/// The sequence with `Σ p_n(x) X^n/n! = exp(x F(X))`, built from
/// `p_n(x) = n! Σ_k x^k/k! [X^n] F(X)^k`.
pub fn conjugate_sequence(big_f: &DeltaSeries, n: usize) -> Result<PolynomialSequence> {
    check_index(n, big_f.order())?;
    let f = big_f.series().truncate(n);
    // powers[k] = F^k
    let mut powers = vec![TruncatedSeries::one(n)];
    for k in 1..=n {
        powers.push(powers[k - 1].mul(&f));
    }
    let polys = (0..=n)
        .map(|m| {
            let m_fact = factorial(m);
            Polynomial::new(
                (0..=m)
                    .map(|k| &m_fact / factorial(k) * &powers[k].coeffs()[m])
                    .collect(),
            )
        })
        .collect();
    PolynomialSequence::new(polys)
}

/// The sequence associated to `f`: the conjugate sequence of `f⁻¹`.
pub fn associated_sequence(f: &DeltaSeries, n: usize) -> Result<PolynomialSequence> {
    check_index(n, f.order())?;
    conjugate_sequence(&f.inverse()?, n)
}

/// `h(D) p = Σ_k h_k D^k p`. The series must be known through `deg p`.
pub fn apply_operator(h: &TruncatedSeries, p: &Polynomial) -> Result<Polynomial> {
    let Some(deg) = p.degree() else {
        return Ok(Polynomial::zero());
    };
    check_index(deg, h.order())?;
    Ok((0..=deg).fold(Polynomial::zero(), |acc, k| {
        let hk = &h.coeffs()[k];
        if hk.is_zero() {
            acc
        } else {
            acc.add(&p.derivative_n(k).scale(hk))
        }
    }))
}

/// `⟨h(D) | p⟩ = (h(D) p)(0)`.
pub fn pairing(h: &TruncatedSeries, p: &Polynomial) -> Result<Rational> {
    Ok(apply_operator(h, p)?.evaluate(&Rational::zero()))
}

/// `r_n = Σ_k a_{n,k} q_k` where `p_n = Σ_k a_{n,k} x^k`. If `p` is conjugate
/// to `F` and `q` to `G`, then `r` is conjugate to `G(F(t))`.
pub fn umbral_composition(
    p: &PolynomialSequence,
    q: &PolynomialSequence,
) -> Result<PolynomialSequence> {
    if p.polys.len() != q.polys.len() {
        return Err(Error::LengthMismatch {
            left: p.polys.len(),
            right: q.polys.len(),
        });
    }
    let polys = p
        .polys
        .iter()
        .map(|pn| {
            pn.coeffs()
                .iter()
                .enumerate()
                .fold(Polynomial::zero(), |acc, (k, a)| acc.add(&q.polys[k].scale(a)))
        })
        .collect();
    PolynomialSequence::new(polys)
}

/// `c_{n,k}` with `q_n = Σ_k c_{n,k} p_k`, where `p` is conjugate to `F` and
/// `q` to `G`. The matrix is the coefficient table of the conjugate sequence
/// of `f(G(t))` with `f = F⁻¹`.
pub fn connection_coefficients(
    big_f: &DeltaSeries,
    big_g: &DeltaSeries,
    n: usize,
) -> Result<Vec<Vec<Rational>>> {
    check_index(n, big_f.order().min(big_g.order()))?;
    let f = big_f.inverse()?;
    let h = f.compose(big_g)?;
    Ok(conjugate_sequence(&h, n)?.coefficient_matrix())
}

/// A Sheffer pair `(g, f)`: `g` invertible, `f` delta.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShefferPair {
    pub g: InvertibleSeries,
    pub f: DeltaSeries,
}

impl ShefferPair {
    pub fn new(g: InvertibleSeries, f: DeltaSeries) -> Self {
        Self { g, f }
    }

    pub fn identity(order: usize) -> Self {
        Self {
            g: InvertibleSeries::one(order),
            f: DeltaSeries::identity(order),
        }
    }

    /// `λ_{g,f} ∘ λ_{h,l} = λ_{g·h(f), l(f)}`.
    pub fn compose(&self, other: &ShefferPair) -> Result<ShefferPair> {
        let g = self.g.series().mul(&other.g.series().compose(self.f.series())?);
        let f = other.f.compose(&self.f)?;
        Ok(ShefferPair {
            g: InvertibleSeries::new(g)?,
            f,
        })
    }

    /// `λ_{g,f}⁻¹ = λ_{1/g(F), F}` with `F = f⁻¹`.
    pub fn inverse(&self) -> Result<ShefferPair> {
        let big_f = self.f.inverse()?;
        let g = self.g.series().compose(big_f.series())?.reciprocal()?;
        Ok(ShefferPair {
            g: InvertibleSeries::new(g)?,
            f: big_f,
        })
    }

    pub fn order(&self) -> usize {
        self.g.series().order().min(self.f.order())
    }
}

/// Sheffer sequence for `(g, f)`: `Σ s_n t^n/n! = e^{xF(t)} / g(F(t))`.
pub fn sheffer_sequence(
    g: &InvertibleSeries,
    f: &DeltaSeries,
    n: usize,
) -> Result<PolynomialSequence> {
    check_index(n, f.order().min(g.series().order()))?;
    let big_f = f.inverse()?;
    let weight = g.series().compose(big_f.series())?.reciprocal()?;
    let assoc = conjugate_sequence(&big_f, n)?;
    let polys = (0..=n)
        .map(|m| {
            let m_fact = factorial(m);
            (0..=m).fold(Polynomial::zero(), |acc, i| {
                let c = &weight.coeffs()[i] * &m_fact / factorial(m - i);
                acc.add(&assoc.polys[m - i].scale(&c))
            })
        })
        .collect();
    PolynomialSequence::new(polys)
}

/// `1/f'(t)` as an operator series.
fn inverse_derivative(f: &DeltaSeries) -> Result<TruncatedSeries> {
    f.series().derivative().reciprocal()
}

/// One step of the umbral shift: `p_n = x · (1/f'(D)) p_{n-1}`.
pub fn umbral_shift_next(f: &DeltaSeries, p_prev: &Polynomial) -> Result<Polynomial> {
    Ok(apply_operator(&inverse_derivative(f)?, p_prev)?.mul_x())
}

/// One step of the Sheffer shift: `s_{n+1} = [x - g'(D)/g(D)] (1/f'(D)) s_n`.
pub fn sheffer_shift_next(
    g: &InvertibleSeries,
    f: &DeltaSeries,
    s_prev: &Polynomial,
) -> Result<Polynomial> {
    let q = apply_operator(&inverse_derivative(f)?, s_prev)?;
    let log_deriv = g.series().derivative().div(g.series())?;
    Ok(q.mul_x().sub(&apply_operator(&log_deriv, &q)?))
}

/// Builds `p_0..p_n` by repeated umbral shifts from `p_0 = 1`.
pub fn associated_by_shift(f: &DeltaSeries, n: usize) -> Result<PolynomialSequence> {
    let mut polys = vec![Polynomial::one()];
    for k in 1..=n {
        polys.push(umbral_shift_next(f, &polys[k - 1])?);
    }
    PolynomialSequence::new(polys)
}

/// Builds `s_0..s_n` by repeated Sheffer shifts from `s_0 = 1/g(0)`.
pub fn sheffer_by_shift(
    g: &InvertibleSeries,
    f: &DeltaSeries,
    n: usize,
) -> Result<PolynomialSequence> {
    let mut polys = vec![Polynomial::constant(g.series().constant_term().recip())];
    for k in 1..=n {
        polys.push(sheffer_shift_next(g, f, &polys[k - 1])?);
    }
    PolynomialSequence::new(polys)
}

/// `(a a† - a† a) p` with `a = f(D)` and `a†` the umbral shift.
pub fn commutator_action(f: &DeltaSeries, p: &Polynomial) -> Result<Polynomial> {
    let a_adag = apply_operator(f.series(), &umbral_shift_next(f, p)?)?;
    let adag_a = umbral_shift_next(f, &apply_operator(f.series(), p)?)?;
    Ok(a_adag.sub(&adag_a))
}

/// Right-hand side of the expansion theorem for `h(D) x^n`:
/// `Σ_k ⟨h(D)|p_k⟩/k! · f(D)^k x^n` with `p` associated to `f`.
pub fn expansion_theorem_rhs(
    h: &TruncatedSeries,
    f: &DeltaSeries,
    n: usize,
) -> Result<Polynomial> {
    let assoc = associated_sequence(f, n)?;
    let xn = Polynomial::power(n);
    let mut f_power_xn = xn;
    let mut acc = Polynomial::zero();
    for k in 0..=n {
        let coeff = pairing(h, &assoc.polys[k])? / factorial(k);
        acc = acc.add(&f_power_xn.scale(&coeff));
        f_power_xn = apply_operator(f.series(), &f_power_xn)?;
    }
    Ok(acc)
}

/// Multiplies a polynomial by the scalar `n` and checks `f(D) p_n = n p_{n-1}`.
pub fn annihilation_holds(f: &DeltaSeries, seq: &PolynomialSequence) -> Result<bool> {
    for n in 1..seq.polys.len() {
        let lhs = apply_operator(f.series(), &seq.polys[n])?;
        if lhs != seq.polys[n - 1].scale(&int(n as i64)) {
            return Ok(false);
        }
    }
    Ok(seq.polys.first().is_none_or(|p0| {
        apply_operator(f.series(), p0).is_ok_and(|r| r.is_zero())
    }))
}

/// `(0..=n)` row sums helper used by the CLI: the value `p_n(1)` for each row.
pub fn values_at_one(seq: &PolynomialSequence) -> Vec<Rational> {
    seq.polys.iter().map(|p| p.evaluate(&Rational::one())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn series(c: &[i64], n: usize) -> TruncatedSeries {
        TruncatedSeries::from_ints(c, n)
    }

    fn delta(c: &[i64], n: usize) -> DeltaSeries {
        DeltaSeries::new(series(c, n)).unwrap()
    }

    fn log1p(n: usize) -> DeltaSeries {
        DeltaSeries::new(series(&[1, 1], n).log().unwrap()).unwrap()
    }

    fn expm1(n: usize) -> DeltaSeries {
        DeltaSeries::new(TruncatedSeries::exp_x(n).sub(&TruncatedSeries::one(n))).unwrap()
    }

    /// X/(1-X)
    fn lah(n: usize) -> DeltaSeries {
        DeltaSeries::new(TruncatedSeries::geometric(n).mul_x().truncate(n)).unwrap()
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(
            conjugate_sequence(&DeltaSeries::identity(6), 6).unwrap(),
            PolynomialSequence::powers(6)
        );
        let fd = conjugate_sequence(&log1p(6), 6).unwrap();
        assert_eq!(fd.get(3).unwrap(), &Polynomial::from_ints(&[0, 2, -3, 1]));
        let l = conjugate_sequence(&lah(6), 4).unwrap();
        assert_eq!(l.get(4).unwrap(), &Polynomial::from_ints(&[0, 24, 36, 12, 1]));
        assert!(conjugate_sequence(&lah(3), 4).is_err());
    }

    #[test]
    fn associated_examples() {
        assert_eq!(
            associated_sequence(&DeltaSeries::identity(5), 5).unwrap(),
            PolynomialSequence::powers(5)
        );
        let fd = associated_sequence(&expm1(8), 8).unwrap();
        for n in 0..=8 {
            assert_eq!(fd.get(n).unwrap(), &Polynomial::falling_factorial(n));
        }
        // f = Y e^Y gives Abel polynomials x(x-n)^{n-1}
        let f = DeltaSeries::new(TruncatedSeries::exp_x(8).mul_x().truncate(8)).unwrap();
        let abel = associated_sequence(&f, 7).unwrap();
        for n in 1..=7 {
            let shifted = Polynomial::new(vec![int(-(n as i64)), int(1)]);
            let expected = (1..n).fold(Polynomial::power(1), |acc, _| acc.mul(&shifted));
            assert_eq!(abel.get(n).unwrap(), &expected);
        }
    }

    #[test]
    fn operator_examples() {
        assert_eq!(
            apply_operator(&TruncatedSeries::x(5), &Polynomial::power(3)).unwrap(),
            Polynomial::from_ints(&[0, 0, 3])
        );
        let f = expm1(6);
        let out = apply_operator(f.series(), &Polynomial::falling_factorial(3)).unwrap();
        assert_eq!(out, Polynomial::falling_factorial(2).scale(&int(3)));
        let p = Polynomial::from_ints(&[1, -2, 5]);
        assert_eq!(apply_operator(&TruncatedSeries::one(4), &p).unwrap(), p);
        assert!(apply_operator(&TruncatedSeries::x(1), &Polynomial::power(3)).is_err());
    }

    #[test]
    fn umbral_composition_examples() {
        let p = conjugate_sequence(&lah(8), 6).unwrap();
        let q = conjugate_sequence(&expm1(8), 6).unwrap();
        let id = PolynomialSequence::powers(6);
        assert_eq!(umbral_composition(&p, &id).unwrap(), p);
        assert_eq!(umbral_composition(&id, &q).unwrap(), q);
        // r is conjugate to G(F(t)), computed independently
        let gf = expm1(8).compose(&lah(8)).unwrap();
        assert_eq!(
            umbral_composition(&p, &q).unwrap(),
            conjugate_sequence(&gf, 6).unwrap()
        );
        let short = PolynomialSequence::powers(3);
        assert!(umbral_composition(&p, &short).is_err());
    }

    /// Solves q_n = Σ c_{n,k} p_k by forward substitution on the explicit
    /// polynomials: the oracle for connection coefficients.
    fn solve_connection(p: &PolynomialSequence, q: &PolynomialSequence) -> Vec<Vec<Rational>> {
        let n = p.max_index();
        (0..=n)
            .map(|row| {
                let mut rem = q.get(row).unwrap().clone();
                let mut c = vec![Rational::zero(); row + 1];
                for k in (0..=row).rev() {
                    let lead = p.get(k).unwrap().coeff(k);
                    c[k] = rem.coeff(k) / lead;
                    rem = rem.sub(&p.get(k).unwrap().scale(&c[k]));
                }
                assert!(rem.is_zero());
                c
            })
            .collect()
    }

    #[test]
    fn connection_examples() {
        let f = lah(8);
        let id = connection_coefficients(&f, &f, 6).unwrap();
        for (n, row) in id.iter().enumerate() {
            for (k, c) in row.iter().enumerate() {
                assert_eq!(*c, if n == k { int(1) } else { int(0) });
            }
        }
        let g = expm1(8);
        assert_eq!(
            connection_coefficients(&DeltaSeries::identity(8), &g, 6).unwrap(),
            conjugate_sequence(&g, 6).unwrap().coefficient_matrix()
        );
        // rising factorials in the falling-factorial basis
        let fd = log1p(8);
        let be = DeltaSeries::new(series(&[1, -1], 8).log().unwrap().scale(&int(-1))).unwrap();
        let c = connection_coefficients(&fd, &be, 5).unwrap();
        let p = conjugate_sequence(&fd, 5).unwrap();
        let q = conjugate_sequence(&be, 5).unwrap();
        assert_eq!(c, solve_connection(&p, &q));
        for n in 0..=5 {
            assert_eq!(q.get(n).unwrap(), &Polynomial::rising_factorial(n));
        }
        // Lah numbers L(4,2) = 36
        assert_eq!(c[4][2], int(36));
    }

    fn hermite_oracle(n: usize) -> Vec<Polynomial> {
        let mut he = vec![Polynomial::one(), Polynomial::power(1)];
        for k in 1..n {
            let next = he[k].mul_x().sub(&he[k - 1].scale(&int(k as i64)));
            he.push(next);
        }
        he.truncate(n + 1);
        he
    }

    /// e^{t^2/2}
    fn gauss(order: usize, sign: i64) -> InvertibleSeries {
        let half_t2 = TruncatedSeries::monomial(rat(sign, 2), 2, order);
        InvertibleSeries::new(half_t2.exp().unwrap()).unwrap()
    }

    #[test]
    fn sheffer_examples() {
        let f = lah(8);
        assert_eq!(
            sheffer_sequence(&InvertibleSeries::one(8), &f, 6).unwrap(),
            associated_sequence(&f, 6).unwrap()
        );
        let he = sheffer_sequence(&gauss(10, 1), &DeltaSeries::identity(10), 8).unwrap();
        assert_eq!(he.polys(), hermite_oracle(8).as_slice());
        assert_eq!(he.get(3).unwrap(), &Polynomial::from_ints(&[0, -3, 0, 1]));
    }

    #[test]
    fn umbral_shift_examples() {
        let t = DeltaSeries::identity(4);
        assert_eq!(
            umbral_shift_next(&t, &Polynomial::power(2)).unwrap(),
            Polynomial::power(3)
        );
        assert_eq!(
            umbral_shift_next(&expm1(4), &Polynomial::power(1)).unwrap(),
            Polynomial::falling_factorial(2)
        );
        // Bessel f = t - t^2/2
        let bessel = DeltaSeries::new(TruncatedSeries::new(vec![int(0), int(1), rat(-1, 2)], 8))
            .unwrap();
        assert_eq!(
            associated_by_shift(&bessel, 6).unwrap(),
            associated_sequence(&bessel, 6).unwrap()
        );
    }

    #[test]
    fn sheffer_shift_examples() {
        let f = lah(8);
        let one = InvertibleSeries::one(8);
        let p = Polynomial::from_ints(&[0, 2, 1]);
        assert_eq!(
            sheffer_shift_next(&one, &f, &p).unwrap(),
            umbral_shift_next(&f, &p).unwrap()
        );
        let he = sheffer_by_shift(&gauss(10, 1), &DeltaSeries::identity(10), 8).unwrap();
        assert_eq!(he.polys(), hermite_oracle(8).as_slice());

        let g = InvertibleSeries::new(series(&[1, 1], 8)).unwrap();
        let t = DeltaSeries::identity(8);
        assert_eq!(
            sheffer_by_shift(&g, &t, 6).unwrap(),
            sheffer_sequence(&g, &t, 6).unwrap()
        );
    }

    #[test]
    fn sheffer_pair_group() {
        let pair = ShefferPair::new(
            InvertibleSeries::new(series(&[2, 1, 3], 8)).unwrap(),
            delta(&[0, 1, 1, -2], 8),
        );
        let id = ShefferPair::identity(8);
        assert_eq!(pair.compose(&id).unwrap(), pair);
        assert_eq!(id.compose(&pair).unwrap(), pair);
        assert_eq!(pair.compose(&pair.inverse().unwrap()).unwrap(), id);
        assert_eq!(pair.inverse().unwrap().compose(&pair).unwrap(), id);
    }

    #[test]
    fn commutator_is_identity() {
        let f = lah(10);
        for n in 0..=8 {
            let p = Polynomial::power(n).add(&Polynomial::from_ints(&[1, -1]));
            assert_eq!(commutator_action(&f, &p).unwrap(), p);
        }
    }
}
