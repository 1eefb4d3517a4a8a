//! Seeded property suites over the catalog and random statistics.
//!
//! Every suite is deterministic for a given `(order, seed)`: each one draws
//! from its own ChaCha stream derived from the seed and the suite name, so
//! `all` and a single suite see the same random inputs.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{self, CatalogEntry};
use crate::deformed_entropy::{
    entropy_gradient_check, main_theorem_check, map_g, map_g_inverse, s_from_t, t_from_s, xi,
    PhiSeries,
};
use crate::error::{Error, Result};
use crate::rational::{binomial, factorial, format_rational, int, rat, Rational};
use crate::series::TruncatedSeries;
use crate::statistics::{random_rational, Statistics};
use crate::umbral::{annihilation_holds, conjugate_sequence};

pub const RANDOM_STATISTICS: usize = 100;
pub const RANDOM_PHI: usize = 50;
pub const RANDOM_INVERSIONS: usize = 50;
pub const POINT_PAIRS: usize = 5;
/// Random statistics have `w_2..w_6` nonzero.
pub const RANDOM_MAX_INDEX: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    All,
    Inversion,
    Binomial,
    Occupation,
    Duality,
    MainTheorem,
    Gradient,
    Xi,
    Fixtures,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Inversion,
        Suite::Binomial,
        Suite::Occupation,
        Suite::Duality,
        Suite::MainTheorem,
        Suite::Gradient,
        Suite::Xi,
        Suite::Fixtures,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Inversion => "inversion",
            Suite::Binomial => "binomial",
            Suite::Occupation => "occupation",
            Suite::Duality => "duality",
            Suite::MainTheorem => "main-theorem",
            Suite::Gradient => "gradient",
            Suite::Xi => "xi",
            Suite::Fixtures => "fixtures",
        }
    }

    fn rng(self, seed: u64) -> ChaCha8Rng {
        let salt = self
            .name()
            .bytes()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
                (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
            });
        ChaCha8Rng::seed_from_u64(seed ^ salt)
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        std::iter::once(Suite::All)
            .chain(Suite::EACH)
            .find(|suite| suite.name() == s)
            .ok_or_else(|| {
                Error::InvalidParam(format!(
                    "unknown suite `{s}`; valid suites: all, {}",
                    Suite::EACH.map(Suite::name).join(", ")
                ))
            })
    }
}

/// One checked property on one subject.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PropertyResult {
    pub suite: &'static str,
    pub property: &'static str,
    pub subject: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub suite: String,
    pub order: usize,
    pub seed: u64,
    pub checked: usize,
    pub failed: usize,
    pub results: Vec<PropertyResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &PropertyResult> {
        self.results.iter().filter(|r| !r.passed)
    }
}

/// Runs `suite`; `all` runs the individual suites on separate threads and
/// concatenates their results in a fixed order.
pub fn run(suite: Suite, order: usize, seed: u64) -> VerifyReport {
    let results = match suite {
        Suite::All => std::thread::scope(|scope| {
            let handles: Vec<_> = Suite::EACH
                .iter()
                .map(|&s| scope.spawn(move || run_one(s, order, seed)))
                .collect();
            handles
                .into_iter()
                .flat_map(|h| h.join().expect("suite thread panicked"))
                .collect()
        }),
        s => run_one(s, order, seed),
    };
    let failed = results.iter().filter(|r: &&PropertyResult| !r.passed).count();
    VerifyReport {
        suite: suite.name().to_string(),
        order,
        seed,
        checked: results.len(),
        failed,
        results,
    }
}

fn run_one(suite: Suite, order: usize, seed: u64) -> Vec<PropertyResult> {
    let mut rng = suite.rng(seed);
    let mut out = Recorder {
        suite: suite.name(),
        results: Vec::new(),
    };
    match suite {
        Suite::All => unreachable!("expanded by run"),
        Suite::Inversion => inversion(&mut out, &mut rng, order),
        Suite::Binomial => binomial_type(&mut out, &mut rng, order),
        Suite::Occupation => occupation(&mut out, &mut rng, order),
        Suite::Duality => duality(&mut out, &mut rng, order),
        Suite::MainTheorem => main_theorem(&mut out, &mut rng, order),
        Suite::Gradient => gradient(&mut out, &mut rng, order),
        Suite::Xi => xi_paths(&mut out, order),
        Suite::Fixtures => fixtures(&mut out),
    }
    out.results
}

struct Recorder {
    suite: &'static str,
    results: Vec<PropertyResult>,
}

impl Recorder {
    /// `Ok(None)` passes, `Ok(Some(v))` fails with counterexample `v`, and
    /// an error fails with the error text.
    fn record(
        &mut self,
        property: &'static str,
        subject: impl Into<String>,
        check: impl FnOnce() -> Result<Option<Value>>,
    ) {
        let (passed, counterexample) = match check() {
            Ok(None) => (true, None),
            Ok(Some(v)) => (false, Some(v)),
            Err(e) => (false, Some(json!({ "error": e.to_string() }))),
        };
        self.results.push(PropertyResult {
            suite: self.suite,
            property,
            subject: subject.into(),
            passed,
            counterexample,
        });
    }
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn series_json(s: &TruncatedSeries) -> Value {
    json!({ "order": s.order(), "coeffs": strs(s.coeffs()) })
}

fn stat_json(stat: &Statistics) -> Value {
    json!({ "w": series_json(stat.weight()) })
}

fn diff_json(expected: &TruncatedSeries, got: &TruncatedSeries) -> Option<Value> {
    (expected != got).then(|| {
        json!({
            "expected": series_json(expected),
            "computed": series_json(got),
            "first_difference": expected.first_difference(got),
        })
    })
}

fn entries() -> Vec<CatalogEntry> {
    catalog::all_entries()
}

fn random_stats(rng: &mut ChaCha8Rng, count: usize, order: usize) -> Result<Vec<Statistics>> {
    (0..count)
        .map(|i| {
            Ok(Statistics::random(rng, order, RANDOM_MAX_INDEX)?.with_name(format!("random#{i}")))
        })
        .collect()
}

/// `T_1..T_5` random, the rest zero.
pub fn random_phi<R: Rng + ?Sized>(rng: &mut R, order: usize) -> Result<PhiSeries> {
    let t = (1..order)
        .map(|k| if k <= 5 { random_rational(rng) } else { Rational::zero() })
        .collect();
    PhiSeries::new(t, order)
}

/// Subjects for the statistics-level suites: every catalog entry followed by
/// `count` random statistics.
fn subjects(
    out: &mut Recorder,
    rng: &mut ChaCha8Rng,
    count: usize,
    order: usize,
) -> Vec<(Statistics, Option<Rational>)> {
    let mut list = Vec::new();
    for entry in entries() {
        let label = entry.label();
        match entry.build(order) {
            Ok(stat) => list.push((stat.with_name(label), entry.registered_constant())),
            Err(e) => out.record("build", label, || Err(e)),
        }
    }
    match random_stats(rng, count, order) {
        Ok(stats) => list.extend(stats.into_iter().map(|s| (s, None))),
        Err(e) => out.record("build", "random", || Err(e)),
    }
    list
}

fn inversion(out: &mut Recorder, rng: &mut ChaCha8Rng, order: usize) {
    for (stat, _) in subjects(out, rng, RANDOM_INVERSIONS, order) {
        out.record("w∘X(w) = X(w)∘w = X", stat.name(), || {
            let x = TruncatedSeries::x(order);
            let left = stat.weight().compose(stat.x_of_w())?.truncate(order);
            let right = stat.x_of_w().compose(stat.weight())?.truncate(order);
            Ok(diff_json(&x, &left).or_else(|| diff_json(&x, &right)))
        });
    }
    let leads = [int(1), int(-1), int(2), rat(1, 2)];
    for i in 0..RANDOM_INVERSIONS {
        let lead = leads[i % leads.len()].clone();
        let s = TruncatedSeries::from_fn(order, |k| match k {
            0 => Rational::zero(),
            1 => lead.clone(),
            _ => random_rational(rng),
        });
        out.record("lagrange_invert roundtrip", format!("random-series#{i}"), || {
            let t = s.lagrange_invert()?;
            let x = TruncatedSeries::x(order);
            let (left, right) = (s.compose(&t)?, t.compose(&s)?);
            let bad = diff_json(&x, &left).or_else(|| diff_json(&x, &right));
            Ok(bad.map(|d| json!({ "s": series_json(&s), "mismatch": d })))
        });
    }
    for i in 0..RANDOM_PHI {
        let phi = random_phi(rng, order);
        out.record("g⁻¹∘g = id on φ", format!("random-phi#{i}"), || {
            let phi = phi?;
            let back = map_g_inverse(&map_g(&phi)?)?;
            Ok((back != phi).then(|| json!({ "T": strs(phi.t()), "roundtrip": strs(back.t()) })))
        });
        let t: Vec<Rational> = (0..order).map(|_| random_rational(rng)).collect();
        out.record("T(s(T)) = T", format!("random-T#{i}"), || {
            let back = t_from_s(&s_from_t(&t));
            Ok((back != t).then(|| json!({ "T": strs(&t), "roundtrip": strs(&back) })))
        });
    }
}

fn binomial_type(out: &mut Recorder, rng: &mut ChaCha8Rng, order: usize) {
    let n = order.min(8);
    for entry in entries() {
        let label = entry.label();
        let points: Vec<(Rational, Rational)> = (0..POINT_PAIRS)
            .map(|_| (random_rational(rng), random_rational(rng)))
            .collect();
        let built = entry.delta_series(order).and_then(|f| {
            let seq = conjugate_sequence(&f, n)?;
            Ok((f, seq))
        });
        let (big_f, seq) = match built {
            Ok(v) => v,
            Err(e) => {
                out.record("binomial identity", label, || Err(e));
                continue;
            }
        };
        out.record("binomial identity", label.clone(), || {
            Ok(points
                .iter()
                .find(|(a, b)| !seq.binomial_identity_holds(a, b))
                .map(|(a, b)| json!({ "n_max": n, "a": format_rational(a), "b": format_rational(b) })))
        });
        out.record("f(D) γ_n = n γ_{n-1}", label, || {
            let f = big_f.inverse()?;
            Ok((!annihilation_holds(&f, &seq)?).then(|| json!({ "n_max": n })))
        });
    }
}

fn occupation(out: &mut Recorder, rng: &mut ChaCha8Rng, order: usize) {
    let k_max = order.min(8);
    for entry in entries() {
        let label = entry.label();
        let stat = match entry.build(order) {
            Ok(s) => s,
            Err(e) => {
                out.record("build", label, || Err(e));
                continue;
            }
        };
        out.record("W_k(N1+N2) = Σ W_i(N1) W_(k-i)(N2)", label.clone(), || {
            let polys = stat.occupation_polynomials(k_max)?;
            for n1 in 0..=4i64 {
                for n2 in 0..=4i64 {
                    let (x, y) = (int(n1), int(n2));
                    if let Some(k) = (0..=k_max).find(|&k| !convolution_holds(&polys, &x, &y, k)) {
                        return Ok(Some(json!({ "N1": n1, "N2": n2, "k": k })));
                    }
                }
            }
            Ok(None)
        });
        let points: Vec<(Rational, Rational)> = (0..POINT_PAIRS)
            .map(|_| (random_rational(rng), random_rational(rng)))
            .collect();
        out.record("deformed Chu–Vandermonde", label.clone(), || {
            let polys = stat.occupation_polynomials(order.min(6))?;
            for (x, y) in &points {
                if let Some(n) = (0..polys.len()).find(|&n| !convolution_holds(&polys, x, y, n)) {
                    return Ok(Some(json!({
                        "x": format_rational(x), "y": format_rational(y), "n": n
                    })));
                }
            }
            Ok(None)
        });
        out.record("occupation ↔ cluster roundtrip", label.clone(), || {
            let back = Statistics::from_occupation(&stat.occupation_numbers())?;
            Ok(diff_json(stat.free_energy(), back.free_energy()))
        });
        out.record("entropy log part = -w", label, || {
            let minus_w = stat.weight().scale(&int(-1));
            Ok(diff_json(&minus_w, stat.entropy().log_part()))
        });
    }
}

fn convolution_holds(
    polys: &[crate::polynomial::Polynomial],
    x: &Rational,
    y: &Rational,
    k: usize,
) -> bool {
    let lhs = polys[k].evaluate(&(x + y));
    let rhs = (0..=k).fold(Rational::zero(), |acc, i| {
        acc + polys[i].evaluate(x) * polys[k - i].evaluate(y)
    });
    lhs == rhs
}

fn duality(out: &mut Recorder, rng: &mut ChaCha8Rng, order: usize) {
    for (stat, _) in subjects(out, rng, RANDOM_STATISTICS, order) {
        out.record("σ∘σ = id", stat.name(), || {
            let back = stat.dual()?.dual()?;
            Ok(diff_json(stat.weight(), back.weight()).map(|d| json!({ "stat": stat_json(&stat), "mismatch": d })))
        });
    }
    out.record("σ(BE) = FD", "bose-einstein", || {
        let be = catalog::get("bose-einstein", &[])?.build(order)?;
        let fd = catalog::get("fermi-dirac", &[])?.build(order)?;
        Ok(diff_json(fd.weight(), be.dual()?.weight()))
    });
}

fn main_theorem(out: &mut Recorder, rng: &mut ChaCha8Rng, order: usize) {
    for (stat, c0) in subjects(out, rng, RANDOM_STATISTICS, order) {
        out.record("H(X) = H_φ(w(X))", stat.name(), || {
            let report = main_theorem_check(&stat, c0.as_ref())?;
            Ok((!report.holds()).then(|| json!({ "stat": stat_json(&stat), "report": report })))
        });
    }
}

fn gradient(out: &mut Recorder, rng: &mut ChaCha8Rng, order: usize) {
    for entry in entries() {
        out.record("dH_φ/dp = -ln_φ + const", entry.label(), || {
            let phi = entry.phi(order)?;
            Ok((!entropy_gradient_check(&phi)?).then(|| json!({ "T": strs(phi.t()) })))
        });
    }
    for i in 0..RANDOM_PHI {
        let phi = random_phi(rng, order);
        out.record("dH_φ/dp = -ln_φ + const", format!("random-phi#{i}"), || {
            let phi = phi?;
            Ok((!entropy_gradient_check(&phi)?).then(|| json!({ "T": strs(phi.t()) })))
        });
    }
}

fn xi_paths(out: &mut Recorder, order: usize) {
    for entry in entries() {
        out.record("∫ v/φ dv = F(X(u))", entry.label(), || {
            let phi = entry.phi(order)?;
            xi(&phi).map(|_| None)
        });
    }
    out.record("ξ = Σ B_n/(n+1)! p^(n+1)", "dilogarithm", || {
        let phi = catalog::get("dilogarithm", &[])?.phi(order)?;
        let computed = xi(&phi)?;
        Ok(diff_json(&bernoulli_xi(computed.order()), &computed))
    });
}

/// `Σ_{n≥0} B_n p^{n+1}/(n+1)!` with `B_1 = -1/2`.
pub fn bernoulli_xi(order: usize) -> TruncatedSeries {
    let b = bernoulli_numbers(order);
    TruncatedSeries::from_fn(order, |k| match k {
        0 => Rational::zero(),
        k => &b[k - 1] / factorial(k),
    })
}

/// `B_0..B_n` from `Σ_{k≤m} C(m+1,k) B_k = 0`.
pub fn bernoulli_numbers(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = vec![Rational::one()];
    for m in 1..=n {
        let s = (0..m).fold(Rational::zero(), |acc, k| {
            acc + binomial(&int(m as i64 + 1), k) * &b[k]
        });
        b.push(-s / int(m as i64 + 1));
    }
    b
}

fn fixtures(out: &mut Recorder) {
    for fixture in catalog::all_fixtures() {
        let subject = format!("{}:{}", fixture.entry, fixture.quantity);
        out.record("fixture matches", subject, || {
            let outcome = fixture.check()?;
            Ok((!outcome.passed).then(|| json!(outcome)))
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in std::iter::once(Suite::All).chain(Suite::EACH) {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn bernoulli_numbers_start() {
        let b = bernoulli_numbers(4);
        assert_eq!(b, vec![int(1), rat(-1, 2), rat(1, 6), int(0), rat(-1, 30)]);
    }

    #[test]
    fn same_seed_same_report() {
        let a = run(Suite::Duality, 6, 7);
        let b = run(Suite::Duality, 6, 7);
        assert_eq!(a, b);
        assert!(a.passed());
    }
}
