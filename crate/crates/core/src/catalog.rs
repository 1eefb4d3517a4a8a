//! Named, parameterized examples of interpolating statistics.
//!
//! Each entry builds its free energy from a closed form at any order and
//! carries the expected-coefficient fixtures from `fixtures/catalog.json`.
//! Entries whose natural free energy has `[X]F ≠ 1` are normalized by the
//! substitution `X ↦ X/F_1` (see [`CatalogEntry::scale_factor`]).

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::deformed_entropy::{
    ln_phi, map_g_inverse, phi_entropy, phi_entropy_integral, xi, PhiSeries,
};
use crate::error::{Error, Result};
use crate::logseries::LogSeries;
use crate::polynomial::Polynomial;
use crate::rational::{factorial, int, is_integer, parse_rational, pow, rat, Rational};
use crate::series::TruncatedSeries;
use crate::statistics::{gentile_statistics, Statistics};
use crate::umbral::{conjugate_sequence, DeltaSeries};

const FIXTURE_JSON: &str = include_str!("../fixtures/catalog.json");

struct Def {
    name: &'static str,
    summary: &'static str,
    params: &'static [(&'static str, &'static str)],
}

const DEFS: &[Def] = &[
    Def { name: "boltzmann-gibbs", summary: "F = X", params: &[] },
    Def { name: "fermi-dirac", summary: "F = log(1+X)", params: &[] },
    Def { name: "bose-einstein", summary: "F = -log(1-X)", params: &[] },
    Def { name: "acharya-swamy", summary: "F = log(1+eps X)/eps", params: &[("eps", "1/2")] },
    Def { name: "gentile", summary: "z = 1 + X + ... + X^p", params: &[("p", "2")] },
    Def { name: "lah", summary: "F = X/(1-X)", params: &[] },
    Def { name: "exponential", summary: "F = e^X - 1", params: &[] },
    Def { name: "abel", summary: "F = sum (-an)^(n-1) X^n/n!", params: &[("a", "1/2")] },
    Def {
        name: "gould",
        summary: "F = sum (-1)^(k-1) prod_j (ak+jb) X^k/k!, b != 0",
        params: &[("a", "2"), ("b", "1")],
    },
    Def { name: "gould-acharya-swamy", summary: "gould at a = 0, b = eps", params: &[("eps", "1/2")] },
    Def { name: "lambert", summary: "gould as b -> 0: f = Y e^(aY)", params: &[("a", "1/2")] },
    Def { name: "framed-vertex", summary: "gould at a = g-1, b = 1", params: &[("g", "3")] },
    Def { name: "catalan-curve", summary: "gould at b = -2a", params: &[("a", "1/2")] },
    Def {
        name: "mittag-leffler",
        summary: "F = log((1+X/2)/(1-X/2)); scaled=0 gives log((1+X)/(1-X)) normalized",
        params: &[("scaled", "1")],
    },
    Def { name: "bessel", summary: "F = 1 - sqrt(1-2X)", params: &[] },
    Def { name: "mott", summary: "F = (1 - sqrt(1-4X^2))/(2X)", params: &[] },
    Def { name: "dilogarithm", summary: "F = Li_2(X)", params: &[] },
    Def {
        name: "averaged-as-1",
        summary: "F = (log(1+eps X) - log(1-eps X))/(2 eps)",
        params: &[("eps", "1/3")],
    },
    Def {
        name: "averaged-as-2",
        summary: "F = (log(1+eps X)/eps + eps log(1+X/eps))/2",
        params: &[("eps", "2")],
    },
    Def {
        name: "averaged-as-3",
        summary: "F = (log(X+eps) + log(X+1/eps))/2, normalized",
        params: &[("eps", "2")],
    },
    Def {
        name: "bell-universal",
        summary: "F = sum t_j X^j/j! with t_1 = 1; unset t_j default to 1",
        params: &[],
    },
];

/// Names of all registered entries.
pub fn list_entries() -> Vec<&'static str> {
    DEFS.iter().map(|d| d.name).collect()
}

/// One-line description of an entry.
pub fn summary(name: &str) -> Option<&'static str> {
    DEFS.iter().find(|d| d.name == name).map(|d| d.summary)
}

/// Every entry at its default parameters.
pub fn all_entries() -> Vec<CatalogEntry> {
    DEFS.iter()
        .map(|d| get(d.name, &[]).expect("defaults are valid"))
        .collect()
}

fn def(name: &str) -> Result<&'static Def> {
    DEFS.iter()
        .find(|d| d.name == name)
        .ok_or_else(|| Error::UnknownEntry {
            name: name.to_string(),
            valid: list_entries().join(", "),
        })
}

/// Looks up an entry and overrides its default parameters.
pub fn get(name: &str, overrides: &[(String, Rational)]) -> Result<CatalogEntry> {
    let d = def(name)?;
    let mut params: BTreeMap<String, Rational> = d
        .params
        .iter()
        .map(|(k, v)| (k.to_string(), parse_rational(v).expect("valid default")))
        .collect();
    for (k, v) in overrides {
        let known = params.contains_key(k) || (d.name == "bell-universal" && bell_index(k).is_some());
        if !known {
            let valid = if d.name == "bell-universal" {
                "t2, t3, ...".to_string()
            } else if d.params.is_empty() {
                "none".to_string()
            } else {
                d.params.iter().map(|(k, _)| *k).collect::<Vec<_>>().join(", ")
            };
            return Err(Error::InvalidParam(format!(
                "`{k}` is not a parameter of {}; valid: {valid}",
                d.name
            )));
        }
        params.insert(k.clone(), v.clone());
    }
    let entry = CatalogEntry { def: d, params };
    entry.validate()?;
    Ok(entry)
}

fn bell_index(key: &str) -> Option<usize> {
    key.strip_prefix('t')?.parse().ok().filter(|&j: &usize| j >= 2)
}

/// A catalog entry with its parameters fixed.
#[derive(Clone)]
pub struct CatalogEntry {
    def: &'static Def,
    params: BTreeMap<String, Rational>,
}

impl std::fmt::Debug for CatalogEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}{:?}", self.def.name, self.params)
    }
}

/// A computed quantity, in whichever shape it naturally has.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Quantity {
    Series(TruncatedSeries),
    Log(LogSeries),
    Poly(Polynomial),
}

impl Quantity {
    /// Plain coefficients: the series itself, the plain part of a log
    /// series, or the polynomial coefficients.
    pub fn coeffs(&self) -> Vec<Rational> {
        match self {
            Quantity::Series(s) => s.coeffs().to_vec(),
            Quantity::Log(l) => l.plain().coeffs().to_vec(),
            Quantity::Poly(p) => p.coeffs().to_vec(),
        }
    }

    /// Highest index that is known: the truncation order, or unbounded for
    /// polynomials.
    pub fn known_through(&self) -> usize {
        match self {
            Quantity::Series(s) => s.order(),
            Quantity::Log(l) => l.order(),
            Quantity::Poly(_) => usize::MAX,
        }
    }
}

/// Quantity tags accepted by [`CatalogEntry::quantity`].
pub const QUANTITIES: &[&str] = &[
    "F",
    "z",
    "w",
    "X_of_w",
    "f",
    "phi",
    "xi",
    "ln_phi",
    "ln_phi.plain",
    "entropy",
    "phi_entropy",
    "phi_entropy.plain",
    "phi_entropy_integral",
    "phi_entropy_integral.plain",
    "phi_in_X",
    "xi_in_X",
    "Y_in_w",
    "u_over_phi",
    "u_s_minus_u_over_phi",
    "X_of_w_unnormalized",
    "two_u_one_minus_u_over_phi",
    "gamma:<n>",
];

impl CatalogEntry {
    pub fn name(&self) -> &'static str {
        self.def.name
    }

    pub fn params(&self) -> &BTreeMap<String, Rational> {
        &self.params
    }

    fn param(&self, key: &str) -> Rational {
        self.params.get(key).cloned().expect("parameter is defined")
    }

    fn validate(&self) -> Result<()> {
        let nonzero = |key: &str| {
            if self.param(key).is_zero() {
                Err(Error::InvalidParam(format!(
                    "{} requires {key} ≠ 0",
                    self.def.name
                )))
            } else {
                Ok(())
            }
        };
        match self.def.name {
            "gentile" => {
                let p = self.param("p");
                if !is_integer(&p) || p < Rational::one() {
                    return Err(Error::InvalidParam(
                        "gentile requires an integer p ≥ 1".into(),
                    ));
                }
            }
            "gould" => nonzero("b")?,
            "gould-acharya-swamy" | "averaged-as-2" | "averaged-as-3" => nonzero("eps")?,
            "catalan-curve" => nonzero("a")?,
            "mittag-leffler" => {
                let s = self.param("scaled");
                if !(s.is_zero() || s.is_one()) {
                    return Err(Error::InvalidParam(
                        "mittag-leffler requires scaled ∈ {0, 1}".into(),
                    ));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// The free energy from the closed form, before normalization.
    pub fn raw_free_energy(&self, order: usize) -> Result<TruncatedSeries> {
        let n = order;
        let coeff_fn = |f: &dyn Fn(usize) -> Rational| {
            TruncatedSeries::from_fn(n, |k| if k == 0 { Rational::zero() } else { f(k) })
        };
        let sign = |k: usize| if k % 2 == 1 { int(1) } else { int(-1) };
        let log1p = |c: Rational| -> TruncatedSeries {
            // log(1 + cX) = Σ (-1)^{k-1} c^k X^k / k
            coeff_fn(&|k| sign(k) * pow(&c, k) / int(k as i64))
        };
        Ok(match self.def.name {
            "boltzmann-gibbs" => TruncatedSeries::x(n),
            "fermi-dirac" => log1p(int(1)),
            "bose-einstein" => log1p(int(-1)).scale(&int(-1)),
            "acharya-swamy" => {
                let eps = self.param("eps");
                coeff_fn(&|k| sign(k) * pow(&eps, k - 1) / int(k as i64))
            }
            "gentile" => {
                let p = self.param("p").to_integer().try_into().map_err(|_| {
                    Error::InvalidParam("gentile p is too large".into())
                })?;
                gentile_statistics(p, n)?.free_energy().clone()
            }
            "lah" => coeff_fn(&|_| int(1)),
            "exponential" => coeff_fn(&|k| factorial(k).recip()),
            "abel" | "lambert" => {
                let a = self.param("a");
                coeff_fn(&|k| pow(&(-&a * int(k as i64)), k - 1) / factorial(k))
            }
            "gould" => gould(&self.param("a"), &self.param("b"), n),
            "gould-acharya-swamy" => gould(&Rational::zero(), &self.param("eps"), n),
            "framed-vertex" => gould(&(self.param("g") - int(1)), &int(1), n),
            "catalan-curve" => {
                let a = self.param("a");
                gould(&a, &(-&a * int(2)), n)
            }
            "mittag-leffler" => {
                let c = if self.param("scaled").is_one() { rat(1, 2) } else { int(1) };
                log1p(c.clone()).sub(&log1p(-c))
            }
            "bessel" => {
                let root = TruncatedSeries::from_ints(&[1, -2], n).pow_rational(&rat(1, 2))?;
                TruncatedSeries::one(n).sub(&root)
            }
            "mott" => {
                let root =
                    TruncatedSeries::from_ints(&[1, 0, -4], n + 1).pow_rational(&rat(1, 2))?;
                TruncatedSeries::one(n + 1)
                    .sub(&root)
                    .scale(&rat(1, 2))
                    .div_x()?
            }
            "dilogarithm" => coeff_fn(&|k| rat(1, (k * k) as i64)),
            "averaged-as-1" => {
                let eps = self.param("eps");
                coeff_fn(&|k| {
                    if k % 2 == 1 {
                        pow(&eps, k - 1) / int(k as i64)
                    } else {
                        Rational::zero()
                    }
                })
            }
            "averaged-as-2" => {
                let eps = self.param("eps");
                let inv = eps.recip();
                coeff_fn(&|k| {
                    sign(k) * (pow(&eps, k - 1) + pow(&inv, k - 1)) / int(2 * k as i64)
                })
            }
            "averaged-as-3" => {
                let eps = self.param("eps");
                let inv = eps.recip();
                coeff_fn(&|k| sign(k) * (pow(&eps, k) + pow(&inv, k)) / int(2 * k as i64))
            }
            "bell-universal" => {
                let t = |j: usize| {
                    if j == 1 {
                        int(1)
                    } else {
                        self.params.get(&format!("t{j}")).cloned().unwrap_or_else(|| int(1))
                    }
                };
                coeff_fn(&|k| t(k) / factorial(k))
            }
            other => unreachable!("entry {other} has no builder"),
        })
    }

    /// `F_1` of the raw free energy; the entry is built from `F(X/F_1)`.
    pub fn scale_factor(&self) -> Result<Rational> {
        Ok(self
            .raw_free_energy(1)?
            .coeff(1)
            .cloned()
            .unwrap_or_else(Rational::zero))
    }

    /// The normalized statistics at the given order.
    pub fn build(&self, order: usize) -> Result<Statistics> {
        let (stat, _) =
            Statistics::from_free_energy_normalized(self.label(), self.raw_free_energy(order)?)?;
        Ok(stat)
    }

    /// Name with non-default parameters, e.g. `gould(a=1/2,b=-1/3)`.
    pub fn label(&self) -> String {
        if self.params.is_empty() {
            return self.def.name.to_string();
        }
        let inner: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
        format!("{}({})", self.def.name, inner.join(","))
    }

    /// Exact `c₀ = F(X(1)) - log X(1)` where it is rational.
    pub fn registered_constant(&self) -> Option<Rational> {
        match self.def.name {
            "boltzmann-gibbs" => Some(int(1)),
            // X(1) = ∞; the limit of F(X(u)) - log X(u) as u → 1 is 0
            "fermi-dirac" => Some(int(0)),
            _ => None,
        }
    }

    /// The normalized free energy as a delta series for umbral operations.
    pub fn delta_series(&self, order: usize) -> Result<DeltaSeries> {
        DeltaSeries::new(self.build(order)?.free_energy().clone())
    }

    /// Fixtures recorded for this entry at exactly these parameters.
    pub fn fixtures(&self) -> Vec<&'static Fixture> {
        all_fixtures()
            .iter()
            .filter(|f| f.entry == self.def.name && f.params == self.params)
            .collect()
    }

    fn eps_s(&self) -> Result<Rational> {
        let eps = self
            .params
            .get("eps")
            .ok_or_else(|| Error::InvalidParam(format!("{} has no eps", self.def.name)))?;
        Ok((eps + eps.recip()) / int(2))
    }

    /// Computes a quantity by tag at the given order. See [`QUANTITIES`].
    pub fn quantity(&self, tag: &str, order: usize) -> Result<Quantity> {
        if let Some(n) = tag.strip_prefix("gamma:") {
            let n: usize = n
                .parse()
                .map_err(|_| Error::Parse(format!("bad gamma index in `{tag}`")))?;
            let seq = conjugate_sequence(&self.delta_series(order.max(n))?, n)?;
            return Ok(Quantity::Poly(seq.polys()[n].clone()));
        }
        let stat = self.build(order)?;
        let phi = || map_g_inverse(&stat);
        let u_over_phi = || -> Result<TruncatedSeries> {
            phi()?.series().div_x()?.reciprocal()
        };
        Ok(match tag {
            "F" | "xi_in_X" => Quantity::Series(stat.free_energy().clone()),
            "z" => Quantity::Series(stat.partition_function().clone()),
            "w" => Quantity::Series(stat.weight().clone()),
            "X_of_w" => Quantity::Series(stat.x_of_w().clone()),
            "f" => Quantity::Series(stat.free_energy().lagrange_invert()?),
            "phi" => Quantity::Series(phi()?.series()),
            "xi" => Quantity::Series(xi(&phi()?)?),
            "ln_phi" => Quantity::Log(ln_phi(&phi()?)),
            "ln_phi.plain" => Quantity::Series(ln_phi(&phi()?).plain().clone()),
            "entropy" => Quantity::Log(stat.entropy()),
            "phi_entropy" => Quantity::Log(phi_entropy(&phi()?)?),
            "phi_entropy.plain" => Quantity::Series(phi_entropy(&phi()?)?.plain().clone()),
            "phi_entropy_integral" => Quantity::Log(phi_entropy_integral(&phi()?)),
            "phi_entropy_integral.plain" => {
                Quantity::Series(phi_entropy_integral(&phi()?).plain().clone())
            }
            "phi_in_X" => Quantity::Series(stat.weight().derivative().mul_x()),
            "Y_in_w" => Quantity::Series(xi(&phi()?)?.div_x()?),
            "u_over_phi" => Quantity::Series(u_over_phi()?),
            "u_s_minus_u_over_phi" => {
                let q = u_over_phi()?;
                let s_minus_u = TruncatedSeries::new(vec![self.eps_s()?, int(-1)], q.order());
                Quantity::Series(s_minus_u.mul(&q))
            }
            "X_of_w_unnormalized" => {
                let s = self.eps_s()?;
                Quantity::Series(stat.x_of_w().scale(&(&s * &s).recip()))
            }
            "two_u_one_minus_u_over_phi" => {
                let q = u_over_phi()?;
                let one_minus_u = TruncatedSeries::new(vec![int(2), int(-2)], q.order());
                Quantity::Series(one_minus_u.mul(&q))
            }
            _ => {
                return Err(Error::InvalidParam(format!(
                    "unknown quantity `{tag}`; valid: {}",
                    QUANTITIES.join(", ")
                )))
            }
        })
    }

    /// `φ` for this entry as an element of the space of deformations.
    pub fn phi(&self, order: usize) -> Result<PhiSeries> {
        map_g_inverse(&self.build(order)?)
    }
}

/// `Σ (-1)^{k-1} ∏_{j<k} (ak + jb) X^k/k!`.
fn gould(a: &Rational, b: &Rational, order: usize) -> TruncatedSeries {
    TruncatedSeries::from_fn(order, |k| {
        if k == 0 {
            return Rational::zero();
        }
        let prod = (1..k).fold(Rational::one(), |acc, j| {
            acc * (a * int(k as i64) + b * int(j as i64))
        });
        let sign = if k % 2 == 1 { int(1) } else { int(-1) };
        sign * prod / factorial(k)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Provenance {
    #[serde(rename = "PAPER")]
    Quoted,
    #[serde(rename = "DERIVED")]
    Derived,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Compare {
    #[default]
    Exact,
    /// The linear coefficient is an undetermined constant times `p`.
    ModuloLinear,
}

/// An expected coefficient list for one quantity of one entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fixture {
    pub entry: String,
    #[serde(with = "params_serde")]
    pub params: BTreeMap<String, Rational>,
    pub quantity: String,
    #[serde(with = "crate::rational::serde_str::vec")]
    pub coeffs: Vec<Rational>,
    pub provenance: Provenance,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oeis: Option<String>,
    #[serde(default)]
    pub compare: Compare,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

mod params_serde {
    use std::collections::BTreeMap;

    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    use crate::rational::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(
        m: &BTreeMap<String, Rational>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        s.collect_map(m.iter().map(|(k, v)| (k, format_rational(v))))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<String, Rational>, D::Error> {
        BTreeMap::<String, String>::deserialize(d)?
            .into_iter()
            .map(|(k, v)| Ok((k, parse_rational(&v).map_err(D::Error::custom)?)))
            .collect()
    }
}

#[derive(Deserialize)]
struct FixtureFile {
    version: u32,
    fixtures: Vec<Fixture>,
}

/// All fixtures from the embedded fixture file.
pub fn all_fixtures() -> &'static [Fixture] {
    static CELL: OnceLock<Vec<Fixture>> = OnceLock::new();
    CELL.get_or_init(|| {
        let file: FixtureFile =
            serde_json::from_str(FIXTURE_JSON).expect("embedded fixture file is valid");
        assert_eq!(file.version, 1, "unsupported fixture file version");
        file.fixtures
    })
}

/// Fixtures of every parameterization of an entry.
pub fn fixtures(name: &str) -> Result<Vec<&'static Fixture>> {
    def(name)?;
    Ok(all_fixtures().iter().filter(|f| f.entry == name).collect())
}

/// Result of checking one fixture against the engine.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FixtureOutcome {
    pub entry: String,
    pub params: String,
    pub quantity: String,
    pub provenance: Provenance,
    pub passed: bool,
    /// First index where the lists differ.
    pub mismatch_at: Option<usize>,
    #[serde(with = "crate::rational::serde_str::vec")]
    pub expected: Vec<Rational>,
    #[serde(with = "crate::rational::serde_str::vec")]
    pub computed: Vec<Rational>,
}

impl Fixture {
    /// Recomputes the quantity with enough margin and compares the prefix.
    pub fn check(&self) -> Result<FixtureOutcome> {
        let overrides: Vec<(String, Rational)> =
            self.params.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        let entry = get(&self.entry, &overrides)?;
        let len = self.coeffs.len();
        let q = entry.quantity(&self.quantity, len + 1)?;
        if q.known_through().saturating_add(1) < len {
            return Err(Error::OrderExceeded {
                requested: len - 1,
                order: q.known_through(),
            });
        }
        let mut computed = q.coeffs();
        computed.resize(len, Rational::zero());
        let mismatch_at = (0..len).find(|&k| {
            !(self.compare == Compare::ModuloLinear && k == 1) && computed[k] != self.coeffs[k]
        });
        Ok(FixtureOutcome {
            entry: self.entry.clone(),
            params: entry.label(),
            quantity: self.quantity.clone(),
            provenance: self.provenance,
            passed: mismatch_at.is_none(),
            mismatch_at,
            expected: self.coeffs.clone(),
            computed,
        })
    }

    /// Integer view of the coefficients, for OEIS comparisons.
    pub fn integer_coeffs(&self) -> Option<Vec<num_bigint::BigInt>> {
        self.coeffs
            .iter()
            .map(|c| is_integer(c).then(|| c.to_integer()))
            .collect()
    }
}

/// `|c|` for every coefficient.
pub fn abs_all(v: &[Rational]) -> Vec<Rational> {
    v.iter().map(|c| c.abs()).collect()
}
