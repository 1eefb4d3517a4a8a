//! Exact rational scalars.
//!
//! Everything in the crate runs over `BigRational`, which always keeps its
//! value in lowest terms with a positive denominator. This module adds the
//! handful of helpers the rest of the crate leans on: constructors,
//! `"p/q"` string round-tripping, factorials and binomials.

use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// `n / d` as an exact rational. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or a finite decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
        let d = BigInt::from_str(d.trim()).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("`{s}`: zero denominator")));
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let negative = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let n = BigInt::from_str(&digits).map_err(|e| Error::Parse(format!("`{s}`: {e}")))?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = Rational::new(n, d);
        return Ok(if negative { -r } else { r });
    }
    BigInt::from_str(s)
        .map(Rational::from_integer)
        .map_err(|e| Error::Parse(format!("`{s}`: {e}")))
}

/// Lowest-terms string: `"p"` for integers, `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    r.to_string()
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Fall back to a scaled division when numerator or denominator overflow f64.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

pub fn from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn factorial(n: usize) -> Rational {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= k;
    }
    Rational::from_integer(acc)
}

/// Generalized binomial coefficient C(r, k) for rational `r`.
pub fn binomial(r: &Rational, k: usize) -> Rational {
    let mut acc = Rational::one();
    for j in 0..k {
        acc *= r - int(j as i64);
        acc /= int(j as i64 + 1);
    }
    acc
}

pub fn pow(r: &Rational, k: usize) -> Rational {
    num_traits::pow(r.clone(), k)
}

/// Writes `c_k var^k` terms as `x^2 - 1/4*x + 3`, skipping zeros. Returns
/// whether any term was written.
pub(crate) fn write_terms<'a>(
    f: &mut std::fmt::Formatter<'_>,
    terms: impl Iterator<Item = (usize, &'a Rational)>,
    var: &str,
) -> std::result::Result<bool, std::fmt::Error> {
    let mut first = true;
    for (k, c) in terms.filter(|(_, c)| !c.is_zero()) {
        let magnitude = abs(c);
        match (first, c.is_negative()) {
            (true, true) => write!(f, "-")?,
            (false, true) => write!(f, " - ")?,
            (false, false) => write!(f, " + ")?,
            (true, false) => {}
        }
        first = false;
        let coeff = if k > 0 && magnitude.is_one() {
            String::new()
        } else if k > 0 {
            format!("{magnitude}*")
        } else {
            magnitude.to_string()
        };
        match k {
            0 => write!(f, "{coeff}")?,
            1 => write!(f, "{coeff}{var}")?,
            _ => write!(f, "{coeff}{var}^{k}")?,
        }
    }
    Ok(!first)
}

pub fn is_integer(r: &Rational) -> bool {
    r.is_integer()
}

pub fn abs(r: &Rational) -> Rational {
    r.abs()
}

/// Serde adapters for rationals stored as lowest-terms strings.
pub mod serde_str {
    use serde::{Deserialize, Deserializer, Serializer};

    use super::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};

        use super::super::{format_rational, parse_rational, Rational};

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }

    pub mod option {
        use serde::{Deserialize, Deserializer, Serializer};

        use super::super::{format_rational, parse_rational, Rational};

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&format_rational(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| parse_rational(&s).map_err(serde::de::Error::custom))
                .transpose()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse_rational("3").unwrap(), int(3));
        assert_eq!(parse_rational("-6/4").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("0.25").unwrap(), rat(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
    }

    #[test]
    fn lowest_terms_strings() {
        assert_eq!(format_rational(&rat(4, -8)), "-1/2");
        assert_eq!(format_rational(&rat(6, 3)), "2");
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(&int(5), 2), int(10));
        assert_eq!(binomial(&rat(1, 2), 2), rat(-1, 8));
        assert_eq!(binomial(&int(-1), 3), int(-1));
        assert_eq!(factorial(5), int(120));
    }
}
