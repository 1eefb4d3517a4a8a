//! Integer-sequence comparisons against OEIS.
//!
//! Offline mode uses the short prefixes embedded below. Fetch mode downloads
//! the b-file (`https://oeis.org/A000108/b000108.txt`) with a single GET and
//! falls back to the embedded prefix, with a warning, if the request fails.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::catalog::CatalogEntry;
use crate::error::{Error, Result};
use crate::rational::{format_rational, is_integer, Rational};
use crate::umbral::conjugate_sequence;

/// Quantity tag that flattens `γ_1..γ_n` into the triangle of their
/// `x^1..x^n` coefficients, read by rows.
pub const GAMMA_TRIANGLE: &str = "gamma_triangle";

struct Snippet {
    id: &'static str,
    name: &'static str,
    offset: i64,
    values: &'static [i64],
}

const SNIPPETS: &[Snippet] = &[
    Snippet {
        id: "A000108",
        name: "Catalan numbers",
        offset: 0,
        values: &[1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786, 208012, 742900],
    },
    Snippet {
        id: "A000984",
        name: "central binomial coefficients C(2n,n)",
        offset: 0,
        values: &[1, 2, 6, 20, 70, 252, 924, 3432, 12870, 48620, 184756, 705432],
    },
    Snippet {
        id: "A001700",
        name: "C(2n+1,n+1)",
        offset: 0,
        values: &[1, 3, 10, 35, 126, 462, 1716, 6435, 24310, 92378, 352716],
    },
    Snippet {
        id: "A001405",
        name: "C(n,floor(n/2))",
        offset: 0,
        values: &[1, 1, 2, 3, 6, 10, 20, 35, 70, 126, 252, 462, 924],
    },
    Snippet {
        id: "A002420",
        name: "expansion of sqrt(1+4x)",
        offset: 0,
        values: &[1, 2, -2, 4, -10, 28, -84, 264, -858, 2860, -9724],
    },
    Snippet {
        id: "A027307",
        name: "3-Schroeder numbers",
        offset: 0,
        values: &[1, 2, 10, 66, 498, 4066, 34970, 312066, 2862562],
    },
    Snippet {
        id: "A001818",
        name: "(2n+1) C(2n+1,n), as quoted",
        offset: 0,
        values: &[1, 9, 50, 245, 1134],
    },
    Snippet {
        id: "A000917",
        name: "(2n-1)!/(n!(n-2)!), as quoted",
        offset: 2,
        values: &[3, 20, 105, 504, 2310],
    },
    Snippet {
        id: "A008277",
        name: "Stirling numbers of the second kind, by rows",
        offset: 1,
        values: &[
            1, 1, 1, 1, 3, 1, 1, 7, 6, 1, 1, 15, 25, 10, 1, 1, 31, 90, 65, 15, 1, 1, 63, 301, 350,
            140, 21, 1, 1, 127, 966, 1701, 1050, 266, 28, 1,
        ],
    },
];

/// Ids with an embedded prefix.
pub fn offline_ids() -> Vec<&'static str> {
    SNIPPETS.iter().map(|s| s.id).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Offline,
    Fetched,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Sequence {
    pub id: String,
    pub source: Source,
    /// Index of the first value.
    pub offset: i64,
    #[serde(serialize_with = "big_strs")]
    pub values: Vec<BigInt>,
}

fn big_strs<S: serde::Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|b| b.to_string()))
}

/// `A` followed by six digits.
pub fn validate_id(id: &str) -> Result<()> {
    let ok = id.len() == 7 && id.starts_with('A') && id[1..].bytes().all(|b| b.is_ascii_digit());
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParam(format!(
            "`{id}` is not an OEIS id (expected A followed by six digits)"
        )))
    }
}

pub fn offline(id: &str) -> Result<Sequence> {
    validate_id(id)?;
    let s = SNIPPETS.iter().find(|s| s.id == id).ok_or_else(|| {
        Error::InvalidParam(format!(
            "no offline data for {id}; available: {}",
            offline_ids().join(", ")
        ))
    })?;
    Ok(Sequence {
        id: id.to_string(),
        source: Source::Offline,
        offset: s.offset,
        values: s.values.iter().map(|&v| BigInt::from(v)).collect(),
    })
}

pub fn snippet_name(id: &str) -> Option<&'static str> {
    SNIPPETS.iter().find(|s| s.id == id).map(|s| s.name)
}

/// `https://oeis.org/A000108/b000108.txt`.
pub fn bfile_url(id: &str) -> Result<String> {
    validate_id(id)?;
    Ok(format!("https://oeis.org/{id}/b{}.txt", &id[1..]))
}

/// Parses b-file text: `index value` per line; blank lines and lines
/// starting with `#` are skipped.
pub fn parse_bfile(id: &str, text: &str) -> Result<Sequence> {
    let mut offset = None;
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let bad = || Error::Parse(format!("b-file line {}: `{line}`", lineno + 1));
        let mut fields = trimmed.split_whitespace();
        let (Some(n), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(bad());
        };
        let n: i64 = n.parse().map_err(|_| bad())?;
        let v = BigInt::from_str(v).map_err(|_| bad())?;
        let first = *offset.get_or_insert(n);
        if n != first + values.len() as i64 {
            return Err(bad());
        }
        values.push(v);
    }
    let offset = offset.ok_or_else(|| Error::Parse(format!("b-file for {id} has no data lines")))?;
    Ok(Sequence {
        id: id.to_string(),
        source: Source::Fetched,
        offset,
        values,
    })
}

/// One GET of the b-file.
pub fn fetch(id: &str) -> Result<Sequence> {
    let url = bfile_url(id)?;
    let agent: ureq::Agent = ureq::Agent::config_builder()
        .timeout_global(Some(std::time::Duration::from_secs(20)))
        .build()
        .into();
    let text = agent
        .get(&url)
        .call()
        .and_then(|mut r| r.body_mut().read_to_string())
        .map_err(|e| Error::Network(format!("{url}: {e}")))?;
    parse_bfile(id, &text)
}

/// Fetches when asked, falling back to the embedded prefix on network
/// failure. The second value is the fallback warning, if any.
pub fn lookup(id: &str, fetch_remote: bool) -> Result<(Sequence, Option<String>)> {
    if !fetch_remote {
        return Ok((offline(id)?, None));
    }
    match fetch(id) {
        Ok(seq) => Ok((seq, None)),
        Err(e @ Error::Network(_)) => {
            let warning = format!("{e}; falling back to offline data");
            Ok((offline(id)?, Some(warning)))
        }
        Err(e) => Err(e),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Stride {
    All,
    Odd,
    Even,
}

/// Applied in order: keep the indices selected by `stride`, drop leading
/// zeros, then remove signs (`abs`) or require and remove a strictly
/// alternating sign pattern (`alternating`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Transform {
    pub stride: Stride,
    pub abs: bool,
    pub alternating: bool,
}

impl Default for Transform {
    fn default() -> Self {
        Self {
            stride: Stride::All,
            abs: false,
            alternating: false,
        }
    }
}

impl FromStr for Transform {
    type Err = Error;
    /// Comma-separated subset of `identity`, `odd`, `even`, `abs`,
    /// `alternating`.
    fn from_str(s: &str) -> Result<Self> {
        let mut t = Transform::default();
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part {
                "identity" => {}
                "odd" => t.stride = Stride::Odd,
                "even" => t.stride = Stride::Even,
                "abs" => t.abs = true,
                "alternating" | "alternating-sign" => t.alternating = true,
                other => {
                    return Err(Error::InvalidParam(format!(
                        "unknown transform `{other}`; valid: identity, odd, even, abs, alternating"
                    )))
                }
            }
        }
        if t.abs && t.alternating {
            return Err(Error::InvalidParam("choose one of abs and alternating".into()));
        }
        Ok(t)
    }
}

impl fmt::Display for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.stride {
            Stride::All => {}
            Stride::Odd => parts.push("odd"),
            Stride::Even => parts.push("even"),
        }
        if self.abs {
            parts.push("abs");
        }
        if self.alternating {
            parts.push("alternating");
        }
        if parts.is_empty() {
            parts.push("identity");
        }
        f.write_str(&parts.join(","))
    }
}

impl Transform {
    /// The transformed list, cut at the first term that is not an integer
    /// or breaks the alternating pattern.
    pub fn apply(&self, coeffs: &[Rational]) -> Vec<BigInt> {
        let picked = coeffs.iter().enumerate().filter(|(k, _)| match self.stride {
            Stride::All => true,
            Stride::Odd => k % 2 == 1,
            Stride::Even => k % 2 == 0,
        });
        let mut out = Vec::new();
        let mut sign: Option<bool> = None;
        for (_, c) in picked.skip_while(|(_, c)| c.is_zero()) {
            if !is_integer(c) {
                break;
            }
            let v = c.to_integer();
            if self.alternating {
                let positive = v.is_positive();
                if v.is_zero() || sign == Some(positive) {
                    break;
                }
                sign = Some(positive);
                out.push(v.abs());
            } else if self.abs {
                out.push(v.abs());
            } else {
                out.push(v);
            }
        }
        out
    }
}

/// Longest run of `computed` matching `sequence` from some start position.
/// Returns `(start, length)`; ties go to the earliest start.
pub fn longest_prefix(computed: &[BigInt], sequence: &[BigInt]) -> (usize, usize) {
    (0..sequence.len())
        .map(|start| {
            let len = computed
                .iter()
                .zip(&sequence[start..])
                .take_while(|(a, b)| a == b)
                .count();
            (start, len)
        })
        .fold((0, 0), |best, cur| if cur.1 > best.1 { cur } else { best })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OeisReport {
    pub entry: String,
    pub quantity: String,
    pub transform: String,
    pub sequence: Sequence,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub warning: Option<String>,
    /// OEIS index where the matching run starts.
    pub sequence_index: i64,
    pub prefix: usize,
    pub compared: usize,
    pub coeffs: Vec<String>,
    #[serde(serialize_with = "big_strs")]
    pub transformed: Vec<BigInt>,
}

impl OeisReport {
    /// The whole transformed list (or the whole sequence, if shorter)
    /// matched, and at least one term did.
    pub fn passed(&self) -> bool {
        self.prefix > 0 && self.prefix == self.compared
    }
}

/// Coefficients of `quantity` for `entry`, with [`GAMMA_TRIANGLE`] handled
/// here and everything else delegated to the catalog.
pub fn coefficients(entry: &CatalogEntry, quantity: &str, order: usize) -> Result<Vec<Rational>> {
    if quantity == GAMMA_TRIANGLE {
        let seq = conjugate_sequence(&entry.delta_series(order)?, order)?;
        return Ok(seq
            .polys()
            .iter()
            .enumerate()
            .skip(1)
            .flat_map(|(n, p)| (1..=n).map(move |k| p.coeff(k)))
            .collect());
    }
    Ok(entry.quantity(quantity, order)?.coeffs())
}

pub fn check(
    entry: &CatalogEntry,
    quantity: &str,
    id: &str,
    transform: Transform,
    order: usize,
    fetch_remote: bool,
) -> Result<OeisReport> {
    let coeffs = coefficients(entry, quantity, order)?;
    let (sequence, warning) = lookup(id, fetch_remote)?;
    let transformed = transform.apply(&coeffs);
    let (start, prefix) = longest_prefix(&transformed, &sequence.values);
    let compared = transformed.len().min(sequence.values.len() - start);
    Ok(OeisReport {
        entry: entry.label(),
        quantity: quantity.to_string(),
        transform: transform.to_string(),
        sequence_index: sequence.offset + start as i64,
        warning,
        prefix,
        compared,
        coeffs: coeffs.iter().map(format_rational).collect(),
        transformed,
        sequence,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{binomial, int};

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn c(n: i64, k: usize) -> BigInt {
        binomial(&int(n), k).to_integer()
    }

    #[test]
    fn snippets_agree_with_closed_forms() {
        let cat = offline("A000108").unwrap().values;
        for (n, v) in cat.iter().enumerate() {
            assert_eq!(*v, c(2 * n as i64, n) / BigInt::from(n + 1));
        }
        for (n, v) in offline("A000984").unwrap().values.iter().enumerate() {
            assert_eq!(*v, c(2 * n as i64, n));
        }
        for (n, v) in offline("A001700").unwrap().values.iter().enumerate() {
            assert_eq!(*v, c(2 * n as i64 + 1, n + 1));
        }
        for (n, v) in offline("A001405").unwrap().values.iter().enumerate() {
            assert_eq!(*v, c(n as i64, n / 2));
        }
        for (n, v) in offline("A001818").unwrap().values.iter().enumerate() {
            assert_eq!(*v, BigInt::from(2 * n + 1) * c(2 * n as i64 + 1, n));
        }
        let a917 = offline("A000917").unwrap();
        for (i, v) in a917.values.iter().enumerate() {
            let n = i + 2;
            // (2n-1)!/(n!(n-2)!) = C(2n-1, n)·(n-1)
            assert_eq!(*v, c(2 * n as i64 - 1, n) * BigInt::from(n - 1));
        }
    }

    #[test]
    fn stirling_snippet_follows_recurrence() {
        let flat = offline("A008277").unwrap().values;
        let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::from(1)]];
        let mut pos = 1;
        while pos < flat.len() {
            let prev = rows.last().unwrap();
            let n = prev.len() + 1;
            let row: Vec<BigInt> = (1..=n)
                .map(|k| {
                    let same = if k <= prev.len() { BigInt::from(k) * &prev[k - 1] } else { BigInt::zero() };
                    let left = if k >= 2 { prev[k - 2].clone() } else { BigInt::zero() };
                    same + left
                })
                .collect();
            assert_eq!(&flat[pos..pos + n], &row[..]);
            pos += n;
            rows.push(row);
        }
    }

    #[test]
    fn bfile_parsing() {
        let text = "# A000108\n# comment\n0 1\n1 1\n\n2 2\n3 5\n";
        let seq = parse_bfile("A000108", text).unwrap();
        assert_eq!(seq.offset, 0);
        assert_eq!(seq.values, ints(&[1, 1, 2, 5]));
        let err = parse_bfile("A000108", "0 1\n1 x\n").unwrap_err().to_string();
        assert!(err.contains("line 2") && err.contains("1 x"), "{err}");
        assert!(parse_bfile("A000108", "0 1\n5 1\n").is_err());
        assert!(parse_bfile("A000108", "# only\n").is_err());
    }

    #[test]
    fn url_and_ids() {
        assert_eq!(bfile_url("A027307").unwrap(), "https://oeis.org/A027307/b027307.txt");
        assert!(validate_id("A12").is_err());
        assert!(offline("A999999").is_err());
    }

    #[test]
    fn transforms() {
        let coeffs: Vec<Rational> = [0, 1, -2, 5, -14, -42].iter().map(|&v| int(v)).collect();
        let alt: Transform = "alternating".parse().unwrap();
        assert_eq!(alt.apply(&coeffs), ints(&[1, 2, 5, 14]));
        let abs: Transform = "abs".parse().unwrap();
        assert_eq!(abs.apply(&coeffs), ints(&[1, 2, 5, 14, 42]));
        let even: Transform = "even,abs".parse().unwrap();
        assert_eq!(even.apply(&coeffs), ints(&[2, 14]));
        assert!("abs,alternating".parse::<Transform>().is_err());
        assert!("sideways".parse::<Transform>().is_err());
    }

    #[test]
    fn prefix_search() {
        let seq = ints(&[1, 1, 2, 5, 14, 42]);
        assert_eq!(longest_prefix(&ints(&[1, 2, 5, 14]), &seq), (1, 4));
        assert_eq!(longest_prefix(&ints(&[7]), &seq), (0, 0));
    }
}
