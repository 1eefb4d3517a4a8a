//! The `umbral-stats` command line.
//!
//! Every command produces one [`OutputRecord`]; `--format` picks JSON, CSV
//! or a plain-text rendering of it. Exit status is 0 when every requested
//! check passed, 1 when a check failed and 2 on errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::catalog::{self, CatalogEntry, Quantity};
use crate::deformed_entropy::{phi_entropy, solve_max_entropy};
use crate::error::{Error, Result};
use crate::logseries::LogSeries;
use crate::oeis::{self, Transform};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::series::TruncatedSeries;
use crate::statistics::Statistics;
use crate::umbral::{
    associated_sequence, conjugate_sequence, sheffer_sequence, InvertibleSeries,
    PolynomialSequence,
};
use crate::verify::{self, Suite};

pub const DEFAULT_ORDER: usize = 16;

pub const NORMALIZATION_NOTE: &str = "H0 = F(X(p)) - p log X(p): the constant c0 p is dropped; \
     the full entropy is H0 - c0 p where c0 = lim F(X(1)) - log X(1)";

#[derive(Parser, Debug)]
#[command(name = "umbral-stats", version, about = "Exact series engine for interpolating statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Catalog entry (see `list`).
    #[arg(long, global = true)]
    pub stat: Option<String>,

    /// Entry parameter, e.g. `--param eps=1/2`. Repeatable.
    #[arg(long = "param", global = true, value_parser = parse_param)]
    pub params: Vec<(String, Rational)>,

    /// Truncation order.
    #[arg(long, global = true, env = "UMBRAL_ORDER", default_value_t = DEFAULT_ORDER)]
    pub order: usize,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Seed for the random inputs of `verify`.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Download OEIS b-files instead of using the embedded prefixes.
    #[arg(long, global = true)]
    pub fetch: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Expansion of one quantity of `--stat`.
    Expand {
        /// F, z, w, X_of_w, phi, xi, ln_phi, entropy, phi_entropy, or any
        /// other catalog tag.
        quantity: String,
    },
    /// The normalized φ-entropy H⁰ of `--stat`.
    Entropy,
    /// Weight function of the dual statistics.
    Dual,
    /// Group composition `v ∘_m w` with `v` from `--stat`.
    Compose {
        /// Inner statistics.
        #[arg(long)]
        with: String,
        /// Parameter of the inner statistics. Repeatable.
        #[arg(long = "with-param", value_parser = parse_param)]
        with_params: Vec<(String, Rational)>,
        /// Twist exponent; 0 is plain composition.
        #[arg(long, default_value_t = 0)]
        m: u32,
    },
    /// Polynomial sequences built from the free energy `F` of `--stat`.
    Polyseq {
        #[arg(value_enum)]
        kind: SeqKind,
        /// Highest index (default: min(order, 8)).
        #[arg(long)]
        n: Option<usize>,
        /// Coefficients of `g` for `sheffer`, e.g. `1,0,1/2`.
        #[arg(long, value_delimiter = ',', value_parser = parse_rational_arg)]
        g: Vec<Rational>,
    },
    /// Points on the spectral curves `z(X)` and `Y = log z(X)` (as `e^Y = z`).
    Spectral {
        #[arg(long, value_delimiter = ',', value_parser = parse_rational_arg,
              default_value = "0,1/10,1/5,3/10,2/5,1/2")]
        points: Vec<Rational>,
    },
    /// Newton solve of the maximum-entropy stationarity equations.
    Maxent {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        energies: Vec<f64>,
        /// Target mean energy.
        #[arg(long, allow_hyphen_values = true)]
        energy: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        a0: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        b0: f64,
    },
    /// Run property suites.
    Verify {
        #[arg(default_value = "all", value_parser = parse_suite)]
        suite: Suite,
    },
    /// Compare a quantity of `--stat` with an OEIS sequence.
    OeisCheck {
        #[arg(long)]
        quantity: String,
        #[arg(long)]
        id: String,
        /// Comma-separated subset of identity, odd, even, abs, alternating.
        #[arg(long, default_value = "identity", value_parser = parse_transform)]
        transform: Transform,
    },
    /// Catalog entries with their parameters.
    List,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SeqKind {
    /// `Σ p_n(x) t^n/n! = e^{xF(t)}`.
    Conjugate,
    /// `F(D) p_n = n p_{n-1}`.
    Associated,
    /// Sheffer sequence for `(g, F)`.
    Sheffer,
}

fn parse_param(s: &str) -> std::result::Result<(String, Rational), String> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v = parse_rational(v).map_err(|e| e.to_string())?;
    Ok((k.trim().to_string(), v))
}

fn parse_rational_arg(s: &str) -> std::result::Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

fn parse_suite(s: &str) -> std::result::Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_transform(s: &str) -> std::result::Result<Transform, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What every command emits.
#[derive(Clone, Debug, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub parameters: BTreeMap<String, Value>,
    pub ok: bool,
    pub payload: Value,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
    pub timing_ms: f64,
}

/// Command result before it is wrapped into a record.
struct Outcome {
    ok: bool,
    payload: Value,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    pretty: String,
    warnings: Vec<String>,
}

impl Outcome {
    fn new(payload: Value, header: Vec<&'static str>, rows: Vec<Vec<String>>, pretty: String) -> Self {
        Self {
            ok: true,
            payload,
            header,
            rows,
            pretty,
            warnings: Vec::new(),
        }
    }
}

/// Parses `args`, runs the command and writes the record to `out`. Errors
/// go to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    let start = Instant::now();
    let outcome = match execute(&cli) {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let record = OutputRecord {
        command: command_name(&cli.command).to_string(),
        parameters: parameters(&cli),
        ok: outcome.ok,
        payload: outcome.payload.clone(),
        warnings: outcome.warnings.clone(),
        timing_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    for w in &record.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let written = match cli.format {
        Format::Json => serde_json::to_writer_pretty(&mut *out, &record)
            .map_err(std::io::Error::from)
            .and_then(|_| writeln!(out)),
        Format::Csv => write_csv(out, &outcome),
        Format::Pretty => write!(out, "{}", outcome.pretty),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: writing output: {e}");
        return 2;
    }
    if record.ok {
        0
    } else {
        1
    }
}

fn write_csv(out: &mut dyn Write, outcome: &Outcome) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&outcome.header)?;
    for row in &outcome.rows {
        w.write_record(row)?;
    }
    w.flush()
}

fn command_name(c: &Command) -> &'static str {
    match c {
        Command::Expand { .. } => "expand",
        Command::Entropy => "entropy",
        Command::Dual => "dual",
        Command::Compose { .. } => "compose",
        Command::Polyseq { .. } => "polyseq",
        Command::Spectral { .. } => "spectral",
        Command::Maxent { .. } => "maxent",
        Command::Verify { .. } => "verify",
        Command::OeisCheck { .. } => "oeis-check",
        Command::List => "list",
    }
}

fn parameters(cli: &Cli) -> BTreeMap<String, Value> {
    let mut p = BTreeMap::new();
    p.insert("order".into(), json!(cli.order));
    if let Some(stat) = &cli.stat {
        p.insert("stat".into(), json!(stat));
    }
    if !cli.params.is_empty() {
        let params: BTreeMap<_, _> = cli
            .params
            .iter()
            .map(|(k, v)| (k.clone(), format_rational(v)))
            .collect();
        p.insert("params".into(), json!(params));
    }
    match &cli.command {
        Command::Expand { quantity } => {
            p.insert("quantity".into(), json!(quantity));
        }
        Command::Compose { with, with_params, m } => {
            p.insert("with".into(), json!(with));
            let wp: BTreeMap<_, _> = with_params
                .iter()
                .map(|(k, v)| (k.clone(), format_rational(v)))
                .collect();
            p.insert("with_params".into(), json!(wp));
            p.insert("m".into(), json!(m));
        }
        Command::Polyseq { kind, n, g } => {
            p.insert("kind".into(), json!(kind));
            p.insert("n".into(), json!(n));
            if !g.is_empty() {
                p.insert("g".into(), json!(strs(g)));
            }
        }
        Command::Spectral { points } => {
            p.insert("points".into(), json!(strs(points)));
        }
        Command::Maxent { energies, energy, a0, b0 } => {
            p.insert("energies".into(), json!(energies));
            p.insert("energy".into(), json!(energy));
            p.insert("a0".into(), json!(a0));
            p.insert("b0".into(), json!(b0));
        }
        Command::Verify { suite } => {
            p.insert("suite".into(), json!(suite.name()));
            p.insert("seed".into(), json!(cli.seed));
        }
        Command::OeisCheck { quantity, id, transform } => {
            p.insert("quantity".into(), json!(quantity));
            p.insert("id".into(), json!(id));
            p.insert("transform".into(), json!(transform.to_string()));
            p.insert("fetch".into(), json!(cli.fetch));
        }
        Command::Entropy | Command::Dual | Command::List => {}
    }
    p
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn entry(cli: &Cli) -> Result<CatalogEntry> {
    let name = cli.stat.as_deref().ok_or_else(|| {
        Error::InvalidParam(format!(
            "--stat is required; valid entries: {}",
            catalog::list_entries().join(", ")
        ))
    })?;
    catalog::get(name, &cli.params)
}

fn execute(cli: &Cli) -> Result<Outcome> {
    let order = cli.order;
    if order == 0 && !matches!(cli.command, Command::List | Command::Verify { .. }) {
        return Err(Error::InvalidParam("--order must be at least 1".into()));
    }
    match &cli.command {
        Command::List => Ok(list()),
        Command::Expand { quantity } => {
            let e = entry(cli)?;
            Ok(quantity_outcome(&e.quantity(quantity, order)?))
        }
        Command::Entropy => {
            let e = entry(cli)?;
            let h0 = phi_entropy(&e.phi(order)?)?;
            let mut o = log_outcome(&h0);
            o.payload["normalization"] = json!(NORMALIZATION_NOTE);
            if let Some(c0) = e.registered_constant() {
                o.payload["c0"] = json!(format_rational(&c0));
            }
            o.pretty.push_str(&format!("normalization: {NORMALIZATION_NOTE}\n"));
            Ok(o)
        }
        Command::Dual => {
            let stat = entry(cli)?.build(order)?;
            Ok(series_outcome(stat.dual()?.weight()))
        }
        Command::Compose { with, with_params, m } => {
            let outer = entry(cli)?.build(order)?;
            let inner = catalog::get(with, with_params)?.build(order)?;
            Ok(series_outcome(outer.group_compose_m(&inner, *m)?.weight()))
        }
        Command::Polyseq { kind, n, g } => {
            let e = entry(cli)?;
            let n = n.unwrap_or(order.min(8));
            let big_f = e.delta_series(order.max(n))?;
            let seq = match kind {
                SeqKind::Conjugate => conjugate_sequence(&big_f, n)?,
                SeqKind::Associated => associated_sequence(&big_f, n)?,
                SeqKind::Sheffer => {
                    if g.is_empty() {
                        return Err(Error::InvalidParam(
                            "sheffer needs --g with the coefficients of g".into(),
                        ));
                    }
                    let mut coeffs = g.clone();
                    coeffs.resize(big_f.order() + 1, Rational::from_integer(0.into()));
                    let g = InvertibleSeries::new(TruncatedSeries::new(coeffs, big_f.order()))?;
                    sheffer_sequence(&g, &big_f, n)?
                }
            };
            Ok(polyseq_outcome(&seq))
        }
        Command::Spectral { points } => {
            let stat = entry(cli)?.build(order)?;
            Ok(spectral_outcome(&stat, points))
        }
        Command::Maxent { energies, energy, a0, b0 } => {
            let stat = entry(cli)?.build(order)?;
            let sol = solve_max_entropy(&stat, energies, *energy, *a0, *b0)?;
            let rows = energies
                .iter()
                .zip(&sol.evaluation.p)
                .map(|(e, p)| vec![e.to_string(), p.to_string()])
                .collect();
            let pretty = format!(
                "a = {}\nb = {}\niterations = {}\np = {:?}\nresiduals = ({:e}, {:e})\n",
                sol.a,
                sol.b,
                sol.iterations,
                sol.evaluation.p,
                sol.evaluation.norm_residual,
                sol.evaluation.energy_residual
            );
            Ok(Outcome::new(json!(sol), vec!["energy", "p"], rows, pretty))
        }
        Command::Verify { suite } => {
            let report = verify::run(*suite, order, cli.seed);
            let rows = report
                .results
                .iter()
                .map(|r| {
                    vec![
                        r.suite.to_string(),
                        r.property.to_string(),
                        r.subject.clone(),
                        r.passed.to_string(),
                        r.counterexample.as_ref().map(Value::to_string).unwrap_or_default(),
                    ]
                })
                .collect();
            let mut pretty = format!(
                "suite {} at order {} (seed {}): {} checked, {} failed\n",
                report.suite, report.order, report.seed, report.checked, report.failed
            );
            for f in report.failures() {
                pretty.push_str(&format!(
                    "FAIL [{}] {} on {}: {}\n",
                    f.suite,
                    f.property,
                    f.subject,
                    f.counterexample.as_ref().map(Value::to_string).unwrap_or_default()
                ));
            }
            let mut o = Outcome::new(
                json!(report),
                vec!["suite", "property", "subject", "passed", "counterexample"],
                rows,
                pretty,
            );
            o.ok = report.passed();
            Ok(o)
        }
        Command::OeisCheck { quantity, id, transform } => {
            let e = entry(cli)?;
            let report = oeis::check(&e, quantity, id, *transform, order, cli.fetch)?;
            let rows = report
                .transformed
                .iter()
                .enumerate()
                .map(|(i, v)| {
                    let seq_value = report
                        .sequence
                        .values
                        .get((report.sequence_index - report.sequence.offset) as usize + i)
                        .map(|s| s.to_string())
                        .unwrap_or_default();
                    vec![i.to_string(), v.to_string(), seq_value, (i < report.prefix).to_string()]
                })
                .collect();
            let pretty = format!(
                "{} {} vs {} ({}, {:?}): prefix {} of {} from index {}\n",
                report.entry,
                report.quantity,
                report.sequence.id,
                report.transform,
                report.sequence.source,
                report.prefix,
                report.compared,
                report.sequence_index
            );
            let mut o = Outcome::new(
                json!(report),
                vec!["i", "computed", "sequence", "matches"],
                rows,
                pretty,
            );
            o.ok = report.passed();
            o.warnings.extend(report.warning.clone());
            Ok(o)
        }
    }
}

fn list() -> Outcome {
    let entries: Vec<Value> = catalog::all_entries()
        .iter()
        .map(|e| {
            let params: BTreeMap<_, _> = e
                .params()
                .iter()
                .map(|(k, v)| (k.clone(), format_rational(v)))
                .collect();
            json!({
                "name": e.name(),
                "summary": catalog::summary(e.name()),
                "params": params,
                "fixtures": e.fixtures().len(),
            })
        })
        .collect();
    let rows: Vec<Vec<String>> = catalog::all_entries()
        .iter()
        .map(|e| {
            vec![
                e.name().to_string(),
                e.label(),
                catalog::summary(e.name()).unwrap_or_default().to_string(),
            ]
        })
        .collect();
    let pretty = rows
        .iter()
        .map(|r| format!("{:<22} {}\n", r[1], r[2]))
        .collect();
    Outcome::new(
        json!({ "entries": entries, "quantities": catalog::QUANTITIES }),
        vec!["name", "label", "summary"],
        rows,
        pretty,
    )
}

fn quantity_outcome(q: &Quantity) -> Outcome {
    match q {
        Quantity::Series(s) => series_outcome(s),
        Quantity::Log(l) => log_outcome(l),
        Quantity::Poly(p) => {
            let rows = p
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| vec![k.to_string(), format_rational(c)])
                .collect();
            Outcome::new(json!(p), vec!["k", "coeff"], rows, format!("{p}\n"))
        }
    }
}

fn series_outcome(s: &TruncatedSeries) -> Outcome {
    let rows = s
        .coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| vec![k.to_string(), format_rational(c)])
        .collect();
    Outcome::new(json!(s), vec!["k", "coeff"], rows, format!("{s}\n"))
}

fn log_outcome(l: &LogSeries) -> Outcome {
    let rows = (0..=l.order())
        .map(|k| {
            vec![
                k.to_string(),
                format_rational(&l.plain().coeffs()[k]),
                format_rational(&l.log_part().coeffs()[k]),
            ]
        })
        .collect();
    Outcome::new(json!(l), vec!["k", "plain", "log"], rows, format!("{l}\n"))
}

fn polyseq_outcome(seq: &PolynomialSequence) -> Outcome {
    let rows = seq
        .polys()
        .iter()
        .enumerate()
        .flat_map(|(n, p)| {
            p.coeffs()
                .iter()
                .enumerate()
                .map(move |(k, c)| vec![n.to_string(), k.to_string(), format_rational(c)])
        })
        .collect();
    let pretty = seq
        .polys()
        .iter()
        .enumerate()
        .map(|(n, p)| format!("p_{n}(x) = {p}\n"))
        .collect();
    Outcome::new(json!(seq), vec!["n", "k", "coeff"], rows, pretty)
}

fn spectral_outcome(stat: &Statistics, points: &[Rational]) -> Outcome {
    let samples = stat.spectral_samples(points);
    let rows = samples
        .iter()
        .map(|s| vec![format_rational(&s.x), format_rational(&s.z), format_rational(&s.y)])
        .collect();
    let pretty = samples
        .iter()
        .map(|s| {
            format!(
                "X = {:<8} z = {:.12}  Y = {:.12}\n",
                format_rational(&s.x),
                crate::rational::to_f64(&s.z),
                crate::rational::to_f64(&s.y)
            )
        })
        .collect();
    Outcome::new(
        json!({
            "free_energy": stat.free_energy(),
            "partition_function": stat.partition_function(),
            "samples": samples,
        }),
        vec!["X", "z", "Y"],
        rows,
        pretty,
    )
}
