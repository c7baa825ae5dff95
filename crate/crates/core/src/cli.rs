//! Command-line front end: input documents, subcommand dispatch and rendering.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::realization::{
    build_theta, derive_delta_hat, enumerate_smooth_epimorphisms, first_smooth_epimorphism,
    lemma1_check, realize, structural_issues, validate_action, ActionDatum, DiscGroup,
    RealizationCertificate, RealizeError, RhoImages, ValidationIssue,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_INTERNAL: i32 = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RhoSpec {
    Explicit {
        d: Vec<i64>,
        x: Vec<i64>,
    },
    /// Use the lexicographically first smooth epimorphism.
    Search,
}

impl Serialize for RhoSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            RhoSpec::Search => s.serialize_str("search"),
            RhoSpec::Explicit { d, x } => {
                let mut map = s.serialize_map(Some(2))?;
                map.serialize_entry("d", d)?;
                map.serialize_entry("x", x)?;
                map.end()
            }
        }
    }
}

/// The input file: `{gamma, periods, n, rho}` with `rho` either
/// `{"d": [...], "x": [...]}` or the string `"search"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InputDocument {
    pub gamma: u32,
    pub periods: Vec<u32>,
    pub n: u32,
    pub rho: RhoSpec,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("field `{field}`: {message}")]
pub struct InputError {
    pub field: String,
    pub message: String,
}

fn field_error(field: &str, message: impl Into<String>) -> InputError {
    InputError {
        field: field.to_string(),
        message: message.into(),
    }
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<Self, InputError> {
        let value: Value =
            serde_json::from_str(text).map_err(|e| field_error("<document>", e.to_string()))?;
        Self::from_value(&value)
    }

    pub fn from_value(value: &Value) -> Result<Self, InputError> {
        let obj = value
            .as_object()
            .ok_or_else(|| field_error("<document>", "expected an object"))?;
        let get = |name: &str| obj.get(name).ok_or_else(|| field_error(name, "missing"));
        let gamma = as_u32(get("gamma")?, "gamma")?;
        let n = as_u32(get("n")?, "n")?;
        let periods = as_list(get("periods")?, "periods")?
            .iter()
            .enumerate()
            .map(|(i, v)| as_u32(v, &format!("periods[{i}]")))
            .collect::<Result<_, _>>()?;
        let rho = match get("rho")? {
            Value::String(s) if s == "search" => RhoSpec::Search,
            Value::String(s) => {
                return Err(field_error(
                    "rho",
                    format!("unknown mode {s:?}, expected \"search\""),
                ))
            }
            Value::Object(m) => {
                let list = |key: &str| -> Result<Vec<i64>, InputError> {
                    let path = format!("rho.{key}");
                    let v = m.get(key).ok_or_else(|| field_error(&path, "missing"))?;
                    as_list(v, &path)?
                        .iter()
                        .enumerate()
                        .map(|(i, e)| {
                            e.as_i64().ok_or_else(|| {
                                field_error(&format!("{path}[{i}]"), "expected an integer")
                            })
                        })
                        .collect()
                };
                RhoSpec::Explicit {
                    d: list("d")?,
                    x: list("x")?,
                }
            }
            _ => {
                return Err(field_error(
                    "rho",
                    "expected {\"d\": [...], \"x\": [...]} or \"search\"",
                ))
            }
        };
        if let Some(extra) = obj
            .keys()
            .find(|k| !["gamma", "periods", "n", "rho"].contains(&k.as_str()))
        {
            return Err(field_error(extra, "unknown field"));
        }
        Ok(InputDocument {
            gamma,
            periods,
            n,
            rho,
        })
    }

    /// Resolves `rho` to residues mod `2n`, with warnings for reduced values.
    pub fn resolve(&self) -> Result<(ActionDatum, Vec<String>), Vec<ValidationIssue>> {
        let m = 2 * self.n as i64;
        let mut warnings = Vec::new();
        let rho = match &self.rho {
            RhoSpec::Explicit { d, x } => {
                let mut reduce = |name: &str, vals: &[i64]| -> Vec<u32> {
                    vals.iter()
                        .enumerate()
                        .map(|(i, &v)| {
                            let r = if m > 0 { v.rem_euclid(m) } else { v.max(0) };
                            if r != v {
                                warnings
                                    .push(format!("rho.{name}[{i}] = {v} reduced to {r} mod {m}"));
                            }
                            r as u32
                        })
                        .collect()
                };
                RhoImages {
                    d: reduce("d", d),
                    x: reduce("x", x),
                }
            }
            RhoSpec::Search => {
                let placeholder = ActionDatum {
                    gamma: self.gamma,
                    periods: self.periods.clone(),
                    n: self.n,
                    rho: RhoImages {
                        d: vec![1; self.gamma as usize],
                        x: vec![0; self.periods.len()],
                    },
                };
                let issues = structural_issues(&placeholder);
                if !issues.is_empty() {
                    return Err(issues);
                }
                match first_smooth_epimorphism(self.gamma, &self.periods, 2 * self.n) {
                    Some(rho) => {
                        warnings.push(format!(
                            "rho selected by search: d = {:?}, x = {:?}",
                            rho.d, rho.x
                        ));
                        rho
                    }
                    None => {
                        return Err(vec![ValidationIssue::NoSmoothEpimorphism {
                            modulus: 2 * self.n,
                        }])
                    }
                }
            }
        };
        Ok((
            ActionDatum {
                gamma: self.gamma,
                periods: self.periods.clone(),
                n: self.n,
                rho,
            },
            warnings,
        ))
    }
}

fn as_u32(v: &Value, field: &str) -> Result<u32, InputError> {
    v.as_u64()
        .and_then(|x| u32::try_from(x).ok())
        .ok_or_else(|| field_error(field, format!("expected a non-negative integer, found {v}")))
}

fn as_list<'a>(v: &'a Value, field: &str) -> Result<&'a Vec<Value>, InputError> {
    v.as_array()
        .ok_or_else(|| field_error(field, format!("expected a list, found {v}")))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "nec-realize")]
#[command(about = "Realize cyclic anticonformal actions through NEC groups and certify each step")]
#[command(version)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    pub format: Format,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the realization chain on an input document.
    Realize { file: PathBuf },
    /// List surface-kernel epimorphisms from (γ; −; [periods]) onto the cyclic group of the given order.
    Enumerate {
        #[arg(long)]
        gamma: u32,
        /// Comma-separated periods, possibly empty.
        #[arg(long, default_value = "")]
        periods: String,
        /// Group order 2n.
        #[arg(long)]
        order: u32,
    },
    /// Report only the τ₁-inversion checks on ker θ.
    CheckLemma { file: PathBuf },
}

/// Result of one invocation: exit code, rendered output and diagnostics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub output: String,
    pub diagnostics: String,
}

impl Outcome {
    fn new(code: i32, output: String) -> Self {
        Outcome {
            code,
            output,
            diagnostics: String::new(),
        }
    }

    fn failure(code: i32, diagnostics: String) -> Self {
        Outcome {
            code,
            output: String::new(),
            diagnostics,
        }
    }
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            return Outcome {
                code,
                output: if e.use_stderr() {
                    String::new()
                } else {
                    e.to_string()
                },
                diagnostics: if e.use_stderr() {
                    e.to_string()
                } else {
                    String::new()
                },
            };
        }
    };
    let outcome = match &cli.command {
        Command::Realize { file } => {
            load(file).map_or_else(|o| o, |doc| run_realize(&doc, cli.format))
        }
        Command::Enumerate {
            gamma,
            periods,
            order,
        } => run_enumerate(*gamma, periods, *order, cli.format),
        Command::CheckLemma { file } => {
            load(file).map_or_else(|o| o, |doc| run_check_lemma(&doc, cli.format))
        }
    };
    match (&cli.out, outcome.output.is_empty()) {
        (Some(path), false) => match std::fs::write(path, &outcome.output) {
            Ok(()) => Outcome {
                output: String::new(),
                ..outcome
            },
            Err(e) => Outcome::failure(
                EXIT_INTERNAL,
                format!("cannot write {}: {e}", path.display()),
            ),
        },
        _ => outcome,
    }
}

fn load(path: &PathBuf) -> Result<InputDocument, Outcome> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Outcome::failure(EXIT_INVALID, format!("cannot read {}: {e}", path.display()))
    })?;
    InputDocument::parse(&text)
        .map_err(|e| Outcome::failure(EXIT_INVALID, format!("malformed input: {e}")))
}

#[derive(Serialize)]
struct IssueRecord {
    message: String,
    detail: ValidationIssue,
}

#[derive(Serialize)]
struct Rejection<'a> {
    input: &'a InputDocument,
    warnings: Vec<String>,
    errors: Vec<IssueRecord>,
}

#[derive(Serialize)]
struct CertificateDocument<'a> {
    input: &'a InputDocument,
    warnings: &'a [String],
    #[serde(flatten)]
    certificate: &'a RealizationCertificate,
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn render_rejection(
    doc: &InputDocument,
    warnings: Vec<String>,
    issues: Vec<ValidationIssue>,
    format: Format,
) -> String {
    match format {
        Format::Json => to_json(&Rejection {
            input: doc,
            warnings,
            errors: issues
                .into_iter()
                .map(|i| IssueRecord {
                    message: i.to_string(),
                    detail: i,
                })
                .collect(),
        }),
        Format::Text => {
            let mut out = String::from("input rejected:\n");
            for w in &warnings {
                let _ = writeln!(out, "warning: {w}");
            }
            for i in &issues {
                let _ = writeln!(out, "  - {i}");
            }
            out
        }
    }
}

pub fn render_certificate(
    doc: &InputDocument,
    warnings: &[String],
    c: &RealizationCertificate,
    format: Format,
) -> String {
    match format {
        Format::Json => to_json(&CertificateDocument {
            input: doc,
            warnings,
            certificate: c,
        }),
        Format::Text => {
            let mut out = String::new();
            for w in warnings {
                let _ = writeln!(out, "warning: {w}");
            }
            out.push_str(&c.render_text());
            out
        }
    }
}

fn run_realize(doc: &InputDocument, format: Format) -> Outcome {
    let (datum, warnings) = match doc.resolve() {
        Ok(r) => r,
        Err(issues) => {
            return Outcome::new(
                EXIT_INVALID,
                render_rejection(doc, Vec::new(), issues, format),
            )
        }
    };
    match realize(&datum) {
        Ok(c) => {
            let code = if c.conclusion { EXIT_OK } else { EXIT_INTERNAL };
            Outcome::new(code, render_certificate(doc, &warnings, &c, format))
        }
        Err(RealizeError::Invalid(issues)) => Outcome::new(
            EXIT_INVALID,
            render_rejection(doc, warnings, issues, format),
        ),
        Err(e @ RealizeError::Internal(_)) => Outcome::failure(EXIT_INTERNAL, e.to_string()),
    }
}

fn parse_periods(text: &str) -> Result<Vec<u32>, String> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<u32>()
                .map_err(|e| format!("bad period {s:?}: {e}"))
        })
        .collect()
}

fn run_enumerate(gamma: u32, periods: &str, order: u32, format: Format) -> Outcome {
    let periods = match parse_periods(periods) {
        Ok(p) => p,
        Err(e) => return Outcome::failure(EXIT_INVALID, format!("--periods: {e}")),
    };
    let e = enumerate_smooth_epimorphisms(gamma, &periods, order);
    let output = match format {
        Format::Json => to_json(&e),
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "γ = {gamma}, periods {periods:?}, order {order}");
            let _ = writeln!(out, "count: {}", e.count);
            for rho in &e.epimorphisms {
                let _ = writeln!(out, "d = {:?}, x = {:?}", rho.d, rho.x);
            }
            out
        }
    };
    Outcome::new(EXIT_OK, output)
}

fn run_check_lemma(doc: &InputDocument, format: Format) -> Outcome {
    let datum = match doc.resolve() {
        Ok((d, _)) => d,
        Err(issues) => {
            return Outcome::new(
                EXIT_INVALID,
                render_rejection(doc, Vec::new(), issues, format),
            )
        }
    };
    if let Err(issues) = validate_action(&datum) {
        return Outcome::new(
            EXIT_INVALID,
            render_rejection(doc, Vec::new(), issues, format),
        );
    }
    let k = match DiscGroup::new(datum.gamma, &datum.periods) {
        Ok(k) => k,
        Err(e) => return Outcome::failure(EXIT_INTERNAL, e.to_string()),
    };
    let dh = match derive_delta_hat(&k, &build_theta(k.layout)) {
        Ok(dh) => dh,
        Err(e) => return Outcome::failure(EXIT_INTERNAL, e.to_string()),
    };
    let report = lemma1_check(&k, &dh);
    let code = if report.holds { EXIT_OK } else { EXIT_INTERNAL };
    let output = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct LemmaDocument<'a> {
                input: &'a InputDocument,
                delta_hat_signature: String,
                lemma1: &'a crate::realization::Lemma1Report,
            }
            to_json(&LemmaDocument {
                input: doc,
                delta_hat_signature: dh.signature().to_string(),
                lemma1: &report,
            })
        }
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(out, "Δ̂ signature {}", dh.signature());
            crate::realization::certificate::render_lemma(&mut out, &report);
            out
        }
    };
    Outcome::new(code, output)
}
