//! Output for every subcommand: JSON envelopes on stdout, structured errors on stderr.
//!
//! Floats in text and CSV use `f64`'s `Debug` form: the shortest decimal string
//! that round-trips, with an exponent outside `[1e-5, 1e16)`. JSON numbers come
//! from `serde_json`, which is also shortest round-trip.

use std::process::ExitCode;

use serde::Serialize;
use serde_json::{json, Value};
use twist_lo::poly::BivarPoly;
use twist_lo::slope::{g_range, CSV_HEADER};
use twist_lo::verify::Report;
use twist_lo::{Error, Inversion, RepSolution, SlopeSample, SurgeryCertificate, VERSION};

use crate::Format;

pub enum Failure {
    Lib(Error),
    ReportFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    pub fn report(&self) -> ExitCode {
        let (code, kind, message, details) = match self {
            Failure::Lib(e) => {
                let details = match e {
                    Error::CertificateFailed(cert) => serde_json::to_value(cert).ok(),
                    Error::NoBracketFound { table, .. } => serde_json::to_value(table).ok(),
                    _ => None,
                };
                (if e.is_numerical() { 2 } else { 1 }, e.kind(), e.to_string(), details)
            }
            Failure::ReportFailed => (
                2,
                "VerificationFailed",
                "one or more invariant checks failed".into(),
                None,
            ),
        };
        let mut body = json!({ "kind": kind, "message": message, "exit_code": code });
        if let Some(d) = details {
            body["details"] = d;
        }
        eprintln!("{}", json!({ "version": VERSION, "error": body }));
        ExitCode::from(code)
    }
}

pub fn usage_error(rendered: &str) -> ExitCode {
    let body = json!({ "kind": "Usage", "message": rendered.trim_end(), "exit_code": 1 });
    eprintln!("{}", json!({ "version": VERSION, "error": body }));
    ExitCode::from(1)
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    version: &'static str,
    command: &'a str,
    result: T,
}

pub struct Emitter {
    format: Format,
}

fn num(x: f64) -> String {
    format!("{x:?}")
}

fn csv_line(fields: &[String]) -> String {
    fields.join(",")
}

/// Flattens objects and arrays into dotted keys, in serialization order.
fn flatten(value: &Value, prefix: &str, out: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match value {
        Value::Object(map) => map.iter().for_each(|(k, v)| flatten(v, &key(k), out)),
        Value::Array(items) => items
            .iter()
            .enumerate()
            .for_each(|(i, v)| flatten(v, &key(&i.to_string()), out)),
        Value::Number(n) if n.is_f64() => out.push((prefix.to_string(), num(n.as_f64().unwrap_or(f64::NAN)))),
        Value::Number(n) => out.push((prefix.to_string(), n.to_string())),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        Value::Bool(b) => out.push((prefix.to_string(), b.to_string())),
        Value::Null => out.push((prefix.to_string(), "null".into())),
    }
}

impl Emitter {
    pub fn new(format: Format) -> Self {
        Emitter { format }
    }

    fn json<T: Serialize>(&self, command: &str, result: T) {
        let env = Envelope {
            version: VERSION,
            command,
            result,
        };
        println!("{}", serde_json::to_string_pretty(&env).expect("serializable output"));
    }

    /// JSON envelope, or one `key = value` line / one CSV row per record.
    fn record<T: Serialize>(&self, command: &str, result: T) {
        if self.format == Format::Json {
            return self.json(command, result);
        }
        let mut pairs = Vec::new();
        flatten(
            &serde_json::to_value(&result).expect("serializable output"),
            "",
            &mut pairs,
        );
        match self.format {
            Format::Csv => {
                println!("{}", csv_line(&pairs.iter().map(|p| p.0.clone()).collect::<Vec<_>>()));
                println!("{}", csv_line(&pairs.iter().map(|p| p.1.clone()).collect::<Vec<_>>()));
            }
            _ => pairs.iter().for_each(|(k, v)| println!("{k} = {v}")),
        }
    }

    pub fn riley(&self, n: i64, phi: &BivarPoly) {
        match self.format {
            Format::Json => self.json("riley", json!({ "n": n, "polynomial": phi, "text": phi.to_string() })),
            Format::Csv => {
                println!("s_deg,T_deg,coeff");
                for (m, c) in phi.terms() {
                    println!("{},{},{c}", m.s_deg, m.t_deg);
                }
            }
            Format::Text => println!("Phi_{n} = {phi}"),
        }
    }

    pub fn solve(&self, sol: &RepSolution, roots: Option<&[f64]>) {
        #[derive(Serialize)]
        struct Out<'a> {
            #[serde(flatten)]
            solution: &'a RepSolution,
            #[serde(skip_serializing_if = "Option::is_none")]
            all_roots: Option<&'a [f64]>,
        }
        self.record(
            "solve",
            Out {
                solution: sol,
                all_roots: roots,
            },
        );
    }

    pub fn slope_at(&self, n: i64, sample: &SlopeSample) {
        match self.format {
            Format::Json => self.json("slope", json!({ "n": n, "sample": sample })),
            Format::Csv => {
                println!("{CSV_HEADER}");
                println!("{}", csv_line(&sample.values().map(num)));
            }
            Format::Text => self.record("slope", sample),
        }
    }

    pub fn inversion(&self, n: i64, r: &str, inv: &Inversion) {
        match self.format {
            Format::Csv => {
                println!("{CSV_HEADER}");
                println!("{}", csv_line(&inv.sample.values().map(num)));
            }
            _ => self.record("slope", json!({ "n": n, "r": r, "inversion": inv })),
        }
    }

    pub fn scan(&self, n: i64, table: &[SlopeSample]) {
        let (g_min, g_max) = g_range(table).unwrap_or((f64::NAN, f64::NAN));
        match self.format {
            Format::Json => self.json(
                "scan",
                json!({ "n": n, "g_min": g_min, "g_max": g_max, "samples": table }),
            ),
            Format::Csv | Format::Text => {
                let sep = if self.format == Format::Csv { "," } else { " " };
                println!("{}", CSV_HEADER.replace(',', sep));
                for row in table {
                    println!("{}", row.values().map(num).join(sep));
                }
            }
        }
    }

    pub fn certificate(&self, cert: &SurgeryCertificate) {
        self.record("certify", cert);
    }

    pub fn verify(&self, report: &Report) {
        match self.format {
            Format::Json => self.json("verify", report),
            Format::Csv => {
                println!("check,cases,failures,worst,threshold,passed");
                for c in &report.checks {
                    println!(
                        "{},{},{},{},{},{}",
                        c.check,
                        c.cases,
                        c.failures,
                        num(c.worst),
                        num(c.threshold),
                        c.passed
                    );
                }
            }
            Format::Text => {
                for c in &report.checks {
                    let tag = if c.passed { "PASS" } else { "FAIL" };
                    println!(
                        "{tag} {} cases={} failures={} worst={} threshold={}",
                        c.check,
                        c.cases,
                        c.failures,
                        num(c.worst),
                        num(c.threshold)
                    );
                }
                for m in &report.failures {
                    let s = m.s.map(num).unwrap_or_else(|| "-".into());
                    println!("failure {} n={} s={s} value={}", m.check, m.n, num(m.value));
                }
                let passed = report.checks.iter().filter(|c| c.passed).count();
                println!("{passed} of {} checks passed", report.checks.len());
            }
        }
    }
}
