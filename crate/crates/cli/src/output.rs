use std::fmt::Write as _;
use std::path::Path;

use clap::ValueEnum;
use schwarz_core::exactcore::format_rational;
use schwarz_core::{Complex64, ExactScalar};
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Json,
    Csv,
}

/// Rounds to 12 significant digits so output is stable across platforms.
pub fn sig12(x: f64) -> f64 {
    if !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

pub fn float_str(x: f64) -> String {
    format!("{}", sig12(x))
}

pub fn exact(v: &ExactScalar) -> Value {
    json!({ "exact": format_rational(v) })
}

pub fn float(x: f64, tol: f64) -> Value {
    if x.is_finite() {
        json!({ "float": sig12(x), "tol": tol })
    } else {
        json!({ "float": x.to_string(), "tol": tol })
    }
}

pub fn complex(z: Complex64, tol: f64) -> Value {
    json!({ "re": float(z.re, tol), "im": float(z.im, tol) })
}

pub fn complex_str(z: Complex64) -> String {
    if z.im == 0.0 {
        float_str(z.re)
    } else {
        format!("{}{:+}i", float_str(z.re), sig12(z.im))
    }
}

/// One command's result, renderable in each supported format.
pub struct Rendered {
    pub human: String,
    pub json: Value,
    pub csv: Option<String>,
}

impl Rendered {
    pub fn render(&self, format: Format) -> Result<String, String> {
        Ok(match format {
            Format::Human => self.human.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("serializable");
                s.push('\n');
                s
            }
            Format::Csv => self
                .csv
                .clone()
                .ok_or_else(|| "csv output is not available for this command".to_string())?,
        })
    }
}

pub fn emit(text: &str, out: Option<&Path>) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

pub fn csv_rows(header: &str, rows: impl IntoIterator<Item = Vec<String>>) -> String {
    let mut s = String::new();
    writeln!(s, "{header}").unwrap();
    for row in rows {
        writeln!(s, "{}", row.join(",")).unwrap();
    }
    s
}
