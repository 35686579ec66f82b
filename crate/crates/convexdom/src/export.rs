//! Model serialization: CPLEX LP, fixed MPS and JSON.
//!
//! Output is byte-deterministic: variables in ascending vertex-id order and
//! rows in builder order.

use std::fmt::Write as _;
use std::str::FromStr;

use convexdom_core::{LinearModel, ModelError};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExportFormat {
    Lp,
    Mps,
    Json,
}

#[derive(Debug, Error)]
pub enum ExportError {
    #[error("unsupported model format `{0}` (expected lp, mps or json)")]
    UnsupportedFormat(String),
    #[error("malformed model JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("invalid model: {0}")]
    Invalid(#[from] ModelError),
}

impl FromStr for ExportFormat {
    type Err = ExportError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "lp" => Ok(ExportFormat::Lp),
            "mps" => Ok(ExportFormat::Mps),
            "json" => Ok(ExportFormat::Json),
            _ => Err(ExportError::UnsupportedFormat(s.to_string())),
        }
    }
}

pub fn export_model(m: &LinearModel, format: ExportFormat) -> String {
    match format {
        ExportFormat::Lp => to_lp(m),
        ExportFormat::Mps => to_mps(m),
        ExportFormat::Json => to_json(m),
    }
}

/// Terms per physical line; LP readers cap line length.
const TERMS_PER_LINE: usize = 10;

fn lp_terms<'a>(out: &mut String, terms: impl Iterator<Item = (i32, &'a str)>) {
    for (pos, (coef, name)) in terms.enumerate() {
        if pos > 0 && pos % TERMS_PER_LINE == 0 {
            out.push_str("\n   ");
        }
        let sign = if coef < 0 { '-' } else { '+' };
        let mag = coef.abs();
        match (pos, mag) {
            (0, 1) if coef > 0 => write!(out, " {name}"),
            (0, 1) => write!(out, " - {name}"),
            (0, _) if coef > 0 => write!(out, " {mag} {name}"),
            (_, 1) => write!(out, " {sign} {name}"),
            _ => write!(out, " {sign} {mag} {name}"),
        }
        .expect("writing to a String");
    }
}

pub fn to_lp(m: &LinearModel) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "\\ formulation {} graph {:016x}",
        m.formulation.as_str(),
        m.fingerprint
    );
    out.push_str("Minimize\n obj:");
    lp_terms(
        &mut out,
        m.objective
            .coefficients
            .iter()
            .zip(&m.vars)
            .map(|(&c, v)| (c, v.name.as_str())),
    );
    out.push_str("\nSubject To\n");
    for c in &m.constraints {
        let _ = write!(out, " {}:", c.name());
        lp_terms(
            &mut out,
            c.terms
                .iter()
                .map(|t| (i32::from(t.coef), m.vars[t.var as usize].name.as_str())),
        );
        let _ = writeln!(out, " >= {}", c.rhs);
    }
    out.push_str("Binary\n");
    for chunk in m.vars.chunks(TERMS_PER_LINE) {
        let names: Vec<&str> = chunk.iter().map(|v| v.name.as_str()).collect();
        let _ = writeln!(out, " {}", names.join(" "));
    }
    out.push_str("End\n");
    out
}

/// Fixed-format MPS. Fields sit at the standard columns (2, 5, 15, 25, 40,
/// 50); names longer than eight characters widen their field.
pub fn to_mps(m: &LinearModel) -> String {
    const OBJ: &str = "OBJ";
    let mut out = String::new();
    let _ = writeln!(
        out,
        "NAME          {}",
        m.formulation.as_str().to_ascii_uppercase()
    );
    out.push_str("ROWS\n");
    let _ = writeln!(out, " N  {OBJ}");
    let names: Vec<String> = m.constraints.iter().map(|c| c.name()).collect();
    for name in &names {
        let _ = writeln!(out, " G  {name}");
    }

    // column-major view of the constraint matrix
    let mut columns: Vec<Vec<(usize, i32)>> = vec![Vec::new(); m.num_vars()];
    for (row, c) in m.constraints.iter().enumerate() {
        for t in &c.terms {
            columns[t.var as usize].push((row, i32::from(t.coef)));
        }
    }
    out.push_str("COLUMNS\n");
    for ((var, entries), &obj) in m.vars.iter().zip(&columns).zip(&m.objective.coefficients) {
        let mut cells: Vec<(&str, i32)> = Vec::with_capacity(entries.len() + 1);
        if obj != 0 {
            cells.push((OBJ, obj));
        }
        cells.extend(
            entries
                .iter()
                .map(|&(row, coef)| (names[row].as_str(), coef)),
        );
        for pair in cells.chunks(2) {
            let _ = write!(
                out,
                "    {:<8}  {:<8}  {:>12}",
                var.name, pair[0].0, pair[0].1
            );
            if let Some(&(row, coef)) = pair.get(1) {
                let _ = write!(out, "   {:<8}  {:>12}", row, coef);
            }
            out.push('\n');
        }
    }
    out.push_str("RHS\n");
    for (name, c) in names.iter().zip(&m.constraints) {
        if c.rhs != 0 {
            let _ = writeln!(out, "    {:<8}  {:<8}  {:>12}", "RHS", name, c.rhs);
        }
    }
    out.push_str("BOUNDS\n");
    for var in &m.vars {
        let _ = writeln!(out, " BV {:<8}  {}", "BND", var.name);
    }
    out.push_str("ENDATA\n");
    out
}

pub fn to_json(m: &LinearModel) -> String {
    let mut s = serde_json::to_string_pretty(m).expect("model serializes");
    s.push('\n');
    s
}

/// Parses a model written by [`to_json`] and checks its invariants.
pub fn from_json(text: &str) -> Result<LinearModel, ExportError> {
    let m: LinearModel = serde_json::from_str(text)?;
    m.validate()?;
    Ok(m)
}
