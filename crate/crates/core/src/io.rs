//! Matrix file formats.
//!
//! * CSV: one line per row, comma-separated decimal or scientific entries,
//!   no header. Blank lines are ignored.
//! * JSON: `{"n": <int>, "P": [[...], ...]}`.
//!
//! Ragged rows are rejected by both parsers.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::chain::{validate_matrix, StochasticMatrix};
use crate::error::{ChainError, Result};

#[derive(Debug, Serialize, Deserialize)]
struct MatrixDoc {
    n: usize,
    #[serde(rename = "P")]
    p: Vec<Vec<f64>>,
}

fn parse_err(msg: impl Into<String>) -> ChainError {
    ChainError::Parse(msg.into())
}

pub fn parse_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let row = line
            .split(',')
            .map(|cell| {
                let cell = cell.trim();
                cell.parse::<f64>().map_err(|_| {
                    parse_err(format!("line {}: cannot parse {cell:?} as a number", lineno + 1))
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        if let Some(first) = rows.first() {
            if first.len() != row.len() {
                return Err(parse_err(format!(
                    "line {}: ragged row with {} entries, expected {}",
                    lineno + 1,
                    row.len(),
                    first.len()
                )));
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(parse_err("no rows found"));
    }
    Ok(rows)
}

pub fn parse_json(text: &str) -> Result<Vec<Vec<f64>>> {
    let doc: MatrixDoc = serde_json::from_str(text).map_err(|e| parse_err(e.to_string()))?;
    if doc.p.len() != doc.n {
        return Err(parse_err(format!(
            "declared n = {} but P has {} rows",
            doc.n,
            doc.p.len()
        )));
    }
    if let Some((i, r)) = doc.p.iter().enumerate().find(|(_, r)| r.len() != doc.n) {
        return Err(parse_err(format!(
            "ragged row {i} with {} entries, expected {}",
            r.len(),
            doc.n
        )));
    }
    Ok(doc.p)
}

/// Parses JSON when the first non-blank character is `{`, CSV otherwise.
pub fn parse_matrix(text: &str) -> Result<Vec<Vec<f64>>> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_csv(text)
    }
}

pub fn read_matrix(path: impl AsRef<Path>, row_tol: f64) -> Result<StochasticMatrix> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| parse_err(format!("{}: {e}", path.display())))?;
    validate_matrix(&parse_matrix(&text)?, row_tol)
}

/// CSV text; entries use the shortest representation that parses back
/// to the same `f64`.
pub fn to_csv(p: &StochasticMatrix) -> String {
    let mut out = String::new();
    for row in p.rows() {
        let cells: Vec<String> = row.iter().map(|x| format!("{x:?}")).collect();
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}

pub fn to_json(p: &StochasticMatrix) -> String {
    let doc = MatrixDoc {
        n: p.n(),
        p: p.to_rows(),
    };
    serde_json::to_string(&doc).expect("matrix of finite floats serializes")
}
