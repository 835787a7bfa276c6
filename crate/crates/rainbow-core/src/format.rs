//! The coloring text format: line 1 is `n r`, line 2 is `n` space-separated
//! color ids. A structured (JSON) mirror carries `{n, r, colors}`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::group::Coloring;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: expected {expected}")]
    Malformed { line: usize, expected: &'static str },
    #[error("line {line}, field {field}: invalid integer {text:?}")]
    BadInteger { line: usize, field: usize, text: String },
    #[error("declared {declared} colors but the coloring uses {actual}")]
    PaletteMismatch { declared: u32, actual: u32 },
    #[error("color id {id} out of range [0, {r})")]
    ColorOutOfRange { id: u32, r: u32 },
    #[error("expected {n} color ids, found {got}")]
    WrongLength { n: usize, got: usize },
    #[error("invalid coloring: {0}")]
    Invalid(String),
}

/// Serde mirror of the text format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ColoringRecord {
    pub n: usize,
    pub r: u32,
    pub colors: Vec<u32>,
}

impl From<&Coloring> for ColoringRecord {
    fn from(c: &Coloring) -> Self {
        ColoringRecord { n: c.n(), r: c.palette(), colors: c.colors().to_vec() }
    }
}

fn parse_int<T: std::str::FromStr>(
    tok: &str,
    line: usize,
    field: usize,
) -> Result<T, ParseError> {
    tok.parse().map_err(|_| ParseError::BadInteger {
        line,
        field,
        text: tok.to_string(),
    })
}

pub fn parse_coloring(text: &str) -> Result<Coloring, ParseError> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or(ParseError::Malformed { line: 1, expected: "header line \"n r\"" })?;
    let mut fields = header.split_whitespace();
    let n: usize = parse_int(
        fields.next().ok_or(ParseError::Malformed { line: 1, expected: "group order n" })?,
        1,
        1,
    )?;
    let r: u32 = parse_int(
        fields.next().ok_or(ParseError::Malformed { line: 1, expected: "palette size r" })?,
        1,
        2,
    )?;
    if fields.next().is_some() {
        return Err(ParseError::Malformed { line: 1, expected: "exactly two header fields" });
    }
    let body = lines
        .next()
        .ok_or(ParseError::Malformed { line: 2, expected: "a line of color ids" })?;
    let mut colors = Vec::with_capacity(n);
    for (i, tok) in body.split_whitespace().enumerate() {
        let id: u32 = parse_int(tok, 2, i + 1)?;
        if id >= r {
            return Err(ParseError::ColorOutOfRange { id, r });
        }
        colors.push(id);
    }
    if colors.len() != n {
        return Err(ParseError::WrongLength { n, got: colors.len() });
    }
    let c = Coloring::from_exact(n, &colors).map_err(|e| ParseError::Invalid(e.to_string()))?;
    if c.palette() != r {
        return Err(ParseError::PaletteMismatch { declared: r, actual: c.palette() });
    }
    Ok(c)
}

pub fn write_coloring(c: &Coloring) -> String {
    c.to_string()
}
