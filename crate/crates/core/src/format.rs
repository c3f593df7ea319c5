//! Group description files.
//!
//! ```text
//! format: permgroup v1
//! degree: 3
//! (1 2)
//! (1 2 3)
//! ```
//!
//! ```text
//! format: cayley v1
//! order: 2
//! 0 1
//! 1 0
//! ```
//!
//! Blank lines and lines starting with `#` are ignored. In a Cayley table
//! row `g`, column `h` holds `g*h`, and id 0 must be the identity.

use thiserror::Error;

use crate::group::{FiniteGroup, GroupError, TableError};
use crate::perm::Permutation;

pub const PERMGROUP_HEADER: &str = "format: permgroup v1";
pub const CAYLEY_HEADER: &str = "format: cayley v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    /// 1-based; 0 when the problem is the missing end of the file.
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

pub fn parse_group_file(text: &str, cap: usize) -> Result<FiniteGroup, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines
        .next()
        .ok_or_else(|| ParseError::new(0, "empty file; expected a format header"))?;
    match header {
        PERMGROUP_HEADER => parse_permgroup(lines, cap),
        CAYLEY_HEADER => parse_cayley(lines, cap),
        other => Err(ParseError::new(
            hline,
            format!("malformed header {other:?}; expected {PERMGROUP_HEADER:?} or {CAYLEY_HEADER:?}"),
        )),
    }
}

fn keyed_value<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    key: &str,
) -> Result<(usize, usize), ParseError> {
    let (line, text) = lines
        .next()
        .ok_or_else(|| ParseError::new(0, format!("missing `{key}:` line")))?;
    let value = text
        .strip_prefix(key)
        .and_then(|r| r.strip_prefix(':'))
        .ok_or_else(|| ParseError::new(line, format!("expected `{key}: <n>`")))?;
    let n = value
        .trim()
        .parse::<usize>()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| ParseError::new(line, format!("`{key}` must be a positive integer")))?;
    Ok((line, n))
}

fn parse_permgroup<'a>(
    mut lines: impl Iterator<Item = (usize, &'a str)>,
    cap: usize,
) -> Result<FiniteGroup, ParseError> {
    let (dline, degree) = keyed_value(&mut lines, "degree")?;
    let mut gens = Vec::new();
    for (line, text) in lines {
        let p = Permutation::parse(degree, text).map_err(|e| ParseError::new(line, e.to_string()))?;
        gens.push(p);
    }
    FiniteGroup::from_permutation_generators(degree, &gens, cap)
        .map_err(|e| ParseError::new(dline, e.to_string()))
}

fn parse_cayley<'a>(
    mut lines: impl Iterator<Item = (usize, &'a str)>,
    cap: usize,
) -> Result<FiniteGroup, ParseError> {
    let (oline, order) = keyed_value(&mut lines, "order")?;
    if order > cap {
        return Err(ParseError::new(
            oline,
            GroupError::TooLarge { cap }.to_string(),
        ));
    }
    let mut rows = Vec::with_capacity(order);
    let mut row_lines = Vec::with_capacity(order);
    for (line, text) in lines {
        if rows.len() == order {
            return Err(ParseError::new(line, format!("more than {order} table rows")));
        }
        let row = text
            .split_whitespace()
            .map(|t| t.parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| ParseError::new(line, "non-numeric table entry"))?;
        rows.push(row);
        row_lines.push(line);
    }
    if rows.len() != order {
        return Err(ParseError::new(
            0,
            format!("expected {order} table rows, found {}", rows.len()),
        ));
    }
    FiniteGroup::from_table(&rows, None).map_err(|e| {
        let line = match &e {
            GroupError::Table(t) => match *t {
                TableError::RowLength { row, .. } | TableError::OutOfRange { row, .. } => row_lines[row],
                TableError::Identity(x) | TableError::Inverse(x) => row_lines[x],
                TableError::Associativity { a, .. } => row_lines[a],
                TableError::Empty => oline,
            },
            _ => oline,
        };
        ParseError::new(line, e.to_string())
    })
}

/// Serializes any group as a `cayley v1` table.
pub fn to_cayley_text(g: &FiniteGroup) -> String {
    let mut out = String::new();
    out.push_str(CAYLEY_HEADER);
    out.push('\n');
    out.push_str(&format!("order: {}\n", g.order()));
    for a in g.elements() {
        let row: Vec<String> = g.row(a).iter().map(|x| x.to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Serializes a permutation group as `permgroup v1` using its generators.
pub fn to_permgroup_text(g: &FiniteGroup) -> Option<String> {
    let degree = g.degree()?;
    let mut out = format!("{PERMGROUP_HEADER}\ndegree: {degree}\n");
    for &x in g.generators() {
        out.push_str(&g.permutation(x)?.to_string());
        out.push('\n');
    }
    Some(out)
}
