//! Plain-text hypergraph files.
//!
//! ```text
//! # comment lines and blank lines are ignored
//! 4 4
//! 0 1
//! 1 2
//! 2 3
//! 3 0
//! ```
//!
//! The first data line is `n m`; each of the next `m` data lines is one edge
//! given by 0-based vertex indices. A stream holds several such blocks back
//! to back.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::hypergraph::{Hypergraph, HypergraphError, VertexId};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("line {line}: vertex {vertex} out of range for n = {n}")]
    IndexOutOfRange { line: usize, vertex: VertexId, n: usize },
    #[error(transparent)]
    Hypergraph(#[from] HypergraphError),
}

/// Something worth telling the user that did not stop parsing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParseWarning {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone)]
pub struct Parsed {
    pub hypergraph: Hypergraph,
    pub warnings: Vec<ParseWarning>,
}

/// Non-comment, non-blank lines with their 1-based line numbers.
fn data_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn numbers(line: usize, s: &str) -> Result<Vec<usize>, FormatError> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse().map_err(|_| FormatError::Parse {
                line,
                reason: format!("expected a non-negative integer, found {tok:?}"),
            })
        })
        .collect()
}

fn parse_block<'a, I>(lines: &mut std::iter::Peekable<I>) -> Result<Option<Parsed>, FormatError>
where
    I: Iterator<Item = (usize, &'a str)>,
{
    let Some((hline, header)) = lines.next() else {
        return Ok(None);
    };
    let nm = numbers(hline, header)?;
    let &[n, m] = nm.as_slice() else {
        return Err(FormatError::Parse {
            line: hline,
            reason: "header must be `n m`".into(),
        });
    };
    let mut edges = Vec::with_capacity(m);
    let mut first_line: Vec<usize> = Vec::with_capacity(m);
    for i in 0..m {
        let Some((line, text)) = lines.next() else {
            return Err(FormatError::Parse {
                line: hline,
                reason: format!("header announces {m} edges, found {i}"),
            });
        };
        let edge = numbers(line, text)?;
        if let Some(&v) = edge.iter().find(|&&v| v >= n) {
            return Err(FormatError::IndexOutOfRange { line, vertex: v, n });
        }
        edges.push(edge);
        first_line.push(line);
    }
    let hypergraph = Hypergraph::new(n, &edges).map_err(|e| match e {
        HypergraphError::EmptyEdge { edge } => FormatError::Parse {
            line: first_line[edge],
            reason: "empty edge".into(),
        },
        other => other.into(),
    })?;

    let mut warnings = Vec::new();
    let mut canon: Vec<Vec<usize>> = Vec::new();
    for (edge, line) in edges.iter().zip(&first_line) {
        let mut c = edge.clone();
        c.sort_unstable();
        c.dedup();
        if c.len() != edge.len() {
            warnings.push(ParseWarning {
                line: *line,
                message: "repeated vertex removed from edge".into(),
            });
        }
        if canon.contains(&c) {
            warnings.push(ParseWarning {
                line: *line,
                message: "duplicate edge removed".into(),
            });
        } else {
            canon.push(c);
        }
    }
    Ok(Some(Parsed {
        hypergraph,
        warnings,
    }))
}

/// Parses exactly one hypergraph.
pub fn parse_hypergraph(text: &str) -> Result<Parsed, FormatError> {
    let mut lines = data_lines(text).peekable();
    let parsed = parse_block(&mut lines)?.ok_or(FormatError::Parse {
        line: 1,
        reason: "missing `n m` header".into(),
    })?;
    if let Some((line, _)) = lines.next() {
        return Err(FormatError::Parse {
            line,
            reason: "unexpected data after the last edge".into(),
        });
    }
    Ok(parsed)
}

/// Parses a stream of concatenated hypergraphs.
pub fn parse_stream(text: &str) -> Result<Vec<Parsed>, FormatError> {
    let mut lines = data_lines(text).peekable();
    let mut out = Vec::new();
    while let Some(p) = parse_block(&mut lines)? {
        out.push(p);
    }
    Ok(out)
}

/// Canonical text form: header, then one sorted edge per line.
pub fn emit_hypergraph(hg: &Hypergraph) -> String {
    let mut s = format!("{} {}\n", hg.n(), hg.m());
    for e in hg.edges() {
        let mut first = true;
        for v in e {
            if !first {
                s.push(' ');
            }
            first = false;
            write!(s, "{v}").expect("writing to a String cannot fail");
        }
        s.push('\n');
    }
    s
}
