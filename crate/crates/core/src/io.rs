//! Edge-list and Matrix Market readers.

use std::io::BufRead;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// Whitespace-separated `u v [ignored...]` lines.
    EdgeList,
    /// Matrix Market coordinate file: header, dimensions line, then pairs.
    MatrixMarket,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" | "txt" | "edges" => Ok(Format::EdgeList),
            "mtx" => Ok(Format::MatrixMarket),
            other => Err(Error::InvalidParams(format!("unknown format '{other}'"))),
        }
    }
}

impl Format {
    /// Guesses from the file extension; anything but `.mtx` is an edge list.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("mtx") => Format::MatrixMarket,
            _ => Format::EdgeList,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexBase {
    Zero,
    One,
}

/// Raw pairs as they appear in an input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pairs: Vec<(usize, usize)>,
    index_base: IndexBase,
    declared_nodes: Option<usize>,
}

impl EdgeList {
    /// Fails if a one-based list contains id 0.
    pub fn new(pairs: Vec<(usize, usize)>, index_base: IndexBase) -> Result<Self> {
        if index_base == IndexBase::One && pairs.iter().any(|&(u, v)| u == 0 || v == 0) {
            return Err(Error::InvalidParams(
                "node id 0 in a one-based edge list".into(),
            ));
        }
        Ok(EdgeList {
            pairs,
            index_base,
            declared_nodes: None,
        })
    }

    pub fn with_declared_nodes(mut self, n: usize) -> Self {
        self.declared_nodes = Some(n);
        self
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn index_base(&self) -> IndexBase {
        self.index_base
    }

    pub fn declared_nodes(&self) -> Option<usize> {
        self.declared_nodes
    }
}

fn is_skippable(line: &str) -> bool {
    let t = line.trim_start();
    t.is_empty() || t.starts_with('%') || t.starts_with('#')
}

fn parse_id(tok: &str, line: usize) -> Result<usize> {
    tok.parse::<usize>().map_err(|_| {
        Error::parse(
            line,
            format!("expected a nonnegative integer, found '{tok}'"),
        )
    })
}

fn parse_pair(text: &str, line: usize) -> Result<(usize, usize)> {
    let mut toks = text.split_whitespace();
    match (toks.next(), toks.next()) {
        (Some(a), Some(b)) => Ok((parse_id(a, line)?, parse_id(b, line)?)),
        _ => Err(Error::parse(line, "expected two node ids")),
    }
}

/// Reads all data pairs in file order.
///
/// Lines starting with `%` or `#` are comments. Matrix Market input is
/// always one-based. Edge lists are zero-based unless `base_override` says
/// otherwise; a one-based override is rejected if id 0 occurs.
pub fn parse_edge_list<R: BufRead>(
    input: R,
    format: Format,
    base_override: Option<IndexBase>,
) -> Result<EdgeList> {
    let mut pairs = Vec::new();
    let mut dims: Option<usize> = None;
    for (idx, line) in input.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        if is_skippable(&line) {
            continue;
        }
        if format == Format::MatrixMarket && dims.is_none() {
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(Error::parse(
                    lineno,
                    "expected 'rows cols entries' dimensions line",
                ));
            }
            let rows = parse_id(fields[0], lineno)?;
            let cols = parse_id(fields[1], lineno)?;
            parse_id(fields[2], lineno)?;
            dims = Some(rows.max(cols));
            continue;
        }
        let (u, v) = parse_pair(&line, lineno)?;
        if format == Format::MatrixMarket && (u == 0 || v == 0) {
            return Err(Error::parse(lineno, "Matrix Market ids are one-based"));
        }
        if let Some(n) = dims {
            if u > n || v > n {
                return Err(Error::parse(
                    lineno,
                    format!("id exceeds declared dimension {n}"),
                ));
            }
        }
        pairs.push((u, v));
    }
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    let base = match format {
        Format::MatrixMarket => IndexBase::One,
        Format::EdgeList => base_override.unwrap_or(IndexBase::Zero),
    };
    let list = EdgeList::new(pairs, base)?;
    Ok(match dims {
        Some(n) => list.with_declared_nodes(n),
        None => list,
    })
}
