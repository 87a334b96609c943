//! Named, offset-indexed runs of exact terms and their b-file encoding.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::{BigCount, Error, Result};

/// Identifies a sequence family together with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SequenceId {
    /// Subsets of `{1..n}` that are alpha-Schreier with all gaps `>= beta`.
    SchreierZeckendorf { alpha: u32, beta: u32 },
    Fibonacci,
    /// Fibonacci with the partial-sum operator applied twice.
    H,
    /// `F(n, m) = F(n, m-1) + F(n, m-n)` with `0` followed by `n` ones.
    GenFib { n: u32 },
    /// One partial sum of [`SequenceId::GenFib`].
    GenK { n: u32 },
    /// Two partial sums of [`SequenceId::GenFib`].
    GenH { n: u32 },
    /// Odd-gap subsets of `{1..n}` that contain `n`.
    OddGapContain,
    /// All odd-gap subsets of `{1..n}`.
    OddGapTotal,
    /// Even-gap subsets of `{1..n}` that contain `n`.
    EvenGapContain,
    /// All even-gap subsets of `{1..n}`.
    EvenGapTotal,
    /// Odd-gap subsets of `{1..n}` with at least `k` elements.
    MinSizeOddGap { k: u32 },
    /// A sequence of external origin, e.g. read from a b-file.
    Custom(String),
}

impl SequenceId {
    /// Index of the first term the family defines.
    pub fn natural_offset(&self) -> i64 {
        match self {
            SequenceId::Fibonacci
            | SequenceId::H
            | SequenceId::GenFib { .. }
            | SequenceId::GenK { .. }
            | SequenceId::GenH { .. }
            | SequenceId::Custom(_) => 0,
            SequenceId::SchreierZeckendorf { .. }
            | SequenceId::OddGapContain
            | SequenceId::OddGapTotal
            | SequenceId::EvenGapContain
            | SequenceId::EvenGapTotal
            | SequenceId::MinSizeOddGap { .. } => 1,
        }
    }
}

impl fmt::Display for SequenceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SequenceId::SchreierZeckendorf { alpha, beta } => write!(f, "sz({alpha},{beta})"),
            SequenceId::Fibonacci => f.write_str("F"),
            SequenceId::H => f.write_str("H"),
            SequenceId::GenFib { n } => write!(f, "genfib({n})"),
            SequenceId::GenK { n } => write!(f, "genk({n})"),
            SequenceId::GenH { n } => write!(f, "genh({n})"),
            SequenceId::OddGapContain => f.write_str("oddgap-contain"),
            SequenceId::OddGapTotal => f.write_str("oddgap-total"),
            SequenceId::EvenGapContain => f.write_str("evengap-contain"),
            SequenceId::EvenGapTotal => f.write_str("evengap-total"),
            SequenceId::MinSizeOddGap { k } => write!(f, "minsize-oddgap({k})"),
            SequenceId::Custom(name) => f.write_str(name),
        }
    }
}

impl FromStr for SequenceId {
    type Err = Error;

    /// Parses the [`Display`](fmt::Display) form back.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("unrecognised sequence id {s:?}"));
        let (name, args) = match s.split_once('(') {
            Some((name, rest)) => {
                let inner = rest.strip_suffix(')').ok_or_else(bad)?;
                let args = inner
                    .split(',')
                    .map(|a| a.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                (name, args)
            }
            None => (s, Vec::new()),
        };
        Ok(match (name, args.as_slice()) {
            ("sz", &[alpha, beta]) => SequenceId::SchreierZeckendorf { alpha, beta },
            ("F", []) => SequenceId::Fibonacci,
            ("H", []) => SequenceId::H,
            ("genfib", &[n]) => SequenceId::GenFib { n },
            ("genk", &[n]) => SequenceId::GenK { n },
            ("genh", &[n]) => SequenceId::GenH { n },
            ("oddgap-contain", []) => SequenceId::OddGapContain,
            ("oddgap-total", []) => SequenceId::OddGapTotal,
            ("evengap-contain", []) => SequenceId::EvenGapContain,
            ("evengap-total", []) => SequenceId::EvenGapTotal,
            ("minsize-oddgap", &[k]) => SequenceId::MinSizeOddGap { k },
            _ => return Err(bad()),
        })
    }
}

/// `terms[i]` is the value at index `offset + i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceWindow {
    pub id: SequenceId,
    pub offset: i64,
    pub terms: Vec<BigCount>,
}

impl SequenceWindow {
    pub fn new(id: SequenceId, offset: i64, terms: Vec<BigCount>) -> Self {
        SequenceWindow { id, offset, terms }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Term at an absolute index.
    pub fn get(&self, index: i64) -> Option<&BigCount> {
        let i = index.checked_sub(self.offset)?;
        usize::try_from(i).ok().and_then(|i| self.terms.get(i))
    }

    /// Last index held, if any.
    pub fn last_index(&self) -> Option<i64> {
        (!self.terms.is_empty()).then(|| self.offset + self.terms.len() as i64 - 1)
    }

    /// `(index, term)` pairs in order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigCount)> + '_ {
        self.terms.iter().enumerate().map(move |(i, t)| (self.offset + i as i64, t))
    }

    /// Restricts to absolute indices `from..=to`, clamped to what is held.
    pub fn slice(&self, from: i64, to: i64) -> SequenceWindow {
        let start = from.max(self.offset);
        let terms = self
            .iter()
            .filter(|&(i, _)| i >= start && i <= to)
            .map(|(_, t)| t.clone())
            .collect();
        SequenceWindow::new(self.id.clone(), start, terms)
    }

    pub fn signed_terms(&self) -> Vec<BigInt> {
        self.terms.iter().cloned().map(BigInt::from).collect()
    }

    /// One `index value` line per term, newline-terminated, no header.
    pub fn to_bfile(&self) -> String {
        let mut out = String::new();
        for (i, t) in self.iter() {
            out.push_str(&i.to_string());
            out.push(' ');
            out.push_str(&t.to_str_radix(10));
            out.push('\n');
        }
        out
    }

    /// Parses b-file text. Blank lines and `#` comments are skipped; indices
    /// must be consecutive. An empty file yields an empty window at offset 0.
    pub fn from_bfile(id: SequenceId, text: &str) -> Result<SequenceWindow> {
        let mut offset = None;
        let mut terms = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |reason: &str| Error::BFile { line: line_no, reason: reason.into() };
            let mut fields = line.split_whitespace();
            let (Some(index), Some(value), None) = (fields.next(), fields.next(), fields.next())
            else {
                return Err(err("expected exactly two fields"));
            };
            let index: i64 = index.parse().map_err(|_| err("index is not an integer"))?;
            let value: BigCount = value
                .parse()
                .map_err(|_| err("value is not a nonnegative integer"))?;
            let expected = *offset.get_or_insert(index) + terms.len() as i64;
            if index != expected {
                return Err(err(&format!("expected index {expected}, found {index}")));
            }
            terms.push(value);
        }
        Ok(SequenceWindow::new(id, offset.unwrap_or(0), terms))
    }
}
