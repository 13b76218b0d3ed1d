//! Line-oriented text formats for tensors, support sets, orderings and word lists.
//!
//! `#` starts a comment; blank lines are ignored. Indices and values are 1-based.
//!
//! ```text
//! tensor k=3 p=2          gamma k=2         ordering k=2
//! shape 2 2 2             1 2               axis 1: 2 1
//! 1 1 1 1                 2 1               axis 2: 1 2
//! 2 2 2 1
//! ```

use std::collections::HashSet;

use thiserror::Error;

use crate::field::PrimeField;
use crate::order::ProductOrdering;
use crate::support::{Point, SupportSet};
use crate::tensor::{make_tensor, DenseTensor, MAX_DIM, MAX_ORDER};
use crate::trifference::{format_word, parse_word, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn err<T>(line: usize, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        line,
        message: message.into(),
    })
}

/// Non-empty lines with comments stripped, paired with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.split('#').next().unwrap_or("").trim();
        (!line.is_empty()).then_some((i + 1, line))
    })
}

fn parse_num<T: std::str::FromStr>(line: usize, tok: &str, what: &str) -> Result<T, ParseError> {
    tok.parse().or_else(|_| err(line, format!("bad {what} '{tok}'")))
}

/// Reads `key=value` from a header token.
fn header_value(line: usize, tok: Option<&str>, key: &str) -> Result<usize, ParseError> {
    let Some(tok) = tok else {
        return err(line, format!("missing {key}=..."));
    };
    match tok.split_once('=') {
        Some((k, v)) if k == key => parse_num(line, v, key),
        _ => err(line, format!("expected {key}=..., found '{tok}'")),
    }
}

fn header<'a>(
    lines: &mut impl Iterator<Item = (usize, &'a str)>,
    directive: &str,
) -> Result<(usize, Vec<&'a str>), ParseError> {
    let Some((no, line)) = lines.next() else {
        return err(0, format!("empty input, expected '{directive}' header"));
    };
    let toks: Vec<&str> = line.split_whitespace().collect();
    if toks[0] != directive {
        return err(no, format!("expected '{directive}', found '{}'", toks[0]));
    }
    Ok((no, toks))
}

pub fn parse_tensor(text: &str) -> Result<DenseTensor, ParseError> {
    let mut lines = content_lines(text);
    let (no, toks) = header(&mut lines, "tensor")?;
    if toks.len() != 3 {
        return err(no, "header must be 'tensor k=<k> p=<p>'");
    }
    let k = header_value(no, toks.get(1).copied(), "k")?;
    let p = header_value(no, toks.get(2).copied(), "p")?;
    if !(2..=MAX_ORDER).contains(&k) {
        return err(no, format!("order k={k} outside 2..={MAX_ORDER}"));
    }
    let field = PrimeField::new(p as u32).or_else(|e| err(no, e.to_string()))?;
    let Some((sno, sline)) = lines.next() else {
        return err(no, "missing 'shape' line");
    };
    let stoks: Vec<&str> = sline.split_whitespace().collect();
    if stoks[0] != "shape" {
        return err(sno, format!("expected 'shape', found '{}'", stoks[0]));
    }
    if stoks.len() != k + 1 {
        return err(sno, format!("shape needs {k} dimensions"));
    }
    let shape: Vec<usize> = stoks[1..]
        .iter()
        .map(|t| parse_num(sno, t, "dimension"))
        .collect::<Result<_, _>>()?;
    if let Some(d) = shape.iter().find(|&&d| d == 0 || d > MAX_DIM) {
        return err(sno, format!("dimension {d} outside 1..={MAX_DIM}"));
    }
    let mut seen = HashSet::new();
    let mut entries = Vec::new();
    for (no, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != k + 1 {
            return err(no, format!("entry needs {k} indices and a coefficient"));
        }
        let idx: Vec<usize> = toks[..k]
            .iter()
            .map(|t| parse_num(no, t, "index"))
            .collect::<Result<_, _>>()?;
        if idx.iter().zip(&shape).any(|(&i, &d)| i == 0 || i > d) {
            return err(no, format!("index {idx:?} outside shape {shape:?}"));
        }
        let c: u32 = parse_num(no, toks[k], "coefficient")?;
        if c >= field.modulus() {
            return err(no, format!("coefficient {c} not in [0, {p})"));
        }
        if !seen.insert(idx.clone()) {
            return err(no, format!("duplicate entry {idx:?}"));
        }
        entries.push((idx, c));
    }
    make_tensor(k, p as u32, &shape, &entries).or_else(|e| err(no, e.to_string()))
}

pub fn write_tensor(v: &DenseTensor) -> String {
    let mut out = format!("tensor k={} p={}\n", v.order(), v.modulus());
    let dims: Vec<String> = v.shape().iter().map(usize::to_string).collect();
    out += &format!("shape {}\n", dims.join(" "));
    for (idx, c) in v.entries() {
        let idx: Vec<String> = idx.iter().map(usize::to_string).collect();
        out += &format!("{} {c}\n", idx.join(" "));
    }
    out
}

pub fn parse_gamma(text: &str) -> Result<SupportSet, ParseError> {
    let mut lines = content_lines(text);
    let (no, toks) = header(&mut lines, "gamma")?;
    if toks.len() != 2 {
        return err(no, "header must be 'gamma k=<k>'");
    }
    let k = header_value(no, toks.get(1).copied(), "k")?;
    if k == 0 {
        return err(no, "k must be positive");
    }
    let mut pts: Vec<Point> = Vec::new();
    for (no, line) in lines {
        let p: Point = line
            .split_whitespace()
            .map(|t| parse_num(no, t, "coordinate"))
            .collect::<Result<_, _>>()?;
        if p.len() != k {
            return err(no, format!("tuple has {} coordinates, expected {k}", p.len()));
        }
        pts.push(p);
    }
    Ok(SupportSet::new(k, pts).expect("arity checked"))
}

pub fn write_gamma(g: &SupportSet) -> String {
    let mut out = format!("gamma k={}\n", g.arity());
    for p in g.iter() {
        let p: Vec<String> = p.iter().map(i64::to_string).collect();
        out += &p.join(" ");
        out.push('\n');
    }
    out
}

pub fn parse_ordering(text: &str) -> Result<ProductOrdering, ParseError> {
    let mut lines = content_lines(text);
    let (no, toks) = header(&mut lines, "ordering")?;
    if toks.len() != 2 {
        return err(no, "header must be 'ordering k=<k>'");
    }
    let k = header_value(no, toks.get(1).copied(), "k")?;
    let mut per_axis: Vec<Option<Vec<i64>>> = vec![None; k];
    let mut last = no;
    for (no, line) in lines {
        last = no;
        let Some((head, vals)) = line.split_once(':') else {
            return err(no, "expected 'axis <i>: <values>'");
        };
        let mut ht = head.split_whitespace();
        if ht.next() != Some("axis") {
            return err(no, format!("unknown directive '{head}'"));
        }
        let axis: usize = parse_num(no, ht.next().unwrap_or(""), "axis")?;
        if axis == 0 || axis > k || ht.next().is_some() {
            return err(no, format!("axis must be in 1..={k}"));
        }
        if per_axis[axis - 1].is_some() {
            return err(no, format!("axis {axis} given twice"));
        }
        let v: Vec<i64> = vals
            .split_whitespace()
            .map(|t| parse_num(no, t, "value"))
            .collect::<Result<_, _>>()?;
        per_axis[axis - 1] = Some(v);
    }
    let per_axis: Vec<Vec<i64>> = per_axis
        .into_iter()
        .enumerate()
        .map(|(i, v)| v.ok_or(()).or_else(|_| err(last, format!("axis {} missing", i + 1))))
        .collect::<Result<_, _>>()?;
    ProductOrdering::new(per_axis).or_else(|e| err(last, e.to_string()))
}

pub fn write_ordering(o: &ProductOrdering) -> String {
    let mut out = format!("ordering k={}\n", o.arity());
    for (i, vals) in o.per_axis().iter().enumerate() {
        let vals: Vec<String> = vals.iter().map(i64::to_string).collect();
        out += &format!("axis {}: {}\n", i + 1, vals.join(" "));
    }
    out
}

pub fn parse_words(text: &str) -> Result<Vec<Word>, ParseError> {
    let mut words: Vec<Word> = Vec::new();
    for (no, line) in content_lines(text) {
        let w = parse_word(line).or_else(|e| err(no, e.to_string()))?;
        if let Some(first) = words.first() {
            if first.len() != w.len() {
                return err(no, format!("word length {} differs from {}", w.len(), first.len()));
            }
        }
        words.push(w);
    }
    if words.is_empty() {
        return err(0, "no words");
    }
    Ok(words)
}

pub fn write_words(words: &[Word]) -> String {
    words.iter().map(|w| format_word(w) + "\n").collect()
}
