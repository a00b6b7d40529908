//! Line-oriented text formats for bits, LLRs, reliability profiles and
//! index sets.
//!
//! Blank lines and lines starting with `#` are ignored by every parser.
//! Line numbers in parse errors are 1-based.

use std::fmt::Write;

use crate::code::{BitVector, IndexSet};
use crate::construction::{ReliabilityKind, ReliabilityProfile};
use crate::error::{Error, Result};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(what: &'static str, line: usize, reason: impl Into<String>) -> Error {
    Error::Parse {
        what,
        line,
        reason: reason.into(),
    }
}

/// `0`/`1` characters, no separator.
pub fn format_bits(bits: &[u8]) -> String {
    bits.iter().map(|&b| if b & 1 == 0 { '0' } else { '1' }).collect()
}

/// One bit vector per line.
pub fn parse_bit_lines(text: &str) -> Result<Vec<BitVector>> {
    content_lines(text)
        .map(|(n, l)| {
            l.chars()
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(parse_err("bits", n, format!("unexpected character `{c}`"))),
                })
                .collect()
        })
        .collect()
}

/// Exactly one bit vector of length `len`.
pub fn parse_bits(text: &str, len: usize) -> Result<BitVector> {
    let mut lines = parse_bit_lines(text)?;
    match lines.len() {
        0 if len == 0 => Ok(Vec::new()),
        1 => {
            let bits = lines.pop().unwrap_or_default();
            Error::check_len("bits", len, bits.len())?;
            Ok(bits)
        }
        k => Err(Error::invalid("bits", format!("expected one line of {len} bits, found {k} lines"))),
    }
}

/// One LLR per line, in Rust's shortest round-trip float form.
pub fn format_llrs(llrs: &[f64]) -> String {
    let mut s = String::with_capacity(llrs.len() * 20);
    for v in llrs {
        let _ = writeln!(s, "{v:?}");
    }
    s
}

/// One finite LLR per line.
pub fn parse_llrs(text: &str) -> Result<Vec<f64>> {
    content_lines(text)
        .map(|(n, l)| {
            let v: f64 = l
                .parse()
                .map_err(|_| parse_err("llr", n, format!("`{l}` is not a number")))?;
            if v.is_nan() {
                return Err(parse_err("llr", n, "NaN"));
            }
            Ok(v)
        })
        .collect()
}

/// `index value` lines.
pub fn format_profile(profile: &ReliabilityProfile) -> String {
    let mut s = String::new();
    for (i, v) in profile.values.iter().enumerate() {
        let _ = writeln!(s, "{i} {v:?}");
    }
    s
}

/// Parses `index value` lines; indices must be `0, 1, 2, …` in order.
pub fn parse_profile(text: &str, kind: ReliabilityKind) -> Result<ReliabilityProfile> {
    let mut values = Vec::new();
    for (n, l) in content_lines(text) {
        let mut it = l.split_whitespace();
        let (Some(i), Some(v), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err("profile", n, "expected `index value`"));
        };
        let i: usize = i
            .parse()
            .map_err(|_| parse_err("profile", n, format!("bad index `{i}`")))?;
        if i != values.len() {
            return Err(parse_err("profile", n, format!("expected index {}, found {i}", values.len())));
        }
        let v: f64 = v
            .parse()
            .map_err(|_| parse_err("profile", n, format!("bad value `{v}`")))?;
        if !v.is_finite() {
            return Err(parse_err("profile", n, "value is not finite"));
        }
        values.push(v);
    }
    Ok(ReliabilityProfile { kind, values })
}

/// One index per line, ascending.
pub fn format_index_set(set: &IndexSet) -> String {
    let mut s = String::new();
    for i in set.iter() {
        let _ = writeln!(s, "{i}");
    }
    s
}

/// One index per line, in any order, over `0..universe`.
pub fn parse_index_set(text: &str, universe: usize) -> Result<IndexSet> {
    let mut idx = Vec::new();
    let mut seen = vec![false; universe];
    for (n, l) in content_lines(text) {
        let i: usize = l
            .parse()
            .map_err(|_| parse_err("index set", n, format!("bad index `{l}`")))?;
        if i >= universe {
            return Err(parse_err("index set", n, format!("index {i} out of range 0..{universe}")));
        }
        if std::mem::replace(&mut seen[i], true) {
            return Err(parse_err("index set", n, format!("duplicate index {i}")));
        }
        idx.push(i);
    }
    IndexSet::from_unsorted(idx, universe)
}
