//! Sequence file formats.
//!
//! Text: a header line `# n=<n> k=<k>` followed by one decimal symbol id per
//! line. Blank lines and further `#` lines are ignored. When `n` is even, an
//! id written as `_v` stands for `n/2 + v` (the underlined rendering of the
//! optimal `2p` sequences).
//!
//! JSON: `{"n": .., "k": .., "length": .., "symbols": [..]}`; `length` is
//! written for convenience and checked when present on input.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::sequence::{Sequence, Symbol};

#[derive(Debug, Serialize, Deserialize)]
struct SequenceJson {
    n: usize,
    k: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    length: Option<usize>,
    symbols: Vec<Symbol>,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn parse_header(line: &str) -> Option<(usize, usize)> {
    let rest = line.strip_prefix('#')?;
    let mut n = None;
    let mut k = None;
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("n", v)) => n = Some(v.parse().ok()?),
            Some(("k", v)) => k = Some(v.parse().ok()?),
            _ => {}
        }
    }
    Some((n?, k?))
}

pub fn parse_text(text: &str) -> Result<Sequence> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (lineno, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty input, expected '# n=<n> k=<k>'"))?;
    let (n, k) = parse_header(header).ok_or_else(|| {
        parse_err(
            lineno,
            format!("bad header '{header}', expected '# n=<n> k=<k>'"),
        )
    })?;

    let mut symbols = Vec::new();
    for (lineno, line) in lines {
        if line.starts_with('#') {
            continue;
        }
        let id = match line.strip_prefix('_') {
            Some(v) if n % 2 == 0 => v
                .parse::<usize>()
                .ok()
                .filter(|&v| v < n / 2)
                .map(|v| v + n / 2),
            Some(_) => {
                return Err(parse_err(
                    lineno,
                    "underlined ids need an even alphabet size",
                ))
            }
            None => line.parse::<usize>().ok(),
        };
        let id = id.ok_or_else(|| parse_err(lineno, format!("bad symbol '{line}'")))?;
        if id >= n {
            return Err(parse_err(
                lineno,
                format!("symbol {id} is outside the alphabet 0..{n}"),
            ));
        }
        symbols.push(id as Symbol);
    }
    Sequence::new(symbols, n, k)
}

/// Renders the text format; with `underline`, ids `>= n/2` are written as `_v`.
pub fn to_text(seq: &Sequence, underline: bool) -> String {
    let n = seq.alphabet_size();
    let half = n / 2;
    let underline = underline && n.is_multiple_of(2);
    let mut out = format!("# n={} k={}\n", n, seq.radius());
    for &s in seq.symbols() {
        if underline && s as usize >= half {
            out.push('_');
            out.push_str(&(s as usize - half).to_string());
        } else {
            out.push_str(&s.to_string());
        }
        out.push('\n');
    }
    out
}

pub fn parse_json(text: &str) -> Result<Sequence> {
    let raw: SequenceJson =
        serde_json::from_str(text).map_err(|e| parse_err(e.line(), e.to_string()))?;
    if raw.length.is_some_and(|l| l != raw.symbols.len()) {
        return Err(invalid(format!(
            "length field {} disagrees with {} symbols",
            raw.length.unwrap_or_default(),
            raw.symbols.len()
        )));
    }
    Sequence::new(raw.symbols, raw.n, raw.k)
}

pub fn to_json(seq: &Sequence) -> String {
    serde_json::to_string(&SequenceJson {
        n: seq.alphabet_size(),
        k: seq.radius(),
        length: Some(seq.len()),
        symbols: seq.symbols().to_vec(),
    })
    .expect("plain data serializes")
}

/// JSON when the first non-blank character is `{`, text otherwise.
pub fn parse_any(text: &str) -> Result<Sequence> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        parse_text(text)
    }
}
