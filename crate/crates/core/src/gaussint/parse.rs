use num_bigint::BigInt;

use super::GaussInt;
use crate::error::{Error, Result};

/// Parses `a`, `bi`, `a+bi`, `a-bi`, with `i`/`-i` shorthand for unit
/// imaginary parts. Whitespace is ignored and U+2212 is accepted as a minus.
pub(super) fn parse_gaussint(text: &str) -> Result<GaussInt> {
    // (original byte offset, char) pairs so errors point into the raw input
    let chars: Vec<(usize, char)> = text
        .char_indices()
        .filter(|(_, c)| !c.is_whitespace())
        .map(|(p, c)| (p, if c == '\u{2212}' { '-' } else { c }))
        .collect();
    let mut cur = Cursor { chars: &chars, idx: 0, len: text.len() };
    if chars.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty literal".into() });
    }

    let first_sign = cur.sign();
    let first_digits = cur.digits();
    let value = if cur.eat('i') {
        // pure imaginary
        GaussInt { re: BigInt::from(0), im: signed(first_sign, first_digits, true)? }
    } else {
        let re = match first_digits {
            Some(d) => signed(first_sign, Some(d), false)?,
            None => return Err(cur.error("expected digits or 'i'")),
        };
        if cur.at_end() {
            GaussInt { re, im: BigInt::from(0) }
        } else {
            let sign = match cur.peek() {
                Some('+') | Some('-') => cur.sign(),
                _ => return Err(cur.error("expected '+' or '-' before imaginary part")),
            };
            let digits = cur.digits();
            if !cur.eat('i') {
                return Err(cur.error("expected 'i'"));
            }
            GaussInt { re, im: signed(sign, digits, true)? }
        }
    };
    if !cur.at_end() {
        return Err(cur.error("trailing characters"));
    }
    Ok(value)
}

struct Cursor<'a> {
    chars: &'a [(usize, char)],
    idx: usize,
    len: usize,
}

impl Cursor<'_> {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.idx).map(|&(_, c)| c)
    }

    fn at_end(&self) -> bool {
        self.idx >= self.chars.len()
    }

    fn pos(&self) -> usize {
        self.chars.get(self.idx).map(|&(p, _)| p).unwrap_or(self.len)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    /// Consumes an optional sign; `true` means negative.
    fn sign(&mut self) -> bool {
        if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.idx;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.idx += 1;
        }
        (self.idx > start).then(|| self.chars[start..self.idx].iter().map(|&(_, c)| c).collect())
    }

    fn error(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos(), msg: msg.into() }
    }
}

fn signed(negative: bool, digits: Option<String>, unit_default: bool) -> Result<BigInt> {
    let magnitude = match digits {
        Some(d) => d.parse::<BigInt>().map_err(|e| Error::Parse { pos: 0, msg: e.to_string() })?,
        None if unit_default => BigInt::from(1),
        None => return Err(Error::Parse { pos: 0, msg: "missing digits".into() }),
    };
    Ok(if negative { -magnitude } else { magnitude })
}
