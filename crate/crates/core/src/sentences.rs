//! Canonical sentence form of the general disentangled state and its
//! description-length probe.
//!
//! Grammar (ASCII, exact):
//!
//! ```text
//! sentence = term (" + " term)*
//! term     = "p[" index "]*" factor ("x" factor)*
//! factor   = "r(" party ")"                  singleton block
//!          | "F(" party ("," party)+ ")"     block of size >= 2
//! ```
//!
//! `index` is the 1-based position of the term in lexicographic RGS order,
//! blocks appear in order of their smallest party, numbers are decimal
//! without leading zeros. The parser accepts only canonical text, so
//! serialization and parsing are mutually inverse.

use std::collections::HashMap;
use std::io::{self, Write};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{DisentangledForm, PartitionTerm};

/// A serialized disentangled form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SentenceText {
    pub n: usize,
    pub text: String,
    pub term_count: usize,
}

impl SentenceText {
    pub fn as_bytes(&self) -> &[u8] {
        self.text.as_bytes()
    }
}

/// Writes one term with its 1-based weight index.
pub fn write_term<W: Write>(out: &mut W, index: usize, term: &PartitionTerm) -> io::Result<()> {
    write!(out, "p[{index}]*")?;
    for (b, block) in term.blocks().iter().enumerate() {
        if b > 0 {
            out.write_all(b"x")?;
        }
        if let [p] = block.as_slice() {
            write!(out, "r({p})")?;
        } else {
            out.write_all(b"F(")?;
            for (i, p) in block.iter().enumerate() {
                if i > 0 {
                    out.write_all(b",")?;
                }
                write!(out, "{p}")?;
            }
            out.write_all(b")")?;
        }
    }
    Ok(())
}

/// Streams the sentence for a term sequence; returns the number of terms.
pub fn write_sentence<W, I>(out: &mut W, terms: I) -> io::Result<usize>
where
    W: Write,
    I: IntoIterator<Item = PartitionTerm>,
{
    let mut count = 0;
    for term in terms {
        if count > 0 {
            out.write_all(b" + ")?;
        }
        count += 1;
        write_term(out, count, &term)?;
    }
    Ok(count)
}

pub fn serialize_form(form: &DisentangledForm) -> SentenceText {
    let mut buf = Vec::new();
    let term_count = write_sentence(&mut buf, form.terms().iter().cloned())
        .expect("writing to a Vec cannot fail");
    SentenceText {
        n: form.n(),
        text: String::from_utf8(buf).expect("sentence grammar is ASCII"),
        term_count,
    }
}

struct RawTerm {
    offset: usize,
    index: usize,
    factors: Vec<RawFactor>,
}

struct RawFactor {
    offset: usize,
    singleton: bool,
    parties: Vec<usize>,
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax {
            offset: self.pos,
            message: message.into(),
        })
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, lit: &[u8]) -> bool {
        if self.bytes[self.pos..].starts_with(lit) {
            self.pos += lit.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, lit: &[u8]) -> Result<()> {
        if self.eat(lit) {
            Ok(())
        } else {
            self.error(format!("expected {:?}", String::from_utf8_lossy(lit)))
        }
    }

    fn number(&mut self) -> Result<usize> {
        let start = self.pos;
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        let digits = &self.bytes[start..self.pos];
        if digits.is_empty() {
            self.pos = start;
            return self.error("expected a decimal number");
        }
        if digits.len() > 1 && digits[0] == b'0' {
            self.pos = start;
            return self.error("leading zero in number");
        }
        // ASCII digits are valid UTF-8.
        std::str::from_utf8(digits)
            .unwrap()
            .parse()
            .or_else(|_| {
                self.pos = start;
                self.error("number out of range")
            })
    }

    fn factor(&mut self) -> Result<RawFactor> {
        let offset = self.pos;
        if self.eat(b"r(") {
            let p = self.number()?;
            self.expect(b")")?;
            Ok(RawFactor {
                offset,
                singleton: true,
                parties: vec![p],
            })
        } else if self.eat(b"F(") {
            let mut parties = vec![self.number()?];
            while self.eat(b",") {
                parties.push(self.number()?);
            }
            self.expect(b")")?;
            Ok(RawFactor {
                offset,
                singleton: false,
                parties,
            })
        } else {
            self.error("expected factor \"r(\" or \"F(\"")
        }
    }

    fn term(&mut self) -> Result<RawTerm> {
        let offset = self.pos;
        self.expect(b"p[")?;
        let index = self.number()?;
        self.expect(b"]*")?;
        let mut factors = vec![self.factor()?];
        while self.eat(b"x") {
            factors.push(self.factor()?);
        }
        Ok(RawTerm {
            offset,
            index,
            factors,
        })
    }
}

fn semantic<T>(offset: usize, what: &str, detail: impl std::fmt::Display) -> Result<T> {
    Err(Error::Semantic(format!("{what} at byte {offset}: {detail}")))
}

/// Parses canonical sentence text back into the disentangled form.
///
/// One trailing newline is tolerated, matching the sentence file format.
pub fn parse_sentence(text: &[u8]) -> Result<DisentangledForm> {
    let text = text.strip_suffix(b"\n").unwrap_or(text);
    let mut cur = Cursor {
        bytes: text,
        pos: 0,
    };
    let mut raw = vec![cur.term()?];
    while cur.pos < text.len() {
        cur.expect(b" + ")?;
        raw.push(cur.term()?);
    }

    let n = 1 + raw
        .iter()
        .flat_map(|t| t.factors.iter().flat_map(|f| f.parties.iter()))
        .copied()
        .max()
        .expect("every term has a factor");
    if n > u8::MAX as usize - 1 {
        return Err(Error::Capacity(format!("{n} parties")));
    }

    let mut terms: Vec<PartitionTerm> = Vec::with_capacity(raw.len());
    for (pos, t) in raw.iter().enumerate() {
        for f in &t.factors {
            if f.parties.len() == n {
                return semantic(f.offset, "full-block term", "factor covers every party");
            }
            if !f.singleton && f.parties.len() < 2 {
                return semantic(f.offset, "non-canonical factor", "singleton block written with F");
            }
            if f.parties.windows(2).any(|w| w[0] >= w[1]) {
                return semantic(f.offset, "non-canonical factor", "parties not strictly ascending");
            }
        }
        if t.factors.windows(2).any(|w| w[0].parties[0] >= w[1].parties[0]) {
            return semantic(t.offset, "non-canonical factor order", "blocks not ordered by smallest party");
        }
        let blocks: Vec<Vec<usize>> = t.factors.iter().map(|f| f.parties.clone()).collect();
        let term = PartitionTerm::from_blocks(n, &blocks)
            .or_else(|e| semantic(t.offset, "invalid term", e))?;
        if let Some(prev) = terms.last() {
            if *prev == term {
                return semantic(t.offset, "duplicate term", &term);
            }
            if *prev > term {
                return semantic(t.offset, "non-canonical order", &term);
            }
        }
        if t.index != pos + 1 {
            return semantic(
                t.offset,
                "non-canonical order",
                format!("weight index {} at position {}", t.index, pos + 1),
            );
        }
        terms.push(term);
    }

    DisentangledForm::from_terms(n, terms)
        .or_else(|e| semantic(0, "incomplete form", e))
}

/// One LZ78 token: the dictionary index of the longest known prefix and the
/// byte extending it, or `None` for the end marker closing a final phrase
/// that is already in the dictionary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Lz78Token {
    pub prefix: usize,
    pub next: Option<u8>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lz78Encoding {
    pub tokens: Vec<Lz78Token>,
    pub phrase_count: usize,
    pub coded_bits: u64,
}

/// Bits for the token at 1-based position `k`: `ceil(log2 k)` for the prefix
/// index (which ranges over `0..k`) plus one byte for the symbol slot.
pub fn token_bits(k: usize) -> u64 {
    let index_bits = if k >= 2 {
        (usize::BITS - (k - 1).leading_zeros()) as u64
    } else {
        0
    };
    index_bits + 8
}

/// Incremental LZ78 parser. The dictionary starts empty (index 0 is the empty
/// phrase) and grows by one phrase per emitted byte token.
#[derive(Debug, Default)]
pub struct Lz78Parser {
    dict: HashMap<(u32, u8), u32>,
    current: u32,
    phrases: usize,
    bits: u64,
}

impl Lz78Parser {
    pub fn new() -> Self {
        Self::default()
    }

    fn emit(&mut self) -> usize {
        self.phrases += 1;
        self.bits += token_bits(self.phrases);
        self.phrases
    }

    /// Feeds one byte; returns a token when a phrase completes.
    pub fn push(&mut self, byte: u8) -> Option<Lz78Token> {
        if let Some(&next) = self.dict.get(&(self.current, byte)) {
            self.current = next;
            return None;
        }
        let prefix = self.current as usize;
        let k = self.emit();
        self.dict.insert((self.current, byte), k as u32);
        self.current = 0;
        Some(Lz78Token {
            prefix,
            next: Some(byte),
        })
    }

    /// Flushes a pending partial phrase as an end-marker token.
    pub fn finish(&mut self) -> Option<Lz78Token> {
        if self.current == 0 {
            return None;
        }
        let prefix = self.current as usize;
        self.emit();
        self.current = 0;
        Some(Lz78Token { prefix, next: None })
    }

    pub fn phrase_count(&self) -> usize {
        self.phrases
    }

    pub fn coded_bits(&self) -> u64 {
        self.bits
    }
}

pub fn lz78_encode(data: &[u8]) -> Lz78Encoding {
    let mut parser = Lz78Parser::new();
    let mut tokens: Vec<Lz78Token> = data.iter().filter_map(|&b| parser.push(b)).collect();
    tokens.extend(parser.finish());
    Lz78Encoding {
        tokens,
        phrase_count: parser.phrase_count(),
        coded_bits: parser.coded_bits(),
    }
}

pub fn lz78_decode(enc: &Lz78Encoding) -> Result<Vec<u8>> {
    // Phrase k is stored as (parent, byte, length); phrase 0 is empty.
    let mut phrases: Vec<(usize, u8, usize)> = vec![(0, 0, 0)];
    let mut out = Vec::new();
    let last = enc.tokens.len().saturating_sub(1);
    for (i, tok) in enc.tokens.iter().enumerate() {
        let k = i + 1;
        if tok.prefix >= k {
            return Err(Error::Format(format!(
                "token {k} references phrase {} before it exists",
                tok.prefix
            )));
        }
        let start = out.len();
        let len = phrases[tok.prefix].2;
        out.resize(start + len, 0);
        let mut at = tok.prefix;
        for slot in out[start..].iter_mut().rev() {
            let (parent, byte, _) = phrases[at];
            *slot = byte;
            at = parent;
        }
        match tok.next {
            Some(b) => {
                out.push(b);
                phrases.push((tok.prefix, b, len + 1));
            }
            None if i == last && tok.prefix != 0 => {}
            None => {
                return Err(Error::Format(format!(
                    "misplaced end marker at token {k}"
                )))
            }
        }
    }
    Ok(out)
}

/// Size and compressibility figures for a sentence.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SentenceMetrics {
    pub raw_bytes: usize,
    pub term_count: usize,
    pub phrase_count: usize,
    pub coded_bits: u64,
    pub ratio: f64,
}

impl SentenceMetrics {
    fn new(raw_bytes: usize, term_count: usize, phrase_count: usize, coded_bits: u64) -> Self {
        let ratio = if raw_bytes == 0 {
            0.0
        } else {
            coded_bits as f64 / (8.0 * raw_bytes as f64)
        };
        Self {
            raw_bytes,
            term_count,
            phrase_count,
            coded_bits,
            ratio,
        }
    }
}

/// Validates `text` as a sentence and measures it. Every byte of `text`
/// counts, including a trailing newline if present.
pub fn sentence_metrics(text: &[u8]) -> Result<SentenceMetrics> {
    let form = parse_sentence(text)?;
    let enc = lz78_encode(text);
    Ok(SentenceMetrics::new(
        text.len(),
        form.len(),
        enc.phrase_count,
        enc.coded_bits,
    ))
}

/// `Write` adapter that forwards bytes and measures them on the fly, for
/// sentences too large to hold in memory.
pub struct MetricsWriter<W> {
    inner: W,
    parser: Lz78Parser,
    bytes: usize,
}

impl<W: Write> MetricsWriter<W> {
    pub fn new(inner: W) -> Self {
        Self {
            inner,
            parser: Lz78Parser::new(),
            bytes: 0,
        }
    }

    /// Closes the LZ78 parse. `term_count` is supplied by the caller, who
    /// generated the text.
    pub fn finish(mut self, term_count: usize) -> io::Result<(W, SentenceMetrics)> {
        self.inner.flush()?;
        self.parser.finish();
        let metrics = SentenceMetrics::new(
            self.bytes,
            term_count,
            self.parser.phrase_count(),
            self.parser.coded_bits(),
        );
        Ok((self.inner, metrics))
    }
}

impl<W: Write> Write for MetricsWriter<W> {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        let written = self.inner.write(buf)?;
        for &b in &buf[..written] {
            self.parser.push(b);
        }
        self.bytes += written;
        Ok(written)
    }

    fn flush(&mut self) -> io::Result<()> {
        self.inner.flush()
    }
}
