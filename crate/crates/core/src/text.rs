//! Text grammar for phrases.
//!
//! ```text
//! AB|AB ; A=a B=b
//! 0|ABAB ; A=a B=b
//! ```
//!
//! Components are separated by `|`, letters are single ASCII uppercase
//! characters, an empty component is written `0`, and projections follow `;`
//! as space-separated `Letter=symbol` assignments.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::phrase::{canonical_form, EtalePhrase, Letter, Nanophrase};

fn parse_err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

/// Parses an étale phrase (no multiplicity check).
pub fn parse_etale(text: &str, alphabet: &Arc<Alphabet>) -> Result<EtalePhrase> {
    let (body, assignments, assign_at) = match text.find(';') {
        Some(i) => (&text[..i], &text[i + 1..], i + 1),
        None => (text, "", text.len()),
    };

    let mut words = Vec::new();
    let mut at = 0;
    for part in body.split('|') {
        let lead = part.len() - part.trim_start().len();
        let token = part.trim();
        let mut word = Vec::new();
        if token != "0" {
            for (i, ch) in token.char_indices() {
                if !ch.is_ascii_uppercase() {
                    return Err(parse_err(at + lead + i, format!("unexpected `{ch}` in component")));
                }
                word.push(Letter((ch as u8 - b'A') as u32));
            }
        }
        words.push(word);
        at += part.len() + 1;
    }

    let mut projections = BTreeMap::new();
    let mut offset = assign_at;
    for item in assignments.split(' ') {
        let here = offset;
        offset += item.len() + 1;
        let item = item.trim();
        if item.is_empty() {
            continue;
        }
        let (letter, symbol) = item
            .split_once('=')
            .ok_or_else(|| parse_err(here, format!("expected `Letter=symbol`, found `{item}`")))?;
        let mut chars = letter.chars();
        let ch = match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_uppercase() => c,
            _ => return Err(parse_err(here, format!("bad letter `{letter}`"))),
        };
        let sym = alphabet.symbol(symbol)?;
        if projections.insert(Letter((ch as u8 - b'A') as u32), sym).is_some() {
            return Err(parse_err(here, format!("letter {ch} assigned twice")));
        }
    }

    EtalePhrase::new(alphabet.clone(), projections, words)
}

/// Parses a nanophrase; fails unless every letter occurs exactly twice.
pub fn parse_phrase(text: &str, alphabet: &Arc<Alphabet>) -> Result<Nanophrase> {
    Nanophrase::try_from(parse_etale(text, alphabet)?)
}

/// Canonical rendering: letters renamed `A, B, …` by first occurrence.
pub fn render(phrase: &Nanophrase) -> String {
    let form = canonical_form(phrase);
    let alphabet = phrase.alphabet();
    let mut out = String::new();
    let mut at = 0;
    for (c, len) in form.component_lengths().enumerate() {
        if c > 0 {
            out.push('|');
        }
        if len == 0 {
            out.push('0');
        }
        for e in &form.entries[at..at + len] {
            let _ = write!(out, "{}", Letter(*e as u32));
        }
        at += len;
    }
    if form.letter_count() > 0 {
        out.push_str(" ;");
        for (i, s) in form.projections().iter().enumerate() {
            let _ = write!(out, " {}={}", Letter(i as u32), alphabet.name(*s));
        }
    }
    out
}

/// Renders an étale phrase with its own letter names.
pub fn render_etale(phrase: &EtalePhrase) -> String {
    let mut out = String::new();
    for (c, w) in phrase.words().iter().enumerate() {
        if c > 0 {
            out.push('|');
        }
        if w.is_empty() {
            out.push('0');
        }
        for l in w {
            let _ = write!(out, "{l}");
        }
    }
    if !phrase.projections().is_empty() {
        out.push_str(" ;");
        for (l, s) in phrase.projections() {
            let _ = write!(out, " {}={}", l, phrase.alphabet().name(*s));
        }
    }
    out
}
