//! Étale phrases, nanophrases, Gauss validity and canonical forms.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, Symbol};
use crate::error::{Error, Result};
use crate::flat::Flat;

/// An opaque letter id. Ids below 26 print as `A`..`Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Letter(pub u32);

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 < 26 {
            write!(f, "{}", (b'A' + self.0 as u8) as char)
        } else {
            write!(f, "L{}", self.0)
        }
    }
}

/// A sequence of words over an `α`-alphabet; letters may occur any number of times.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EtalePhrase {
    alphabet: Arc<Alphabet>,
    projections: BTreeMap<Letter, Symbol>,
    words: Vec<Vec<Letter>>,
}

impl EtalePhrase {
    pub fn new(
        alphabet: Arc<Alphabet>,
        projections: BTreeMap<Letter, Symbol>,
        words: Vec<Vec<Letter>>,
    ) -> Result<Self> {
        if let Some((_, s)) = projections.iter().find(|(_, s)| !alphabet.contains(**s)) {
            return Err(Error::UnknownSymbol(format!("#{}", s.0)));
        }
        if let Some(l) = words.iter().flatten().find(|l| !projections.contains_key(l)) {
            return Err(Error::MissingProjection(*l));
        }
        Ok(EtalePhrase {
            alphabet,
            projections,
            words,
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn words(&self) -> &[Vec<Letter>] {
        &self.words
    }

    pub fn projections(&self) -> &BTreeMap<Letter, Symbol> {
        &self.projections
    }

    pub fn projection(&self, letter: Letter) -> Symbol {
        self.projections[&letter]
    }

    /// Number of components `k`.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn multiplicity(&self, letter: Letter) -> usize {
        self.words.iter().flatten().filter(|l| **l == letter).count()
    }

    pub fn entry_count(&self) -> usize {
        self.words.iter().map(Vec::len).sum()
    }
}

/// Outcome of [`validate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GaussVerdict {
    Valid,
    NotGauss { letter: Letter, count: usize },
}

/// Checks that every declared letter occurs exactly twice in the concatenation.
pub fn validate(phrase: &EtalePhrase) -> GaussVerdict {
    let mut counts: BTreeMap<Letter, usize> = phrase.projections.keys().map(|l| (*l, 0)).collect();
    for l in phrase.words.iter().flatten() {
        *counts.entry(*l).or_default() += 1;
    }
    match counts.into_iter().find(|(_, c)| *c != 2) {
        None => GaussVerdict::Valid,
        Some((letter, count)) => GaussVerdict::NotGauss { letter, count },
    }
}

/// A phrase whose concatenation is a Gauss word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Nanophrase {
    alphabet: Arc<Alphabet>,
    projections: BTreeMap<Letter, Symbol>,
    words: Vec<Vec<Letter>>,
}

impl Nanophrase {
    pub fn new(
        alphabet: Arc<Alphabet>,
        projections: BTreeMap<Letter, Symbol>,
        words: Vec<Vec<Letter>>,
    ) -> Result<Self> {
        Nanophrase::try_from(EtalePhrase::new(alphabet, projections, words)?)
    }

    /// `(∅|…|∅)` with `k` components.
    pub fn empty(alphabet: Arc<Alphabet>, k: usize) -> Self {
        Nanophrase {
            alphabet,
            projections: BTreeMap::new(),
            words: vec![Vec::new(); k],
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn words(&self) -> &[Vec<Letter>] {
        &self.words
    }

    pub fn projections(&self) -> &BTreeMap<Letter, Symbol> {
        &self.projections
    }

    pub fn projection(&self, letter: Letter) -> Symbol {
        self.projections[&letter]
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        self.projections.keys().copied()
    }

    /// Number of components `k`.
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn letter_count(&self) -> usize {
        self.projections.len()
    }

    pub fn entry_count(&self) -> usize {
        2 * self.projections.len()
    }

    pub fn has_empty_component(&self) -> bool {
        self.words.iter().any(Vec::is_empty)
    }

    pub fn as_etale(&self) -> EtalePhrase {
        EtalePhrase {
            alphabet: self.alphabet.clone(),
            projections: self.projections.clone(),
            words: self.words.clone(),
        }
    }

    /// Applies a letter bijection; `map` must be injective and cover every letter.
    pub fn relabel(&self, map: &BTreeMap<Letter, Letter>) -> Result<Nanophrase> {
        let mut projections = BTreeMap::new();
        for (l, s) in &self.projections {
            let to = *map.get(l).ok_or(Error::MissingProjection(*l))?;
            if projections.insert(to, *s).is_some() {
                return Err(Error::NotGauss { letter: to, count: 4 });
            }
        }
        let words = self.words.iter().map(|w| w.iter().map(|l| map[l]).collect()).collect();
        Nanophrase::new(self.alphabet.clone(), projections, words)
    }

    pub(crate) fn to_flat(&self) -> (Flat, Vec<Letter>) {
        let order: Vec<Letter> = self.projections.keys().copied().collect();
        let index: BTreeMap<Letter, u16> = order.iter().enumerate().map(|(i, l)| (*l, i as u16)).collect();
        let flat = Flat {
            entries: self.words.iter().flatten().map(|l| index[l]).collect(),
            lens: self.words.iter().map(|w| w.len() as u16).collect(),
            proj: order.iter().map(|l| self.projections[l]).collect(),
        };
        (flat, order)
    }

    /// Rebuilds a phrase from `flat`, naming index `i` by `names[i]` and any
    /// index past `names` by fresh ids above the largest existing one.
    pub(crate) fn from_flat(alphabet: Arc<Alphabet>, flat: &Flat, names: &[Letter]) -> Nanophrase {
        let next = names.iter().map(|l| l.0 + 1).max().unwrap_or(0);
        let name = |i: u16| -> Letter {
            let i = i as usize;
            if i < names.len() {
                names[i]
            } else {
                Letter(next + (i - names.len()) as u32)
            }
        };
        let mut projections = BTreeMap::new();
        for &e in &flat.entries {
            projections.insert(name(e), flat.proj[e as usize]);
        }
        let mut words = Vec::with_capacity(flat.lens.len());
        let mut at = 0;
        for &len in &flat.lens {
            let len = len as usize;
            words.push(flat.entries[at..at + len].iter().map(|e| name(*e)).collect());
            at += len;
        }
        Nanophrase {
            alphabet,
            projections,
            words,
        }
    }

    pub fn from_canonical(alphabet: Arc<Alphabet>, form: &CanonicalForm) -> Nanophrase {
        Nanophrase::from_flat(alphabet, &form.to_flat(), &[])
    }
}

impl TryFrom<EtalePhrase> for Nanophrase {
    type Error = Error;

    fn try_from(p: EtalePhrase) -> Result<Self> {
        match validate(&p) {
            GaussVerdict::Valid => Ok(Nanophrase {
                alphabet: p.alphabet,
                projections: p.projections,
                words: p.words,
            }),
            GaussVerdict::NotGauss { letter, count } => Err(Error::NotGauss { letter, count }),
        }
    }
}

impl fmt::Display for Nanophrase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::text::render(self))
    }
}

/// One token of a canonical shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeToken {
    /// 1-based letter index in order of first occurrence.
    Letter(usize),
    Separator,
}

/// Isomorphism-class key: letters renumbered by first occurrence in the
/// concatenation, component layout kept, projections listed by new index.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm {
    pub(crate) entries: Vec<u16>,
    pub(crate) lens: Vec<u16>,
    pub(crate) projections: Vec<Symbol>,
}

impl CanonicalForm {
    pub fn shape(&self) -> Vec<ShapeToken> {
        let mut out = Vec::with_capacity(self.entries.len() + self.lens.len());
        let mut at = 0;
        for (c, &len) in self.lens.iter().enumerate() {
            if c > 0 {
                out.push(ShapeToken::Separator);
            }
            for e in &self.entries[at..at + len as usize] {
                out.push(ShapeToken::Letter(*e as usize + 1));
            }
            at += len as usize;
        }
        out
    }

    pub fn projections(&self) -> &[Symbol] {
        &self.projections
    }

    pub fn letter_count(&self) -> usize {
        self.projections.len()
    }

    pub fn component_count(&self) -> usize {
        self.lens.len()
    }

    pub fn component_lengths(&self) -> impl Iterator<Item = usize> + '_ {
        self.lens.iter().map(|l| *l as usize)
    }

    pub(crate) fn to_flat(&self) -> Flat {
        Flat {
            entries: self.entries.clone(),
            lens: self.lens.clone(),
            proj: self.projections.clone(),
        }
    }
}

pub fn canonical_form(phrase: &Nanophrase) -> CanonicalForm {
    phrase.to_flat().0.canonical()
}

pub fn is_isomorphic(p1: &Nanophrase, p2: &Nanophrase) -> Result<bool> {
    if p1.alphabet != p2.alphabet {
        return Err(Error::AlphabetMismatch);
    }
    Ok(canonical_form(p1) == canonical_form(p2))
}

/// Joins components `l` and `l+1` (1-based), giving a phrase of length `k-1`.
pub fn concat_components(phrase: &Nanophrase, l: usize) -> Result<Nanophrase> {
    let k = phrase.len();
    if l == 0 || l >= k {
        return Err(Error::ComponentOutOfRange { index: l, len: k });
    }
    let mut words = phrase.words.clone();
    let tail = words.remove(l);
    words[l - 1].extend(tail);
    Ok(Nanophrase {
        alphabet: phrase.alphabet.clone(),
        projections: phrase.projections.clone(),
        words,
    })
}
