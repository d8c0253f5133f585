//! Multi-component curves on surfaces, encoded as nanophrases over `{a, b}`
//! with `τ` swapping `a` and `b`.
//!
//! A curve is given by a signed Gauss code: per component, the crossings met
//! walking from its origin, and per crossing the orientation sign of the two
//! tangent vectors (first passage, second passage). A positive crossing is
//! projected to `a`, a negative one to `b`.
//!
//! File format:
//!
//! ```text
//! 1,2
//! 1,2
//! signs: 1=+,2=-
//! ```
//!
//! One component per line (an empty line is an empty component), then a
//! final `signs:` line.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::{Alphabet, HomotopyData};
use crate::classify::{catalog, classify_with_path, enumerate, ClassLabel, Shape};
use crate::error::{Error, Result};
use crate::invariants::signature_flat;
use crate::moves::{replay, MoveDescriptor};
use crate::phrase::{Letter, Nanophrase};
use crate::search::{SearchBudget, Tree};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Sign {
    #[serde(rename = "+")]
    Positive,
    #[serde(rename = "-")]
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SignedGaussCode {
    pub components: Vec<Vec<u32>>,
    pub signs: BTreeMap<u32, Sign>,
}

impl SignedGaussCode {
    pub fn new(components: Vec<Vec<u32>>, signs: BTreeMap<u32, Sign>) -> Result<Self> {
        let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
        for id in components.iter().flatten() {
            *counts.entry(*id).or_default() += 1;
        }
        if let Some((id, n)) = counts.iter().find(|(_, n)| **n != 2) {
            return Err(Error::GaussCode(format!("crossing {id} occurs {n} time(s)")));
        }
        if let Some(id) = counts.keys().find(|id| !signs.contains_key(id)) {
            return Err(Error::GaussCode(format!("crossing {id} has no sign")));
        }
        if let Some(id) = signs.keys().find(|id| !counts.contains_key(id)) {
            return Err(Error::GaussCode(format!("sign given for unknown crossing {id}")));
        }
        Ok(SignedGaussCode { components, signs })
    }

    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.trim_end().lines().collect();
        let Some((last, body)) = lines.split_last() else {
            return Err(Error::GaussCode("missing `signs:` line".into()));
        };
        let signs_text = last
            .trim()
            .strip_prefix("signs:")
            .ok_or_else(|| Error::GaussCode("last line must start with `signs:`".into()))?;

        let id = |s: &str| -> Result<u32> {
            s.trim()
                .parse()
                .map_err(|_| Error::GaussCode(format!("bad crossing id `{}`", s.trim())))
        };
        let mut components = Vec::with_capacity(body.len());
        for line in body {
            let line = line.trim();
            if line.is_empty() {
                components.push(Vec::new());
            } else {
                components.push(line.split(',').map(id).collect::<Result<Vec<_>>>()?);
            }
        }

        let mut signs = BTreeMap::new();
        for item in signs_text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (c, s) = item
                .split_once('=')
                .ok_or_else(|| Error::GaussCode(format!("expected `id=±`, found `{item}`")))?;
            let sign = match s.trim() {
                "+" => Sign::Positive,
                "-" => Sign::Negative,
                other => return Err(Error::GaussCode(format!("bad sign `{other}`"))),
            };
            if signs.insert(id(c)?, sign).is_some() {
                return Err(Error::GaussCode(format!("crossing {} signed twice", c.trim())));
            }
        }
        SignedGaussCode::new(components, signs)
    }
}

impl fmt::Display for SignedGaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.components {
            let ids: Vec<String> = c.iter().map(u32::to_string).collect();
            writeln!(f, "{}", ids.join(","))?;
        }
        let signs: Vec<String> = self
            .signs
            .iter()
            .map(|(id, s)| format!("{id}={}", if *s == Sign::Positive { '+' } else { '-' }))
            .collect();
        write!(f, "signs: {}", signs.join(","))
    }
}

/// The alphabet `{a, b}` with `τ(a) = b`.
pub fn curve_alphabet() -> Arc<Alphabet> {
    Arc::new(Alphabet::ab_swap())
}

/// Crossings become letters in order of first appearance.
pub fn encode(code: &SignedGaussCode) -> Result<Nanophrase> {
    let code = SignedGaussCode::new(code.components.clone(), code.signs.clone())?;
    let alphabet = curve_alphabet();
    let (a, b) = (alphabet.symbol("a")?, alphabet.symbol("b")?);
    let mut letters: HashMap<u32, Letter> = HashMap::new();
    let mut projections = BTreeMap::new();
    let mut words = Vec::with_capacity(code.components.len());
    for comp in &code.components {
        let mut word = Vec::with_capacity(comp.len());
        for id in comp {
            let next = Letter(letters.len() as u32);
            let l = *letters.entry(*id).or_insert(next);
            let sym = if code.signs[id] == Sign::Positive { a } else { b };
            projections.insert(l, sym);
            word.push(l);
        }
        words.push(word);
    }
    Nanophrase::new(alphabet, projections, words)
}

/// Why a phrase can never reach one with an empty component.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "by", rename_all = "lowercase")]
pub enum Certificate {
    /// Each component carries an invariant that an empty component cannot
    /// have, listed per 1-based component.
    Invariants { obstructions: Vec<String> },
    /// The phrase's normal form has no empty component.
    Catalog { label: ClassLabel },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Irreducibility {
    /// `path` leads to a phrase with an empty component.
    Reducible {
        path: Vec<MoveDescriptor>,
    },
    Irreducible {
        certificate: Certificate,
    },
    Inconclusive {
        explored: usize,
    },
}

fn obstruction(phrase: &Nanophrase, component: usize) -> Option<String> {
    let flat = phrase.to_flat().0;
    let sig = signature_flat(&flat, phrase.alphabet());
    let k = phrase.len();
    if sig.parities[component] == 1 {
        return Some("odd length".into());
    }
    let mut slot = 0;
    for i in 0..k {
        for j in i + 1..k {
            if (i == component || j == component) && !sig.pairing[slot].is_identity() {
                return Some(format!("pairing ({},{}) = {}", i + 1, j + 1, sig.pairing[slot]));
            }
            slot += 1;
        }
    }
    if !sig.gamma[component].is_identity() {
        return Some(format!("gamma = {}", sig.gamma[component]));
    }
    if !sig.t[component].is_zero() {
        return Some(format!("T = {}", sig.t[component]));
    }
    None
}

/// Decides whether `phrase` (over `{a, b}`) is homotopic to a phrase with an
/// empty component.
pub fn is_irreducible(phrase: &Nanophrase, budget: &SearchBudget) -> Result<Irreducibility> {
    let data = HomotopyData::diagonal(phrase.alphabet().clone());
    if phrase.has_empty_component() {
        return Ok(Irreducibility::Reducible { path: Vec::new() });
    }
    let obstructions: Vec<Option<String>> = (0..phrase.len()).map(|c| obstruction(phrase, c)).collect();
    if obstructions.iter().all(Option::is_some) {
        let obstructions = obstructions
            .into_iter()
            .enumerate()
            .map(|(c, o)| format!("w{}: {}", c + 1, o.expect("checked")))
            .collect();
        return Ok(Irreducibility::Irreducible {
            certificate: Certificate::Invariants { obstructions },
        });
    }
    if phrase.entry_count() <= 4 {
        let (label, path) = classify_with_path(phrase, &data, budget)?;
        let rep = label.representative(phrase.alphabet(), phrase.len())?;
        return Ok(if rep.has_empty_component() {
            Irreducibility::Reducible { path }
        } else {
            Irreducibility::Irreducible {
                certificate: Certificate::Catalog { label },
            }
        });
    }

    let root = phrase.to_flat().0.canonical();
    let k = phrase.len();
    let mut tree = Tree::new(
        root,
        &data,
        phrase.letter_count() + budget.max_extra_letters,
        vec![false; k],
    );
    loop {
        if tree.len() >= budget.max_states || tree.frontier_empty() {
            return Ok(Irreducibility::Inconclusive { explored: tree.len() });
        }
        let hit = tree
            .step()
            .into_iter()
            .find(|&id| tree.form(id).component_lengths().any(|l| l == 0));
        if let Some(id) = hit {
            let (_, path) = replay(phrase, &data, &tree.path_to(id))?;
            return Ok(Irreducibility::Reducible { path });
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtlasEntry {
    pub k: usize,
    pub label: ClassLabel,
    #[serde(serialize_with = "serialize_display")]
    pub representative: Nanophrase,
    pub family: Shape,
    /// Enumerated phrases falling into this class.
    pub members: usize,
}

fn serialize_display<T: fmt::Display, S: serde::Serializer>(
    value: &T,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

/// Family order used for the summary counts.
pub const FAMILY_ORDER: [Shape; 6] = [
    Shape::Four,
    Shape::OneOne,
    Shape::ThreeOne,
    Shape::TwoTwo,
    Shape::TwoOneOne,
    Shape::OneOneOneOne,
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Atlas {
    pub entries: Vec<AtlasEntry>,
    pub family_counts: Vec<(Shape, usize)>,
    pub total: usize,
    /// Enumerated phrases with nonempty components.
    pub enumerated: usize,
    pub reducible: usize,
    /// Phrases the budget could not settle (rendered).
    pub inconclusive: Vec<String>,
}

impl Atlas {
    /// `2 2 8 4 24 12 total=52` style line.
    pub fn summary_line(&self) -> String {
        let counts: Vec<String> = self.family_counts.iter().map(|(_, n)| n.to_string()).collect();
        format!("{} total={}", counts.join(" "), self.total)
    }
}

/// Classes of irreducible curves with at most `max_crossings` crossings and
/// one to four components.
pub fn build_atlas(max_crossings: usize, budget: &SearchBudget) -> Result<Atlas> {
    if max_crossings > 2 {
        return Err(Error::OutOfScope(format!(
            "the atlas covers at most 2 crossings, got {max_crossings}"
        )));
    }
    let alphabet = curve_alphabet();
    let mut phrases = Vec::new();
    for k in 1..=4 {
        for n in 1..=max_crossings {
            phrases.extend(enumerate(&alphabet, k, n, true)?);
        }
    }

    let data = HomotopyData::diagonal(alphabet.clone());
    let results: Vec<Result<(Irreducibility, Option<ClassLabel>)>> = phrases
        .par_iter()
        .map(|p| {
            let verdict = is_irreducible(p, budget)?;
            let label = match &verdict {
                Irreducibility::Irreducible {
                    certificate: Certificate::Catalog { label },
                } => Some(label.clone()),
                Irreducibility::Irreducible { .. } => Some(classify_with_path(p, &data, budget)?.0),
                _ => None,
            };
            Ok((verdict, label))
        })
        .collect();

    let mut groups: BTreeMap<(usize, ClassLabel), usize> = BTreeMap::new();
    let mut reducible = 0;
    let mut inconclusive = Vec::new();
    for (p, r) in phrases.iter().zip(results) {
        match r? {
            (Irreducibility::Reducible { .. }, _) => reducible += 1,
            (Irreducibility::Inconclusive { .. }, _) => inconclusive.push(p.to_string()),
            (Irreducibility::Irreducible { .. }, label) => {
                *groups
                    .entry((p.len(), label.expect("irreducible phrases are labelled")))
                    .or_default() += 1;
            }
        }
    }

    let mut entries = Vec::with_capacity(groups.len());
    for ((k, label), members) in groups {
        let representative = catalog(&alphabet, k)
            .into_iter()
            .find(|e| e.label == label)
            .expect("labels come from the catalog")
            .representative;
        entries.push(AtlasEntry {
            k,
            family: label.family.shape(),
            label,
            representative,
            members,
        });
    }
    entries.sort_by(|x, y| {
        let rank = |s: Shape| FAMILY_ORDER.iter().position(|f| *f == s).unwrap_or(usize::MAX);
        (rank(x.family), x.k, &x.label).cmp(&(rank(y.family), y.k, &y.label))
    });
    let family_counts = FAMILY_ORDER
        .iter()
        .map(|f| (*f, entries.iter().filter(|e| e.family == *f).count()))
        .collect();
    Ok(Atlas {
        total: entries.len(),
        entries,
        family_counts,
        enumerated: phrases.len(),
        reducible,
        inconclusive,
    })
}
