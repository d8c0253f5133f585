//! Desingularization of étale words.

use std::collections::BTreeMap;

use crate::alphabet::HomotopyData;
use crate::error::{Error, Result};
use crate::phrase::{EtalePhrase, Letter, Nanophrase};
use crate::search::{homotopic, SearchBudget, Verdict};

/// Replaces a single-component étale word by a nanoword.
///
/// Letters occurring once are dropped. The `i`-th entry of a letter `A` of
/// multiplicity `m ≥ 2` becomes `A_{1,i} … A_{i−1,i} A_{i,i+1} … A_{i,m}`,
/// so the output has `Σ m(m−1)` entries. New letters are numbered in order of
/// (original letter, pair).
pub fn desingularize(word: &EtalePhrase) -> Result<Nanophrase> {
    if word.len() != 1 {
        return Err(Error::OutOfScope(format!(
            "desingularization takes a single word, got {} components",
            word.len()
        )));
    }
    let entries = &word.words()[0];
    let mut mult: BTreeMap<Letter, usize> = BTreeMap::new();
    for l in entries {
        *mult.entry(*l).or_default() += 1;
    }

    // pair (i, j), 1-based with i < j, of letter A → new letter id
    let mut ids: BTreeMap<(Letter, usize, usize), Letter> = BTreeMap::new();
    let mut projections = BTreeMap::new();
    for (&l, &m) in &mult {
        for i in 1..=m {
            for j in i + 1..=m {
                let id = Letter(ids.len() as u32);
                ids.insert((l, i, j), id);
                projections.insert(id, word.projection(l));
            }
        }
    }

    let mut seen: BTreeMap<Letter, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for l in entries {
        let m = mult[l];
        if m < 2 {
            continue;
        }
        let i = {
            let c = seen.entry(*l).or_default();
            *c += 1;
            *c
        };
        for h in 1..i {
            out.push(ids[&(*l, h, i)]);
        }
        for j in i + 1..=m {
            out.push(ids[&(*l, i, j)]);
        }
    }
    Nanophrase::new(word.alphabet().clone(), projections, vec![out])
}

/// Homotopy of étale words: homotopy of their desingularizations.
pub fn etale_homotopic(
    w1: &EtalePhrase,
    w2: &EtalePhrase,
    data: &HomotopyData,
    budget: &SearchBudget,
) -> Result<Verdict> {
    homotopic(&desingularize(w1)?, &desingularize(w2)?, data, budget)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::alphabet::Alphabet;
    use crate::phrase::is_isomorphic;
    use crate::text::{parse_etale, parse_phrase, render};

    fn al() -> Arc<Alphabet> {
        Arc::new(Alphabet::ab_swap())
    }

    #[test]
    fn gauss_words_are_fixed() {
        let a = al();
        let w = parse_etale("ABAB ; A=a B=b", &a).unwrap();
        let d = desingularize(&w).unwrap();
        assert!(is_isomorphic(&d, &parse_phrase("ABAB ; A=a B=b", &a).unwrap()).unwrap());
    }

    #[test]
    fn singletons_are_dropped() {
        let a = al();
        let w = parse_etale("ABA ; A=a B=b", &a).unwrap();
        assert_eq!(render(&desingularize(&w).unwrap()), "AA ; A=a");
    }

    #[test]
    fn triple_letter() {
        let a = al();
        let w = parse_etale("AAA ; A=b", &a).unwrap();
        let d = desingularize(&w).unwrap();
        // A12 A13 | A12 A23 | A13 A23
        assert_eq!(render(&d), "ABACBC ; A=b B=b C=b");
    }

    #[test]
    fn multi_component_rejected() {
        let a = al();
        let w = parse_etale("A|A ; A=a", &a).unwrap();
        assert!(matches!(desingularize(&w), Err(Error::OutOfScope(_))));
    }
}
