//! Compact positional representation used by move enumeration, invariants and search.
//!
//! Letters are small indices into `proj`; indices may be sparse after deletions
//! (unused slots in `proj` are ignored). Positions are global indices into the
//! concatenation, and `lens` records the component layout.

use crate::alphabet::Symbol;
use crate::phrase::CanonicalForm;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Flat {
    pub entries: Vec<u16>,
    pub lens: Vec<u16>,
    pub proj: Vec<Symbol>,
}

const UNSET: u16 = u16::MAX;

impl Flat {
    pub fn canonical(&self) -> CanonicalForm {
        let mut rename = vec![UNSET; self.proj.len()];
        let mut projections = Vec::with_capacity(self.entries.len() / 2);
        let entries = self
            .entries
            .iter()
            .map(|&e| {
                let slot = &mut rename[e as usize];
                if *slot == UNSET {
                    *slot = projections.len() as u16;
                    projections.push(self.proj[e as usize]);
                }
                *slot
            })
            .collect();
        CanonicalForm {
            entries,
            lens: self.lens.clone(),
            projections,
        }
    }

    pub fn letter_count(&self) -> usize {
        self.entries.len() / 2
    }

    /// Global index of the first entry of each component, plus the total length.
    pub fn starts(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.lens.len() + 1);
        let mut at = 0;
        out.push(0);
        for &l in &self.lens {
            at += l as usize;
            out.push(at);
        }
        out
    }

    /// Component index of every position.
    pub fn component_of(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.entries.len());
        for (c, &l) in self.lens.iter().enumerate() {
            out.extend(std::iter::repeat_n(c, l as usize));
        }
        out
    }

    /// For a Gauss layout: the other position holding the same letter.
    pub fn partners(&self) -> Vec<usize> {
        let mut first = vec![usize::MAX; self.proj.len()];
        let mut out = vec![usize::MAX; self.entries.len()];
        for (i, &e) in self.entries.iter().enumerate() {
            let f = &mut first[e as usize];
            if *f == usize::MAX {
                *f = i;
            } else {
                out[i] = *f;
                out[*f] = i;
            }
        }
        out
    }

    /// Position pairs `(first, second)` per letter index, for letters present.
    pub fn occurrences(&self) -> Vec<Option<(usize, usize)>> {
        let mut out: Vec<Option<(usize, usize)>> = vec![None; self.proj.len()];
        for (i, &e) in self.entries.iter().enumerate() {
            match &mut out[e as usize] {
                slot @ None => *slot = Some((i, usize::MAX)),
                Some((_, second)) => *second = i,
            }
        }
        out
    }
}
