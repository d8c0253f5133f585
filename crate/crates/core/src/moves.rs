//! Homotopy moves on nanophrases and their inverses.
//!
//! Every 2-letter subword a move reads or writes (`AA`, `AB`, `BA`, `AC`, `BC`)
//! lies inside one component; the gaps between them may cross separators.
//!
//! | kind    | before             | after              | condition           |
//! |---------|--------------------|--------------------|---------------------|
//! | `M1`    | `xAAy`             | `xy`               |                     |
//! | `M2`    | `xAByBAz`          | `xyz`              | `\|B\| = τ(\|A\|)`  |
//! | `M3`    | `xAByACzBCt`       | `xBAyCAzCBt`       | `(\|A\|,\|B\|,\|C\|) ∈ S` |
//! | `M3inv` | `xBAyCAzCBt`       | `xAByACzBCt`       | `(\|A\|,\|B\|,\|C\|) ∈ S` |
//! | `M1inv` | `xy`               | `xAAy`             |                     |
//! | `M2inv` | `xyz`              | `xAByBAz`          | `\|B\| = τ(\|A\|)`  |
//!
//! Positions are global indices into the concatenation of all components.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::alphabet::{HomotopyData, Symbol};
use crate::error::{Error, Result};
use crate::flat::Flat;
use crate::phrase::{Letter, Nanophrase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MoveKind {
    M1,
    M2,
    M3,
    #[serde(rename = "M3inv")]
    M3Inv,
    #[serde(rename = "M1inv")]
    M1Inv,
    #[serde(rename = "M2inv")]
    M2Inv,
}

impl MoveKind {
    pub fn is_insertion(self) -> bool {
        matches!(self, MoveKind::M1Inv | MoveKind::M2Inv)
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MoveKind::M1 => "M1",
            MoveKind::M2 => "M2",
            MoveKind::M3 => "M3",
            MoveKind::M3Inv => "M3inv",
            MoveKind::M1Inv => "M1inv",
            MoveKind::M2Inv => "M2inv",
        })
    }
}

/// An insertion site: before the entry at `offset` of `component`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Slot {
    pub component: usize,
    pub offset: usize,
}

/// New letters for `M1inv` (one slot, one symbol) and `M2inv` (two slots in
/// concatenation order, symbols `[|A|, τ|A|]`). Slots are in the coordinates
/// of the phrase before insertion.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Insertion {
    pub slots: Vec<Slot>,
    pub symbols: Vec<Symbol>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MoveDescriptor {
    pub kind: MoveKind,
    pub positions: Vec<usize>,
    /// Letters at the affected positions, as named in the phrase the move was
    /// taken from. Empty means "not recorded"; insertions never record any.
    pub letters: Vec<Letter>,
    pub payload: Option<Insertion>,
}

impl MoveDescriptor {
    fn at(kind: MoveKind, positions: Vec<usize>) -> Self {
        MoveDescriptor {
            kind,
            positions,
            letters: Vec::new(),
            payload: None,
        }
    }

    fn insert(kind: MoveKind, positions: Vec<usize>, slots: Vec<Slot>, symbols: Vec<Symbol>) -> Self {
        MoveDescriptor {
            kind,
            positions,
            letters: Vec::new(),
            payload: Some(Insertion { slots, symbols }),
        }
    }

    /// Change in letter count when applied.
    pub fn letter_delta(&self) -> isize {
        match self.kind {
            MoveKind::M1 => -1,
            MoveKind::M2 => -2,
            MoveKind::M3 | MoveKind::M3Inv => 0,
            MoveKind::M1Inv => 1,
            MoveKind::M2Inv => 2,
        }
    }
}

impl fmt::Display for MoveDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind)?;
        match &self.payload {
            Some(ins) => {
                for (i, s) in ins.slots.iter().enumerate() {
                    write!(
                        f,
                        " {}@{}:{}",
                        if i == 0 { "at" } else { "and" },
                        s.component + 1,
                        s.offset
                    )?;
                }
            }
            None => {
                write!(f, " at")?;
                for p in &self.positions {
                    write!(f, " {p}")?;
                }
            }
        }
        Ok(())
    }
}

struct Layout {
    comp: Vec<usize>,
    partner: Vec<usize>,
    starts: Vec<usize>,
}

impl Layout {
    fn of(flat: &Flat) -> Self {
        Layout {
            comp: flat.component_of(),
            partner: flat.partners(),
            starts: flat.starts(),
        }
    }

    /// `i` and `i + 1` are adjacent inside one component.
    fn adjacent(&self, i: usize) -> bool {
        i + 1 < self.comp.len() && self.comp[i] == self.comp[i + 1]
    }

    /// `i` is the first occurrence of its letter.
    fn first(&self, i: usize) -> bool {
        self.partner[i] > i
    }
}

pub(crate) fn enumerate(
    flat: &Flat,
    data: &HomotopyData,
    allow_inverse: bool,
    letter_cap: usize,
    frozen: &[bool],
) -> Vec<MoveDescriptor> {
    let lay = Layout::of(flat);
    let e = &flat.entries;
    let n = e.len();
    let alphabet = data.alphabet();
    let mut out = Vec::new();

    for i in 0..n.saturating_sub(1) {
        if !lay.adjacent(i) {
            continue;
        }
        if e[i] == e[i + 1] {
            out.push(MoveDescriptor::at(MoveKind::M1, vec![i, i + 1]));
            continue;
        }
        if !lay.first(i) || !lay.first(i + 1) {
            continue;
        }
        let (x, y) = (e[i] as usize, e[i + 1] as usize);

        // xAByBAz
        let j = lay.partner[i + 1];
        if lay.partner[i] == j + 1 && lay.adjacent(j) && flat.proj[y] == alphabet.tau(flat.proj[x]) {
            out.push(MoveDescriptor::at(MoveKind::M2, vec![i, i + 1, j, j + 1]));
        }

        // xAByACzBCt with A = x, B = y
        let j = lay.partner[i];
        if lay.adjacent(j) && lay.first(j + 1) {
            let l = lay.partner[i + 1];
            let c = e[j + 1] as usize;
            if l > j + 1
                && lay.adjacent(l)
                && lay.partner[j + 1] == l + 1
                && data.allows(flat.proj[x], flat.proj[y], flat.proj[c])
            {
                out.push(MoveDescriptor::at(MoveKind::M3, vec![i, i + 1, j, j + 1, l, l + 1]));
            }
        }

        // xBAyCAzCBt with B = x, A = y
        let q = lay.partner[i + 1];
        if q >= i + 3 && lay.adjacent(q - 1) && lay.first(q - 1) {
            let j = q - 1;
            let l = lay.partner[j];
            let c = e[j] as usize;
            if l > q
                && lay.adjacent(l)
                && lay.partner[i] == l + 1
                && data.allows(flat.proj[y], flat.proj[x], flat.proj[c])
            {
                out.push(MoveDescriptor::at(MoveKind::M3Inv, vec![i, i + 1, j, j + 1, l, l + 1]));
            }
        }
    }

    if !allow_inverse {
        return out;
    }
    let letters = flat.letter_count();
    let slots: Vec<Slot> = flat
        .lens
        .iter()
        .enumerate()
        .filter(|(c, _)| !frozen.get(*c).copied().unwrap_or(false))
        .flat_map(|(c, &len)| {
            (0..=len as usize).map(move |o| Slot {
                component: c,
                offset: o,
            })
        })
        .collect();
    let global = |s: &Slot| lay.starts[s.component] + s.offset;

    if letters < letter_cap {
        for s in alphabet.symbols() {
            for slot in &slots {
                out.push(MoveDescriptor::insert(
                    MoveKind::M1Inv,
                    vec![global(slot)],
                    vec![*slot],
                    vec![s],
                ));
            }
        }
    }
    if letters + 2 <= letter_cap {
        for s in alphabet.symbols() {
            let t = alphabet.tau(s);
            for (a, first) in slots.iter().enumerate() {
                for second in &slots[a..] {
                    out.push(MoveDescriptor::insert(
                        MoveKind::M2Inv,
                        vec![global(first), global(second)],
                        vec![*first, *second],
                        vec![s, t],
                    ));
                }
            }
        }
    }
    out
}

fn stale(mv: &MoveDescriptor, why: &str) -> Error {
    Error::StaleMove(format!("{mv}: {why}"))
}

/// Applies `mv` to `flat`, checking that its pattern is present.
pub(crate) fn apply_flat(flat: &Flat, data: &HomotopyData, mv: &MoveDescriptor) -> Result<Flat> {
    let alphabet = data.alphabet();
    let n = flat.entries.len();
    let want = match mv.kind {
        MoveKind::M1 => 2,
        MoveKind::M2 => 4,
        MoveKind::M3 | MoveKind::M3Inv => 6,
        MoveKind::M1Inv => 1,
        MoveKind::M2Inv => 2,
    };
    if mv.positions.len() != want {
        return Err(stale(mv, "wrong number of positions"));
    }
    if mv.kind.is_insertion() {
        return insert(flat, data, mv);
    }
    let p = &mv.positions;
    if p.iter().any(|&i| i >= n) || p.windows(2).any(|w| w[0] >= w[1]) {
        return Err(stale(mv, "positions out of range or unordered"));
    }
    let lay = Layout::of(flat);
    let e = &flat.entries;
    let pairs: Vec<usize> = p.iter().step_by(2).copied().collect();
    if pairs
        .iter()
        .zip(p.iter().skip(1).step_by(2))
        .any(|(&a, &b)| b != a + 1 || !lay.adjacent(a))
    {
        return Err(stale(mv, "subwords are not adjacent within a component"));
    }

    let mut out = flat.clone();
    match mv.kind {
        MoveKind::M1 => {
            if e[p[0]] != e[p[1]] {
                return Err(stale(mv, "no doubled letter"));
            }
            remove(&mut out, &lay, &[p[0], p[1]]);
        }
        MoveKind::M2 => {
            let (a, b) = (e[p[0]], e[p[1]]);
            if a == b || e[p[2]] != b || e[p[3]] != a {
                return Err(stale(mv, "pattern AB…BA not present"));
            }
            if flat.proj[b as usize] != alphabet.tau(flat.proj[a as usize]) {
                return Err(stale(mv, "|B| ≠ τ(|A|)"));
            }
            remove(&mut out, &lay, p);
        }
        MoveKind::M3 | MoveKind::M3Inv => {
            // M3: AB AC BC; M3inv: BA CA CB
            let (a, b, c) = if mv.kind == MoveKind::M3 {
                (e[p[0]], e[p[1]], e[p[3]])
            } else {
                (e[p[1]], e[p[0]], e[p[2]])
            };
            let expect = if mv.kind == MoveKind::M3 {
                [a, b, a, c, b, c]
            } else {
                [b, a, c, a, c, b]
            };
            if a == b || b == c || a == c || p.iter().zip(expect).any(|(&i, x)| e[i] != x) {
                return Err(stale(mv, "move-3 pattern not present"));
            }
            let pr = |x: u16| flat.proj[x as usize];
            if !data.allows(pr(a), pr(b), pr(c)) {
                return Err(stale(mv, "letter triple not in S"));
            }
            for &i in &pairs {
                out.entries.swap(i, i + 1);
            }
        }
        MoveKind::M1Inv | MoveKind::M2Inv => unreachable!(),
    }
    Ok(out)
}

fn remove(flat: &mut Flat, lay: &Layout, positions: &[usize]) {
    for &i in positions.iter().rev() {
        flat.entries.remove(i);
        flat.lens[lay.comp[i]] -= 1;
    }
}

fn insert(flat: &Flat, data: &HomotopyData, mv: &MoveDescriptor) -> Result<Flat> {
    let alphabet = data.alphabet();
    let ins = mv
        .payload
        .as_ref()
        .ok_or_else(|| stale(mv, "missing insertion payload"))?;
    let count = if mv.kind == MoveKind::M1Inv { 1 } else { 2 };
    if ins.slots.len() != count || ins.symbols.len() != count {
        return Err(stale(mv, "malformed insertion payload"));
    }
    if ins.symbols.iter().any(|s| !alphabet.contains(*s)) {
        return Err(stale(mv, "unknown symbol"));
    }
    if count == 2 && (ins.symbols[1] != alphabet.tau(ins.symbols[0]) || ins.slots[0] > ins.slots[1]) {
        return Err(stale(mv, "M2inv needs ordered slots and symbols (s, τ(s))"));
    }
    let starts = flat.starts();
    for (slot, &pos) in ins.slots.iter().zip(&mv.positions) {
        if slot.component >= flat.lens.len()
            || slot.offset > flat.lens[slot.component] as usize
            || starts[slot.component] + slot.offset != pos
        {
            return Err(stale(mv, "insertion slot out of range"));
        }
    }
    let mut out = flat.clone();
    let x = out.proj.len() as u16;
    out.proj.extend(ins.symbols.iter().copied());
    if count == 1 {
        let g = mv.positions[0];
        out.entries.splice(g..g, [x, x]);
        out.lens[ins.slots[0].component] += 2;
    } else {
        let y = x + 1;
        let (g1, g2) = (mv.positions[0], mv.positions[1]);
        out.entries.splice(g2..g2, [y, x]);
        out.entries.splice(g1..g1, [x, y]);
        out.lens[ins.slots[1].component] += 2;
        out.lens[ins.slots[0].component] += 2;
    }
    Ok(out)
}

/// The move undoing `mv`, expressed on the phrase `mv` produces from `before`.
pub(crate) fn inverse_flat(before: &Flat, mv: &MoveDescriptor) -> MoveDescriptor {
    let p = &mv.positions;
    match mv.kind {
        MoveKind::M3 => MoveDescriptor::at(MoveKind::M3Inv, p.clone()),
        MoveKind::M3Inv => MoveDescriptor::at(MoveKind::M3, p.clone()),
        MoveKind::M1 => {
            let comp = before.component_of()[p[0]];
            let slot = Slot {
                component: comp,
                offset: p[0] - before.starts()[comp],
            };
            let s = before.proj[before.entries[p[0]] as usize];
            MoveDescriptor::insert(MoveKind::M1Inv, vec![p[0]], vec![slot], vec![s])
        }
        MoveKind::M2 => {
            let comp = before.component_of();
            let starts = before.starts();
            let first = Slot {
                component: comp[p[0]],
                offset: p[0] - starts[comp[p[0]]],
            };
            let shift = if comp[p[2]] == comp[p[0]] { 2 } else { 0 };
            let second = Slot {
                component: comp[p[2]],
                offset: p[2] - starts[comp[p[2]]] - shift,
            };
            let symbols = vec![
                before.proj[before.entries[p[0]] as usize],
                before.proj[before.entries[p[1]] as usize],
            ];
            MoveDescriptor::insert(MoveKind::M2Inv, vec![p[0], p[2] - 2], vec![first, second], symbols)
        }
        MoveKind::M1Inv => {
            let g = p[0];
            MoveDescriptor::at(MoveKind::M1, vec![g, g + 1])
        }
        MoveKind::M2Inv => {
            let (g1, g2) = (p[0], p[1]);
            MoveDescriptor::at(MoveKind::M2, vec![g1, g1 + 1, g2 + 2, g2 + 3])
        }
    }
}

fn letters_at(phrase: &Nanophrase, positions: &[usize]) -> Vec<Letter> {
    let all: Vec<Letter> = phrase.words().iter().flatten().copied().collect();
    let mut out: Vec<Letter> = Vec::new();
    for &i in positions {
        if let Some(l) = all.get(i) {
            if !out.contains(l) {
                out.push(*l);
            }
        }
    }
    out
}

/// Fills in `letters` for a descriptor generated against `phrase`.
pub(crate) fn annotate(phrase: &Nanophrase, mut mv: MoveDescriptor) -> MoveDescriptor {
    mv.letters = if mv.kind.is_insertion() {
        Vec::new()
    } else {
        letters_at(phrase, &mv.positions)
    };
    mv
}

/// All move sites on `phrase`; insertion moves are included when `allow_inverse`.
pub fn applicable_moves(phrase: &Nanophrase, data: &HomotopyData, allow_inverse: bool) -> Vec<MoveDescriptor> {
    let (flat, _) = phrase.to_flat();
    enumerate(&flat, data, allow_inverse, usize::MAX, &[])
        .into_iter()
        .map(|mv| annotate(phrase, mv))
        .collect()
}

/// Applies `mv`. New letters from insertions get ids above every existing id.
pub fn apply_move(phrase: &Nanophrase, data: &HomotopyData, mv: &MoveDescriptor) -> Result<Nanophrase> {
    if phrase.alphabet() != data.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if !mv.letters.is_empty() && !mv.kind.is_insertion() && letters_at(phrase, &mv.positions) != mv.letters {
        return Err(stale(mv, "letters at positions differ"));
    }
    let (flat, names) = phrase.to_flat();
    let out = apply_flat(&flat, data, mv)?;
    Ok(Nanophrase::from_flat(phrase.alphabet().clone(), &out, &names))
}

/// The descriptor undoing `mv`, valid on `apply_move(phrase, data, mv)`.
pub fn inverse_move(phrase: &Nanophrase, data: &HomotopyData, mv: &MoveDescriptor) -> Result<MoveDescriptor> {
    let after = apply_move(phrase, data, mv)?;
    let (flat, _) = phrase.to_flat();
    Ok(annotate(&after, inverse_flat(&flat, mv)))
}

/// Replays `path` from `start`, returning every intermediate phrase
/// (`start` first) and the path with letters filled in.
pub fn replay(
    start: &Nanophrase,
    data: &HomotopyData,
    path: &[MoveDescriptor],
) -> Result<(Vec<Nanophrase>, Vec<MoveDescriptor>)> {
    let mut phrases = vec![start.clone()];
    let mut annotated = Vec::with_capacity(path.len());
    for mv in path {
        let cur = phrases.last().expect("non-empty");
        let mv = if mv.letters.is_empty() {
            annotate(cur, mv.clone())
        } else {
            mv.clone()
        };
        let next = apply_move(cur, data, &mv)?;
        annotated.push(mv);
        phrases.push(next);
    }
    Ok((phrases, annotated))
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::alphabet::Alphabet;
    use crate::phrase::{canonical_form, is_isomorphic};
    use crate::text::{parse_phrase, render};

    fn data() -> HomotopyData {
        HomotopyData::diagonal(Arc::new(Alphabet::ab_swap()))
    }

    fn p(text: &str, d: &HomotopyData) -> Nanophrase {
        parse_phrase(text, d.alphabet()).unwrap()
    }

    fn forward(phrase: &Nanophrase, d: &HomotopyData) -> Vec<MoveDescriptor> {
        applicable_moves(phrase, d, false)
    }

    #[test]
    fn m1_in_the_middle() {
        let d = data();
        let ph = p("BAAB ; A=a B=a", &d);
        let moves = forward(&ph, &d);
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].kind, MoveKind::M1);
        assert_eq!(moves[0].positions, vec![1, 2]);
        assert_eq!(render(&apply_move(&ph, &d, &moves[0]).unwrap()), "AA ; A=a");
        // with |B| = τ|A| the outer pair also cancels
        let ph = p("BAAB ; A=a B=b", &d);
        let kinds: Vec<MoveKind> = forward(&ph, &d).iter().map(|m| m.kind).collect();
        assert_eq!(kinds, vec![MoveKind::M2, MoveKind::M1]);
    }

    #[test]
    fn m1_does_not_straddle_separators() {
        let d = data();
        assert!(forward(&p("A|A ; A=a", &d), &d).is_empty());
    }

    #[test]
    fn m2_across_components() {
        let d = data();
        let ph = p("AB|BA ; A=a B=b", &d);
        let moves = forward(&ph, &d);
        assert_eq!(moves.len(), 1);
        assert_eq!(moves[0].kind, MoveKind::M2);
        assert_eq!(moves[0].positions, vec![0, 1, 2, 3]);
        assert_eq!(render(&apply_move(&ph, &d, &moves[0]).unwrap()), "0|0");

        // same projections: no M2
        assert!(forward(&p("AB|BA ; A=a B=a", &d), &d).is_empty());
    }

    #[test]
    fn m3_with_empty_gaps() {
        let d = data();
        let ph = p("ABACBC ; A=a B=a C=a", &d);
        let moves = forward(&ph, &d);
        let m3 = moves.iter().find(|m| m.kind == MoveKind::M3).expect("M3 site");
        assert_eq!(m3.positions, vec![0, 1, 2, 3, 4, 5]);
        let after = apply_move(&ph, &d, m3).unwrap();
        assert_eq!(
            after.words()[0],
            vec![Letter(1), Letter(0), Letter(2), Letter(0), Letter(2), Letter(1)]
        );

        // the result carries the inverse pattern
        let back = forward(&after, &d);
        let inv = back.iter().find(|m| m.kind == MoveKind::M3Inv).expect("M3inv site");
        let again = apply_move(&after, &d, inv).unwrap();
        assert_eq!(again, ph);

        // mixed projections are blocked by the diagonal S
        let blocked = p("ABACBC ; A=a B=a C=b", &d);
        assert!(forward(&blocked, &d).iter().all(|m| m.kind != MoveKind::M3));
    }

    #[test]
    fn stale_descriptors_are_rejected() {
        let d = data();
        let ph = p("BAAB ; A=a B=b", &d);
        let mv = forward(&ph, &d).remove(0);
        let after = apply_move(&ph, &d, &mv).unwrap();
        assert!(matches!(apply_move(&after, &d, &mv), Err(Error::StaleMove(_))));
        let other = p("ABBA ; A=a B=b", &d);
        assert!(matches!(apply_move(&other, &d, &mv), Err(Error::StaleMove(_))));
    }

    #[test]
    fn insertion_counts() {
        let d = data();
        let ph = p("0|0", &d);
        let moves = applicable_moves(&ph, &d, true);
        // 2 slots × 2 symbols for M1inv, 3 slot pairs × 2 symbols for M2inv
        assert_eq!(moves.iter().filter(|m| m.kind == MoveKind::M1Inv).count(), 4);
        assert_eq!(moves.iter().filter(|m| m.kind == MoveKind::M2Inv).count(), 6);
        let results: Vec<String> = moves.iter().map(|m| render(&apply_move(&ph, &d, m).unwrap())).collect();
        assert!(results.contains(&"AB|BA ; A=a B=b".to_string()));
        assert!(results.contains(&"ABBA|0 ; A=b B=a".to_string()));
        assert!(results.contains(&"0|AA ; A=a".to_string()));
    }

    #[test]
    fn every_move_has_an_inverse() {
        let d = data();
        for text in ["ABACBC ; A=a B=a C=a", "AB|BA ; A=a B=b", "BAAB ; A=a B=b", "A|A ; A=a"] {
            let ph = p(text, &d);
            for mv in applicable_moves(&ph, &d, true) {
                let after = apply_move(&ph, &d, &mv).unwrap();
                let inv = inverse_move(&ph, &d, &mv).unwrap();
                let back = apply_move(&after, &d, &inv).unwrap();
                assert!(is_isomorphic(&back, &ph).unwrap(), "{text}: {mv}");
                assert_eq!(canonical_form(&back), canonical_form(&ph));
            }
        }
    }
}
