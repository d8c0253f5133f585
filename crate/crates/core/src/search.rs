//! Bounded search over the move graph, quotiented by isomorphism.
//!
//! States are canonical forms. Move positions do not depend on letter names,
//! so a path found between canonical forms replays on any phrase isomorphic to
//! its start.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap};
use std::rc::Rc;

use serde::Serialize;

use crate::alphabet::HomotopyData;
use crate::classify::{classify_with_path, ClassLabel};
use crate::error::{Error, Result};
use crate::flat::Flat;
use crate::invariants::signature_flat;
use crate::moves::{apply_flat, enumerate, inverse_flat, replay, MoveDescriptor};
use crate::phrase::{CanonicalForm, Nanophrase};

/// Limits for move-graph searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Letters allowed above the larger input's letter count.
    pub max_extra_letters: usize,
    /// Distinct states (up to isomorphism) discovered before giving up.
    pub max_states: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_extra_letters: 4,
            max_states: 1_000_000,
        }
    }
}

impl SearchBudget {
    pub fn new(max_extra_letters: usize, max_states: usize) -> Result<Self> {
        if max_extra_letters == 0 || max_states == 0 {
            return Err(Error::OutOfScope("search budget limits must be positive".into()));
        }
        Ok(SearchBudget {
            max_extra_letters,
            max_states,
        })
    }
}

/// Why two phrases are not homotopic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "by", rename_all = "lowercase")]
pub enum Witness {
    /// An invariant differs, possibly after merging adjacent components.
    /// `grouping` lists the original (1-based) components in each merged one.
    Invariant {
        name: String,
        grouping: Vec<Vec<usize>>,
        left: String,
        right: String,
    },
    /// Both phrases reduce to different normal forms of the ≤ 4-entry catalog.
    Catalog { left: ClassLabel, right: ClassLabel },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict")]
pub enum Verdict {
    /// A path from the first phrase to (a phrase isomorphic to) the second.
    Equivalent {
        path: Vec<MoveDescriptor>,
    },
    Distinct {
        witness: Witness,
    },
    Inconclusive {
        explored: usize,
    },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Equivalent { .. } => "Equivalent",
            Verdict::Distinct { .. } => "Distinct",
            Verdict::Inconclusive { .. } => "Inconclusive",
        }
    }
}

struct Node {
    form: Rc<CanonicalForm>,
    parent: usize,
}

/// Best-first exploration (fewest letters first) from one root.
pub(crate) struct Tree<'a> {
    data: &'a HomotopyData,
    cap: usize,
    // components never inserted into
    frozen: Vec<bool>,
    nodes: Vec<Node>,
    index: HashMap<Rc<CanonicalForm>, usize>,
    heap: BinaryHeap<Reverse<(usize, usize)>>,
}

impl<'a> Tree<'a> {
    pub(crate) fn new(root: CanonicalForm, data: &'a HomotopyData, cap: usize, frozen: Vec<bool>) -> Self {
        let mut tree = Tree {
            data,
            cap,
            frozen,
            nodes: Vec::new(),
            index: HashMap::new(),
            heap: BinaryHeap::new(),
        };
        tree.add(root, usize::MAX);
        tree
    }

    fn add(&mut self, form: CanonicalForm, parent: usize) -> Option<usize> {
        if self.index.contains_key(&form) {
            return None;
        }
        let id = self.nodes.len();
        let form = Rc::new(form);
        self.heap.push(Reverse((form.letter_count(), id)));
        self.index.insert(form.clone(), id);
        self.nodes.push(Node { form, parent });
        Some(id)
    }

    pub(crate) fn len(&self) -> usize {
        self.nodes.len()
    }

    pub(crate) fn form(&self, id: usize) -> &CanonicalForm {
        &self.nodes[id].form
    }

    pub(crate) fn find(&self, form: &CanonicalForm) -> Option<usize> {
        self.index.get(form).copied()
    }

    pub(crate) fn frontier_empty(&self) -> bool {
        self.heap.is_empty()
    }

    /// Expands the next state; returns the ids of newly discovered states.
    pub(crate) fn step(&mut self) -> Vec<usize> {
        let Some(Reverse((_, id))) = self.heap.pop() else {
            return Vec::new();
        };
        let flat = self.nodes[id].form.to_flat();
        let mut fresh = Vec::new();
        for mv in enumerate(&flat, self.data, true, self.cap, &self.frozen) {
            let next = apply_flat(&flat, self.data, &mv).expect("enumerated move applies");
            if let Some(n) = self.add(next.canonical(), id) {
                fresh.push(n);
            }
        }
        fresh
    }

    /// Moves from the root to `id`, valid on any phrase isomorphic to the root.
    pub(crate) fn path_to(&self, id: usize) -> Vec<MoveDescriptor> {
        let mut chain = vec![id];
        while self.nodes[*chain.last().unwrap()].parent != usize::MAX {
            chain.push(self.nodes[*chain.last().unwrap()].parent);
        }
        chain.reverse();
        chain
            .windows(2)
            .map(|w| self.edge(&self.nodes[w[0]].form, &self.nodes[w[1]].form))
            .collect()
    }

    fn edge(&self, from: &CanonicalForm, to: &CanonicalForm) -> MoveDescriptor {
        let flat = from.to_flat();
        enumerate(&flat, self.data, true, self.cap, &self.frozen)
            .into_iter()
            .find(|mv| apply_flat(&flat, self.data, mv).map(|f| f.canonical()).as_ref() == Ok(to))
            .expect("recorded edge exists")
    }
}

/// Inverts a path that starts on a phrase isomorphic to `start`.
pub(crate) fn invert_path(start: &Flat, data: &HomotopyData, path: &[MoveDescriptor]) -> Vec<MoveDescriptor> {
    let mut states = vec![start.clone()];
    for mv in path {
        let next = apply_flat(states.last().unwrap(), data, mv).expect("path replays");
        states.push(next);
    }
    path.iter()
        .zip(&states)
        .rev()
        .map(|(mv, before)| inverse_flat(before, mv))
        .collect()
}

/// Components empty in every given phrase. Searches never insert into them:
/// any path on the phrase with those components dropped lifts back.
pub(crate) fn idle_components(flats: &[&Flat]) -> Vec<bool> {
    let k = flats[0].lens.len();
    (0..k).map(|c| flats.iter().all(|f| f.lens[c] == 0)).collect()
}

fn letter_cap(letters: usize, budget: &SearchBudget) -> usize {
    letters + budget.max_extra_letters
}

fn check_pair(p1: &Nanophrase, p2: &Nanophrase, data: &HomotopyData) -> Result<()> {
    if p1.alphabet() != data.alphabet() || p2.alphabet() != data.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if p1.len() != p2.len() {
        return Err(Error::LengthMismatch {
            left: p1.len(),
            right: p2.len(),
        });
    }
    Ok(())
}

/// Result of [`reduce`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub phrase: Nanophrase,
    pub path: Vec<MoveDescriptor>,
    /// The state limit stopped the search before the frontier emptied.
    pub best_effort: bool,
    pub explored: usize,
}

/// Searches for the reachable phrase with the smallest
/// `(letter count, canonical form)`; stops early on an all-empty phrase.
pub fn reduce(phrase: &Nanophrase, data: &HomotopyData, budget: &SearchBudget) -> Result<Reduction> {
    if phrase.alphabet() != data.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    let flat = phrase.to_flat().0;
    let idle = idle_components(&[&flat]);
    let mut tree = Tree::new(flat.canonical(), data, letter_cap(phrase.letter_count(), budget), idle);
    let mut best = 0;
    while best_key(&tree, best).0 > 0 && tree.len() < budget.max_states && !tree.frontier_empty() {
        for id in tree.step() {
            if best_key(&tree, id) < best_key(&tree, best) {
                best = id;
            }
        }
    }
    let reached_zero = best_key(&tree, best).0 == 0;
    let path = tree.path_to(best);
    let (mut phrases, path) = replay(phrase, data, &path)?;
    Ok(Reduction {
        phrase: phrases.pop().expect("replay yields the start"),
        path,
        best_effort: !reached_zero && !tree.frontier_empty(),
        explored: tree.len(),
    })
}

fn best_key<'t>(tree: &'t Tree, id: usize) -> (usize, &'t CanonicalForm) {
    let f = tree.form(id);
    (f.letter_count(), f)
}

/// Groupings of `k` components into consecutive blocks, finest first.
fn groupings(k: usize) -> Vec<Vec<usize>> {
    if k <= 1 {
        return vec![vec![k]];
    }
    let cuts = k - 1;
    let mut out: Vec<Vec<usize>> = (0u32..1 << cuts)
        .map(|mask| {
            // bit i set: join component i+1 with i+2
            let mut sizes = vec![1];
            for i in 0..cuts {
                if mask & (1 << i) != 0 {
                    *sizes.last_mut().unwrap() += 1;
                } else {
                    sizes.push(1);
                }
            }
            sizes
        })
        .collect();
    out.sort_by_key(|s| Reverse(s.len()));
    out
}

fn merge(flat: &Flat, sizes: &[usize]) -> Flat {
    let mut lens = Vec::with_capacity(sizes.len());
    let mut at = 0;
    for &s in sizes {
        lens.push(flat.lens[at..at + s].iter().sum());
        at += s;
    }
    Flat {
        entries: flat.entries.clone(),
        lens,
        proj: flat.proj.clone(),
    }
}

fn blocks(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut at = 1;
    for &s in sizes {
        out.push((at..at + s).collect());
        at += s;
    }
    out
}

fn show<T: std::fmt::Display>(xs: &[T]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(", "))
}

/// First invariant telling `p1` and `p2` apart, trying the phrases themselves
/// and then every way of merging adjacent components. `γ` and `T` are only
/// used for diagonal homotopy data.
pub fn invariant_witness(p1: &Nanophrase, p2: &Nanophrase, data: &HomotopyData) -> Result<Option<Witness>> {
    check_pair(p1, p2, data)?;
    let (f1, f2) = (p1.to_flat().0, p2.to_flat().0);
    let alphabet = data.alphabet();
    let k = p1.len();
    // 2^(k-1) groupings; past this only the finest is tried
    let all = if k <= 10 { groupings(k) } else { vec![vec![1; k]] };
    for sizes in all {
        let s1 = signature_flat(&merge(&f1, &sizes), alphabet);
        let s2 = signature_flat(&merge(&f2, &sizes), alphabet);
        let witness = |name: &str, left: String, right: String| {
            Some(Witness::Invariant {
                name: name.into(),
                grouping: blocks(&sizes),
                left,
                right,
            })
        };
        if s1.pairing != s2.pairing {
            return Ok(witness("pairing", show(&s1.pairing), show(&s2.pairing)));
        }
        if s1.parities != s2.parities {
            return Ok(witness("parity", show(&s1.parities), show(&s2.parities)));
        }
        if !data.is_diagonal() {
            continue;
        }
        if s1.gamma != s2.gamma {
            return Ok(witness("gamma", show(&s1.gamma), show(&s2.gamma)));
        }
        if s1.t != s2.t {
            return Ok(witness("T", show(&s1.t), show(&s2.t)));
        }
    }
    Ok(None)
}

/// Bidirectional search only: `Equivalent` or `Inconclusive`.
pub fn search_equivalence(
    p1: &Nanophrase,
    p2: &Nanophrase,
    data: &HomotopyData,
    budget: &SearchBudget,
) -> Result<Verdict> {
    check_pair(p1, p2, data)?;
    let (f1, f2) = (p1.to_flat().0, p2.to_flat().0);
    let (c1, c2) = (f1.canonical(), f2.canonical());
    if c1 == c2 {
        return Ok(Verdict::Equivalent { path: Vec::new() });
    }
    let cap = letter_cap(p1.letter_count().max(p2.letter_count()), budget);
    let idle = idle_components(&[&f1, &f2]);
    let mut left = Tree::new(c1, data, cap, idle.clone());
    let mut right = Tree::new(c2, data, cap, idle);
    let mut turn_left = true;
    loop {
        let explored = left.len() + right.len();
        if explored >= budget.max_states || (left.frontier_empty() && right.frontier_empty()) {
            return Ok(Verdict::Inconclusive { explored });
        }
        // alternate sides until one is exhausted
        let expand_left = if left.frontier_empty() {
            false
        } else if right.frontier_empty() {
            true
        } else {
            turn_left
        };
        turn_left = !turn_left;
        let (grow, other) = if expand_left {
            (&mut left, &right)
        } else {
            (&mut right, &left)
        };
        let hit = grow
            .step()
            .into_iter()
            .find_map(|id| other.find(grow.form(id)).map(|o| (id, o)));
        if let Some((id, o)) = hit {
            let (l, r) = if expand_left { (id, o) } else { (o, id) };
            let mut path = left.path_to(l);
            let back = right.path_to(r);
            path.extend(invert_path(&f2.canonical().to_flat(), data, &back));
            let (_, path) = replay(p1, data, &path)?;
            return Ok(Verdict::Equivalent { path });
        }
    }
}

/// Decides homotopy where possible.
///
/// Order: isomorphism, invariants (including merged components), the catalog
/// of phrases with at most four entries (diagonal data only), then a
/// bidirectional search.
pub fn homotopic(p1: &Nanophrase, p2: &Nanophrase, data: &HomotopyData, budget: &SearchBudget) -> Result<Verdict> {
    check_pair(p1, p2, data)?;
    if p1.to_flat().0.canonical() == p2.to_flat().0.canonical() {
        return Ok(Verdict::Equivalent { path: Vec::new() });
    }
    if let Some(witness) = invariant_witness(p1, p2, data)? {
        return Ok(Verdict::Distinct { witness });
    }
    if data.is_diagonal() && p1.entry_count() <= 4 && p2.entry_count() <= 4 {
        let classified =
            classify_with_path(p1, data, budget).and_then(|a| Ok((a, classify_with_path(p2, data, budget)?)));
        let ((l1, path1), (l2, path2)) = match classified {
            Err(Error::Unclassified { explored }) => return Ok(Verdict::Inconclusive { explored }),
            other => other?,
        };
        if l1 != l2 {
            return Ok(Verdict::Distinct {
                witness: Witness::Catalog { left: l1, right: l2 },
            });
        }
        let mut path = path1;
        path.extend(invert_path(&p2.to_flat().0, data, &path2));
        let (_, path) = replay(p1, data, &path)?;
        return Ok(Verdict::Equivalent { path });
    }
    search_equivalence(p1, p2, data, budget)
}
