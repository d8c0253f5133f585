//! Normal forms of nanophrases with at most four entries, under diagonal
//! homotopy data.
//!
//! Every such phrase is homotopic to exactly one catalog representative:
//! the empty phrase, `P11` (one letter split between two components), or one
//! of the two-letter families below, padded with empty components.
//!
//! | family     | words at the listed positions | condition   |
//! |------------|-------------------------------|-------------|
//! | `P4`       | `ABAB`                        | `a ≠ τ(b)`  |
//! | `P31`      | `ABA`, `B`                    |             |
//! | `P13`      | `A`, `BAB`                    |             |
//! | `P22I`     | `AB`, `AB`                    | `a ≠ τ(b)`  |
//! | `P22II`    | `AB`, `BA`                    | `a ≠ τ(b)`  |
//! | `P211I`    | `AB`, `A`, `B`                |             |
//! | `P211II`   | `BA`, `A`, `B`                |             |
//! | `P121I`    | `A`, `AB`, `B`                |             |
//! | `P121II`   | `A`, `BA`, `B`                |             |
//! | `P112I`    | `A`, `B`, `AB`                |             |
//! | `P112II`   | `A`, `B`, `BA`                |             |
//! | `P1111I`   | `A`, `A`, `B`, `B`            |             |
//! | `P1111II`  | `A`, `B`, `A`, `B`            |             |
//! | `P1111III` | `A`, `B`, `B`, `A`            |             |

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::Serialize;

use crate::alphabet::{Alphabet, HomotopyData, Symbol};
use crate::error::{Error, Result};
use crate::flat::Flat;
use crate::invariants::{signature_flat, Signature};
use crate::moves::{replay, MoveDescriptor};
use crate::phrase::{CanonicalForm, Letter, Nanophrase};
use crate::search::{idle_components, invariant_witness, SearchBudget, Tree, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Family {
    #[serde(rename = "EMPTY")]
    Empty,
    P11,
    P4,
    P31,
    P13,
    P22I,
    P22II,
    P211I,
    P211II,
    P121I,
    P121II,
    P112I,
    P112II,
    P1111I,
    P1111II,
    P1111III,
}

/// How many entries each occupied component holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Shape {
    #[serde(rename = "()")]
    Empty,
    #[serde(rename = "(4)")]
    Four,
    #[serde(rename = "(1,1)")]
    OneOne,
    #[serde(rename = "(3,1)")]
    ThreeOne,
    #[serde(rename = "(2,2)")]
    TwoTwo,
    #[serde(rename = "(2,1,1)")]
    TwoOneOne,
    #[serde(rename = "(1,1,1,1)")]
    OneOneOneOne,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Empty => "()",
            Shape::Four => "(4)",
            Shape::OneOne => "(1,1)",
            Shape::ThreeOne => "(3,1)",
            Shape::TwoTwo => "(2,2)",
            Shape::TwoOneOne => "(2,1,1)",
            Shape::OneOneOneOne => "(1,1,1,1)",
        })
    }
}

impl Family {
    pub const ALL: [Family; 16] = [
        Family::Empty,
        Family::P11,
        Family::P4,
        Family::P31,
        Family::P13,
        Family::P22I,
        Family::P22II,
        Family::P211I,
        Family::P211II,
        Family::P121I,
        Family::P121II,
        Family::P112I,
        Family::P112II,
        Family::P1111I,
        Family::P1111II,
        Family::P1111III,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Empty => "EMPTY",
            Family::P11 => "P11",
            Family::P4 => "P4",
            Family::P31 => "P31",
            Family::P13 => "P13",
            Family::P22I => "P22I",
            Family::P22II => "P22II",
            Family::P211I => "P211I",
            Family::P211II => "P211II",
            Family::P121I => "P121I",
            Family::P121II => "P121II",
            Family::P112I => "P112I",
            Family::P112II => "P112II",
            Family::P1111I => "P1111I",
            Family::P1111II => "P1111II",
            Family::P1111III => "P1111III",
        }
    }

    /// Words placed at the label's positions, in order.
    pub fn words(self) -> &'static [&'static str] {
        match self {
            Family::Empty => &[],
            Family::P11 => &["A", "A"],
            Family::P4 => &["ABAB"],
            Family::P31 => &["ABA", "B"],
            Family::P13 => &["A", "BAB"],
            Family::P22I => &["AB", "AB"],
            Family::P22II => &["AB", "BA"],
            Family::P211I => &["AB", "A", "B"],
            Family::P211II => &["BA", "A", "B"],
            Family::P121I => &["A", "AB", "B"],
            Family::P121II => &["A", "BA", "B"],
            Family::P112I => &["A", "B", "AB"],
            Family::P112II => &["A", "B", "BA"],
            Family::P1111I => &["A", "A", "B", "B"],
            Family::P1111II => &["A", "B", "A", "B"],
            Family::P1111III => &["A", "B", "B", "A"],
        }
    }

    /// Number of component positions.
    pub fn arity(self) -> usize {
        self.words().len()
    }

    /// Number of distinct letters (0, 1 or 2).
    pub fn letter_count(self) -> usize {
        match self {
            Family::Empty => 0,
            Family::P11 => 1,
            _ => 2,
        }
    }

    /// Families excluded when `a = τ(b)`.
    pub fn needs_non_inverse(self) -> bool {
        matches!(self, Family::P4 | Family::P22I | Family::P22II)
    }

    pub fn shape(self) -> Shape {
        match self {
            Family::Empty => Shape::Empty,
            Family::P11 => Shape::OneOne,
            Family::P4 => Shape::Four,
            Family::P31 | Family::P13 => Shape::ThreeOne,
            Family::P22I | Family::P22II => Shape::TwoTwo,
            Family::P211I | Family::P211II | Family::P121I | Family::P121II | Family::P112I | Family::P112II => {
                Shape::TwoOneOne
            }
            Family::P1111I | Family::P1111II | Family::P1111III => Shape::OneOneOneOne,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse {
                pos: 0,
                msg: format!("unknown family `{s}`"),
            })
    }
}

const POSITION_NAMES: [&str; 4] = ["p", "q", "r", "s"];
const LETTER_NAMES: [&str; 2] = ["a", "b"];

/// A normal form: family, 1-based component positions, and the symbol names
/// projected from `A` (and `B`).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct ClassLabel {
    pub family: Family,
    pub positions: Vec<usize>,
    pub letters: Vec<String>,
}

impl ClassLabel {
    pub fn empty() -> Self {
        ClassLabel {
            family: Family::Empty,
            positions: Vec::new(),
            letters: Vec::new(),
        }
    }

    /// Checks arity, ordering and range of positions, symbols, and `a ≠ τ(b)`.
    pub fn validate(&self, alphabet: &Alphabet, k: usize) -> Result<()> {
        let bad = |msg: String| Err(Error::OutOfScope(format!("label {self}: {msg}")));
        if self.positions.len() != self.family.arity() || self.letters.len() != self.family.letter_count() {
            return bad("wrong number of positions or letters".into());
        }
        if self.positions.windows(2).any(|w| w[0] >= w[1]) || self.positions.iter().any(|&p| p == 0 || p > k) {
            return bad(format!("positions must increase within 1..={k}"));
        }
        let symbols = self
            .letters
            .iter()
            .map(|l| alphabet.symbol(l))
            .collect::<Result<Vec<_>>>()?;
        if self.family.needs_non_inverse() && symbols[0] == alphabet.tau(symbols[1]) {
            return bad("requires a ≠ τ(b)".into());
        }
        Ok(())
    }

    /// The representative phrase of length `k`.
    pub fn representative(&self, alphabet: &Arc<Alphabet>, k: usize) -> Result<Nanophrase> {
        self.validate(alphabet, k)?;
        let mut words = vec![Vec::new(); k];
        for (word, &p) in self.family.words().iter().zip(&self.positions) {
            words[p - 1] = word.bytes().map(|c| Letter((c - b'A') as u32)).collect();
        }
        let projections: BTreeMap<Letter, Symbol> = self
            .letters
            .iter()
            .enumerate()
            .map(|(i, name)| Ok((Letter(i as u32), alphabet.symbol(name)?)))
            .collect::<Result<_>>()?;
        Nanophrase::new(alphabet.clone(), projections, words)
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.family.name())?;
        if self.family == Family::Empty {
            return Ok(());
        }
        let pos: Vec<String> = self
            .positions
            .iter()
            .zip(POSITION_NAMES)
            .map(|(p, n)| format!("{n}={p}"))
            .collect();
        let letters: Vec<String> = self
            .letters
            .iter()
            .zip(LETTER_NAMES)
            .map(|(l, n)| format!("{n}={l}"))
            .collect();
        write!(f, ";{};{}", pos.join(","), letters.join(","))
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    /// Parses `P22II;p=1,q=3;a=a,b=a` or `EMPTY`.
    fn from_str(s: &str) -> Result<Self> {
        let err = |msg: String| Error::Parse { pos: 0, msg };
        let mut parts = s.trim().split(';');
        let family: Family = parts.next().unwrap_or_default().parse()?;
        if family == Family::Empty {
            return match parts.next() {
                None => Ok(ClassLabel::empty()),
                Some(_) => Err(err("EMPTY takes no parameters".into())),
            };
        }
        let (Some(pos), Some(letters), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err(format!("expected `{family};positions;letters`")));
        };
        let field = |item: &str, name: &str| -> Result<String> {
            match item.split_once('=') {
                Some((k, v)) if k == name && !v.is_empty() => Ok(v.to_string()),
                _ => Err(err(format!("expected `{name}=…`, found `{item}`"))),
            }
        };
        let positions = pos
            .split(',')
            .zip(POSITION_NAMES)
            .map(|(item, n)| field(item, n)?.parse::<usize>().map_err(|e| err(e.to_string())))
            .collect::<Result<Vec<_>>>()?;
        let letters = letters
            .split(',')
            .zip(LETTER_NAMES)
            .map(|(item, n)| field(item, n))
            .collect::<Result<Vec<_>>>()?;
        if positions.len() != family.arity() || letters.len() != family.letter_count() {
            return Err(err(format!("wrong number of parameters for {family}")));
        }
        Ok(ClassLabel {
            family,
            positions,
            letters,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub label: ClassLabel,
    #[serde(serialize_with = "serialize_display")]
    pub representative: Nanophrase,
    pub signature: Signature,
}

fn serialize_display<T: fmt::Display, S: serde::Serializer>(
    value: &T,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

fn increasing(k: usize, len: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, k: usize, len: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        for p in start..=k {
            cur.push(p);
            go(p + 1, k, len, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, k, len, &mut Vec::new(), &mut out);
    out
}

/// Every valid label for phrases of length `k`, with representatives and signatures.
pub fn catalog(alphabet: &Arc<Alphabet>, k: usize) -> Vec<CatalogEntry> {
    let mut labels = vec![ClassLabel::empty()];
    for family in &Family::ALL[1..] {
        for positions in increasing(k, family.arity()) {
            let letter_sets: Vec<Vec<String>> = if family.letter_count() == 1 {
                alphabet.symbols().map(|a| vec![alphabet.name(a).to_string()]).collect()
            } else {
                alphabet
                    .symbols()
                    .flat_map(|a| alphabet.symbols().map(move |b| (a, b)))
                    .filter(|&(a, b)| !family.needs_non_inverse() || a != alphabet.tau(b))
                    .map(|(a, b)| vec![alphabet.name(a).to_string(), alphabet.name(b).to_string()])
                    .collect()
            };
            for letters in letter_sets {
                labels.push(ClassLabel {
                    family: *family,
                    positions: positions.clone(),
                    letters,
                });
            }
        }
    }
    labels
        .into_iter()
        .map(|label| {
            let representative = label.representative(alphabet, k).expect("catalog labels are valid");
            let signature = signature_flat(&representative.to_flat().0, alphabet);
            CatalogEntry {
                label,
                representative,
                signature,
            }
        })
        .collect()
}

/// Normal form of `phrase` (at most four entries, diagonal data).
pub fn classify(phrase: &Nanophrase, budget: &SearchBudget) -> Result<ClassLabel> {
    let data = HomotopyData::diagonal(phrase.alphabet().clone());
    Ok(classify_with_path(phrase, &data, budget)?.0)
}

/// Like [`classify`], also returning a move path from `phrase` to the label's
/// representative (up to isomorphism).
pub fn classify_with_path(
    phrase: &Nanophrase,
    data: &HomotopyData,
    budget: &SearchBudget,
) -> Result<(ClassLabel, Vec<MoveDescriptor>)> {
    if phrase.alphabet() != data.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if !data.is_diagonal() {
        return Err(Error::NonDiagonal);
    }
    if phrase.entry_count() > 4 {
        return Err(Error::OutOfScope(format!(
            "classification covers at most 4 entries, got {}",
            phrase.entry_count()
        )));
    }
    let alphabet = phrase.alphabet();
    let flat = phrase.to_flat().0;
    let sig = signature_flat(&flat, alphabet);
    // homotopic phrases share signatures, so only these entries can be reached
    let goals: HashMap<CanonicalForm, ClassLabel> = catalog(alphabet, phrase.len())
        .into_iter()
        .filter(|e| e.signature == sig)
        .map(|e| (e.representative.to_flat().0.canonical(), e.label))
        .collect();
    if goals.is_empty() {
        return Err(Error::Unclassified { explored: 0 });
    }

    let idle = idle_components(&[&flat]);
    let mut tree = Tree::new(
        flat.canonical(),
        data,
        phrase.letter_count() + budget.max_extra_letters,
        idle,
    );
    let mut hit = goals.get(tree.form(0)).map(|l| (0, l.clone()));
    while hit.is_none() {
        if tree.len() >= budget.max_states || tree.frontier_empty() {
            return Err(Error::Unclassified { explored: tree.len() });
        }
        hit = tree
            .step()
            .into_iter()
            .find_map(|id| goals.get(tree.form(id)).map(|l| (id, l.clone())));
    }
    let (id, label) = hit.expect("loop exits on a hit");
    let (_, path) = replay(phrase, data, &tree.path_to(id))?;
    Ok((label, path))
}

/// One phrase per isomorphism class with `n` letters and `k` components.
///
/// Order: Gauss shapes (first-occurrence order), then component lengths,
/// then projections, all lexicographic; the output is sorted by canonical form.
pub fn enumerate(alphabet: &Arc<Alphabet>, k: usize, n: usize, nonempty_only: bool) -> Result<Vec<Nanophrase>> {
    if n > 3 || k > 6 || k == 0 {
        return Err(Error::OutOfScope(format!(
            "enumeration limited to n ≤ 3 letters and 1 ≤ k ≤ 6 components (n={n}, k={k})"
        )));
    }
    let mut shapes = Vec::new();
    gauss_shapes(n, &mut vec![0; n], &mut Vec::new(), &mut shapes);
    let mut lens_list = Vec::new();
    compositions(2 * n, k, nonempty_only, &mut Vec::new(), &mut lens_list);
    let symbols: Vec<Symbol> = alphabet.symbols().collect();

    let mut forms = Vec::new();
    for entries in &shapes {
        for lens in &lens_list {
            for code in 0..symbols.len().pow(n as u32) {
                let mut c = code;
                let mut proj = vec![symbols[0]; n];
                for slot in proj.iter_mut().rev() {
                    *slot = symbols[c % symbols.len()];
                    c /= symbols.len();
                }
                let flat = Flat {
                    entries: entries.clone(),
                    lens: lens.clone(),
                    proj,
                };
                forms.push(flat.canonical());
            }
        }
    }
    forms.sort();
    forms.dedup();
    Ok(forms
        .iter()
        .map(|f| Nanophrase::from_canonical(alphabet.clone(), f))
        .collect())
}

fn gauss_shapes(n: usize, used: &mut Vec<u8>, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
    if cur.len() == 2 * n {
        out.push(cur.clone());
        return;
    }
    let opened = used.iter().filter(|u| **u > 0).count();
    for l in 0..n {
        let ok = match used[l] {
            0 => l == opened,
            1 => true,
            _ => false,
        };
        if ok {
            used[l] += 1;
            cur.push(l as u16);
            gauss_shapes(n, used, cur, out);
            cur.pop();
            used[l] -= 1;
        }
    }
}

fn compositions(total: usize, parts: usize, nonempty: bool, cur: &mut Vec<u16>, out: &mut Vec<Vec<u16>>) {
    if cur.len() + 1 == parts {
        if !nonempty || total > 0 {
            cur.push(total as u16);
            out.push(cur.clone());
            cur.pop();
        }
        return;
    }
    let min = usize::from(nonempty);
    let rest = parts - cur.len() - 1;
    for first in min..=total.saturating_sub(rest * min) {
        cur.push(first as u16);
        compositions(total - first, parts, nonempty, cur, out);
        cur.pop();
    }
}

/// How a pair of catalog labels is told apart.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Separation {
    pub left: ClassLabel,
    pub right: ClassLabel,
    /// `None`: the invariants agree and only the catalog separates them.
    pub witness: Option<Witness>,
}

/// For every pair of catalog labels of length `k`, the first separating
/// invariant, or `None` where the signatures (on every merge of components) agree.
pub fn separation_report(alphabet: &Arc<Alphabet>, k: usize) -> Vec<Separation> {
    let data = HomotopyData::diagonal(alphabet.clone());
    let entries = catalog(alphabet, k);
    let mut out = Vec::new();
    for (i, x) in entries.iter().enumerate() {
        for y in &entries[i + 1..] {
            let witness =
                invariant_witness(&x.representative, &y.representative, &data).expect("same alphabet and length");
            out.push(Separation {
                left: x.label.clone(),
                right: y.label.clone(),
                witness,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::{parse_phrase, render};

    fn al() -> Arc<Alphabet> {
        Arc::new(Alphabet::ab_swap())
    }

    fn p(text: &str) -> Nanophrase {
        parse_phrase(text, &al()).unwrap()
    }

    fn labels(k: usize) -> Vec<String> {
        catalog(&al(), k).iter().map(|e| e.label.to_string()).collect()
    }

    #[test]
    fn catalog_k1() {
        assert_eq!(labels(1), vec!["EMPTY", "P4;p=1;a=a,b=a", "P4;p=1;a=b,b=b"]);
    }

    #[test]
    fn catalog_k2() {
        let l = labels(2);
        assert_eq!(l.len(), 1 + 2 + 4 + 4 + 4 + 2 + 2);
        let p22: Vec<&String> = l.iter().filter(|s| s.starts_with("P22I;")).collect();
        assert_eq!(p22, vec!["P22I;p=1,q=2;a=a,b=a", "P22I;p=1,q=2;a=b,b=b"]);
    }

    #[test]
    fn label_text_round_trip() {
        for k in 1..=4 {
            for e in catalog(&al(), k) {
                let text = e.label.to_string();
                assert_eq!(text.parse::<ClassLabel>().unwrap(), e.label);
            }
        }
        assert!("P22II;p=1;a=a,b=a".parse::<ClassLabel>().is_err());
        assert!("P9;p=1;a=a".parse::<ClassLabel>().is_err());
        let l: ClassLabel = "P22II;p=1,q=3;a=a,b=a".parse().unwrap();
        assert_eq!(render(&l.representative(&al(), 3).unwrap()), "AB|0|BA ; A=a B=a");
        let bad: ClassLabel = "P4;p=1;a=a,b=b".parse().unwrap();
        assert!(bad.validate(&al(), 1).is_err());
    }

    #[test]
    fn classify_examples() {
        let b = SearchBudget::default();
        assert_eq!(
            classify(&p("ABAB ; A=a B=a"), &b).unwrap().to_string(),
            "P4;p=1;a=a,b=a"
        );
        assert_eq!(classify(&p("AB|BA ; A=a B=b"), &b).unwrap(), ClassLabel::empty());
        assert_eq!(
            classify(&p("A|BAB ; A=a B=b"), &b).unwrap().to_string(),
            "P13;p=1,q=2;a=a,b=b"
        );
        assert_eq!(classify(&p("ABAB ; A=a B=b"), &b).unwrap(), ClassLabel::empty());
        assert!(matches!(
            classify(&p("ABCABC ; A=a B=a C=a"), &b),
            Err(Error::OutOfScope(_))
        ));
    }

    #[test]
    fn classify_ignores_letter_names() {
        let b = SearchBudget::default();
        let x = classify(&p("BA|A|B ; A=a B=b"), &b).unwrap();
        let y = classify(&p("DC|C|D ; C=a D=b"), &b).unwrap();
        assert_eq!(x, y);
        assert_eq!(x.to_string(), "P211II;p=1,q=2,r=3;a=a,b=b");
    }

    #[test]
    fn enumeration_counts() {
        let a = al();
        assert_eq!(enumerate(&a, 1, 2, false).unwrap().len(), 12);
        let two = enumerate(&a, 2, 1, true).unwrap();
        assert_eq!(
            two.iter().map(render).collect::<Vec<_>>(),
            vec!["A|A ; A=a", "A|A ; A=b"]
        );
        let zero = enumerate(&a, 1, 0, false).unwrap();
        assert_eq!(zero.iter().map(render).collect::<Vec<_>>(), vec!["0"]);
        assert!(enumerate(&a, 7, 1, false).is_err());
        assert!(enumerate(&a, 1, 4, false).is_err());
    }

    #[test]
    fn p11_separated_by_pairing() {
        for s in separation_report(&al(), 4) {
            if s.left.family == Family::P11 && s.right.family == Family::P11 {
                match s.witness {
                    Some(Witness::Invariant { name, .. }) => assert_eq!(name, "pairing"),
                    other => panic!("{other:?}"),
                }
            }
        }
    }
}
