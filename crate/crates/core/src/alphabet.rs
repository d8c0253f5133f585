//! Symbol sets with an involution, their orbit decomposition, and homotopy data.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Index of a symbol in its [`Alphabet`]'s declared order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Symbol(pub u8);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite symbol set `α` with an involution `τ` and a declared total order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    tau: Vec<Symbol>,
    orbits: OrbitDecomposition,
}

impl Alphabet {
    /// Builds an alphabet from `(symbol, τ(symbol))` pairs listed in declared order.
    pub fn new<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Alphabet("no symbols".into()));
        }
        if pairs.len() > u8::MAX as usize {
            return Err(Error::Alphabet("too many symbols".into()));
        }
        let names: Vec<String> = pairs.iter().map(|(s, _)| s.as_ref().to_string()).collect();
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() || name.contains(|c: char| c.is_whitespace() || c == '=') {
                return Err(Error::Alphabet(format!("invalid symbol name `{name}`")));
            }
            if names[..i].contains(name) {
                return Err(Error::Alphabet(format!("duplicate symbol `{name}`")));
            }
        }
        let mut tau = Vec::with_capacity(names.len());
        for (_, image) in pairs {
            let image = image.as_ref();
            let idx = names
                .iter()
                .position(|n| n == image)
                .ok_or_else(|| Error::Alphabet(format!("τ image `{image}` is not a symbol")))?;
            tau.push(Symbol(idx as u8));
        }
        for (i, t) in tau.iter().enumerate() {
            if tau[t.index()].index() != i {
                return Err(Error::Alphabet(format!("τ is not an involution at `{}`", names[i])));
            }
        }
        let orbits = OrbitDecomposition::compute(&tau);
        Ok(Alphabet { names, tau, orbits })
    }

    /// `α₀ = {a, b}` with `τ` swapping `a` and `b`.
    pub fn ab_swap() -> Self {
        Alphabet::new(&[("a", "b"), ("b", "a")]).expect("built-in alphabet")
    }

    /// Parses the alphabet file format: one `symbol tau(symbol)` pair per line.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::Alphabet(format!(
                    "line {}: expected `symbol tau(symbol)`",
                    lineno + 1
                )));
            }
            pairs.push((fields[0], fields[1]));
        }
        Alphabet::new(&pairs)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + '_ {
        (0..self.names.len()).map(|i| Symbol(i as u8))
    }

    pub fn tau(&self, s: Symbol) -> Symbol {
        self.tau[s.index()]
    }

    pub fn name(&self, s: Symbol) -> &str {
        &self.names[s.index()]
    }

    pub fn symbol(&self, name: &str) -> Result<Symbol> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Symbol(i as u8))
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))
    }

    pub fn contains(&self, s: Symbol) -> bool {
        s.index() < self.names.len()
    }

    pub fn orbits(&self) -> &OrbitDecomposition {
        &self.orbits
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in self.symbols() {
            writeln!(f, "{} {}", self.name(s), self.name(self.tau(s)))?;
        }
        Ok(())
    }
}

/// Orbits of `τ`: two-element orbits first (orbit indices `0..l`), then fixed
/// points (`l..l+m`), each group in declared symbol order. The representative
/// of a two-element orbit is its earlier symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    two_orbits: Vec<(Symbol, Symbol)>,
    fixed_orbits: Vec<Symbol>,
    orbit_of: Vec<usize>,
    is_rep: Vec<bool>,
}

impl OrbitDecomposition {
    fn compute(tau: &[Symbol]) -> Self {
        let mut two_orbits = Vec::new();
        let mut fixed_orbits = Vec::new();
        for (i, t) in tau.iter().enumerate() {
            if t.index() == i {
                fixed_orbits.push(Symbol(i as u8));
            } else if i < t.index() {
                two_orbits.push((Symbol(i as u8), *t));
            }
        }
        let l = two_orbits.len();
        let mut orbit_of = vec![0; tau.len()];
        let mut is_rep = vec![false; tau.len()];
        for (o, (rep, other)) in two_orbits.iter().enumerate() {
            orbit_of[rep.index()] = o;
            orbit_of[other.index()] = o;
            is_rep[rep.index()] = true;
        }
        for (o, s) in fixed_orbits.iter().enumerate() {
            orbit_of[s.index()] = l + o;
            is_rep[s.index()] = true;
        }
        OrbitDecomposition {
            two_orbits,
            fixed_orbits,
            orbit_of,
            is_rep,
        }
    }

    pub fn two_orbits(&self) -> &[(Symbol, Symbol)] {
        &self.two_orbits
    }

    pub fn fixed_orbits(&self) -> &[Symbol] {
        &self.fixed_orbits
    }

    /// Number of two-element orbits.
    pub fn l(&self) -> usize {
        self.two_orbits.len()
    }

    /// Number of fixed points.
    pub fn m(&self) -> usize {
        self.fixed_orbits.len()
    }

    pub fn count(&self) -> usize {
        self.l() + self.m()
    }

    /// 0-based orbit index of `s`.
    pub fn orbit(&self, s: Symbol) -> usize {
        self.orbit_of[s.index()]
    }

    pub fn is_fixed_orbit(&self, orbit: usize) -> bool {
        orbit >= self.l()
    }

    pub fn representative(&self, orbit: usize) -> Symbol {
        if orbit < self.l() {
            self.two_orbits[orbit].0
        } else {
            self.fixed_orbits[orbit - self.l()]
        }
    }

    pub fn representatives(&self) -> Vec<Symbol> {
        (0..self.count()).map(|o| self.representative(o)).collect()
    }

    /// True for representatives, including every fixed point.
    pub fn is_representative(&self, s: Symbol) -> bool {
        self.is_rep[s.index()]
    }

    /// `ε`: +1 on representatives and fixed points, −1 on the partner of a representative.
    pub fn epsilon(&self, s: Symbol) -> i64 {
        if self.is_rep[s.index()] {
            1
        } else {
            -1
        }
    }
}

/// Decomposes the involution of `alphabet` into orbits.
pub fn orbit_decomposition(alphabet: &Alphabet) -> OrbitDecomposition {
    alphabet.orbits().clone()
}

/// Homotopy data `(α, S)`: the alphabet plus the triple set gating move 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomotopyData {
    alphabet: Arc<Alphabet>,
    triples: BTreeSet<[Symbol; 3]>,
    diagonal: bool,
}

impl HomotopyData {
    pub fn new(alphabet: Arc<Alphabet>, triples: BTreeSet<[Symbol; 3]>) -> Result<Self> {
        if let Some(t) = triples.iter().find(|t| t.iter().any(|s| !alphabet.contains(*s))) {
            return Err(Error::UnknownSymbol(format!("{:?}", t)));
        }
        let diagonal = triples.len() == alphabet.len() && alphabet.symbols().all(|s| triples.contains(&[s, s, s]));
        Ok(HomotopyData {
            alphabet,
            triples,
            diagonal,
        })
    }

    /// `S = {(x, x, x)}`.
    pub fn diagonal(alphabet: Arc<Alphabet>) -> Self {
        let triples = alphabet.symbols().map(|s| [s, s, s]).collect();
        HomotopyData {
            alphabet,
            triples,
            diagonal: true,
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn is_diagonal(&self) -> bool {
        self.diagonal
    }

    pub fn allows(&self, a: Symbol, b: Symbol, c: Symbol) -> bool {
        if self.diagonal {
            a == b && b == c
        } else {
            self.triples.contains(&[a, b, c])
        }
    }

    pub fn triples(&self) -> &BTreeSet<[Symbol; 3]> {
        &self.triples
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ab_swap_has_one_two_orbit() {
        let a = Alphabet::ab_swap();
        let o = a.orbits();
        assert_eq!((o.l(), o.m()), (1, 0));
        assert_eq!(o.two_orbits(), &[(Symbol(0), Symbol(1))]);
        assert_eq!(o.representative(0), a.symbol("a").unwrap());
        assert_eq!(o.epsilon(Symbol(1)), -1);
    }

    #[test]
    fn single_fixed_point() {
        let a = Alphabet::new(&[("c", "c")]).unwrap();
        let o = orbit_decomposition(&a);
        assert_eq!((o.l(), o.m()), (0, 1));
        assert!(o.is_representative(Symbol(0)));
    }

    #[test]
    fn mixed_orbits_are_ordered_two_orbits_first() {
        let a = Alphabet::parse("a b\nb a\nc c\n").unwrap();
        let o = a.orbits();
        assert_eq!((o.l(), o.m()), (1, 1));
        assert_eq!(o.orbit(Symbol(2)), 1);
        assert_eq!(o.representatives(), vec![Symbol(0), Symbol(2)]);

        // a fixed point declared first still sits after the two-orbits
        let a = Alphabet::parse("c c\na b\nb a\n").unwrap();
        assert_eq!(a.orbits().orbit(a.symbol("c").unwrap()), 1);
        assert_eq!(a.orbits().orbit(a.symbol("a").unwrap()), 0);
    }

    #[test]
    fn rejects_non_involution() {
        assert!(Alphabet::parse("a b\nb c\nc a\n").is_err());
        assert!(Alphabet::parse("a z\n").is_err());
        assert!(Alphabet::parse("a a\na a\n").is_err());
        assert!(Alphabet::parse("# nothing\n").is_err());
    }

    #[test]
    fn diagonal_flag() {
        let a = Arc::new(Alphabet::ab_swap());
        let d = HomotopyData::diagonal(a.clone());
        assert!(d.is_diagonal());
        assert!(d.allows(Symbol(0), Symbol(0), Symbol(0)));
        assert!(!d.allows(Symbol(0), Symbol(1), Symbol(0)));
        let same = HomotopyData::new(a.clone(), d.triples().clone()).unwrap();
        assert!(same.is_diagonal());
        let mut more = d.triples().clone();
        more.insert([Symbol(0), Symbol(1), Symbol(0)]);
        assert!(!HomotopyData::new(a, more).unwrap().is_diagonal());
    }
}
