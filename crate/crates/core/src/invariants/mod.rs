//! Homotopy invariants of nanophrases: `γ`, `T`, the pairing and length parities.

mod desing;
mod group;

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::alphabet::{Alphabet, HomotopyData};
use crate::error::{Error, Result};
use crate::flat::Flat;
use crate::phrase::Nanophrase;

pub use desing::{desingularize, etale_homotopic};
pub use group::{pi_normalize, AbelianPiElement, PiElement};

/// An element of `∏ K_(p,q)`. Keys are 1-based orbit pairs; absent keys are 0.
/// Entries with `p > l` or `q > l` live in `ℤ/2` and are stored as 0 or 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TValue {
    entries: BTreeMap<(usize, usize), i64>,
}

impl TValue {
    pub fn zero() -> Self {
        TValue::default()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, p: usize, q: usize) -> i64 {
        self.entries.get(&(p, q)).copied().unwrap_or(0)
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), i64)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    fn add(&mut self, l: usize, p: usize, q: usize, v: i64) {
        let slot = self.entries.entry((p, q)).or_insert(0);
        *slot += v;
        if p > l || q > l {
            *slot = slot.rem_euclid(2);
        }
        if *slot == 0 {
            self.entries.remove(&(p, q));
        }
    }
}

impl Serialize for TValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for ((p, q), v) in &self.entries {
            map.serialize_entry(&format!("({p},{q})"), v)?;
        }
        map.end()
    }
}

impl fmt::Display for TValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        for (i, ((p, q), v)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "({p},{q})={v}")?;
        }
        Ok(())
    }
}

/// All four invariants of one phrase.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub k: usize,
    pub parities: Vec<u8>,
    pub gamma: Vec<PiElement>,
    pub t: Vec<TValue>,
    pub pairing: Vec<AbelianPiElement>,
}

pub(crate) fn gamma_flat(flat: &Flat, alphabet: &Alphabet) -> Vec<PiElement> {
    let orbits = alphabet.orbits();
    let partner = flat.partners();
    let mut out = Vec::with_capacity(flat.lens.len());
    let mut at = 0;
    for &len in &flat.lens {
        let mut g = PiElement::identity();
        for (i, &e) in flat.entries.iter().enumerate().skip(at).take(len as usize) {
            let s = flat.proj[e as usize];
            let s = if partner[i] > i { s } else { alphabet.tau(s) };
            g.push_symbol(orbits, s, 1);
        }
        out.push(g);
        at += len as usize;
    }
    out
}

pub(crate) fn t_flat(flat: &Flat, alphabet: &Alphabet) -> Vec<TValue> {
    let orbits = alphabet.orbits();
    let l = orbits.l();
    let comp = flat.component_of();
    let occ: Vec<(usize, usize)> = flat.occurrences().into_iter().flatten().collect();
    let mut out = vec![TValue::zero(); flat.lens.len()];
    for &(a1, a2) in &occ {
        if comp[a1] != comp[a2] {
            continue;
        }
        let sa = flat.proj[flat.entries[a1] as usize];
        let p = orbits.orbit(sa) + 1;
        let eps = orbits.epsilon(sa);
        for &(b1, b2) in &occ {
            let sb = flat.proj[flat.entries[b1] as usize];
            let q = orbits.orbit(sb) + 1;
            let sigma = if a1 < b1 && b1 < a2 && a2 < b2 {
                if orbits.is_representative(sb) {
                    1
                } else {
                    -1
                }
            } else if b1 < a1 && a1 < b2 && b2 < a2 {
                // |B| = τ(rep) holds for fixed points and non-representatives
                if !orbits.is_representative(sb) || orbits.is_fixed_orbit(q - 1) {
                    1
                } else {
                    -1
                }
            } else {
                continue;
            };
            out[comp[a1]].add(l, p, q, eps * sigma);
        }
    }
    out
}

pub(crate) fn pairing_flat(flat: &Flat, alphabet: &Alphabet) -> Vec<AbelianPiElement> {
    let orbits = alphabet.orbits();
    let k = flat.lens.len();
    let comp = flat.component_of();
    let mut grid = vec![AbelianPiElement::identity(orbits); k * k];
    for (a1, a2) in flat.occurrences().into_iter().flatten() {
        let (i, j) = (comp[a1], comp[a2]);
        if i != j {
            grid[i * k + j].mul_symbol(orbits, flat.proj[flat.entries[a1] as usize]);
        }
    }
    let mut out = Vec::with_capacity(k * k.saturating_sub(1) / 2);
    for i in 0..k {
        for j in i + 1..k {
            out.push(grid[i * k + j].clone());
        }
    }
    out
}

pub(crate) fn parity_flat(flat: &Flat) -> Vec<u8> {
    flat.lens.iter().map(|l| (l % 2) as u8).collect()
}

/// Signature without the diagonal check; `T` is only meaningful for diagonal `S`.
pub(crate) fn signature_flat(flat: &Flat, alphabet: &Alphabet) -> Signature {
    Signature {
        k: flat.lens.len(),
        parities: parity_flat(flat),
        gamma: gamma_flat(flat, alphabet),
        t: t_flat(flat, alphabet),
        pairing: pairing_flat(flat, alphabet),
    }
}

/// `γ(P) ∈ Π^k`.
pub fn gamma(phrase: &Nanophrase) -> Vec<PiElement> {
    gamma_flat(&phrase.to_flat().0, phrase.alphabet())
}

/// `T(P)`, one value per component. Defined for diagonal homotopy data only.
pub fn t_invariant(phrase: &Nanophrase, data: &HomotopyData) -> Result<Vec<TValue>> {
    if phrase.alphabet() != data.alphabet() {
        return Err(Error::AlphabetMismatch);
    }
    if !data.is_diagonal() {
        return Err(Error::NonDiagonal);
    }
    Ok(t_flat(&phrase.to_flat().0, phrase.alphabet()))
}

/// `(w_i, w_j)_P` for `i < j`, ordered `(1,2), (1,3), …, (k−1,k)`.
pub fn pairing(phrase: &Nanophrase) -> Vec<AbelianPiElement> {
    pairing_flat(&phrase.to_flat().0, phrase.alphabet())
}

/// `|w_i| mod 2` per component.
pub fn length_parity(phrase: &Nanophrase) -> Vec<u8> {
    phrase.words().iter().map(|w| (w.len() % 2) as u8).collect()
}

pub fn signature(phrase: &Nanophrase, data: &HomotopyData) -> Result<Signature> {
    let t = t_invariant(phrase, data)?;
    Ok(Signature {
        k: phrase.len(),
        parities: length_parity(phrase),
        gamma: gamma(phrase),
        t,
        pairing: pairing(phrase),
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::alphabet::Symbol;
    use crate::text::parse_phrase;

    fn data() -> HomotopyData {
        HomotopyData::diagonal(Arc::new(Alphabet::ab_swap()))
    }

    fn p(text: &str) -> Nanophrase {
        parse_phrase(text, data().alphabet()).unwrap()
    }

    #[test]
    fn gamma_examples() {
        let al = Alphabet::ab_swap();
        let o = al.orbits();
        let (a, b) = (Symbol(0), Symbol(1));
        assert_eq!(
            gamma(&p("A|A ; A=a")),
            vec![PiElement::generator(o, a), PiElement::generator(o, b)]
        );
        assert!(gamma(&p("0|0|0")).iter().all(PiElement::is_identity));
        assert!(gamma(&p("ABAB ; A=a B=b"))[0].is_identity());
        // z_a z_a z_b z_b
        assert!(gamma(&p("ABAB ; A=a B=a"))[0].is_identity());
        let g = gamma(&p("AB|BA ; A=a B=a"));
        assert_eq!(g[0].syllables(), &[(0, 2)]);
        assert_eq!(g[1].syllables(), &[(0, -2)]);
        let g = gamma(&p("AABB ; A=a B=a"));
        assert!(g[0].is_identity());
    }

    #[test]
    fn t_examples() {
        let d = data();
        let t = t_invariant(&p("AB|AB ; A=a B=b"), &d).unwrap();
        assert!(t.iter().all(TValue::is_zero));

        let t = t_invariant(&p("ABA|B ; A=a B=b"), &d).unwrap();
        assert_eq!(t[0].get(1, 1), -1);
        assert_eq!(t[0].entries().count(), 1);
        assert!(t[1].is_zero());

        let t = t_invariant(&p("ABAB ; A=a B=b"), &d).unwrap();
        assert!(t[0].is_zero());

        let t = t_invariant(&p("ABAB ; A=a B=a"), &d).unwrap();
        // T(A) = +1·(+1), T(B) = +1·(−1)
        assert!(t[0].is_zero());

        let t = t_invariant(&p("A|BAB ; A=a B=b"), &d).unwrap();
        assert!(t[0].is_zero());
        // σ(B, A) = −1 and ε(B) = −1
        assert_eq!(t[1].get(1, 1), 1);
    }

    #[test]
    fn t_rejects_non_diagonal() {
        let al = Arc::new(Alphabet::ab_swap());
        let s = [[Symbol(0), Symbol(0), Symbol(1)]].into_iter().collect();
        let d = HomotopyData::new(al.clone(), s).unwrap();
        let ph = parse_phrase("AA ; A=a", &al).unwrap();
        assert_eq!(t_invariant(&ph, &d), Err(Error::NonDiagonal));
    }

    #[test]
    fn t_fixed_orbits_are_mod_two() {
        let al = Arc::new(Alphabet::parse("a b\nb a\nc c\n").unwrap());
        let d = HomotopyData::diagonal(al.clone());
        let ph = parse_phrase("ABAB ; A=c B=c", &al).unwrap();
        let t = t_invariant(&ph, &d).unwrap();
        // T(A) = 1 and T(B) = 1 at (2,2), summing to 0 mod 2
        assert!(t[0].is_zero());
        let ph = parse_phrase("ABA|B ; A=c B=a", &al).unwrap();
        let t = t_invariant(&ph, &d).unwrap();
        assert_eq!(t[0].get(2, 1), 1);
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&p("A|A ; A=a"))[0].exponents(), &[1]);
        assert_eq!(pairing(&p("AB|AB ; A=a B=a"))[0].exponents(), &[2]);
        assert!(pairing(&p("AB|BA ; A=a B=b"))[0].is_identity());
        let pr = pairing(&p("A|B|AB ; A=a B=b"));
        assert_eq!(pr.len(), 3);
        assert_eq!(pr[0].exponents(), &[0]);
        assert_eq!(pr[1].exponents(), &[1]);
        assert_eq!(pr[2].exponents(), &[-1]);
    }

    #[test]
    fn parity_examples() {
        assert_eq!(length_parity(&p("ABA|B ; A=a B=b")), vec![1, 1]);
        assert_eq!(length_parity(&p("AB|AB ; A=a B=b")), vec![0, 0]);
        assert_eq!(length_parity(&p("0|ABAB ; A=a B=b")), vec![0, 0]);
    }

    #[test]
    fn signatures_separate() {
        let d = data();
        assert_ne!(
            signature(&p("A|A ; A=a"), &d).unwrap(),
            signature(&p("0|0"), &d).unwrap()
        );
        let x = signature(&p("ABA|B ; A=a B=b"), &d).unwrap();
        let y = signature(&p("ABA|B ; A=b B=b"), &d).unwrap();
        assert_eq!(x.pairing, y.pairing);
        assert_eq!(x.gamma, y.gamma);
        assert_ne!(x.t, y.t);
    }

    #[test]
    fn tvalue_json() {
        let t = t_invariant(&p("ABA|B ; A=a B=b"), &data()).unwrap();
        assert_eq!(serde_json::to_string(&t[0]).unwrap(), r#"{"(1,1)":-1}"#);
        assert_eq!(serde_json::to_string(&t[1]).unwrap(), "{}");
    }
}
