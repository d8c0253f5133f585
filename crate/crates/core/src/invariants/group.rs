//! The group `Π = ⟨z_a | z_a z_τ(a) = 1⟩` and its abelianization `π`.
//!
//! `Π` is a free product: one infinite cyclic factor per two-element orbit of
//! `τ` (generated by `z` of the representative) and one order-2 factor per
//! fixed point.

use std::fmt;

use serde::ser::{SerializeSeq, Serializer};
use serde::Serialize;

use crate::alphabet::{Alphabet, OrbitDecomposition, Symbol};
use crate::error::{Error, Result};

/// Reduced word in `Π`: `(orbit, exponent)` syllables, adjacent orbits distinct,
/// fixed-orbit exponents always 1.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PiElement {
    syllables: Vec<(usize, i64)>,
}

impl PiElement {
    pub fn identity() -> Self {
        PiElement::default()
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// 0-based orbit indices with exponents.
    pub fn syllables(&self) -> &[(usize, i64)] {
        &self.syllables
    }

    /// `z_s`.
    pub fn generator(orbits: &OrbitDecomposition, s: Symbol) -> Self {
        let mut out = PiElement::identity();
        out.push_symbol(orbits, s, 1);
        out
    }

    /// Right-multiplies by `z_s^sign`.
    pub fn push_symbol(&mut self, orbits: &OrbitDecomposition, s: Symbol, sign: i64) {
        let o = orbits.orbit(s);
        let exp = if orbits.is_fixed_orbit(o) {
            1
        } else {
            orbits.epsilon(s) * sign
        };
        self.push(orbits, o, exp);
    }

    fn push(&mut self, orbits: &OrbitDecomposition, orbit: usize, exp: i64) {
        let fixed = orbits.is_fixed_orbit(orbit);
        let exp = if fixed { exp.rem_euclid(2) } else { exp };
        if exp == 0 {
            return;
        }
        match self.syllables.last_mut() {
            Some((o, e)) if *o == orbit => {
                let sum = *e + exp;
                let sum = if fixed { sum.rem_euclid(2) } else { sum };
                if sum == 0 {
                    self.syllables.pop();
                } else {
                    *e = sum;
                }
            }
            _ => self.syllables.push((orbit, exp)),
        }
    }

    pub fn mul(&self, rhs: &PiElement, orbits: &OrbitDecomposition) -> PiElement {
        let mut out = self.clone();
        for &(o, e) in &rhs.syllables {
            out.push(orbits, o, e);
        }
        out
    }

    pub fn inverse(&self, orbits: &OrbitDecomposition) -> PiElement {
        let mut out = PiElement::identity();
        for &(o, e) in self.syllables.iter().rev() {
            out.push(orbits, o, -e);
        }
        out
    }

    pub fn abelianize(&self, orbits: &OrbitDecomposition) -> AbelianPiElement {
        let mut out = AbelianPiElement::identity(orbits);
        for &(o, e) in &self.syllables {
            out.add(orbits, o, e);
        }
        out
    }
}

impl Serialize for PiElement {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.syllables.len()))?;
        for &(o, e) in &self.syllables {
            seq.serialize_element(&(o + 1, e))?;
        }
        seq.end()
    }
}

impl fmt::Display for PiElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("1");
        }
        for (i, (o, e)) in self.syllables.iter().enumerate() {
            if i > 0 {
                f.write_str("·")?;
            }
            if *e == 1 {
                write!(f, "z{}", o + 1)?;
            } else {
                write!(f, "z{}^{}", o + 1, e)?;
            }
        }
        Ok(())
    }
}

/// Normalizes a raw product `z_{s_1}^{±1} ⋯ z_{s_n}^{±1}` in `Π`.
pub fn pi_normalize(alphabet: &Alphabet, raw: &[(Symbol, i8)]) -> Result<PiElement> {
    let orbits = alphabet.orbits();
    let mut out = PiElement::identity();
    for &(s, sign) in raw {
        if !alphabet.contains(s) {
            return Err(Error::UnknownSymbol(format!("#{}", s.0)));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::OutOfScope(format!("exponent {sign} is not ±1")));
        }
        out.push_symbol(orbits, s, sign as i64);
    }
    Ok(out)
}

/// Element of `π`: one integer per two-element orbit, one bit per fixed point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct AbelianPiElement {
    exponents: Vec<i64>,
}

impl AbelianPiElement {
    pub fn identity(orbits: &OrbitDecomposition) -> Self {
        AbelianPiElement {
            exponents: vec![0; orbits.count()],
        }
    }

    /// Image of the symbol `s`.
    pub fn of_symbol(orbits: &OrbitDecomposition, s: Symbol) -> Self {
        let mut out = AbelianPiElement::identity(orbits);
        out.mul_symbol(orbits, s);
        out
    }

    pub fn mul_symbol(&mut self, orbits: &OrbitDecomposition, s: Symbol) {
        let o = orbits.orbit(s);
        self.add(orbits, o, orbits.epsilon(s));
    }

    fn add(&mut self, orbits: &OrbitDecomposition, orbit: usize, exp: i64) {
        let slot = &mut self.exponents[orbit];
        *slot += exp;
        if orbits.is_fixed_orbit(orbit) {
            *slot = slot.rem_euclid(2);
        }
    }

    pub fn mul(&self, rhs: &AbelianPiElement, orbits: &OrbitDecomposition) -> Self {
        let mut out = self.clone();
        for (o, &e) in rhs.exponents.iter().enumerate() {
            out.add(orbits, o, e);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.exponents.iter().all(|e| *e == 0)
    }

    pub fn exponents(&self) -> &[i64] {
        &self.exponents
    }
}

impl fmt::Display for AbelianPiElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.exponents.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixed() -> Alphabet {
        Alphabet::parse("a b\nb a\nc c\n").unwrap()
    }

    #[test]
    fn defining_relations() {
        let al = mixed();
        let (a, b, c) = (Symbol(0), Symbol(1), Symbol(2));
        assert!(pi_normalize(&al, &[(a, 1), (b, 1)]).unwrap().is_identity());
        assert!(pi_normalize(&al, &[(c, 1), (c, 1)]).unwrap().is_identity());
        assert!(pi_normalize(&al, &[(a, 1), (a, 1), (b, 1), (b, 1)])
            .unwrap()
            .is_identity());
        // z_c^{-1} = z_c
        assert_eq!(
            pi_normalize(&al, &[(c, -1)]).unwrap(),
            pi_normalize(&al, &[(c, 1)]).unwrap()
        );
    }

    #[test]
    fn free_product_does_not_commute() {
        let al = mixed();
        let (a, c) = (Symbol(0), Symbol(2));
        let ac = pi_normalize(&al, &[(a, 1), (c, 1)]).unwrap();
        let ca = pi_normalize(&al, &[(c, 1), (a, 1)]).unwrap();
        assert_ne!(ac, ca);
        assert_eq!(ac.abelianize(al.orbits()), ca.abelianize(al.orbits()));
        assert_eq!(ac.syllables(), &[(0, 1), (1, 1)]);
    }

    #[test]
    fn unknown_symbol() {
        let al = mixed();
        assert!(matches!(
            pi_normalize(&al, &[(Symbol(7), 1)]),
            Err(Error::UnknownSymbol(_))
        ));
    }

    #[test]
    fn abelian_fixed_entries_are_mod_two() {
        let al = mixed();
        let o = al.orbits();
        let mut x = AbelianPiElement::of_symbol(o, Symbol(2));
        x.mul_symbol(o, Symbol(2));
        assert!(x.is_identity());
        let mut y = AbelianPiElement::of_symbol(o, Symbol(0));
        y.mul_symbol(o, Symbol(0));
        assert_eq!(y.exponents(), &[2, 0]);
    }

    #[test]
    fn inverse_cancels() {
        let al = mixed();
        let o = al.orbits();
        let g = pi_normalize(&al, &[(Symbol(0), 1), (Symbol(2), 1), (Symbol(1), 1), (Symbol(1), 1)]).unwrap();
        assert!(g.mul(&g.inverse(o), o).is_identity());
    }
}
