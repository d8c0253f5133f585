//! Homotopy of nanowords and nanophrases: moves, invariants, the
//! classification of phrases with at most four entries, and the resulting
//! atlas of irreducible curves with at most two crossings.
//!
//! ```
//! use std::sync::Arc;
//! use nanophrase::{classify, parse_phrase, Alphabet, SearchBudget};
//!
//! let alphabet = Arc::new(Alphabet::ab_swap());
//! let phrase = parse_phrase("A|BAB ; A=a B=b", &alphabet).unwrap();
//! let label = classify(&phrase, &SearchBudget::default()).unwrap();
//! assert_eq!(label.to_string(), "P13;p=1,q=2;a=a,b=b");
//! ```

pub mod alphabet;
pub mod classify;
pub mod curves;
pub mod error;
mod flat;
pub mod invariants;
pub mod moves;
pub mod phrase;
pub mod search;
pub mod text;

pub use alphabet::{orbit_decomposition, Alphabet, HomotopyData, OrbitDecomposition, Symbol};
pub use classify::{
    catalog, classify, classify_with_path, enumerate, separation_report, CatalogEntry, ClassLabel, Family, Separation,
    Shape,
};
pub use curves::{
    build_atlas, curve_alphabet, encode, is_irreducible, Atlas, AtlasEntry, Certificate, Irreducibility, Sign,
    SignedGaussCode,
};
pub use error::{Error, Result};
pub use invariants::{
    desingularize, etale_homotopic, gamma, length_parity, pairing, pi_normalize, signature, t_invariant,
    AbelianPiElement, PiElement, Signature, TValue,
};
pub use moves::{applicable_moves, apply_move, inverse_move, replay, Insertion, MoveDescriptor, MoveKind, Slot};
pub use phrase::{
    canonical_form, concat_components, is_isomorphic, validate, CanonicalForm, EtalePhrase, GaussVerdict, Letter,
    Nanophrase, ShapeToken,
};
pub use search::{homotopic, invariant_witness, reduce, search_equivalence, Reduction, SearchBudget, Verdict, Witness};
pub use text::{parse_etale, parse_phrase, render, render_etale};
