//! Fixtures shared by the benchmarks.

use std::sync::Arc;

use nanophrase::{parse_phrase, Alphabet, Nanophrase};

pub fn ab() -> Arc<Alphabet> {
    Arc::new(Alphabet::ab_swap())
}

pub fn phrase(text: &str) -> Nanophrase {
    parse_phrase(text, &ab()).expect("fixture parses")
}

/// Phrases of growing size used across benchmarks.
pub const FIXTURES: [(&str, &str); 4] = [
    ("two-letters", "AB|BA ; A=a B=b"),
    ("four-letters", "ABCD|DCBA ; A=a B=b C=a D=b"),
    ("six-letters", "ABCDEF|FEDCBA ; A=a B=b C=a D=b E=a F=b"),
    ("six-letters-four-words", "ABC|DEF|CBA|FED ; A=a B=b C=a D=b E=a F=b"),
];
