#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use nanophrase::{applicable_moves, apply_move, Alphabet, EtalePhrase, HomotopyData, Letter, Nanophrase, Symbol};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

/// A random involution on 1–4 symbols named `s0`, `s1`, ….
pub fn random_alphabet<R: Rng>(rng: &mut R) -> Arc<Alphabet> {
    let n = rng.random_range(1..=4);
    let mut free: Vec<usize> = (0..n).collect();
    free.shuffle(rng);
    let mut tau: Vec<usize> = (0..n).collect();
    while let Some(x) = free.pop() {
        if let Some(&y) = free.last() {
            if rng.random_bool(0.5) {
                free.pop();
                tau[x] = y;
                tau[y] = x;
            }
        }
    }
    let pairs: Vec<(String, String)> = (0..n).map(|i| (format!("s{i}"), format!("s{}", tau[i]))).collect();
    Arc::new(Alphabet::new(&pairs).unwrap())
}

/// Splits `entries` into `k` consecutive (possibly empty) words.
fn split<R: Rng, T: Clone>(rng: &mut R, entries: &[T], k: usize) -> Vec<Vec<T>> {
    let mut cuts: Vec<usize> = (0..k - 1).map(|_| rng.random_range(0..=entries.len())).collect();
    cuts.sort_unstable();
    cuts.push(entries.len());
    let mut out = Vec::with_capacity(k);
    let mut at = 0;
    for c in cuts {
        out.push(entries[at..c].to_vec());
        at = c;
    }
    out
}

pub fn random_phrase<R: Rng>(rng: &mut R, alphabet: &Arc<Alphabet>, k: usize, letters: usize) -> Nanophrase {
    let mut entries: Vec<Letter> = (0..letters as u32).flat_map(|i| [Letter(i), Letter(i)]).collect();
    entries.shuffle(rng);
    let symbols: Vec<Symbol> = alphabet.symbols().collect();
    let projections: BTreeMap<Letter, Symbol> = (0..letters as u32)
        .map(|i| (Letter(i), *symbols.choose(rng).unwrap()))
        .collect();
    Nanophrase::new(alphabet.clone(), projections, split(rng, &entries, k)).unwrap()
}

/// One component; letter `i` occurs `mults[i]` times.
pub fn random_etale<R: Rng>(rng: &mut R, alphabet: &Arc<Alphabet>, mults: &[usize]) -> EtalePhrase {
    let mut entries: Vec<Letter> = mults
        .iter()
        .enumerate()
        .flat_map(|(i, &m)| std::iter::repeat_n(Letter(i as u32), m))
        .collect();
    entries.shuffle(rng);
    let symbols: Vec<Symbol> = alphabet.symbols().collect();
    let projections = (0..mults.len() as u32)
        .map(|i| (Letter(i), *symbols.choose(rng).unwrap()))
        .collect();
    EtalePhrase::new(alphabet.clone(), projections, vec![entries]).unwrap()
}

/// Applies up to `steps` random moves, inverse ones included; insertions
/// stop once the phrase has `max_letters` letters.
pub fn random_walk<R: Rng>(
    rng: &mut R,
    start: &Nanophrase,
    data: &HomotopyData,
    steps: usize,
    max_letters: usize,
) -> Nanophrase {
    let mut cur = start.clone();
    for _ in 0..steps {
        let grow = cur.letter_count() < max_letters;
        let moves = applicable_moves(&cur, data, grow);
        let Some(mv) = moves.choose(rng) else { break };
        cur = apply_move(&cur, data, mv).unwrap();
    }
    cur
}
