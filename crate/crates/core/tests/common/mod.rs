#![allow(dead_code)]

pub mod oracle;

use khlab::braid::{braid_closure, parse_braid, BraidWord, Letter};
use khlab::cube::build_complex;
use khlab::diagram::Diagram;
use khlab::homology::{homology_table, BigradedGroup};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const CAP: usize = 20;

/// Positive braid words exercised by the structure checks.
pub const POSITIVE_CORPUS: &[&str] =
    &["1 1 1", "1 1 1 1 1", "1 2 1 2", "1 2 1 2 1 2", "1 1 2 2", "1 2 2 1", "p=4; 1 3 1 3", "p=4; 1 2 3 1 2 3"];

pub fn word(text: &str) -> BraidWord {
    parse_braid(text).unwrap_or_else(|e| panic!("{text}: {e}"))
}

pub fn closure(text: &str) -> Diagram {
    braid_closure(&word(text))
}

pub fn table(d: &Diagram) -> BigradedGroup {
    homology_table(&build_complex(d, CAP).unwrap()).unwrap()
}

/// A braid word on 2..=max_strands strands with 0..=max_len letters of either sign.
pub fn random_word(rng: &mut ChaCha8Rng, max_strands: usize, max_len: usize, positive: bool) -> BraidWord {
    let strands = rng.gen_range(2..=max_strands);
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| {
            let g = rng.gen_range(1..strands);
            if positive || rng.gen_bool(0.5) {
                Letter::positive(g)
            } else {
                Letter::negative(g)
            }
        })
        .collect();
    BraidWord::new(strands, letters).unwrap()
}

pub fn random_order(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    order
}
