#![allow(dead_code)]

use autdual::{AutomaticAlgebra, Element, Word};
use proptest::prelude::*;

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Algebras with `1..=max_q` states and `1..=max_l` letters.
pub fn arb_algebra(max_q: usize, max_l: usize) -> impl Strategy<Value = AutomaticAlgebra> {
    (1..=max_q, 1..=max_l).prop_flat_map(|(nq, nl)| {
        prop::collection::vec(prop::collection::vec(prop::option::weighted(0.7, 0..nq), nl), nq)
            .prop_map(move |delta| AutomaticAlgebra::from_table(names("q", nq), names("a", nl), delta).unwrap())
    })
}

/// An algebra together with an element and two words over its letters.
pub fn arb_algebra_words(
    max_q: usize,
    max_l: usize,
    max_len: usize,
) -> impl Strategy<Value = (AutomaticAlgebra, Element, Word, Word)> {
    arb_algebra(max_q, max_l).prop_flat_map(move |m| {
        let size = m.size();
        let nl = m.num_letters();
        let word = move || prop::collection::vec(0..nl, 0..=max_len).prop_map(Word);
        (Just(m.clone()), (0..size).prop_map(move |i| m.element(i)), word(), word())
    })
}
