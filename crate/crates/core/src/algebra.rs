//! Finite automatic algebras: a partial automaton read as a flat groupoid.
//!
//! The universe is `Q ∪ Σ ∪ {0}`. A state times a letter follows the
//! transition when one exists; every other product is `0`.
//!
//! Elements are ordered states first, then letters, then zero. That order
//! is used for every enumeration in the crate (assignments, hom images,
//! report listings), so counterexamples and certificates are reproducible.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::AlgebraError;

/// Reserved name of the zero element.
pub const ZERO_NAME: &str = "0";

/// A value of an automatic algebra.
///
/// The derived `Ord` puts states before letters before zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Element {
    State(usize),
    Letter(usize),
    Zero,
}

impl Element {
    pub fn is_state(self) -> bool {
        matches!(self, Element::State(_))
    }

    pub fn is_letter(self) -> bool {
        matches!(self, Element::Letter(_))
    }

    pub fn is_zero(self) -> bool {
        matches!(self, Element::Zero)
    }

    pub fn state(self) -> Option<usize> {
        match self {
            Element::State(q) => Some(q),
            _ => None,
        }
    }

    pub fn letter(self) -> Option<usize> {
        match self {
            Element::Letter(a) => Some(a),
            _ => None,
        }
    }
}

/// A finite word over the letter indices of some algebra.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }
}

impl From<Vec<usize>> for Word {
    fn from(v: Vec<usize>) -> Self {
        Word(v)
    }
}

/// A finite automatic algebra given by its partial transition map.
///
/// Immutable after construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AutomaticAlgebra {
    state_names: Vec<String>,
    letter_names: Vec<String>,
    /// `delta[q][a]`, `None` where the product is 0.
    delta: Vec<Vec<Option<usize>>>,
}

impl AutomaticAlgebra {
    /// Builds an algebra from names and `(state, letter, state)` edges given by name.
    pub fn from_edges<S: AsRef<str>>(states: &[S], letters: &[S], edges: &[(S, S, S)]) -> Result<Self, AlgebraError> {
        let state_names: Vec<String> = states.iter().map(|s| s.as_ref().to_string()).collect();
        let letter_names: Vec<String> = letters.iter().map(|s| s.as_ref().to_string()).collect();
        let mut m = Self::empty_with_names(state_names, letter_names)?;
        for (q, a, r) in edges {
            let qi = m.state_index(q.as_ref()).ok_or_else(|| AlgebraError::UnknownElement(q.as_ref().to_string()))?;
            let ai = m.letter_index(a.as_ref()).ok_or_else(|| AlgebraError::UnknownElement(a.as_ref().to_string()))?;
            let ri = m.state_index(r.as_ref()).ok_or_else(|| AlgebraError::UnknownElement(r.as_ref().to_string()))?;
            m.set_edge(qi, ai, ri)?;
        }
        Ok(m)
    }

    /// Builds an algebra from an index-level table `delta[q][a]`.
    pub fn from_table(
        state_names: Vec<String>,
        letter_names: Vec<String>,
        delta: Vec<Vec<Option<usize>>>,
    ) -> Result<Self, AlgebraError> {
        let mut m = Self::empty_with_names(state_names, letter_names)?;
        if delta.len() != m.num_states() || delta.iter().any(|row| row.len() != m.num_letters()) {
            return Err(AlgebraError::BadParams("transition table has the wrong shape".into()));
        }
        for (q, row) in delta.iter().enumerate() {
            for (a, t) in row.iter().enumerate() {
                if let Some(r) = *t {
                    m.set_edge(q, a, r)?;
                }
            }
        }
        Ok(m)
    }

    fn empty_with_names(state_names: Vec<String>, letter_names: Vec<String>) -> Result<Self, AlgebraError> {
        let mut seen = HashSet::new();
        for n in state_names.iter().chain(letter_names.iter()) {
            if n == ZERO_NAME {
                return Err(AlgebraError::ReservedName(n.clone()));
            }
            if n.is_empty() || !n.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(AlgebraError::BadName(n.clone()));
            }
            if !seen.insert(n.clone()) {
                return Err(AlgebraError::DuplicateName(n.clone()));
            }
        }
        let delta = vec![vec![None; letter_names.len()]; state_names.len()];
        Ok(AutomaticAlgebra { state_names, letter_names, delta })
    }

    fn set_edge(&mut self, q: usize, a: usize, r: usize) -> Result<(), AlgebraError> {
        if q >= self.num_states() || r >= self.num_states() || a >= self.num_letters() {
            return Err(AlgebraError::IndexOutOfRange);
        }
        match self.delta[q][a] {
            Some(old) if old != r => Err(AlgebraError::ConflictingTransition {
                state: self.state_names[q].clone(),
                letter: self.letter_names[a].clone(),
                first: self.state_names[old].clone(),
                second: self.state_names[r].clone(),
            }),
            _ => {
                self.delta[q][a] = Some(r);
                Ok(())
            }
        }
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn num_letters(&self) -> usize {
        self.letter_names.len()
    }

    /// `|Q| + |Σ| + 1`.
    pub fn size(&self) -> usize {
        self.num_states() + self.num_letters() + 1
    }

    pub fn state_names(&self) -> &[String] {
        &self.state_names
    }

    pub fn letter_names(&self) -> &[String] {
        &self.letter_names
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.state_names.iter().position(|n| n == name)
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.letter_names.iter().position(|n| n == name)
    }

    /// The transition `δ(q, a)`, if defined.
    pub fn delta(&self, q: usize, a: usize) -> Option<usize> {
        self.delta[q][a]
    }

    pub fn transition_table(&self) -> &[Vec<Option<usize>>] {
        &self.delta
    }

    /// All defined edges `(q, a, r)` in index order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        self.delta
            .iter()
            .enumerate()
            .flat_map(|(q, row)| row.iter().enumerate().filter_map(move |(a, t)| t.map(|r| (q, a, r))))
    }

    /// Position of `x` in the canonical element order.
    pub fn index_of(&self, x: Element) -> usize {
        match x {
            Element::State(q) => q,
            Element::Letter(a) => self.num_states() + a,
            Element::Zero => self.num_states() + self.num_letters(),
        }
    }

    /// Inverse of [`AutomaticAlgebra::index_of`].
    pub fn element(&self, idx: usize) -> Element {
        let nq = self.num_states();
        let nl = self.num_letters();
        if idx < nq {
            Element::State(idx)
        } else if idx < nq + nl {
            Element::Letter(idx - nq)
        } else {
            debug_assert_eq!(idx, nq + nl);
            Element::Zero
        }
    }

    /// Every element in canonical order.
    pub fn elements(&self) -> Vec<Element> {
        (0..self.size()).map(|i| self.element(i)).collect()
    }

    pub fn contains(&self, x: Element) -> bool {
        match x {
            Element::State(q) => q < self.num_states(),
            Element::Letter(a) => a < self.num_letters(),
            Element::Zero => true,
        }
    }

    pub fn name(&self, x: Element) -> &str {
        match x {
            Element::State(q) => &self.state_names[q],
            Element::Letter(a) => &self.letter_names[a],
            Element::Zero => ZERO_NAME,
        }
    }

    pub fn element_by_name(&self, name: &str) -> Option<Element> {
        if name == ZERO_NAME {
            return Some(Element::Zero);
        }
        self.state_index(name).map(Element::State).or_else(|| self.letter_index(name).map(Element::Letter))
    }

    /// The groupoid product.
    pub fn product(&self, x: Element, y: Element) -> Element {
        match (x, y) {
            (Element::State(q), Element::Letter(a)) => match self.delta[q][a] {
                Some(r) => Element::State(r),
                None => Element::Zero,
            },
            _ => Element::Zero,
        }
    }

    /// Left-bracketed action of a word: `((x·w₁)·w₂)·…`.
    pub fn apply_word(&self, x: Element, w: &Word) -> Element {
        w.0.iter().fold(x, |acc, &a| self.product(acc, Element::Letter(a)))
    }

    /// `q·w` for a state, `None` when the run dies.
    pub fn run(&self, q: usize, w: &[usize]) -> Option<usize> {
        let mut cur = q;
        for &a in w {
            cur = self.delta[cur][a]?;
        }
        Some(cur)
    }

    /// Parses a word written as letter names. Single-character letter
    /// alphabets accept juxtaposition (`"abc"`); otherwise names are
    /// separated by whitespace or commas.
    pub fn parse_word(&self, src: &str) -> Result<Word, AlgebraError> {
        let src = src.trim();
        if src.is_empty() {
            return Ok(Word::empty());
        }
        let single = self.letter_names.iter().all(|n| n.chars().count() == 1);
        let tokens: Vec<String> = if single && !src.contains([' ', ',']) {
            src.chars().map(|c| c.to_string()).collect()
        } else {
            src.split(|c: char| c.is_whitespace() || c == ',').filter(|t| !t.is_empty()).map(str::to_string).collect()
        };
        tokens
            .iter()
            .map(|t| self.letter_index(t).ok_or_else(|| AlgebraError::UnknownElement(t.clone())))
            .collect::<Result<Vec<_>, _>>()
            .map(Word)
    }

    pub fn format_word(&self, w: &Word) -> String {
        let single = self.letter_names.iter().all(|n| n.chars().count() == 1);
        let names: Vec<&str> = w.0.iter().map(|&a| self.letter_names[a].as_str()).collect();
        if single {
            names.concat()
        } else {
            names.join(" ")
        }
    }

    /// Letter `a` is defined on every state.
    pub fn is_total_letter(&self, a: usize) -> bool {
        (0..self.num_states()).all(|q| self.delta[q][a].is_some())
    }

    /// Every letter is defined everywhere.
    pub fn is_total(&self) -> bool {
        (0..self.num_letters()).all(|a| self.is_total_letter(a))
    }

    /// Sub-automaton on the kept states and letters, renumbered in the original order.
    /// Edges leaving the kept state set are dropped, so the result is a subalgebra
    /// only when the kept states are closed under the kept letters.
    pub fn restrict(&self, keep_states: &[usize], keep_letters: &[usize]) -> AutomaticAlgebra {
        let mut ks: Vec<usize> = keep_states.to_vec();
        ks.sort_unstable();
        ks.dedup();
        let mut kl: Vec<usize> = keep_letters.to_vec();
        kl.sort_unstable();
        kl.dedup();
        let state_names = ks.iter().map(|&q| self.state_names[q].clone()).collect();
        let letter_names = kl.iter().map(|&a| self.letter_names[a].clone()).collect();
        let delta = ks
            .iter()
            .map(|&q| kl.iter().map(|&a| self.delta[q][a].and_then(|r| ks.iter().position(|&x| x == r))).collect())
            .collect();
        AutomaticAlgebra { state_names, letter_names, delta }
    }
}

impl fmt::Display for AutomaticAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "states {}; letters {}", self.state_names.join(" "), self.letter_names.join(" "))?;
        for (q, a, r) in self.edges() {
            write!(f, "; {} -{}-> {}", self.state_names[q], self.letter_names[a], self.state_names[r])?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn b() -> AutomaticAlgebra {
        catalog::boozer()
    }

    #[test]
    fn boozer_table_entries() {
        let m = b();
        let q = Element::State(m.state_index("q").unwrap());
        let r = Element::State(m.state_index("r").unwrap());
        let a = Element::Letter(m.letter_index("a").unwrap());
        let bb = Element::Letter(m.letter_index("b").unwrap());
        assert_eq!(m.product(q, a), r);
        assert_eq!(m.product(Element::Zero, q), Element::Zero);
        assert_eq!(m.product(a, bb), Element::Zero);
    }

    #[test]
    fn word_action_on_boozer() {
        let m = b();
        let q = Element::State(0);
        let s = Element::State(2);
        assert_eq!(m.apply_word(q, &m.parse_word("abc").unwrap()), s);
        assert_eq!(m.apply_word(q, &Word::empty()), q);
        assert_eq!(m.apply_word(q, &m.parse_word("ba").unwrap()), Element::Zero);
    }

    #[test]
    fn absorption_and_flatness_on_catalog() {
        for m in catalog::all_small() {
            for x in m.elements() {
                assert_eq!(m.product(Element::Zero, x), Element::Zero);
                assert_eq!(m.product(x, Element::Zero), Element::Zero);
                for y in m.elements() {
                    if m.product(x, y) != Element::Zero {
                        assert!(x.is_state() && y.is_letter());
                    }
                }
            }
        }
    }

    #[test]
    fn word_action_is_a_monoid_action() {
        fn words(n: usize, len: usize) -> Vec<Word> {
            let mut out = vec![Word::empty()];
            let mut frontier = vec![Word::empty()];
            for _ in 0..len {
                let mut next = Vec::new();
                for w in &frontier {
                    for a in 0..n {
                        let mut v = w.0.clone();
                        v.push(a);
                        next.push(Word(v));
                    }
                }
                out.extend(next.iter().cloned());
                frontier = next;
            }
            out
        }
        for m in catalog::all_small().into_iter().filter(|m| m.num_letters() <= 3) {
            let ws = words(m.num_letters(), 4);
            for x in m.elements() {
                for u in ws.iter().filter(|w| w.len() <= 2) {
                    for v in ws.iter().filter(|w| w.len() <= 2) {
                        assert_eq!(m.apply_word(x, &u.concat(v)), m.apply_word(m.apply_word(x, u), v));
                    }
                }
            }
        }
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(AutomaticAlgebra::from_edges(&["q", "0"], &["a"], &[]), Err(AlgebraError::ReservedName(_))));
        assert!(matches!(AutomaticAlgebra::from_edges(&["q", "a"], &["a"], &[]), Err(AlgebraError::DuplicateName(_))));
        assert!(matches!(
            AutomaticAlgebra::from_edges(&["q", "r", "s"], &["a"], &[("q", "a", "r"), ("q", "a", "s")]),
            Err(AlgebraError::ConflictingTransition { .. })
        ));
    }

    #[test]
    fn element_index_roundtrip() {
        let m = b();
        for i in 0..m.size() {
            assert_eq!(m.index_of(m.element(i)), i);
        }
        assert_eq!(m.element(m.size() - 1), Element::Zero);
    }
}
