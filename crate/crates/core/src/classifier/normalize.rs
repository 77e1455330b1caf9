//! Quasi-variety preserving reductions.

use crate::algebra::{AutomaticAlgebra, Element};
use crate::error::ClassifyError;

use super::certificate::{ReductionKind, ReductionStep};

enum Removal {
    Letter(usize),
    State(usize),
}

fn find_step(m: &AutomaticAlgebra) -> Option<(ReductionKind, Removal, Element)> {
    let nq = m.num_states();
    let nl = m.num_letters();
    if nq > 0 {
        if let Some(a) = (0..nl).find(|&a| (0..nq).all(|q| m.delta(q, a).is_none())) {
            return Some((ReductionKind::DropUndefinedLetter, Removal::Letter(a), Element::State(0)));
        }
    }
    for a in 0..nl {
        for b in 0..a {
            if (0..nq).all(|q| m.delta(q, a) == m.delta(q, b)) {
                return Some((ReductionKind::DropRepeatedLetter, Removal::Letter(a), Element::Letter(b)));
            }
        }
    }
    if nl > 0 {
        let in_range = |q: usize| (0..nq).any(|p| (0..nl).any(|a| m.delta(p, a) == Some(q)));
        if let Some(q) = (0..nq).find(|&q| (0..nl).all(|a| m.delta(q, a).is_none()) && !in_range(q)) {
            return Some((ReductionKind::DropIsolatedState, Removal::State(q), Element::Letter(0)));
        }
        for q in 0..nq {
            if in_range(q) {
                continue;
            }
            if let Some(r) = (0..nq).find(|&r| r != q && (0..nl).all(|a| m.delta(q, a) == m.delta(r, a))) {
                return Some((ReductionKind::DropRedundantState, Removal::State(q), Element::State(r)));
            }
        }
    }
    None
}

fn element_in(n: &AutomaticAlgebra, m: &AutomaticAlgebra, x: Element) -> Element {
    match x {
        Element::State(q) => Element::State(n.state_index(&m.state_names()[q]).expect("kept state")),
        Element::Letter(a) => Element::Letter(n.letter_index(&m.letter_names()[a]).expect("kept letter")),
        Element::Zero => Element::Zero,
    }
}

/// Checks that `φ: M → N²` (in `M`'s element order) is an injective homomorphism.
pub fn check_pair_embedding(m: &AutomaticAlgebra, n: &AutomaticAlgebra, phi: &[(Element, Element)]) -> bool {
    let mut seen = std::collections::HashSet::new();
    if phi.len() != m.size() || !phi.iter().all(|p| seen.insert(*p)) {
        return false;
    }
    for i in 0..m.size() {
        for j in 0..m.size() {
            let k = m.index_of(m.product(m.element(i), m.element(j)));
            let (x, y) = (phi[i], phi[j]);
            if phi[k] != (n.product(x.0, y.0), n.product(x.1, y.1)) {
                return false;
            }
        }
    }
    true
}

/// Applies the four reductions to a fixpoint, verifying each recorded embedding.
pub fn normalize_algebra(m: &AutomaticAlgebra) -> Result<(AutomaticAlgebra, Vec<ReductionStep>), ClassifyError> {
    let mut cur = m.clone();
    let mut steps = Vec::new();
    while let Some((kind, removal, partner)) = find_step(&cur) {
        let (states, letters, removed): (Vec<usize>, Vec<usize>, Element) = match removal {
            Removal::Letter(a) => (
                (0..cur.num_states()).collect(),
                (0..cur.num_letters()).filter(|&b| b != a).collect(),
                Element::Letter(a),
            ),
            Removal::State(q) => (
                (0..cur.num_states()).filter(|&p| p != q).collect(),
                (0..cur.num_letters()).collect(),
                Element::State(q),
            ),
        };
        let next = cur.restrict(&states, &letters);
        let partner_n = match kind {
            ReductionKind::DropUndefinedLetter => (Element::Zero, element_in(&next, &cur, partner)),
            ReductionKind::DropIsolatedState => (Element::Zero, element_in(&next, &cur, partner)),
            ReductionKind::DropRepeatedLetter | ReductionKind::DropRedundantState => {
                let p = element_in(&next, &cur, partner);
                (p, p)
            }
        };
        let phi: Vec<(Element, Element)> = cur
            .elements()
            .into_iter()
            .map(|x| if x == removed { partner_n } else { (element_in(&next, &cur, x), Element::Zero) })
            .collect();
        if !check_pair_embedding(&cur, &next, &phi) {
            return Err(ClassifyError::InternalInconsistency(format!(
                "reduction dropping `{}` has no valid embedding",
                cur.name(removed)
            )));
        }
        let embedding = cur
            .elements()
            .into_iter()
            .zip(&phi)
            .map(|(x, (u, v))| (cur.name(x).to_string(), next.name(*u).to_string(), next.name(*v).to_string()))
            .collect();
        steps.push(ReductionStep { kind, removed: cur.name(removed).to_string(), embedding });
        cur = next;
    }
    Ok((cur, steps))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn undefined_letter_dropped() {
        let m = AutomaticAlgebra::from_edges(&["q", "r"], &["a", "b"], &[("q", "b", "r"), ("r", "b", "r")]).unwrap();
        let (n, steps) = normalize_algebra(&m).unwrap();
        assert_eq!(n.letter_names(), &["b".to_string()]);
        assert_eq!(steps[0].kind, ReductionKind::DropUndefinedLetter);
        assert!(steps[0].embedding.contains(&("a".into(), "0".into(), "q".into())));
    }

    #[test]
    fn repeated_letter_dropped() {
        let m = AutomaticAlgebra::from_edges(
            &["q", "r"],
            &["b", "c"],
            &[("q", "b", "r"), ("q", "c", "r"), ("r", "b", "q"), ("r", "c", "q")],
        )
        .unwrap();
        let (n, steps) = normalize_algebra(&m).unwrap();
        assert_eq!(n.letter_names(), &["b".to_string()]);
        assert!(steps[0].embedding.contains(&("c".into(), "b".into(), "b".into())));
    }

    #[test]
    fn normal_algebras_unchanged() {
        for m in [catalog::boozer(), catalog::lyndon(), catalog::c(3).unwrap()] {
            let (n, steps) = normalize_algebra(&m).unwrap();
            assert_eq!(n, m);
            assert!(steps.is_empty());
        }
    }

    #[test]
    fn constant_letter_drops_redundant_state() {
        let (n, steps) = normalize_algebra(&catalog::constant_letters(1).unwrap()).unwrap();
        assert_eq!(n.state_names(), &["q".to_string()]);
        assert_eq!(steps[0].kind, ReductionKind::DropRedundantState);
        assert_eq!(steps[0].removed, "r");
    }
}
