//! Library of compatible (partial) operations.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::algebra::{AutomaticAlgebra, Element};
use crate::error::PowerError;
use crate::powers::{compatibility_violation, is_compatible};
use crate::structure::{components, letter_affine_analysis, permutation_profile, AbelianGroupData, LetterAffine};

/// A partial operation given by its full table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartialOperation {
    pub name: String,
    pub arity: usize,
    pub domain: Vec<Vec<Element>>,
    pub table: Vec<Element>,
}

impl PartialOperation {
    pub fn apply(&self, args: &[Element]) -> Option<Element> {
        self.domain.iter().position(|d| d == args).map(|i| self.table[i])
    }

    /// The `(arity+1)`-ary relation `{(x̄, f(x̄))}`.
    pub fn graph(&self) -> Vec<Vec<Element>> {
        self.domain
            .iter()
            .zip(&self.table)
            .map(|(d, &v)| {
                let mut t = d.clone();
                t.push(v);
                t
            })
            .collect()
    }
}

/// Which operation to build.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OpSpec {
    /// `g_{u,v}`: `u` at `(u,v)`, otherwise 0.
    G {
        u: Element,
        v: Element,
    },
    /// Partial join of the order `Δ ∪ {0}×Q`.
    Join,
    /// Quasi-meet of `Q² ∪ Σ² ∪ {0}×M`.
    QuasiMeet,
    /// Meet of the two chains `q₁ > … > q_n > 0` and `a₁ > … > a_n > 0`.
    Meet,
    /// The ternary operation built around the state `q1`.
    H {
        q1: usize,
    },
    /// Left translation by group element `g` on component `component`.
    Lambda {
        component: usize,
        g: usize,
    },
    Diamond,
    /// Mal'cev operation of a component, extended to letters.
    Malcev {
        component: usize,
    },
    /// Extension of an endomorphism of `H` (given on positions of `subgroup_h`) fixing `u`.
    Psi {
        component: usize,
        endo: Vec<usize>,
    },
}

impl OpSpec {
    pub fn label(&self) -> String {
        match self {
            OpSpec::G { .. } => "g".into(),
            OpSpec::Join => "join".into(),
            OpSpec::QuasiMeet => "quasi-meet".into(),
            OpSpec::Meet => "meet".into(),
            OpSpec::H { .. } => "h".into(),
            OpSpec::Lambda { .. } => "lambda".into(),
            OpSpec::Diamond => "diamond".into(),
            OpSpec::Malcev { .. } => "malcev".into(),
            OpSpec::Psi { .. } => "psi".into(),
        }
    }
}

fn precondition(spec: &OpSpec, reason: impl Into<String>) -> PowerError {
    PowerError::PreconditionViolated { name: spec.label(), reason: reason.into() }
}

fn tuples(elems: &[Element], k: usize) -> Vec<Vec<Element>> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out.into_iter().flat_map(|t| elems.iter().map(move |&e| [t.clone(), vec![e]].concat())).collect();
    }
    out
}

/// Constant value of each letter, if every letter is total and constant.
pub fn constant_values(m: &AutomaticAlgebra) -> Option<Vec<usize>> {
    if m.num_states() == 0 {
        return None;
    }
    (0..m.num_letters())
        .map(|a| {
            let v = m.delta(0, a)?;
            (0..m.num_states()).all(|q| m.delta(q, a) == Some(v)).then_some(v)
        })
        .collect()
}

/// Component group data for a permutational algebra with commuting letters.
fn group_data(m: &AutomaticAlgebra, spec: &OpSpec) -> Result<Vec<AbelianGroupData>, PowerError> {
    let p = permutation_profile(m);
    if !p.permutational {
        return Err(precondition(spec, "letters must act as permutations"));
    }
    if !p.commuting {
        return Err(precondition(spec, "letters must commute"));
    }
    components(m)
        .blocks
        .iter()
        .map(|b| crate::structure::component_group(m, b).map_err(|e| precondition(spec, e.to_string())))
        .collect()
}

fn component<'a>(data: &'a [AbelianGroupData], i: usize, spec: &OpSpec) -> Result<&'a AbelianGroupData, PowerError> {
    data.get(i).ok_or_else(|| precondition(spec, format!("no component {i}")))
}

/// Least letter whose image on the component is `g`.
fn letter_with_image(data: &AbelianGroupData, g: usize) -> Option<usize> {
    data.letters.iter().zip(&data.letter_images).find(|(_, &img)| img == g).map(|(&a, _)| a)
}

/// Builds the named operation; its graph is checked for compatibility before returning.
pub fn make_compatible_op(m: &AutomaticAlgebra, spec: &OpSpec) -> Result<PartialOperation, PowerError> {
    let elems = m.elements();
    let nq = m.num_states();
    let (arity, domain, table): (usize, Vec<Vec<Element>>, Vec<Element>) = match spec {
        OpSpec::G { u, v } => {
            if !m.contains(*u) || !m.contains(*v) {
                return Err(precondition(spec, "u and v must be elements"));
            }
            if !u.is_letter() && !v.is_letter() {
                return Err(precondition(spec, "one of u, v must be a letter"));
            }
            let dom = tuples(&elems, 2);
            let tab = dom.iter().map(|t| if t[0] == *u && t[1] == *v { *u } else { Element::Zero }).collect();
            (2, dom, tab)
        }
        OpSpec::Join => {
            let dom: Vec<Vec<Element>> = tuples(&elems, 2)
                .into_iter()
                .filter(|t| t[0] == t[1] || (t[0].is_zero() && t[1].is_state()) || (t[0].is_state() && t[1].is_zero()))
                .collect();
            let tab = dom.iter().map(|t| if t[0].is_zero() { t[1] } else { t[0] }).collect();
            (2, dom, tab)
        }
        OpSpec::QuasiMeet => {
            if !m.is_total() {
                return Err(precondition(spec, "algebra must be total"));
            }
            let dom = tuples(&elems, 2);
            let tab = dom
                .iter()
                .map(|t| {
                    if (t[0].is_state() && t[1].is_state()) || (t[0].is_letter() && t[1].is_letter()) {
                        t[0]
                    } else {
                        Element::Zero
                    }
                })
                .collect();
            (2, dom, tab)
        }
        OpSpec::Meet => {
            let values = constant_letters_bijective(m, spec)?;
            // letter rank = index of its constant value
            let rank = |e: Element| match e {
                Element::State(i) => Some((0, i)),
                Element::Letter(a) => Some((1, values[a])),
                Element::Zero => None,
            };
            let letter_of_rank: HashMap<usize, usize> = values.iter().enumerate().map(|(a, &v)| (v, a)).collect();
            let dom = tuples(&elems, 2);
            let tab = dom
                .iter()
                .map(|t| match (rank(t[0]), rank(t[1])) {
                    (Some((0, i)), Some((0, j))) => Element::State(i.max(j)),
                    (Some((1, i)), Some((1, j))) => Element::Letter(letter_of_rank[&i.max(j)]),
                    _ => Element::Zero,
                })
                .collect();
            (2, dom, tab)
        }
        OpSpec::H { q1 } => {
            if *q1 >= nq {
                return Err(precondition(spec, "q1 must be a state"));
            }
            if !m.is_total() {
                return Err(precondition(spec, "algebra must be total"));
            }
            let values = constant_values(m).ok_or_else(|| precondition(spec, "letters must be constant"))?;
            let hits: Vec<usize> = (0..values.len()).filter(|&a| values[a] == *q1).collect();
            let [a1] = hits[..] else {
                return Err(precondition(spec, "exactly one letter must have value q1"));
            };
            let q = Element::State(*q1);
            let low = |e: Element| e == q || e.is_zero();
            let dom: Vec<Vec<Element>> =
                tuples(&elems, 3).into_iter().filter(|t| t[0] != Element::Letter(a1)).collect();
            let tab = dom
                .iter()
                .map(|t| {
                    if t[0] == q && low(t[1]) && low(t[2]) {
                        if t[1] == q || t[2] == q {
                            q
                        } else {
                            Element::Zero
                        }
                    } else {
                        Element::Zero
                    }
                })
                .collect();
            (3, dom, tab)
        }
        OpSpec::Lambda { component: i, g } => {
            let data = group_data(m, spec)?;
            let d = component(&data, *i, spec)?;
            if *g >= d.states.len() {
                return Err(precondition(spec, "g must lie in the component"));
            }
            let dom: Vec<Vec<Element>> = elems.iter().map(|&e| vec![e]).collect();
            let tab = elems
                .iter()
                .map(|&e| match e.state().and_then(|q| d.position(q)) {
                    Some(x) => Element::State(d.states[d.group.op(*g, x)]),
                    None => e,
                })
                .collect();
            (1, dom, tab)
        }
        OpSpec::Diamond => {
            let data = group_data(m, spec)?;
            let blocks = components(m);
            let mut dom = Vec::new();
            let mut tab = Vec::new();
            for t in tuples(&elems, 2) {
                match (t[0], t[1]) {
                    (Element::State(x), Element::State(y)) => {
                        let bi = blocks.block_of(x);
                        if bi != blocks.block_of(y) {
                            continue;
                        }
                        let d = &data[bi];
                        let (px, py) = (d.position(x).unwrap(), d.position(y).unwrap());
                        let diff = d.group.op(d.group.inv(px), py);
                        tab.push(if d.subgroup_h.contains(&diff) { t[0] } else { Element::Zero });
                    }
                    (Element::Letter(_), Element::Letter(_)) | (Element::Zero, Element::Zero) => tab.push(t[0]),
                    _ => continue,
                }
                dom.push(t);
            }
            (2, dom, tab)
        }
        OpSpec::Malcev { component: i } => {
            let data = affine_data(m, spec)?;
            let d = component(&data, *i, spec)?;
            let mut dom = Vec::new();
            let mut tab = Vec::new();
            let states: Vec<Element> = d.states.iter().map(|&q| Element::State(q)).collect();
            for t in tuples(&states, 3) {
                let p: Vec<usize> = t.iter().map(|e| d.position(e.state().unwrap()).unwrap()).collect();
                tab.push(Element::State(d.states[d.group.malcev(p[0], p[1], p[2])]));
                dom.push(t);
            }
            let letters: Vec<Element> = (0..m.num_letters()).map(Element::Letter).collect();
            for t in tuples(&letters, 3) {
                let img: Vec<usize> = t.iter().map(|e| d.image_of(e.letter().unwrap()).unwrap()).collect();
                let target = d.group.malcev(img[0], img[1], img[2]);
                let b =
                    letter_with_image(d, target).ok_or_else(|| precondition(spec, "letter images are not a coset"))?;
                tab.push(Element::Letter(b));
                dom.push(t);
            }
            dom.push(vec![Element::Zero; 3]);
            tab.push(Element::Zero);
            (3, dom, tab)
        }
        OpSpec::Psi { component: i, endo } => {
            let data = affine_data(m, spec)?;
            let d = component(&data, *i, spec)?;
            let h = &d.subgroup_h;
            if endo.len() != h.len() || endo.iter().any(|&x| x >= h.len()) {
                return Err(precondition(spec, "endomorphism table has the wrong size"));
            }
            let phi = |x: usize| h[endo[h.iter().position(|&y| y == x).unwrap()]];
            let g = &d.group;
            for &x in h {
                for &y in h {
                    if phi(g.op(x, y)) != g.op(phi(x), phi(y)) {
                        return Err(precondition(spec, "map is not an endomorphism of H"));
                    }
                }
            }
            let a_i = d.letter_images[0];
            let n_i = g.order() / h.len();
            let u_i = g.pow(a_i, n_i as i64);
            if phi(u_i) != u_i {
                return Err(precondition(spec, "endomorphism must fix u"));
            }
            // xi(a^t h) = a^t phi(h)
            let mut xi = vec![usize::MAX; g.order()];
            for t in 0..n_i {
                let at = g.pow(a_i, t as i64);
                for &x in h {
                    xi[g.op(at, x)] = g.op(at, phi(x));
                }
            }
            let mut dom = Vec::new();
            let mut tab = Vec::new();
            for (x, &q) in d.states.iter().enumerate() {
                dom.push(vec![Element::State(q)]);
                tab.push(Element::State(d.states[xi[x]]));
            }
            for a in 0..m.num_letters() {
                let target = xi[d.image_of(a).unwrap()];
                let b =
                    letter_with_image(d, target).ok_or_else(|| precondition(spec, "image leaves the letter coset"))?;
                dom.push(vec![Element::Letter(a)]);
                tab.push(Element::Letter(b));
            }
            dom.push(vec![Element::Zero]);
            tab.push(Element::Zero);
            (1, dom, tab)
        }
    };
    let op = PartialOperation { name: spec.label(), arity, domain, table };
    if let Some((x, y)) = compatibility_violation(m, &op.graph()) {
        return Err(PowerError::NotCompatible(format!("{}: {:?} · {:?}", op.name, x, y)));
    }
    Ok(op)
}

fn constant_letters_bijective(m: &AutomaticAlgebra, spec: &OpSpec) -> Result<Vec<usize>, PowerError> {
    if !m.is_total() {
        return Err(precondition(spec, "algebra must be total"));
    }
    let values = constant_values(m).ok_or_else(|| precondition(spec, "letters must be constant"))?;
    let mut seen = vec![false; m.num_states()];
    for &v in &values {
        seen[v] = true;
    }
    if values.len() != m.num_states() || seen.iter().any(|s| !s) {
        return Err(precondition(spec, "letters must correspond one-to-one with their constant values"));
    }
    Ok(values)
}

fn affine_data(m: &AutomaticAlgebra, spec: &OpSpec) -> Result<Vec<AbelianGroupData>, PowerError> {
    group_data(m, spec)?;
    match letter_affine_analysis(m) {
        LetterAffine::Yes(d) => Ok(d),
        LetterAffine::No { reason, .. } => Err(precondition(spec, reason)),
    }
}

/// Every operation the library can build on `m`, with endomorphisms for `psi`
/// drawn from the character witnesses of each `H`.
pub fn all_applicable(m: &AutomaticAlgebra) -> Vec<(OpSpec, Result<PartialOperation, PowerError>)> {
    let mut specs = Vec::new();
    let elems = m.elements();
    for &u in &elems {
        for &v in &elems {
            if u.is_letter() || v.is_letter() {
                specs.push(OpSpec::G { u, v });
            }
        }
    }
    specs.push(OpSpec::Join);
    specs.push(OpSpec::QuasiMeet);
    specs.push(OpSpec::Meet);
    for q1 in 0..m.num_states() {
        specs.push(OpSpec::H { q1 });
    }
    if let Ok(data) = group_data(m, &OpSpec::Diamond) {
        specs.push(OpSpec::Diamond);
        for (i, d) in data.iter().enumerate() {
            for g in 0..d.states.len() {
                specs.push(OpSpec::Lambda { component: i, g });
            }
            specs.push(OpSpec::Malcev { component: i });
            for endo in psi_endomorphisms(d) {
                specs.push(OpSpec::Psi { component: i, endo });
            }
        }
    }
    specs
        .into_iter()
        .map(|s| {
            let r = make_compatible_op(m, &s);
            (s, r)
        })
        .collect()
}

/// Identity plus the endomorphisms supplied by the character construction on `H`.
pub fn psi_endomorphisms(d: &AbelianGroupData) -> Vec<Vec<usize>> {
    let (hg, emb) = d.h_group();
    let mut out = vec![(0..hg.order()).collect::<Vec<_>>()];
    if d.letter_images.is_empty() {
        return out;
    }
    let g = &d.group;
    let n_i = g.order() / d.subgroup_h.len();
    let u = g.pow(d.letter_images[0], n_i as i64);
    let Some(u_local) = emb.iter().position(|&x| x == u) else { return out };
    if let Ok(w) = crate::groups::huc_character(&hg, hg.exponent(), u_local) {
        for e in w.endos.into_iter().flatten() {
            if !out.contains(&e) {
                out.push(e);
            }
        }
    }
    out
}

/// Whether a graph passes the compatibility check; exposed for the acceptance suite.
pub fn graph_is_compatible(m: &AutomaticAlgebra, op: &PartialOperation) -> bool {
    is_compatible(m, &op.graph())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    const Q: Element = Element::State(0);
    const R: Element = Element::State(1);
    const A: Element = Element::Letter(0);
    const Z: Element = Element::Zero;

    #[test]
    fn quasi_meet_on_lyndon() {
        let op = make_compatible_op(&catalog::lyndon(), &OpSpec::QuasiMeet).unwrap();
        assert_eq!(op.apply(&[Q, R]), Some(Q));
        assert_eq!(op.apply(&[Q, A]), Some(Z));
        assert!(matches!(
            make_compatible_op(&catalog::boozer(), &OpSpec::QuasiMeet),
            Err(PowerError::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn join_examples() {
        for m in catalog::all_small() {
            let op = make_compatible_op(&m, &OpSpec::Join).unwrap();
            assert_eq!(op.apply(&[Z, Q]), Some(Q));
            assert_eq!(op.apply(&[Q, Q]), Some(Q));
            assert_eq!(op.apply(&[Q, R]), None);
        }
    }

    #[test]
    fn g_on_boozer() {
        let b = catalog::boozer();
        let op = make_compatible_op(&b, &OpSpec::G { u: Q, v: A }).unwrap();
        assert_eq!(op.apply(&[Q, A]), Some(Q));
        assert_eq!(op.apply(&[A, Q]), Some(Z));
        assert!(make_compatible_op(&b, &OpSpec::G { u: Q, v: R }).is_err());
    }

    #[test]
    fn lambda_on_c3() {
        let c3 = catalog::c(3).unwrap();
        let op = make_compatible_op(&c3, &OpSpec::Lambda { component: 0, g: 1 }).unwrap();
        assert_eq!(op.apply(&[Element::State(0)]), Some(Element::State(1)));
        assert_eq!(op.apply(&[Element::State(2)]), Some(Element::State(0)));
        assert_eq!(op.apply(&[A]), Some(A));
        assert_eq!(op.apply(&[Z]), Some(Z));
    }

    #[test]
    fn meet_and_h_on_constant_letters() {
        let k2 = catalog::constant_letters(2).unwrap();
        let meet = make_compatible_op(&k2, &OpSpec::Meet).unwrap();
        assert_eq!(meet.apply(&[Q, R]), Some(R));
        assert_eq!(meet.apply(&[A, Element::Letter(1)]), Some(Element::Letter(1)));
        assert!(make_compatible_op(&k2, &OpSpec::H { q1: 0 }).is_ok());
        assert!(make_compatible_op(&catalog::constant_letters(1).unwrap(), &OpSpec::Meet).is_err());
    }

    #[test]
    fn malcev_needs_affine() {
        assert!(make_compatible_op(&catalog::c(3).unwrap(), &OpSpec::Malcev { component: 0 }).is_err());
        assert!(make_compatible_op(&catalog::c_with_identity(3).unwrap(), &OpSpec::Malcev { component: 0 }).is_ok());
    }

    #[test]
    fn everything_applicable_is_compatible() {
        for m in catalog::all_small() {
            for (spec, r) in all_applicable(&m) {
                match r {
                    Ok(op) => assert!(graph_is_compatible(&m, &op), "{spec:?}"),
                    Err(PowerError::PreconditionViolated { .. }) => {}
                    Err(e) => panic!("{spec:?}: {e}"),
                }
            }
        }
    }
}
