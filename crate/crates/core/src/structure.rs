//! Structural predicates: components, letter sets, whiskery cycles, permutation data.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::algebra::{AutomaticAlgebra, Element, Word};
use crate::catalog;
use crate::error::StructureError;
use crate::groups::{cyclic_decomposition, lcm, CyclicFactor, Group};
use crate::powers::{find_embedding, Hom};
use crate::terms::{check_quasi_identity, QuasiIdentity};

/// Connected components of the underlying graph, sorted by least state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentPartition {
    pub blocks: Vec<Vec<usize>>,
}

impl ComponentPartition {
    pub fn block_of(&self, q: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&q)).expect("every state lies in a block")
    }
}

pub fn components(m: &AutomaticAlgebra) -> ComponentPartition {
    let n = m.num_states();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        let mut y = x;
        while parent[y] != r {
            let next = parent[y];
            parent[y] = r;
            y = next;
        }
        r
    }
    for (q, _, r) in m.edges() {
        let (a, b) = (find(&mut parent, q), find(&mut parent, r));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut root_block: Vec<Option<usize>> = vec![None; n];
    for q in 0..n {
        let r = find(&mut parent, q);
        match root_block[r] {
            Some(i) => blocks[i].push(q),
            None => {
                root_block[r] = Some(blocks.len());
                blocks.push(vec![q]);
            }
        }
    }
    ComponentPartition { blocks }
}

/// Domain, range and kill set of one letter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LetterSet {
    pub dom: Vec<usize>,
    pub ran: Vec<usize>,
    pub ks: Vec<usize>,
}

pub fn letter_sets(m: &AutomaticAlgebra) -> Vec<LetterSet> {
    (0..m.num_letters())
        .map(|a| {
            let dom: Vec<usize> = (0..m.num_states()).filter(|&q| m.delta(q, a).is_some()).collect();
            let ran: BTreeSet<usize> = dom.iter().filter_map(|&q| m.delta(q, a)).collect();
            let ks = (0..m.num_states()).filter(|&q| m.delta(q, a).is_none()).collect();
            LetterSet { dom, ran: ran.into_iter().collect(), ks }
        })
        .collect()
}

/// A range/kill reachability witness.
///
/// Case 1: `state ∈ ks letter` and `state·word ∈ dom letter`.
/// Case 2: `state ∈ ran letter` and `state·word ∈ ks letter`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RanKill {
    pub case: u8,
    pub letter: usize,
    pub state: usize,
    pub word: Word,
}

/// Shortest word from one of `sources` (tried in order) to a state satisfying `target`.
fn bfs_word(m: &AutomaticAlgebra, sources: &[usize], target: impl Fn(usize) -> bool) -> Option<(usize, Vec<usize>)> {
    let mut best: Option<(usize, Vec<usize>)> = None;
    for &s in sources {
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; m.num_states()];
        let mut seen = vec![false; m.num_states()];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        let mut hit = None;
        while let Some(x) = queue.pop_front() {
            if target(x) {
                hit = Some(x);
                break;
            }
            for a in 0..m.num_letters() {
                if let Some(y) = m.delta(x, a) {
                    if !seen[y] {
                        seen[y] = true;
                        prev[y] = Some((x, a));
                        queue.push_back(y);
                    }
                }
            }
        }
        if let Some(mut x) = hit {
            let mut w = Vec::new();
            while let Some((p, a)) = prev[x] {
                w.push(a);
                x = p;
            }
            w.reverse();
            if best.as_ref().is_none_or(|(_, bw)| w.len() < bw.len()) {
                best = Some((s, w));
            }
        }
    }
    best
}

/// Looks for a range/kill witness: case 2 first, then case 1; letters in order.
pub fn rankill_check(m: &AutomaticAlgebra) -> Option<RanKill> {
    let sets = letter_sets(m);
    for (case, pick) in [(2u8, true), (1u8, false)] {
        for (a, ls) in sets.iter().enumerate() {
            let ks: HashSet<usize> = ls.ks.iter().copied().collect();
            let found = if pick {
                bfs_word(m, &ls.ran, |x| ks.contains(&x))
            } else {
                bfs_word(m, &ls.ks, |x| !ks.contains(&x))
            };
            if let Some((state, w)) = found {
                return Some(RanKill { case, letter: a, state, word: Word(w) });
            }
        }
    }
    None
}

/// Direct whiskery test for one pair: `qa = qa^(n+1)` for some `1 ≤ n ≤ |Q|`, or `qa = 0`.
pub fn whiskery_at(m: &AutomaticAlgebra, a: usize, q: usize) -> bool {
    let Some(first) = m.delta(q, a) else { return true };
    let mut cur = first;
    for _ in 0..m.num_states() {
        match m.delta(cur, a) {
            Some(next) => cur = next,
            None => return false,
        }
        if cur == first {
            return true;
        }
    }
    false
}

/// First `(letter, state)` failing the direct test, letter-major.
pub fn whiskery_direct(m: &AutomaticAlgebra) -> Option<(usize, usize)> {
    (0..m.num_letters()).flat_map(|a| (0..m.num_states()).map(move |q| (a, q))).find(|&(a, q)| !whiskery_at(m, a, q))
}

/// An embedding of `F_m` read off the run of `q` under `a`, in `F_m`'s element order.
pub fn fm_embedding_from_run(m: &AutomaticAlgebra, a: usize, q: usize) -> Option<(usize, Hom)> {
    let mut run = vec![q];
    let mut cur = q;
    loop {
        match m.delta(cur, a) {
            None => {
                if run.len() < 2 {
                    return None;
                }
                let (x, y) = (run[run.len() - 2], run[run.len() - 1]);
                let f0 = catalog::f(0);
                return Some((0, map_fm(&f0, &[x, y], a)));
            }
            Some(next) => {
                if let Some(pos) = run.iter().position(|&s| s == next) {
                    // cycle starts at `pos`; the tail must reach two steps before it
                    if pos < 2 {
                        return None;
                    }
                    let cycle = &run[pos..];
                    let mut states = vec![run[pos - 2], run[pos - 1]];
                    states.extend_from_slice(cycle);
                    let fm = catalog::f(cycle.len());
                    return Some((cycle.len(), map_fm(&fm, &states, a)));
                }
                run.push(next);
                cur = next;
            }
        }
    }
}

fn map_fm(fm: &AutomaticAlgebra, states: &[usize], a: usize) -> Hom {
    fm.elements()
        .into_iter()
        .map(|e| match e {
            Element::State(i) => Element::State(states[i]),
            Element::Letter(_) => Element::Letter(a),
            Element::Zero => Element::Zero,
        })
        .collect()
}

/// Outcome of the whiskery check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Whiskery {
    AllPass,
    Failure { letter: usize, state: usize, m: usize, embedding: Hom },
}

/// The three equivalent whiskery conditions, computed independently.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WhiskeryConditions {
    pub direct: bool,
    pub quasi_identity: bool,
    /// Least `m` with `F_m` embedding, if any.
    pub fm_embeds: Option<usize>,
}

impl WhiskeryConditions {
    pub fn agree(&self) -> bool {
        self.direct == self.quasi_identity && self.direct == self.fm_embeds.is_none()
    }
}

pub fn whiskery_conditions(m: &AutomaticAlgebra) -> WhiskeryConditions {
    let direct = whiskery_direct(m).is_none();
    let quasi_identity = check_quasi_identity(m, &QuasiIdentity::whiskery()).holds();
    let fm_embeds = (0..=m.num_states().saturating_sub(2))
        .take_while(|_| m.num_states() >= 2)
        .find(|&k| find_embedding(&catalog::f(k), m).is_some());
    WhiskeryConditions { direct, quasi_identity, fm_embeds }
}

/// Checks whether every letter acts as whiskery cycles, cross-checking all three conditions.
pub fn whiskery_check(m: &AutomaticAlgebra) -> Result<Whiskery, StructureError> {
    let c = whiskery_conditions(m);
    if !c.agree() {
        return Err(StructureError::InternalInconsistency(format!("whiskery conditions disagree: {c:?}")));
    }
    match whiskery_direct(m) {
        None => Ok(Whiskery::AllPass),
        Some((letter, state)) => {
            let (k, embedding) = fm_embedding_from_run(m, letter, state)
                .ok_or_else(|| StructureError::InternalInconsistency("failing run yields no F_m embedding".into()))?;
            if !crate::powers::is_embedding(&catalog::f(k), m, &embedding) {
                return Err(StructureError::InternalInconsistency("F_m embedding from run is not an embedding".into()));
            }
            Ok(Whiskery::Failure { letter, state, m: k, embedding })
        }
    }
}

/// How a letter behaves on one component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LetterOnComponent {
    /// Defined everywhere on the component and a bijection of it.
    Permutation,
    Undefined,
    Partial,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermProfile {
    pub permutational: bool,
    pub commuting: bool,
    /// `perms[a][q] = q·a`, when permutational.
    pub perms: Option<Vec<Vec<usize>>>,
    /// `per_component[i][a]`.
    pub per_component: Vec<Vec<LetterOnComponent>>,
}

/// Whether `x·yz ≈ x·zy` holds.
pub fn letters_commute(m: &AutomaticAlgebra) -> Option<(usize, usize)> {
    for b in 0..m.num_letters() {
        for c in (b + 1)..m.num_letters() {
            if (0..m.num_states()).any(|q| m.run(q, &[b, c]) != m.run(q, &[c, b])) {
                return Some((b, c));
            }
        }
    }
    None
}

fn is_permutation_letter(m: &AutomaticAlgebra, a: usize) -> bool {
    let img: HashSet<Option<usize>> = (0..m.num_states()).map(|q| m.delta(q, a)).collect();
    img.len() == m.num_states() && !img.contains(&None)
}

pub fn permutation_profile(m: &AutomaticAlgebra) -> PermProfile {
    let permutational = (0..m.num_letters()).all(|a| is_permutation_letter(m, a));
    let commuting = letters_commute(m).is_none();
    let perms = permutational
        .then(|| (0..m.num_letters()).map(|a| (0..m.num_states()).map(|q| m.delta(q, a).unwrap()).collect()).collect());
    let per_component = components(m)
        .blocks
        .iter()
        .map(|block| (0..m.num_letters()).map(|a| letter_on(m, block, a)).collect())
        .collect();
    PermProfile { permutational, commuting, perms, per_component }
}

fn letter_on(m: &AutomaticAlgebra, block: &[usize], a: usize) -> LetterOnComponent {
    let imgs: Vec<Option<usize>> = block.iter().map(|&q| m.delta(q, a)).collect();
    if imgs.iter().all(Option::is_none) {
        return LetterOnComponent::Undefined;
    }
    let set: HashSet<Option<usize>> = imgs.iter().copied().collect();
    if set.len() == block.len() && imgs.iter().all(|x| x.is_some_and(|y| block.contains(&y))) {
        LetterOnComponent::Permutation
    } else {
        LetterOnComponent::Partial
    }
}

/// Group data for one component, with group elements numbered by position in `states`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianGroupData {
    pub states: Vec<usize>,
    pub group: Group,
    /// Letters defined on the component, in index order.
    pub letters: Vec<usize>,
    /// Letters undefined on the whole component.
    pub dropped_letters: Vec<usize>,
    /// `letter_images[k]` is the image of `letters[k]`.
    pub letter_images: Vec<usize>,
    pub subgroup_h: Vec<usize>,
    pub exponent: usize,
    pub decomposition: Vec<CyclicFactor>,
}

impl AbelianGroupData {
    pub fn identity(&self) -> usize {
        self.group.identity()
    }

    pub fn position(&self, q: usize) -> Option<usize> {
        self.states.iter().position(|&s| s == q)
    }

    /// Distinct letter images, sorted.
    pub fn image_set(&self) -> Vec<usize> {
        let s: BTreeSet<usize> = self.letter_images.iter().copied().collect();
        s.into_iter().collect()
    }

    pub fn image_of(&self, a: usize) -> Option<usize> {
        self.letters.iter().position(|&l| l == a).map(|k| self.letter_images[k])
    }

    /// `H` as a group on its own, with the embedding into `G`.
    pub fn h_group(&self) -> (Group, Vec<usize>) {
        subgroup_as_group(&self.group, &self.subgroup_h)
    }
}

/// A subgroup re-indexed as `0..|S|`, returned with the list `local → global`.
pub fn subgroup_as_group(g: &Group, elems: &[usize]) -> (Group, Vec<usize>) {
    let n = elems.len();
    let pos = |x: usize| elems.iter().position(|&e| e == x).expect("closed subgroup");
    let table = (0..n * n).map(|k| pos(g.op(elems[k / n], elems[k % n]))).collect();
    (Group::from_table(n, table).expect("subgroup of an abelian group"), elems.to_vec())
}

/// Builds the abelian group on a component from the regular action of its letters.
pub fn component_group(m: &AutomaticAlgebra, block: &[usize]) -> Result<AbelianGroupData, StructureError> {
    let mut letters = Vec::new();
    let mut dropped = Vec::new();
    for a in 0..m.num_letters() {
        match letter_on(m, block, a) {
            LetterOnComponent::Permutation => letters.push(a),
            LetterOnComponent::Undefined => dropped.push(a),
            LetterOnComponent::Partial => return Err(StructureError::NotPermutational(m.letter_names()[a].clone())),
        }
    }
    for (i, &b) in letters.iter().enumerate() {
        for &c in &letters[i + 1..] {
            if block.iter().any(|&q| m.run(q, &[b, c]) != m.run(q, &[c, b])) {
                return Err(StructureError::NotCommuting(m.letter_names()[b].clone(), m.letter_names()[c].clone()));
            }
        }
    }
    let states: Vec<usize> = block.to_vec();
    let k = states.len();
    let pos = |q: usize| states.iter().position(|&s| s == q).unwrap();
    let e = states[0];
    // BFS from e; word_to[q] carries e to q.
    let mut word_to: Vec<Option<Vec<usize>>> = vec![None; k];
    word_to[0] = Some(Vec::new());
    let mut queue = VecDeque::from([e]);
    while let Some(x) = queue.pop_front() {
        for &a in &letters {
            let y = m.delta(x, a).expect("permutation letter");
            if word_to[pos(y)].is_none() {
                let mut w = word_to[pos(x)].clone().unwrap();
                w.push(a);
                word_to[pos(y)] = Some(w);
                queue.push_back(y);
            }
        }
    }
    if let Some(miss) = word_to.iter().position(Option::is_none) {
        return Err(StructureError::NotTransitive(m.state_names()[e].clone(), m.state_names()[states[miss]].clone()));
    }
    let words: Vec<Vec<usize>> = word_to.into_iter().map(Option::unwrap).collect();
    let mut table = vec![0; k * k];
    for x in 0..k {
        for y in 0..k {
            let r = m.run(states[y], &words[x]).expect("permutation letters");
            table[x * k + y] = pos(r);
        }
    }
    let group = Group::from_table(k, table).map_err(|err| {
        StructureError::InternalInconsistency(format!("component action is not an abelian group: {err}"))
    })?;
    if group.identity() != 0 {
        return Err(StructureError::InternalInconsistency("e is not the identity".into()));
    }
    let letter_images: Vec<usize> = letters.iter().map(|&a| pos(m.delta(e, a).unwrap())).collect();
    for (&a, &img) in letters.iter().zip(&letter_images) {
        for x in 0..k {
            if pos(m.delta(states[x], a).unwrap()) != group.op(x, img) {
                return Err(StructureError::InternalInconsistency(format!(
                    "{}·{} differs from the group product",
                    m.state_names()[states[x]],
                    m.letter_names()[a]
                )));
            }
        }
    }
    // regular action: every translation is a bijection with no fixed point unless trivial
    for g in 1..k {
        if (0..k).any(|x| group.op(x, g) == x) {
            return Err(StructureError::InternalInconsistency("action has a nontrivial stabilizer".into()));
        }
    }
    let gens: Vec<usize> = letter_images
        .iter()
        .flat_map(|&g| letter_images.iter().map(move |&h| (g, h)))
        .map(|(g, h)| group.op(group.inv(g), h))
        .collect();
    let subgroup_h = group.subgroup_generated(&gens);
    let exponent = group.exponent();
    let decomposition =
        cyclic_decomposition(&group).map_err(|err| StructureError::InternalInconsistency(err.to_string()))?;
    Ok(AbelianGroupData {
        states,
        group,
        letters,
        dropped_letters: dropped,
        letter_images,
        subgroup_h,
        exponent,
        decomposition,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LetterAffine {
    Yes(Vec<AbelianGroupData>),
    No {
        component: usize,
        reason: String,
        /// Letters `(x, y, z)` with `x y⁻¹ z` outside the image set.
        triple: Option<(usize, usize, usize)>,
    },
}

/// Per component, whether the letter images (over the letters defined there) form a coset.
pub fn letter_affine_analysis(m: &AutomaticAlgebra) -> LetterAffine {
    let mut out = Vec::new();
    for (i, block) in components(m).blocks.iter().enumerate() {
        let data = match component_group(m, block) {
            Ok(d) => d,
            Err(e) => return LetterAffine::No { component: i, reason: e.to_string(), triple: None },
        };
        let images: HashSet<usize> = data.letter_images.iter().copied().collect();
        let g = &data.group;
        for (x, &gx) in data.letters.iter().zip(&data.letter_images) {
            for (y, &gy) in data.letters.iter().zip(&data.letter_images) {
                for (z, &gz) in data.letters.iter().zip(&data.letter_images) {
                    if !images.contains(&g.malcev(gx, gy, gz)) {
                        return LetterAffine::No {
                            component: i,
                            reason: "letter images are not closed under x y⁻¹ z".into(),
                            triple: Some((*x, *y, *z)),
                        };
                    }
                }
            }
        }
        out.push(data);
    }
    LetterAffine::Yes(out)
}

// ---------------------------------------------------------------- commuting permutations

/// Per-component summary attached to a commuting-permutation witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetReport {
    pub states: Vec<usize>,
    /// Number of distinct letter actions on the component.
    pub actions: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonDComm {
    pub b: usize,
    pub c: usize,
    pub m: usize,
    pub components: Vec<CosetReport>,
}

fn compose(p: &[usize], q: &[usize]) -> Vec<usize> {
    // apply p then q
    p.iter().map(|&x| q[x]).collect()
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

fn perm_order(p: &[usize]) -> usize {
    (0..p.len())
        .map(|s| {
            let mut x = p[s];
            let mut k = 1;
            while x != s {
                x = p[x];
                k += 1;
            }
            k
        })
        .fold(1, lcm)
}

/// Distinct letter actions on a block, as permutations of positions.
pub fn actions_on(m: &AutomaticAlgebra, perms: &[Vec<usize>], block: &[usize]) -> Vec<Vec<usize>> {
    let pos = |q: usize| block.iter().position(|&s| s == q).unwrap();
    let set: BTreeSet<Vec<usize>> =
        (0..m.num_letters()).map(|a| block.iter().map(|&q| pos(perms[a][q])).collect()).collect();
    set.into_iter().collect()
}

/// Some `k, k' ∈ K` with `h = k⁻¹k' ≠ id`, `ord h | m` and `k⟨h⟩ ⊆ K`.
pub fn coset_inside(actions: &[Vec<usize>], m: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let set: HashSet<&Vec<usize>> = actions.iter().collect();
    for k in actions {
        let kinv = invert(k);
        for k2 in actions {
            let h = compose(&kinv, k2);
            let ord = perm_order(&h);
            if ord == 1 || !m.is_multiple_of(ord) {
                continue;
            }
            let mut x = k.clone();
            let mut inside = true;
            for _ in 0..ord {
                if !set.contains(&x) {
                    inside = false;
                    break;
                }
                x = compose(&x, &h);
            }
            if inside {
                return Some((k.clone(), h));
            }
        }
    }
    None
}

/// The commuting-permutation non-dualizability conditions: permutational, commuting,
/// some `ρ_b ρ_c⁻¹` of order `m > 1`, and no component whose letter actions
/// contain a coset of a nontrivial subgroup of order dividing `m`.
pub fn nondcomm_check(m: &AutomaticAlgebra) -> Option<NonDComm> {
    let profile = permutation_profile(m);
    if !profile.permutational || !profile.commuting {
        return None;
    }
    let perms = profile.perms.unwrap();
    let blocks = components(m).blocks;
    let actions: Vec<Vec<Vec<usize>>> = blocks.iter().map(|b| actions_on(m, &perms, b)).collect();
    for b in 0..m.num_letters() {
        for c in 0..m.num_letters() {
            if b == c {
                continue;
            }
            let order = perm_order(&compose(&perms[b], &invert(&perms[c])));
            if order <= 1 {
                continue;
            }
            if actions.iter().all(|k| coset_inside(k, order).is_none()) {
                let components = blocks
                    .iter()
                    .zip(&actions)
                    .map(|(bl, k)| CosetReport { states: bl.clone(), actions: k.len() })
                    .collect();
                return Some(NonDComm { b, c, m: order, components });
            }
        }
    }
    None
}

/// Order of `ρ_b ρ_c⁻¹` on the whole state set.
pub fn quotient_order(m: &AutomaticAlgebra, b: usize, c: usize) -> Option<usize> {
    let pb: Vec<usize> = (0..m.num_states()).map(|q| m.delta(q, b)).collect::<Option<_>>()?;
    let pc: Vec<usize> = (0..m.num_states()).map(|q| m.delta(q, c)).collect::<Option<_>>()?;
    Some(perm_order(&compose(&pb, &invert(&pc))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, catalog as cat};

    #[test]
    fn component_examples() {
        assert_eq!(components(&catalog::lyndon()).blocks, vec![vec![0, 1, 2]]);
        let single = AutomaticAlgebra::from_edges(&["q"], &["a"], &[] as &[(&str, &str, &str)]).unwrap();
        assert_eq!(components(&single).blocks, vec![vec![0]]);
        let ch3 = cat("chain", &[3]).unwrap();
        let blocks = components(&ch3).blocks;
        assert_eq!(blocks.len(), 2);
        assert_eq!(blocks[0].len(), 3);
        assert_eq!(blocks[1].len(), 7);
    }

    #[test]
    fn letter_set_invariants() {
        for m in catalog::all_small() {
            for ls in letter_sets(&m) {
                assert_eq!(ls.dom.len() + ls.ks.len(), m.num_states());
            }
        }
    }

    #[test]
    fn rankill_examples() {
        let n1 = cat("N", &[1]).unwrap();
        let w = rankill_check(&n1).unwrap();
        assert_eq!((w.case, n1.letter_names()[w.letter].as_str(), n1.state_names()[w.state].as_str()), (1, "b", "q"));
        assert_eq!(n1.format_word(&w.word), "a");
        let n3 = cat("N", &[3]).unwrap();
        let w = rankill_check(&n3).unwrap();
        assert_eq!((w.case, n3.letter_names()[w.letter].as_str(), n3.state_names()[w.state].as_str()), (2, "b", "q"));
        assert_eq!(n3.format_word(&w.word), "a");
        let l3 = catalog::l3star();
        let w = rankill_check(&l3).unwrap();
        assert_eq!((w.case, l3.letter_names()[w.letter].as_str(), l3.state_names()[w.state].as_str()), (2, "b", "s"));
        assert_eq!(l3.format_word(&w.word), "ac");
        assert_eq!(rankill_check(&catalog::lyndon()), None);
    }

    #[test]
    fn whiskery_examples() {
        let b = catalog::boozer();
        match whiskery_check(&b).unwrap() {
            Whiskery::Failure { letter, state, m, .. } => {
                assert_eq!((letter, state, m), (0, 0, 0));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(whiskery_check(&catalog::lyndon()).unwrap(), Whiskery::AllPass);
        let id = AutomaticAlgebra::from_edges(&["q"], &["a"], &[("q", "a", "q")]).unwrap();
        assert_eq!(whiskery_check(&id).unwrap(), Whiskery::AllPass);
        for k in 0..=3 {
            match whiskery_check(&catalog::f(k)).unwrap() {
                Whiskery::Failure { m, .. } => assert_eq!(m, k),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn profile_examples() {
        let p = permutation_profile(&catalog::c(3).unwrap());
        assert!(p.permutational && p.commuting);
        assert!(!permutation_profile(&catalog::boozer()).permutational);
        assert!(!permutation_profile(&cat("N", &[4]).unwrap()).permutational);
    }

    #[test]
    fn component_group_examples() {
        let c3 = catalog::c(3).unwrap();
        let d = component_group(&c3, &[0, 1, 2]).unwrap();
        assert_eq!(d.group.order(), 3);
        assert_eq!(d.letter_images, vec![1, 2]);
        assert_eq!(d.subgroup_h, vec![0, 1, 2]);
        let cyc = AutomaticAlgebra::from_edges(
            &["x", "y", "z", "w"],
            &["a"],
            &[("x", "a", "y"), ("y", "a", "z"), ("z", "a", "w"), ("w", "a", "x")],
        )
        .unwrap();
        let d = component_group(&cyc, &[0, 1, 2, 3]).unwrap();
        assert_eq!(d.subgroup_h, vec![0]);
        assert_eq!(d.exponent, 4);
        let id = AutomaticAlgebra::from_edges(&["q"], &["a"], &[("q", "a", "q")]).unwrap();
        let d = component_group(&id, &[0]).unwrap();
        assert_eq!((d.group.order(), d.subgroup_h.len()), (1, 1));
        assert!(matches!(component_group(&catalog::boozer(), &[0, 1, 2]), Err(StructureError::NotPermutational(_))));
    }

    #[test]
    fn letter_affine_examples() {
        match letter_affine_analysis(&catalog::c(3).unwrap()) {
            LetterAffine::No { triple, .. } => assert_eq!(triple, Some((0, 1, 0))),
            other => panic!("{other:?}"),
        }
        assert!(matches!(letter_affine_analysis(&catalog::c_with_identity(3).unwrap()), LetterAffine::Yes(_)));
        assert!(matches!(letter_affine_analysis(&catalog::transposition(1).unwrap()), LetterAffine::Yes(_)));
    }

    #[test]
    fn nondcomm_examples() {
        let w = nondcomm_check(&catalog::c(3).unwrap()).unwrap();
        assert_eq!((w.b, w.c, w.m), (0, 1, 3));
        assert_eq!(nondcomm_check(&catalog::c_with_identity(3).unwrap()), None);
        assert_eq!(nondcomm_check(&catalog::boozer()), None);
        let ch3 = cat("chain", &[3]).unwrap();
        let w = nondcomm_check(&ch3).unwrap();
        assert_eq!(w.m, 7);
    }
}
