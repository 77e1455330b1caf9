//! Finite powers, generated subalgebras, homomorphism search and compatibility.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::algebra::{AutomaticAlgebra, Element};
use crate::error::PowerError;
use crate::par::{self, Strategy};

/// Default bound on the size of a domain handed to [`enumerate_homs`].
pub const DEFAULT_HOM_CAP: usize = 64;

/// A tuple over the index set `{0, …, n−1}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PowerElement(pub Vec<Element>);

impl PowerElement {
    pub fn constant(v: Element, n: usize) -> Self {
        PowerElement(vec![v; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Element {
        self.0[i]
    }

    pub fn render(&self, m: &AutomaticAlgebra) -> String {
        let parts: Vec<&str> = self.0.iter().map(|&e| m.name(e)).collect();
        format!("({})", parts.join(","))
    }
}

/// `base` everywhere except at the overridden positions.
pub fn power_element(base: Element, overrides: &[(usize, Element)], n: usize) -> Result<PowerElement, PowerError> {
    let mut v = vec![base; n];
    let mut seen = HashSet::new();
    for &(i, e) in overrides {
        if i >= n {
            return Err(PowerError::IndexOutOfRange { index: i, size: n });
        }
        if !seen.insert(i) {
            return Err(PowerError::DuplicateIndex(i));
        }
        v[i] = e;
    }
    Ok(PowerElement(v))
}

pub fn power_product(m: &AutomaticAlgebra, x: &PowerElement, y: &PowerElement) -> PowerElement {
    PowerElement(x.0.iter().zip(&y.0).map(|(&a, &b)| m.product(a, b)).collect())
}

/// Least subset of `Mⁿ` containing `generators` and closed under the pointwise product.
///
/// Elements are returned in discovery order, generators first.
pub fn generate_subuniverse(m: &AutomaticAlgebra, n: usize, generators: &[PowerElement]) -> Vec<PowerElement> {
    generate_subuniverse_capped(m, n, generators, usize::MAX).expect("uncapped")
}

/// As [`generate_subuniverse`], failing once more than `cap` elements appear.
pub fn generate_subuniverse_capped(
    m: &AutomaticAlgebra,
    n: usize,
    generators: &[PowerElement],
    cap: usize,
) -> Result<Vec<PowerElement>, PowerError> {
    let mut elems: Vec<PowerElement> = Vec::new();
    let mut index: HashSet<PowerElement> = HashSet::new();
    for g in generators {
        assert_eq!(g.len(), n, "generator has the wrong length");
        if index.insert(g.clone()) {
            elems.push(g.clone());
        }
    }
    let mut i = 0;
    while i < elems.len() {
        for j in 0..=i {
            for (x, y) in [(i, j), (j, i)] {
                let p = power_product(m, &elems[x], &elems[y]);
                if !index.contains(&p) {
                    index.insert(p.clone());
                    elems.push(p);
                    if elems.len() > cap {
                        return Err(PowerError::CapExceeded {
                            what: "generated subalgebra".into(),
                            size: elems.len(),
                            cap,
                        });
                    }
                }
            }
        }
        i += 1;
    }
    Ok(elems)
}

/// A finite groupoid given by its multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    size: usize,
    table: Vec<usize>,
}

impl FiniteGroupoid {
    pub fn new(size: usize, table: Vec<usize>) -> Self {
        assert_eq!(table.len(), size * size);
        assert!(table.iter().all(|&x| x < size));
        FiniteGroupoid { size, table }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.size + y]
    }

    /// The algebra itself, elements in canonical order.
    pub fn from_algebra(m: &AutomaticAlgebra) -> Self {
        let n = m.size();
        let mut table = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                table.push(m.index_of(m.product(m.element(i), m.element(j))));
            }
        }
        FiniteGroupoid { size: n, table }
    }

    /// The subalgebra of a power on the given (closed) element list.
    pub fn from_power_elements(m: &AutomaticAlgebra, elems: &[PowerElement]) -> Result<Self, PowerError> {
        let index: HashMap<&PowerElement, usize> = elems.iter().enumerate().map(|(i, e)| (e, i)).collect();
        let n = elems.len();
        let mut table = Vec::with_capacity(n * n);
        for x in elems {
            for y in elems {
                let p = power_product(m, x, y);
                let k = index.get(&p).ok_or_else(|| PowerError::PreconditionViolated {
                    name: "subalgebra".into(),
                    reason: "element list is not closed under the product".into(),
                })?;
                table.push(*k);
            }
        }
        Ok(FiniteGroupoid { size: n, table })
    }

    /// Generating set: every irreducible element (not a product), then a greedy
    /// index-order scan for whatever those leave out.
    pub fn generating_set(&self) -> Vec<usize> {
        let mut is_product = vec![false; self.size];
        for &p in &self.table {
            is_product[p] = true;
        }
        let order = (0..self.size).filter(|&x| !is_product[x]).chain((0..self.size).filter(|&x| is_product[x]));
        let mut inside = vec![false; self.size];
        let mut members: Vec<usize> = Vec::new();
        let mut gens = Vec::new();
        for x in order {
            if inside[x] {
                continue;
            }
            gens.push(x);
            inside[x] = true;
            members.push(x);
            let mut k = members.len() - 1;
            while k < members.len() {
                let z = members[k];
                for idx in 0..members.len() {
                    let y = members[idx];
                    for p in [self.mul(z, y), self.mul(y, z)] {
                        if !inside[p] {
                            inside[p] = true;
                            members.push(p);
                        }
                    }
                }
                k += 1;
            }
        }
        gens
    }
}

/// A map from a finite domain into an automatic algebra.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteMap<D> {
    pub domain: Vec<D>,
    pub images: Vec<Element>,
}

impl<D: PartialEq> FiniteMap<D> {
    pub fn get(&self, x: &D) -> Option<Element> {
        self.domain.iter().position(|d| d == x).map(|i| self.images[i])
    }
}

/// A homomorphism from a [`FiniteGroupoid`], as images in the domain's index order.
pub type Hom = Vec<Element>;

#[derive(Clone, Copy, Debug)]
pub struct HomOptions {
    pub injective_only: bool,
    pub cap: usize,
    pub strategy: Strategy,
}

impl Default for HomOptions {
    fn default() -> Self {
        HomOptions { injective_only: false, cap: DEFAULT_HOM_CAP, strategy: Strategy::default() }
    }
}

struct Search<'a> {
    a: &'a FiniteGroupoid,
    m: &'a AutomaticAlgebra,
    injective: bool,
    assign: Vec<Option<Element>>,
    used: Vec<bool>,
    assigned: Vec<usize>,
}

impl<'a> Search<'a> {
    fn new(a: &'a FiniteGroupoid, m: &'a AutomaticAlgebra, injective: bool) -> Self {
        Search { a, m, injective, assign: vec![None; a.size()], used: vec![false; m.size()], assigned: Vec::new() }
    }

    fn set(&mut self, z: usize, v: Element, queue: &mut Vec<usize>) -> bool {
        match self.assign[z] {
            Some(w) => w == v,
            None => {
                let vi = self.m.index_of(v);
                if self.injective && self.used[vi] {
                    return false;
                }
                self.used[vi] = true;
                self.assign[z] = Some(v);
                self.assigned.push(z);
                queue.push(z);
                true
            }
        }
    }

    /// Assigns `z ↦ v` and closes under products; on failure the caller undoes to the mark.
    fn extend(&mut self, z: usize, v: Element) -> bool {
        let mut queue = Vec::new();
        if !self.set(z, v, &mut queue) {
            return false;
        }
        while let Some(x) = queue.pop() {
            let hx = self.assign[x].unwrap();
            let mut k = 0;
            while k < self.assigned.len() {
                let y = self.assigned[k];
                let hy = self.assign[y].unwrap();
                let p = self.a.mul(x, y);
                if !self.set(p, self.m.product(hx, hy), &mut queue) {
                    return false;
                }
                let p = self.a.mul(y, x);
                if !self.set(p, self.m.product(hy, hx), &mut queue) {
                    return false;
                }
                k += 1;
            }
        }
        true
    }

    fn undo(&mut self, mark: usize) {
        while self.assigned.len() > mark {
            let z = self.assigned.pop().unwrap();
            let v = self.assign[z].take().unwrap();
            self.used[self.m.index_of(v)] = false;
        }
    }

    fn run(&mut self, gens: &[usize], at: usize, out: &mut Vec<Hom>, stop_at_first: bool) {
        if stop_at_first && !out.is_empty() {
            return;
        }
        if at == gens.len() {
            debug_assert!(self.assign.iter().all(Option::is_some));
            out.push(self.assign.iter().map(|x| x.unwrap()).collect());
            return;
        }
        let g = gens[at];
        if self.assign[g].is_some() {
            self.run(gens, at + 1, out, stop_at_first);
            return;
        }
        for vi in 0..self.m.size() {
            let mark = self.assigned.len();
            if self.extend(g, self.m.element(vi)) {
                self.run(gens, at + 1, out, stop_at_first);
            }
            self.undo(mark);
            if stop_at_first && !out.is_empty() {
                return;
            }
        }
    }
}

/// All homomorphisms `A → M`, in lexicographic order of generator images.
pub fn enumerate_homs(a: &FiniteGroupoid, m: &AutomaticAlgebra, opts: HomOptions) -> Result<Vec<Hom>, PowerError> {
    if a.size() > opts.cap {
        return Err(PowerError::CapExceeded { what: "hom domain".into(), size: a.size(), cap: opts.cap });
    }
    if a.size() == 0 {
        return Ok(vec![Vec::new()]);
    }
    let gens = a.generating_set();
    let first = gens[0];
    let branches = par::map_range(opts.strategy, m.size(), |vi| {
        let mut s = Search::new(a, m, opts.injective_only);
        let mut out = Vec::new();
        if s.extend(first, m.element(vi)) {
            s.run(&gens, 1, &mut out, false);
        }
        out
    });
    Ok(branches.into_iter().flatten().collect())
}

/// The first homomorphism in enumeration order, if any. No size cap.
pub fn find_hom(a: &FiniteGroupoid, m: &AutomaticAlgebra, injective_only: bool) -> Option<Hom> {
    if a.size() == 0 {
        return Some(Vec::new());
    }
    let gens = a.generating_set();
    let mut s = Search::new(a, m, injective_only);
    let mut out = Vec::new();
    s.run(&gens, 0, &mut out, true);
    out.pop()
}

/// A hom agreeing with `fixed` on the listed domain indices, if one exists.
pub fn extend_partial(a: &FiniteGroupoid, m: &AutomaticAlgebra, fixed: &[(usize, Element)]) -> Option<Hom> {
    HomExtender::new(a, m).extend(fixed)
}

/// Reusable extension search for partial maps out of one groupoid.
///
/// Uses domain propagation over the product table rather than generator
/// backtracking, so refutations stay cheap on domains with many free generators.
pub struct HomExtender<'a> {
    a: &'a FiniteGroupoid,
    m: &'a AutomaticAlgebra,
    k: usize,
    prod: Vec<usize>,
    watch: Vec<Vec<(usize, usize)>>,
    /// Arc-consistent domains with nothing fixed; `None` if no hom exists at all.
    base: Option<Vec<u64>>,
}

impl<'a> HomExtender<'a> {
    pub fn new(a: &'a FiniteGroupoid, m: &'a AutomaticAlgebra) -> Self {
        let k = m.size();
        assert!(k <= 64, "domain bitmasks hold at most 64 values");
        let prod = (0..k * k).map(|i| m.index_of(m.product(m.element(i / k), m.element(i % k)))).collect();
        let n = a.size();
        let mut watch: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        for x in 0..n {
            for y in 0..n {
                let z = a.mul(x, y);
                watch[x].push((x, y));
                if y != x {
                    watch[y].push((x, y));
                }
                if z != x && z != y {
                    watch[z].push((x, y));
                }
            }
        }
        let mut ext = HomExtender { a, m, k, prod, watch, base: None };
        let full: u64 = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
        let mut dom = vec![full; n];
        if ext.propagate(&mut dom, &mut (0..n).collect()) {
            ext.base = Some(dom);
        }
        ext
    }

    pub fn extend(&self, fixed: &[(usize, Element)]) -> Option<Hom> {
        let mut dom = self.base.clone()?;
        for &(z, v) in fixed {
            dom[z] &= 1u64 << self.m.index_of(v);
            if dom[z] == 0 {
                return None;
            }
        }
        let mut queue: Vec<usize> = fixed.iter().map(|&(z, _)| z).collect();
        if !self.propagate(&mut dom, &mut queue) {
            return None;
        }
        self.search(dom).map(|d| d.iter().map(|&bits| self.m.element(bits.trailing_zeros() as usize)).collect())
    }
}

impl HomExtender<'_> {
    fn values(bits: u64) -> impl Iterator<Item = usize> {
        (0..64).filter(move |i| bits >> i & 1 == 1)
    }

    /// Narrows domains to arc consistency; false on a wipe-out.
    fn propagate(&self, dom: &mut [u64], queue: &mut Vec<usize>) -> bool {
        let mut queued = vec![false; dom.len()];
        for &z in queue.iter() {
            queued[z] = true;
        }
        while let Some(z) = queue.pop() {
            queued[z] = false;
            for &(x, y) in &self.watch[z] {
                let xy = self.a.mul(x, y);
                let (mut nx, mut ny, mut nz) = (0u64, 0u64, 0u64);
                for u in Self::values(dom[x]) {
                    for v in Self::values(dom[y]) {
                        let w = self.prod[u * self.k + v];
                        if dom[xy] >> w & 1 == 1 {
                            nx |= 1 << u;
                            ny |= 1 << v;
                            nz |= 1 << w;
                        }
                    }
                }
                // x, y, xy may coincide, so intersect in turn
                for (t, new) in [(x, nx), (y, ny), (xy, nz)] {
                    let narrowed = dom[t] & new;
                    if narrowed == 0 {
                        return false;
                    }
                    if narrowed != dom[t] {
                        dom[t] = narrowed;
                        if !queued[t] {
                            queued[t] = true;
                            queue.push(t);
                        }
                    }
                }
            }
        }
        true
    }

    fn search(&self, dom: Vec<u64>) -> Option<Vec<u64>> {
        let Some(z) = (0..dom.len()).filter(|&z| dom[z].count_ones() > 1).min_by_key(|&z| dom[z].count_ones()) else {
            return Some(dom);
        };
        for v in Self::values(dom[z]) {
            let mut next = dom.clone();
            next[z] = 1 << v;
            if self.propagate(&mut next, &mut vec![z]) {
                if let Some(found) = self.search(next) {
                    return Some(found);
                }
            }
        }
        None
    }
}

/// First embedding of `src` into `dst`, indexed by `src`'s canonical element order.
pub fn find_embedding(src: &AutomaticAlgebra, dst: &AutomaticAlgebra) -> Option<Hom> {
    find_hom(&FiniteGroupoid::from_algebra(src), dst, true)
}

/// Whether `h` (in `src` order) is an injective homomorphism `src → dst`.
pub fn is_embedding(src: &AutomaticAlgebra, dst: &AutomaticAlgebra, h: &[Element]) -> bool {
    if h.len() != src.size() || h.iter().any(|&x| !dst.contains(x)) {
        return false;
    }
    let distinct: HashSet<&Element> = h.iter().collect();
    if distinct.len() != h.len() {
        return false;
    }
    (0..src.size()).all(|i| {
        (0..src.size()).all(|j| {
            let p = src.index_of(src.product(src.element(i), src.element(j)));
            h[p] == dst.product(h[i], h[j])
        })
    })
}

fn kind_mask(t: &[Element], pick: fn(Element) -> bool) -> u64 {
    t.iter().enumerate().filter(|(_, e)| pick(**e)).fold(0u64, |acc, (i, _)| acc | (1 << (i % 64)))
}

/// Whether the relation `R ⊆ Mᵏ` is closed under the pointwise product.
pub fn is_compatible(m: &AutomaticAlgebra, rel: &[Vec<Element>]) -> bool {
    compatibility_violation(m, rel).is_none()
}

/// A pair of tuples whose product leaves the relation.
pub fn compatibility_violation(m: &AutomaticAlgebra, rel: &[Vec<Element>]) -> Option<(Vec<Element>, Vec<Element>)> {
    let Some(first) = rel.first() else { return None };
    let k = first.len();
    let set: HashSet<&Vec<Element>> = rel.iter().collect();
    let zero = vec![Element::Zero; k];
    let zero_in = set.contains(&zero);
    // Products are nonzero only where a state meets a letter; group by those masks.
    let states: Vec<u64> = rel.iter().map(|t| kind_mask(t, Element::is_state)).collect();
    let letters: Vec<u64> = rel.iter().map(|t| kind_mask(t, Element::is_letter)).collect();
    let wide = k > 64;
    for (i, x) in rel.iter().enumerate() {
        for (j, y) in rel.iter().enumerate() {
            if !wide && states[i] & letters[j] == 0 {
                if zero_in {
                    continue;
                }
                return Some((x.clone(), y.clone()));
            }
            let p: Vec<Element> = x.iter().zip(y).map(|(&a, &b)| m.product(a, b)).collect();
            if !set.contains(&p) {
                return Some((x.clone(), y.clone()));
            }
        }
    }
    None
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
    fn power_element_examples() {
        let e = power_element(Z, &[(1, R), (5, R)], 6).unwrap();
        assert_eq!(e.0, vec![Z, R, Z, Z, Z, R]);
        assert_eq!(power_element(Q, &[], 3).unwrap(), PowerElement::constant(Q, 3));
        assert_eq!(power_element(Q, &[], 1).unwrap().0, vec![Q]);
        assert_eq!(power_element(Z, &[(1, R), (1, Q)], 3), Err(PowerError::DuplicateIndex(1)));
        assert!(matches!(power_element(Z, &[(3, R)], 3), Err(PowerError::IndexOutOfRange { .. })));
    }

    #[test]
    fn subuniverse_examples() {
        let b = catalog::boozer();
        let sg = generate_subuniverse(&b, 2, &[PowerElement(vec![Q, Q]), PowerElement(vec![A, A])]);
        let got: HashSet<PowerElement> = sg.into_iter().collect();
        let want: HashSet<PowerElement> =
            [vec![Q, Q], vec![A, A], vec![R, R], vec![Z, Z]].into_iter().map(PowerElement).collect();
        assert_eq!(got, want);
        assert_eq!(generate_subuniverse(&b, 3, &[PowerElement::constant(Z, 3)]).len(), 1);
        let f0 = catalog::f(0);
        let sg = generate_subuniverse(&f0, 1, &[PowerElement(vec![Q]), PowerElement(vec![A])]);
        assert_eq!(
            sg,
            vec![PowerElement(vec![Q]), PowerElement(vec![A]), PowerElement(vec![Z]), PowerElement(vec![R])]
        );
    }

    #[test]
    fn hom_examples() {
        let b = catalog::boozer();
        let gb = FiniteGroupoid::from_algebra(&b);
        let homs = enumerate_homs(&gb, &b, HomOptions::default()).unwrap();
        assert!(homs.contains(&b.elements()));
        let f0 = catalog::f(0);
        let emb = enumerate_homs(
            &FiniteGroupoid::from_algebra(&f0),
            &b,
            HomOptions { injective_only: true, ..Default::default() },
        )
        .unwrap();
        assert!(emb.contains(&vec![Q, R, A, Z]));
        let n0 = catalog::n(0).unwrap();
        let n1 = catalog::n(1).unwrap();
        let none = enumerate_homs(
            &FiniteGroupoid::from_algebra(&n0),
            &n1,
            HomOptions { injective_only: true, ..Default::default() },
        )
        .unwrap();
        assert!(none.is_empty());
        assert!(find_embedding(&n0, &n1).is_none());
    }

    #[test]
    fn hom_cap() {
        let b = catalog::boozer();
        let opts = HomOptions { cap: 3, ..Default::default() };
        assert!(matches!(
            enumerate_homs(&FiniteGroupoid::from_algebra(&b), &b, opts),
            Err(PowerError::CapExceeded { .. })
        ));
    }

    #[test]
    fn hom_strategies_agree() {
        for m in catalog::all_small().into_iter().filter(|m| m.size() <= 8) {
            let g = FiniteGroupoid::from_algebra(&m);
            let seq =
                enumerate_homs(&g, &m, HomOptions { strategy: Strategy::Sequential, ..Default::default() }).unwrap();
            let par =
                enumerate_homs(&g, &m, HomOptions { strategy: Strategy::Parallel, ..Default::default() }).unwrap();
            assert_eq!(seq, par);
        }
    }

    #[test]
    fn extender_matches_enumeration() {
        for m in [catalog::n(1).unwrap(), catalog::n(5).unwrap(), catalog::f(1), catalog::lyndon()] {
            let a = FiniteGroupoid::from_algebra(&m);
            let homs = enumerate_homs(&a, &m, HomOptions::default()).unwrap();
            let ext = HomExtender::new(&a, &m);
            for x in 0..a.size() {
                for y in 0..a.size() {
                    for u in m.elements() {
                        for v in m.elements() {
                            let fixed = [(x, u), (y, v)];
                            let expected = homs.iter().any(|h| h[x] == u && h[y] == v);
                            let got = ext.extend(&fixed);
                            assert_eq!(got.is_some(), expected, "{x}->{u:?}, {y}->{v:?}");
                            if let Some(h) = got {
                                assert!(homs.contains(&h));
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn compatibility_examples() {
        let b = catalog::boozer();
        let diag: Vec<Vec<Element>> = b.elements().into_iter().map(|x| vec![x, x]).collect();
        assert!(is_compatible(&b, &diag));
        assert!(!is_compatible(&b, &[vec![Q, R]]));
    }

    #[test]
    fn generating_set_generates() {
        for m in catalog::all_small() {
            let g = FiniteGroupoid::from_algebra(&m);
            let gens = g.generating_set();
            let as_pow: Vec<PowerElement> = gens.iter().map(|&i| PowerElement(vec![m.element(i)])).collect();
            assert_eq!(generate_subuniverse(&m, 1, &as_pow).len(), m.size());
        }
    }
}
