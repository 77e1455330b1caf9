//! Brute-force reference implementations for the self-check suites.
//!
//! Nothing here calls the decision procedures it is used to check.

use std::collections::{HashMap, HashSet, VecDeque};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::AutomaticAlgebra;
use crate::groups::Group;

/// Some state, some word of length at most `max_len` and a rearrangement with
/// `s·w = 0 ≠ s·w'`.
pub fn order_sensitive_brute(m: &AutomaticAlgebra, max_len: usize) -> bool {
    let k = m.num_letters();
    if k < 2 {
        return false;
    }
    for len in 2..=max_len {
        let total = k.pow(len as u32);
        for s in 0..m.num_states() {
            // multiset key ↦ (some arrangement survives, some arrangement dies)
            let mut seen: HashMap<Vec<usize>, (bool, bool)> = HashMap::new();
            for mut code in 0..total {
                let mut w = vec![0; len];
                for slot in w.iter_mut() {
                    *slot = code % k;
                    code /= k;
                }
                let alive = w.iter().try_fold(s, |q, &a| m.delta(q, a)).is_some();
                let mut key = w;
                key.sort_unstable();
                let e = seen.entry(key).or_insert((false, false));
                if alive {
                    e.0 = true;
                } else {
                    e.1 = true;
                }
                if e.0 && e.1 {
                    return true;
                }
            }
        }
    }
    false
}

/// Invariant-factor lists `d_1 | d_2 | … ` with product `n`.
fn invariant_factor_lists(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: usize, last: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 1 {
            out.push(cur.clone());
            return;
        }
        // next factor is a multiple of `last` dividing `rest`
        for d in (2..=rest).filter(|d| rest.is_multiple_of(*d) && d % last == 0) {
            let after = rest / d;
            // remaining factors are multiples of d, so d must divide what is left
            if !after.is_multiple_of(d) && after != 1 {
                continue;
            }
            cur.push(d);
            go(after, d, cur, out);
            cur.pop();
        }
    }
    if n == 1 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    go(n, 1, &mut Vec::new(), &mut out);
    out
}

/// One group per isomorphism type of every order up to `max_order`, elements shuffled.
pub fn abelian_groups_up_to(max_order: usize, seed: u64) -> Vec<(String, Group)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for n in 1..=max_order {
        for factors in invariant_factor_lists(n) {
            let g = factors.iter().fold(Group::cyclic(1), |acc, &d| acc.direct_product(&Group::cyclic(d)));
            let mut perm: Vec<usize> = (0..g.order()).collect();
            perm.shuffle(&mut rng);
            let label = if factors.is_empty() {
                "trivial".to_string()
            } else {
                factors.iter().map(|d| format!("Z{d}")).collect::<Vec<_>>().join("×")
            };
            out.push((label, g.relabel(&perm)));
        }
    }
    out
}

/// Greedy generating set by closure, not by decomposition.
fn generators(g: &Group) -> Vec<usize> {
    let mut gens = Vec::new();
    let mut span: HashSet<usize> = HashSet::from([g.identity()]);
    for x in 0..g.order() {
        if span.contains(&x) {
            continue;
        }
        gens.push(x);
        let mut frontier: VecDeque<usize> = span.iter().copied().collect();
        while let Some(y) = frontier.pop_front() {
            for &s in &gens {
                let z = g.op(y, s);
                if span.insert(z) {
                    frontier.push_back(z);
                }
            }
        }
    }
    gens
}

/// Every endomorphism of `g`, found by trying all images of a generating set.
pub fn endomorphisms_brute(g: &Group) -> Vec<Vec<usize>> {
    let n = g.order();
    let gens = generators(g);
    let mut out = Vec::new();
    let total = n.pow(gens.len() as u32);
    'choice: for mut code in 0..total {
        let mut imgs = Vec::with_capacity(gens.len());
        for _ in 0..gens.len() {
            imgs.push(code % n);
            code /= n;
        }
        // extend along words in the generators
        let mut f: Vec<Option<usize>> = vec![None; n];
        f[g.identity()] = Some(g.identity());
        let mut queue = VecDeque::from([g.identity()]);
        while let Some(x) = queue.pop_front() {
            let fx = f[x].unwrap();
            for (&s, &fs) in gens.iter().zip(&imgs) {
                let y = g.op(x, s);
                let fy = g.op(fx, fs);
                match f[y] {
                    Some(v) if v != fy => continue 'choice,
                    Some(_) => {}
                    None => {
                        f[y] = Some(fy);
                        queue.push_back(y);
                    }
                }
            }
        }
        let f: Vec<usize> = f.into_iter().map(Option::unwrap).collect();
        if (0..n).all(|a| (0..n).all(|b| f[g.op(a, b)] == g.op(f[a], f[b]))) {
            out.push(f);
        }
    }
    out
}

/// The character property checked against every endomorphism rather than the supplied ones.
pub fn character_property(h: &Group, m: usize, u: usize, chi: &[usize], endos: &[Vec<usize>]) -> Result<(), String> {
    let n = h.order();
    for a in 0..n {
        for b in 0..n {
            if chi[h.op(a, b)] != (chi[a] + chi[b]) % m {
                return Err(format!("χ is not additive at ({a}, {b})"));
            }
        }
    }
    for x in (0..n).filter(|&x| x != h.identity()) {
        if !endos.iter().any(|phi| phi[u] == u && chi[phi[x]] != 0) {
            return Err(format!("no endomorphism fixing u separates {x}"));
        }
    }
    Ok(())
}

/// Whether the letters generate a group acting regularly on `block`.
pub fn regular_action(m: &AutomaticAlgebra, block: &[usize]) -> bool {
    let k = block.len();
    let pos = |q: usize| block.iter().position(|&s| s == q);
    let mut gens: Vec<Vec<usize>> = Vec::new();
    for a in 0..m.num_letters() {
        let img: Option<Vec<usize>> = block.iter().map(|&q| m.delta(q, a).and_then(pos)).collect();
        match img {
            Some(p) => gens.push(p),
            None if block.iter().all(|&q| m.delta(q, a).is_none()) => {}
            None => return false,
        }
    }
    let id: Vec<usize> = (0..k).collect();
    let mut group: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(p) = queue.pop_front() {
        for g in &gens {
            let q: Vec<usize> = p.iter().map(|&x| g[x]).collect();
            if group.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    let transitive = (0..k).all(|y| group.iter().any(|p| p[0] == y));
    transitive && group.len() == k
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn type_counts() {
        let counts: Vec<usize> = (1..=12).map(|n| invariant_factor_lists(n).len()).collect();
        // abelian groups of order n up to isomorphism
        assert_eq!(counts, vec![1, 1, 1, 2, 1, 1, 1, 3, 2, 1, 1, 2]);
        assert_eq!(abelian_groups_up_to(12, 0).len(), 17);
    }

    #[test]
    fn endomorphism_counts() {
        // |End(Z_n)| = n, |End(Z_2²)| = 16
        assert_eq!(endomorphisms_brute(&Group::cyclic(6)).len(), 6);
        let v4 = Group::cyclic(2).direct_product(&Group::cyclic(2));
        assert_eq!(endomorphisms_brute(&v4).len(), 16);
    }

    #[test]
    fn brute_order_sensitivity() {
        assert!(order_sensitive_brute(&catalog::boozer(), 4));
        assert!(!order_sensitive_brute(&catalog::c(3).unwrap(), 6));
    }

    #[test]
    fn regular_cycles() {
        let m = catalog::c(3).unwrap();
        assert!(regular_action(&m, &[0, 1, 2]));
        assert!(!regular_action(&catalog::n(1).unwrap(), &[0, 1]));
    }
}
