//! Independent certificate checker.
//!
//! Only `product`, `delta` and name lookup are used here; nothing from the
//! structure or classifier code paths is called.

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::algebra::{AutomaticAlgebra, Element};
use crate::catalog;

use super::certificate::{
    Certificate, GroupCertificate, Outcome, ReductionKind, ReductionStep, Verdict, IDENTITY_WXYZ, IDENTITY_XY,
};

type Check = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn state(m: &AutomaticAlgebra, name: &str) -> Result<usize, String> {
    m.state_index(name).ok_or_else(|| format!("no state named {name}"))
}

fn letter(m: &AutomaticAlgebra, name: &str) -> Result<usize, String> {
    m.letter_index(name).ok_or_else(|| format!("no letter named {name}"))
}

fn element(m: &AutomaticAlgebra, name: &str) -> Result<Element, String> {
    m.element_by_name(name).ok_or_else(|| format!("no element named {name}"))
}

fn run(m: &AutomaticAlgebra, q: usize, word: &[String]) -> Result<Option<usize>, String> {
    let mut cur = Some(q);
    for a in word {
        let a = letter(m, a)?;
        cur = cur.and_then(|s| m.delta(s, a));
    }
    Ok(cur)
}

/// `src → dst` given as name pairs: total on `src`, injective, multiplicative.
fn check_embedding(src: &AutomaticAlgebra, dst: &AutomaticAlgebra, pairs: &[(String, String)]) -> Check {
    let mut map: HashMap<Element, Element> = HashMap::new();
    for (x, y) in pairs {
        let (x, y) = (element(src, x)?, element(dst, y)?);
        ensure(map.insert(x, y).is_none(), || format!("{} mapped twice", src.name(x)))?;
    }
    ensure(map.len() == src.size(), || "embedding is not total".into())?;
    let images: HashSet<&Element> = map.values().collect();
    ensure(images.len() == map.len(), || "embedding is not injective".into())?;
    for (&x, &fx) in &map {
        for (&y, &fy) in &map {
            let lhs = map[&src.product(x, y)];
            ensure(lhs == dst.product(fx, fy), || format!("embedding breaks product {}·{}", src.name(x), src.name(y)))?;
        }
    }
    Ok(())
}

fn expected_outcome(c: &Certificate) -> Outcome {
    match c {
        Certificate::ZeroSemigroup
        | Certificate::SingleLetterWhiskery { .. }
        | Certificate::TwoStateEquations { .. }
        | Certificate::ConstantLetters { .. }
        | Certificate::AllLoops { .. }
        | Certificate::LetterAffine { .. } => Outcome::Dualizable,
        Certificate::WhiskeryFailure { .. }
        | Certificate::RanKill { .. }
        | Certificate::OrderSensitive { .. }
        | Certificate::TwoStateForbidden { .. }
        | Certificate::CommutingPermutations { .. } => Outcome::NonDualizable,
        Certificate::Inconclusive => Outcome::Unknown,
        Certificate::ReductionChain { inner, .. } => expected_outcome(inner),
    }
}

/// Re-derives every claim of `v` from `m`. Returns the first failure reason.
pub fn verify_certificate(m: &AutomaticAlgebra, v: &Verdict) -> Check {
    let want = expected_outcome(&v.certificate);
    ensure(want == v.verdict, || format!("certificate supports {want:?}, verdict says {:?}", v.verdict))?;
    check(m, &v.certificate)
}

pub fn certificate_valid(m: &AutomaticAlgebra, v: &Verdict) -> bool {
    verify_certificate(m, v).is_ok()
}

fn check(m: &AutomaticAlgebra, c: &Certificate) -> Check {
    match c {
        Certificate::ZeroSemigroup => {
            ensure(m.num_states() == 0 || m.num_letters() == 0, || "algebra has states and letters".into())
        }
        Certificate::ReductionChain { steps, inner } => {
            ensure(!steps.is_empty(), || "empty reduction chain".into())?;
            let mut cur = m.clone();
            for s in steps {
                cur = replay(&cur, s)?;
            }
            check(&cur, inner)
        }
        Certificate::WhiskeryFailure { letter: a, state: q, m: k, embedding } => {
            let (a, q) = (letter(m, a)?, state(m, q)?);
            let first = m.delta(q, a).ok_or("letter undefined at state")?;
            let mut cur = Some(first);
            for n in 1..=m.num_states() {
                // cur = q·a^n; step once more to q·a^{n+1}
                cur = cur.and_then(|s| m.delta(s, a));
                ensure(cur != Some(first), || format!("q·a^{} = q·a", n + 1))?;
            }
            check_embedding(&catalog::f(*k), m, embedding)?;
            // the copy of F_m must sit on this run
            let image = |x: &str| embedding.iter().find(|(src, _)| src == x).map(|(_, y)| y.as_str());
            ensure(image("a") == Some(m.letter_names()[a].as_str()), || "embedding uses another letter".into())?;
            let on_run = (0..=m.num_states())
                .scan(Some(q), |cur, _| {
                    let here = *cur;
                    *cur = cur.and_then(|s| m.delta(s, a));
                    Some(here)
                })
                .flatten()
                .any(|s| image("q") == Some(m.state_names()[s].as_str()));
            ensure(on_run, || "embedding is not on the run of the state".into())
        }
        Certificate::RanKill { case, letter: a, state: q, word } => {
            let (a, q) = (letter(m, a)?, state(m, q)?);
            let end = run(m, q, word)?.ok_or("word is undefined at state")?;
            match case {
                1 => {
                    ensure(m.delta(q, a).is_none(), || "state is not killed by letter".into())?;
                    ensure(m.delta(end, a).is_some(), || "end state is not in the domain".into())
                }
                2 => {
                    ensure((0..m.num_states()).any(|p| m.delta(p, a) == Some(q)), || {
                        "state is not in the range".into()
                    })?;
                    ensure(m.delta(end, a).is_none(), || "end state is not killed".into())
                }
                _ => Err(format!("unknown case {case}")),
            }
        }
        Certificate::OrderSensitive { state: q, w1, w2 } => {
            let q = state(m, q)?;
            let (mut s1, mut s2) = (w1.clone(), w2.clone());
            s1.sort();
            s2.sort();
            ensure(s1 == s2, || "words use different letters".into())?;
            ensure(run(m, q, w1)?.is_none(), || "first word does not kill".into())?;
            ensure(run(m, q, w2)?.is_some(), || "second word kills".into())
        }
        Certificate::SingleLetterWhiskery { letter: a } => {
            ensure(m.num_letters() == 1, || "more than one letter".into())?;
            let a = letter(m, a)?;
            for q in 0..m.num_states() {
                let Some(first) = m.delta(q, a) else { continue };
                let mut cur = first;
                let mut back = false;
                for _ in 0..m.num_states() {
                    match m.delta(cur, a) {
                        Some(s) => cur = s,
                        None => break,
                    }
                    if cur == first {
                        back = true;
                        break;
                    }
                }
                // either the run dies or it returns to q·a
                let dies = (0..=m.num_states()).try_fold(first, |s, _| m.delta(s, a)).is_none();
                ensure(back || dies, || format!("letter is not whiskery at {}", m.state_names()[q]))?;
                ensure(!(back && dies), || "inconsistent run".into())?;
            }
            Ok(())
        }
        Certificate::TwoStateEquations { identities } => {
            ensure(m.num_states() == 2, || "not a two-state algebra".into())?;
            ensure(identities.len() == 2 && identities[0] == IDENTITY_XY && identities[1] == IDENTITY_WXYZ, || {
                "wrong identities".into()
            })?;
            ensure(eq_xy_counterexample(m).is_none(), || format!("{IDENTITY_XY} fails"))?;
            ensure(eq_wxyz_counterexample(m).is_none(), || format!("{IDENTITY_WXYZ} fails"))
        }
        Certificate::TwoStateForbidden { forbidden, embedding, failed_identity, counterexample } => {
            ensure(m.num_states() == 2, || "not a two-state algebra".into())?;
            let ni = catalog::n(*forbidden).map_err(|e| e.to_string())?;
            ensure(*forbidden <= 5, || "forbidden index out of range".into())?;
            check_embedding(&ni, m, embedding)?;
            let val = |v: &str| -> Result<Element, String> {
                let (_, x) =
                    counterexample.iter().find(|(n, _)| n == v).ok_or_else(|| format!("variable {v} unassigned"))?;
                element(m, x)
            };
            let p = |x, y| m.product(x, y);
            if failed_identity == IDENTITY_XY {
                let (x, y) = (val("x")?, val("y")?);
                ensure(p(x, y) != p(p(p(x, y), y), y), || "counterexample satisfies the identity".into())
            } else if failed_identity == IDENTITY_WXYZ {
                let (w, x, y, z) = (val("w")?, val("x")?, val("y")?, val("z")?);
                ensure(p(p(p(w, x), y), z) != p(p(p(w, y), x), z), || "counterexample satisfies the identity".into())
            } else {
                Err(format!("unknown identity {failed_identity}"))
            }
        }
        Certificate::ConstantLetters { values } => {
            ensure(values.len() == m.num_letters(), || "not every letter listed".into())?;
            let mut seen = HashSet::new();
            for (a, v) in values {
                let (a, v) = (letter(m, a)?, state(m, v)?);
                ensure(seen.insert(a), || "letter listed twice".into())?;
                ensure((0..m.num_states()).all(|q| m.delta(q, a) == Some(v)), || {
                    format!("{} is not constant", m.letter_names()[a])
                })?;
            }
            Ok(())
        }
        Certificate::AllLoops { components } => {
            ensure(components.len() == m.num_states(), || "not every state listed".into())?;
            for q in 0..m.num_states() {
                for a in 0..m.num_letters() {
                    ensure(m.delta(q, a).is_none_or(|r| r == q), || "an edge is not a loop".into())?;
                }
            }
            for lc in components {
                let q = state(m, &lc.state)?;
                let listed: BTreeSet<usize> = lc.letters.iter().map(|a| letter(m, a)).collect::<Result<_, _>>()?;
                let actual: BTreeSet<usize> = (0..m.num_letters()).filter(|&a| m.delta(q, a).is_some()).collect();
                ensure(listed == actual, || format!("wrong loop letters at {}", lc.state))?;
            }
            Ok(())
        }
        Certificate::LetterAffine { components } => check_letter_affine(m, components),
        Certificate::CommutingPermutations { b, c, m: k, components } => check_commuting(m, b, c, *k, components),
        Certificate::Inconclusive => Ok(()),
    }
}

fn eq_xy_counterexample(m: &AutomaticAlgebra) -> Option<(Element, Element)> {
    let els = m.elements();
    let p = |x, y| m.product(x, y);
    els.iter().flat_map(|&x| els.iter().map(move |&y| (x, y))).find(|&(x, y)| p(x, y) != p(p(p(x, y), y), y))
}

fn eq_wxyz_counterexample(m: &AutomaticAlgebra) -> Option<[Element; 4]> {
    let els = m.elements();
    let p = |x, y| m.product(x, y);
    for &w in &els {
        for &x in &els {
            for &y in &els {
                for &z in &els {
                    if p(p(p(w, x), y), z) != p(p(p(w, y), x), z) {
                        return Some([w, x, y, z]);
                    }
                }
            }
        }
    }
    None
}

fn replay(m: &AutomaticAlgebra, step: &ReductionStep) -> Result<AutomaticAlgebra, String> {
    let nq = m.num_states();
    let nl = m.num_letters();
    let next = match step.kind {
        ReductionKind::DropUndefinedLetter | ReductionKind::DropRepeatedLetter => {
            let a = letter(m, &step.removed)?;
            match step.kind {
                ReductionKind::DropUndefinedLetter => ensure((0..nq).all(|q| m.delta(q, a).is_none()), || {
                    format!("{} is defined somewhere", step.removed)
                })?,
                _ => ensure((0..nl).any(|b| b != a && (0..nq).all(|q| m.delta(q, a) == m.delta(q, b))), || {
                    format!("{} repeats no other letter", step.removed)
                })?,
            }
            let keep: Vec<usize> = (0..nl).filter(|&b| b != a).collect();
            m.restrict(&(0..nq).collect::<Vec<_>>(), &keep)
        }
        ReductionKind::DropIsolatedState | ReductionKind::DropRedundantState => {
            let q = state(m, &step.removed)?;
            let in_range = (0..nq).any(|p| (0..nl).any(|a| m.delta(p, a) == Some(q)));
            ensure(!in_range, || format!("{} is in some range", step.removed))?;
            match step.kind {
                ReductionKind::DropIsolatedState => {
                    ensure((0..nl).all(|a| m.delta(q, a).is_none()), || format!("{} has outgoing edges", step.removed))?
                }
                _ => ensure((0..nq).any(|r| r != q && (0..nl).all(|a| m.delta(q, a) == m.delta(r, a))), || {
                    format!("{} has no twin state", step.removed)
                })?,
            }
            let keep: Vec<usize> = (0..nq).filter(|&s| s != q).collect();
            m.restrict(&keep, &(0..nl).collect::<Vec<_>>())
        }
    };
    // embedding m → next²
    let mut map: HashMap<Element, (Element, Element)> = HashMap::new();
    for (x, y, z) in &step.embedding {
        let x = element(m, x)?;
        ensure(map.insert(x, (element(&next, y)?, element(&next, z)?)).is_none(), || "element mapped twice".into())?;
    }
    ensure(map.len() == m.size(), || "reduction embedding is not total".into())?;
    let images: HashSet<&(Element, Element)> = map.values().collect();
    ensure(images.len() == map.len(), || "reduction embedding is not injective".into())?;
    for (&x, &(x1, x2)) in &map {
        for (&y, &(y1, y2)) in &map {
            let want = map[&m.product(x, y)];
            ensure(want == (next.product(x1, y1), next.product(x2, y2)), || {
                "reduction embedding breaks a product".into()
            })?;
        }
    }
    Ok(next)
}

/// Undirected connectivity through edges, as sorted name sets.
fn component_names(m: &AutomaticAlgebra) -> BTreeSet<BTreeSet<String>> {
    let n = m.num_states();
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for q in 0..n {
            for a in 0..m.num_letters() {
                if let Some(r) = m.delta(q, a) {
                    let l = label[q].min(label[r]);
                    if label[q] != l || label[r] != l {
                        label[q] = l;
                        label[r] = l;
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut groups: HashMap<usize, BTreeSet<String>> = HashMap::new();
    for q in 0..n {
        groups.entry(label[q]).or_default().insert(m.state_names()[q].clone());
    }
    groups.into_values().collect()
}

fn check_letter_affine(m: &AutomaticAlgebra, comps: &[GroupCertificate]) -> Check {
    let listed: BTreeSet<BTreeSet<String>> = comps.iter().map(|g| g.states.iter().cloned().collect()).collect();
    ensure(listed == component_names(m), || "components do not match the algebra".into())?;
    for g in comps {
        let k = g.states.len();
        let idx: HashMap<&str, usize> = g.states.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
        ensure(idx.len() == k, || "repeated state in component".into())?;
        let look = |s: &str| idx.get(s).copied().ok_or_else(|| format!("{s} is not in the component"));
        ensure(g.table.len() == k && g.table.iter().all(|r| r.len() == k), || "table has wrong shape".into())?;
        let mut t = vec![vec![0; k]; k];
        for i in 0..k {
            for j in 0..k {
                t[i][j] = look(&g.table[i][j])?;
            }
        }
        let e = look(&g.identity)?;
        for x in 0..k {
            ensure(t[e][x] == x && t[x][e] == x, || "identity fails".into())?;
            ensure((0..k).any(|y| t[x][y] == e), || "missing inverse".into())?;
            for y in 0..k {
                ensure(t[x][y] == t[y][x], || "table is not commutative".into())?;
                for z in 0..k {
                    ensure(t[t[x][y]][z] == t[x][t[y][z]], || "table is not associative".into())?;
                }
            }
        }
        let inv = |x: usize| (0..k).find(|&y| t[x][y] == e).unwrap();
        // letter laws
        let mut images = BTreeSet::new();
        let mut accounted = HashSet::new();
        for (a, img) in &g.letter_images {
            let (ai, gi) = (letter(m, a)?, look(img)?);
            ensure(accounted.insert(ai), || format!("{a} listed twice"))?;
            for (qi, qn) in g.states.iter().enumerate() {
                let q = state(m, qn)?;
                let want = state(m, &g.states[t[qi][gi]])?;
                ensure(m.delta(q, ai) == Some(want), || format!("{qn}·{a} is not {qn}*{img}"))?;
            }
            images.insert(gi);
        }
        for a in &g.dropped_letters {
            let ai = letter(m, a)?;
            ensure(accounted.insert(ai), || format!("{a} listed twice"))?;
            for qn in &g.states {
                ensure(m.delta(state(m, qn)?, ai).is_none(), || format!("dropped letter {a} is defined at {qn}"))?;
            }
        }
        ensure(accounted.len() == m.num_letters(), || "some letter unaccounted for".into())?;
        if images.is_empty() {
            ensure(k == 1, || "no letters act on a component with several states".into())?;
            continue;
        }
        // images generate the group from e
        let mut reach = BTreeSet::from([e]);
        let mut frontier = vec![e];
        while let Some(x) = frontier.pop() {
            for &gi in &images {
                if reach.insert(t[x][gi]) {
                    frontier.push(t[x][gi]);
                }
            }
        }
        ensure(reach.len() == k, || "letter images do not generate the group".into())?;
        for &x in &images {
            for &y in &images {
                for &z in &images {
                    ensure(images.contains(&t[t[x][inv(y)]][z]), || {
                        "letter images are not closed under x y⁻¹ z".into()
                    })?;
                }
            }
        }
        let h: BTreeSet<usize> = g.subgroup_h.iter().map(|s| look(s)).collect::<Result<_, _>>()?;
        let g0 = *images.iter().next().unwrap();
        let coset: BTreeSet<usize> = h.iter().map(|&x| t[g0][x]).collect();
        ensure(coset == images, || "letter images are not a coset of the recorded subgroup".into())?;
        ensure(h.contains(&e) && h.iter().all(|&x| h.iter().all(|&y| h.contains(&t[x][inv(y)]))), || {
            "recorded subgroup is not a subgroup".into()
        })?;
    }
    Ok(())
}

fn check_commuting(m: &AutomaticAlgebra, b: &str, c: &str, k: usize, comps: &[Vec<String>]) -> Check {
    let n = m.num_states();
    let mut perms = Vec::new();
    for a in 0..m.num_letters() {
        let p: Vec<usize> = (0..n).map(|q| m.delta(q, a)).collect::<Option<_>>().ok_or("a letter is partial")?;
        ensure(p.iter().collect::<HashSet<_>>().len() == n, || "a letter is not a permutation".into())?;
        perms.push(p);
    }
    for p in &perms {
        for r in &perms {
            ensure((0..n).all(|q| r[p[q]] == p[r[q]]), || "letters do not commute".into())?;
        }
    }
    let (bi, ci) = (letter(m, b)?, letter(m, c)?);
    ensure(bi != ci, || "b and c coincide".into())?;
    let mut cinv = vec![0; n];
    for q in 0..n {
        cinv[perms[ci][q]] = q;
    }
    let sigma: Vec<usize> = (0..n).map(|q| perms[bi][cinv[q]]).collect();
    let mut order = 1;
    let mut cur = sigma.clone();
    while cur.iter().enumerate().any(|(i, &x)| i != x) {
        cur = cur.iter().map(|&x| sigma[x]).collect();
        order += 1;
    }
    ensure(order == k && k > 1, || format!("order of b c⁻¹ is {order}, certificate says {k}"))?;
    let listed: BTreeSet<BTreeSet<String>> = comps.iter().map(|v| v.iter().cloned().collect()).collect();
    ensure(listed == component_names(m), || "components do not match the algebra".into())?;
    for comp in comps {
        let qs: Vec<usize> = comp.iter().map(|s| state(m, s)).collect::<Result<_, _>>()?;
        let pos: HashMap<usize, usize> = qs.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let acts: BTreeSet<Vec<usize>> = perms.iter().map(|p| qs.iter().map(|q| pos[&p[*q]]).collect()).collect();
        let acts: Vec<Vec<usize>> = acts.into_iter().collect();
        ensure(acts.len() <= 20, || "too many letter actions to enumerate".into())?;
        if let Some(s) = coset_by_subsets(&acts, k) {
            return Err(format!("component {comp:?} contains a coset of a subgroup of order {s} dividing {k}"));
        }
    }
    Ok(())
}

/// Searches subsets `S ∋ s0` of the actions with `s0⁻¹S` a subgroup of order > 1 dividing `k`.
fn coset_by_subsets(acts: &[Vec<usize>], k: usize) -> Option<usize> {
    let n = acts.len();
    let width = acts.first().map_or(0, |a| a.len());
    let comp = |p: &[usize], q: &[usize]| -> Vec<usize> { (0..width).map(|i| q[p[i]]).collect() };
    let inv = |p: &[usize]| {
        let mut v = vec![0; width];
        for (i, &x) in p.iter().enumerate() {
            v[x] = i;
        }
        v
    };
    for fixed in 0..n {
        let kinv = inv(&acts[fixed]);
        for mask in 0u32..(1 << n) {
            if mask & (1 << fixed) == 0 || mask.count_ones() < 2 || !k.is_multiple_of(mask.count_ones() as usize) {
                continue;
            }
            let h: BTreeSet<Vec<usize>> =
                (0..n).filter(|i| mask & (1 << i) != 0).map(|i| comp(&acts[i], &kinv)).collect();
            if h.iter().all(|x| h.iter().all(|y| h.contains(&comp(x, y)))) {
                return Some(h.len());
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::classify;

    #[test]
    fn tampered_letter_rejected() {
        let b = catalog::boozer();
        let mut v = classify(&b).unwrap();
        assert!(certificate_valid(&b, &v));
        if let Certificate::WhiskeryFailure { letter, .. } = &mut v.certificate {
            *letter = "b".into();
        }
        assert!(!certificate_valid(&b, &v));
    }

    #[test]
    fn outcome_mismatch_rejected() {
        let b = catalog::boozer();
        let mut v = classify(&b).unwrap();
        v.verdict = Outcome::Dualizable;
        assert!(verify_certificate(&b, &v).is_err());
    }

    #[test]
    fn inconclusive_only_with_unknown() {
        let l = catalog::lyndon();
        let mut v = classify(&l).unwrap();
        assert!(certificate_valid(&l, &v));
        v.verdict = Outcome::NonDualizable;
        assert!(!certificate_valid(&l, &v));
    }

    #[test]
    fn subset_search_finds_full_group() {
        // identity plus rotation and its square: Z_3 itself
        let acts = vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 0, 1]];
        assert_eq!(coset_by_subsets(&acts, 3), Some(3));
        assert_eq!(coset_by_subsets(&acts[1..], 3), None);
    }
}
