//! Finite truncations of the non-dualizability constructions.
//!
//! Each construction lives in an infinite power `M^I`. Here `I` is cut down to
//! `{1, …, N}` (plus the fixed `Q × {b, c}` block for the commuting-permutation
//! construction) and everything checkable at that size is checked: the displayed
//! identities, membership of the operands, closure of `A`, and `g ∉ A`.
//! The bounded-index congruence condition on the infinite algebra is not
//! finitely checkable; [`kernel_block_analysis`] looks at its hom-kernel form instead.
//!
//! Reports use 1-based indices.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AutomaticAlgebra, Element};
use crate::catalog;
use crate::error::{PowerError, WitnessError};
use crate::groups::lcm;
use crate::par::{self, Strategy};
use crate::powers::{
    enumerate_homs, generate_subuniverse_capped, power_product, FiniteGroupoid, HomExtender, HomOptions, PowerElement,
};
use crate::structure::{nondcomm_check, whiskery_direct};

/// Default bound on `|A|`.
pub const DEFAULT_ELEMENT_CAP: usize = 200_000;
/// Default bound on the hom-enumeration domain in [`kernel_block_analysis`].
pub const DEFAULT_KERNEL_CAP: usize = 4096;
/// Pair budget for an exhaustive closure check of a set-defined `A`.
const CLOSURE_PAIR_BUDGET: usize = 4_000_000;
const CLOSURE_SAMPLES: usize = 200_000;
/// Bound on `|M|^|A0|` candidate restrictions in the kernel analysis.
const MAX_RESTRICTIONS: usize = 10_000_000;

pub const SCOPE_NOTE: &str = "finite truncation: checks the displayed identities, closure of A and g ∉ A; \
the congruence condition on the infinite power is not finitely checkable";

/// A named construction with its parameters.
#[derive(Clone, Debug)]
pub enum Construction {
    /// Whiskery failure, on `F_m`.
    ThmWc(usize),
    /// Transposition case of the permutation quasi-equation, on any algebra failing it.
    ThmPcommCase1(AutomaticAlgebra),
    /// Lyndon's algebra, through its subalgebra on `{q, r, s} ∪ {a, c}`.
    ExAll4L,
    Lem2State2N4,
    Lem2State3N5,
    /// Commuting permutations with the chosen letters `b`, `c`.
    ThmNondcomm {
        algebra: AutomaticAlgebra,
        b: usize,
        c: usize,
    },
}

pub const CONSTRUCTION_NAMES: [&str; 6] =
    ["thm_wc", "thm_pcomm_case1", "ex_all4_L", "lem_2state2_N4", "lem_2state3_N5", "thm_nondcomm"];

impl Construction {
    /// `thm_wc M`; `thm_pcomm_case1 [i]` on `N_i` (default 1); `thm_nondcomm [p]` on `C_p` (default 3).
    pub fn from_name(name: &str, params: &[i64]) -> Result<Self, WitnessError> {
        let one = |default: Option<i64>| -> Result<usize, WitnessError> {
            match (params, default) {
                ([], Some(d)) => Ok(d as usize),
                ([x], _) if *x >= 0 => Ok(*x as usize),
                _ => Err(WitnessError::BadParams(format!("{name} takes one non-negative integer"))),
            }
        };
        let none = |c: Construction| {
            if params.is_empty() {
                Ok(c)
            } else {
                Err(WitnessError::BadParams(format!("{name} takes no parameters")))
            }
        };
        match name {
            "thm_wc" => Ok(Construction::ThmWc(one(None)?)),
            "thm_pcomm_case1" => {
                let m = catalog::n(one(Some(1))?).map_err(|e| WitnessError::BadParams(e.to_string()))?;
                Ok(Construction::ThmPcommCase1(m))
            }
            "ex_all4_L" => none(Construction::ExAll4L),
            "lem_2state2_N4" => none(Construction::Lem2State2N4),
            "lem_2state3_N5" => none(Construction::Lem2State3N5),
            "thm_nondcomm" => {
                let m = catalog::c(one(Some(3))?).map_err(|e| WitnessError::BadParams(e.to_string()))?;
                Construction::nondcomm(m)
            }
            _ => Err(WitnessError::UnknownConstruction(name.to_string())),
        }
    }

    /// The commuting-permutation construction with `b`, `c` taken from the classifier's witness.
    pub fn nondcomm(m: AutomaticAlgebra) -> Result<Self, WitnessError> {
        let w = nondcomm_check(&m)
            .ok_or_else(|| WitnessError::BadParams("algebra meets no commuting-permutation witness".into()))?;
        Ok(Construction::ThmNondcomm { algebra: m, b: w.b, c: w.c })
    }

    pub fn label(&self) -> String {
        match self {
            Construction::ThmWc(m) => format!("thm_wc({m})"),
            Construction::ThmPcommCase1(_) => "thm_pcomm_case1".into(),
            Construction::ExAll4L => "ex_all4_L".into(),
            Construction::Lem2State2N4 => "lem_2state2_N4".into(),
            Construction::Lem2State3N5 => "lem_2state3_N5".into(),
            Construction::ThmNondcomm { algebra, b, c } => {
                format!("thm_nondcomm({}, {})", algebra.letter_names()[*b], algebra.letter_names()[*c])
            }
        }
    }
}

/// Parameters of the transposition case, found by search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PcommParams {
    pub q: usize,
    pub a: usize,
    pub b: usize,
    pub cs: Vec<usize>,
    pub r: usize,
    pub p: usize,
    pub s: usize,
    pub t: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NondcommParams {
    pub b: usize,
    pub c: usize,
    pub r: usize,
    pub s: usize,
    pub lambda: usize,
    pub nu: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Derived {
    None,
    Pcomm(PcommParams),
    Nondcomm(NondcommParams),
}

/// How `A` is obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum UniverseRule {
    Generated,
    Defined(String),
}

#[derive(Clone, Debug)]
pub struct ConstructionSpec {
    pub name: String,
    pub algebra: AutomaticAlgebra,
    pub truncation: usize,
    /// One label per coordinate.
    pub coords: Vec<String>,
    pub a0: Vec<PowerElement>,
    pub b: Vec<PowerElement>,
    pub g: PowerElement,
    /// Block-size bound used by default in the kernel analysis.
    pub nu: usize,
    pub rule: UniverseRule,
    derived: Derived,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Closure {
    /// `A` is a generated subuniverse.
    ByGeneration,
    Exhaustive {
        pairs: usize,
    },
    Sampled {
        pairs: usize,
        seed: u64,
    },
}

#[derive(Clone, Debug)]
pub struct Truncation {
    pub spec: ConstructionSpec,
    pub elements: Vec<PowerElement>,
    members: HashSet<PowerElement>,
    pub closure: Closure,
}

impl Truncation {
    pub fn contains(&self, x: &PowerElement) -> bool {
        self.members.contains(x)
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }
}

fn odometer(values: &[Element], n: usize) -> impl Iterator<Item = Vec<Element>> + '_ {
    let total = values.len().checked_pow(n as u32).unwrap_or(usize::MAX);
    (0..total).map(move |mut k| {
        let mut v = Vec::with_capacity(n);
        for _ in 0..n {
            v.push(values[k % values.len()]);
            k /= values.len();
        }
        v.reverse();
        v
    })
}

fn states_of(m: &AutomaticAlgebra) -> Vec<Element> {
    (0..m.num_states()).map(Element::State).collect()
}

fn letters_of(m: &AutomaticAlgebra) -> Vec<Element> {
    (0..m.num_letters()).map(Element::Letter).collect()
}

fn st(m: &AutomaticAlgebra, name: &str) -> Element {
    Element::State(m.state_index(name).expect("construction state"))
}

fn lt(m: &AutomaticAlgebra, name: &str) -> Element {
    Element::Letter(m.letter_index(name).expect("construction letter"))
}

/// `base` with overrides at 0-based positions.
fn ov(base: Element, over: &[(usize, Element)], n: usize) -> PowerElement {
    let mut v = vec![base; n];
    for &(i, e) in over {
        v[i] = e;
    }
    PowerElement(v)
}

fn words_of_len(k: usize, len: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = k.pow(len as u32);
    (0..total).map(move |mut x| {
        let mut w = vec![0; len];
        for slot in w.iter_mut().rev() {
            *slot = x % k;
            x /= k;
        }
        w
    })
}

/// Least failing instance of the transposition quasi-equation, with `p`, `s`, `t` as in its proof.
///
/// Requires every letter to act as whiskery cycles.
pub fn find_pcomm_params(m: &AutomaticAlgebra) -> Result<PcommParams, WitnessError> {
    if whiskery_direct(m).is_some() {
        return Err(WitnessError::BadParams("every letter must act as whiskery cycles".into()));
    }
    let nl = m.num_letters();
    let bound = 2 * m.num_states() + 2;
    for len in 0..=bound {
        for q in 0..m.num_states() {
            for a in 0..nl {
                for b in 0..nl {
                    for cs in words_of_len(nl, len) {
                        let mut w1 = vec![a, b];
                        w1.extend(&cs);
                        let mut w2 = vec![b, a];
                        w2.extend(&cs);
                        if m.run(q, &w1).is_some() {
                            continue;
                        }
                        let Some(r) = m.run(q, &w2) else { continue };
                        let qb = m.delta(q, b).expect("q·b is a state");
                        let p =
                            (1..=m.num_states()).find(|&p| m.run(qb, &vec![b; p]) == Some(qb)).expect("b is whiskery");
                        let qba = m.delta(qb, a).expect("q·b·a is a state");
                        let s = (0..m.num_states())
                            .find(|&s| m.run(s, &vec![a; p + 2]) == Some(qba))
                            .expect("a is whiskery");
                        let mut tw = vec![b];
                        tw.extend(vec![a; p + 1]);
                        tw.extend(&cs);
                        let t = m.run(s, &tw);
                        return Ok(PcommParams { q, a, b, cs, r, p, s, t });
                    }
                }
            }
        }
    }
    Err(WitnessError::BadParams("algebra satisfies the transposition quasi-equations up to the search bound".into()))
}

fn lyndon_sub() -> AutomaticAlgebra {
    let l = catalog::lyndon();
    let keep_letters = [l.letter_index("a").unwrap(), l.letter_index("c").unwrap()];
    l.restrict(&[0, 1, 2], &keep_letters)
}

/// Builds the truncation at `n` ℕ-coordinates and materializes `A`.
pub fn build_truncation(c: &Construction, n: usize, cap: usize) -> Result<Truncation, WitnessError> {
    if n < 3 {
        return Err(WitnessError::BadParams(format!("truncation size must be at least 3, got {n}")));
    }
    let nat_labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let z = Element::Zero;
    let spec = match c {
        Construction::ThmWc(k) => {
            let m = catalog::f(*k);
            let (q, r, a) = (st(&m, "q"), st(&m, "r"), lt(&m, "a"));
            let a0 = (1..n).map(|i| ov(z, &[(0, r), (i, r)], n)).collect();
            let mut b: Vec<PowerElement> = Vec::new();
            for i in 1..n {
                for j in i + 1..n {
                    b.push(ov(z, &[(0, q), (i, q), (j, q)], n));
                }
            }
            b.extend((1..n).map(|i| ov(a, &[(i, z)], n)));
            let g = ov(z, &[(0, r)], n);
            ConstructionSpec {
                name: c.label(),
                nu: m.size(),
                algebra: m,
                truncation: n,
                coords: nat_labels,
                a0,
                b,
                g,
                rule: UniverseRule::Generated,
                derived: Derived::None,
            }
        }
        Construction::ThmPcommCase1(m) => {
            let pp = find_pcomm_params(m)?;
            let (r, a, b) = (Element::State(pp.r), Element::Letter(pp.a), Element::Letter(pp.b));
            let a0 = (0..n).map(|i| ov(Element::State(pp.r), &[(i, z)], n)).collect();
            let mut bs: Vec<PowerElement> = (0..n).map(|i| ov(b, &[(i, z)], n)).collect();
            bs.extend((0..n).map(|i| ov(b, &[(i, a)], n)));
            bs.push(PowerElement::constant(a, n));
            bs.push(PowerElement::constant(b, n));
            bs.extend(pp.cs.iter().map(|&c| PowerElement::constant(Element::Letter(c), n)));
            ConstructionSpec {
                name: c.label(),
                nu: m.size() * m.size(),
                algebra: m.clone(),
                truncation: n,
                coords: nat_labels,
                a0,
                b: bs,
                g: PowerElement::constant(r, n),
                rule: UniverseRule::Defined("tuples with some 0 coordinate, together with all letter tuples".into()),
                derived: Derived::Pcomm(pp),
            }
        }
        Construction::ExAll4L => {
            let m = lyndon_sub();
            let (q, s, a, cl) = (st(&m, "q"), st(&m, "s"), lt(&m, "a"), lt(&m, "c"));
            ConstructionSpec {
                name: c.label(),
                nu: m.size(),
                a0: (0..n).map(|i| ov(q, &[(i, s)], n)).collect(),
                b: (0..n).map(|i| ov(cl, &[(i, a)], n)).collect(),
                g: PowerElement::constant(q, n),
                algebra: m,
                truncation: n,
                coords: nat_labels,
                rule: UniverseRule::Defined("state tuples not inside {q,r}, letter tuples, and 0".into()),
                derived: Derived::None,
            }
        }
        Construction::Lem2State2N4 | Construction::Lem2State3N5 => {
            let n4 = matches!(c, Construction::Lem2State2N4);
            let m = catalog::n(if n4 { 4 } else { 5 }).unwrap();
            let (q, r, a, b) = (st(&m, "q"), st(&m, "r"), lt(&m, "a"), lt(&m, "b"));
            let bs = if n4 {
                (0..n).map(|i| ov(b, &[(i, a)], n)).collect()
            } else {
                let cl = lt(&m, "c");
                let mut v = Vec::new();
                for i in 0..n {
                    for k in 0..n {
                        if i != k {
                            v.push(ov(b, &[(i, cl), (k, a)], n));
                        }
                    }
                }
                v
            };
            ConstructionSpec {
                name: c.label(),
                nu: if n4 { m.size() } else { 1 },
                a0: (0..n).map(|i| ov(q, &[(i, r)], n)).collect(),
                b: bs,
                g: PowerElement::constant(q, n),
                algebra: m,
                truncation: n,
                coords: nat_labels,
                rule: UniverseRule::Defined(if n4 {
                    "state tuples other than q, letter tuples other than b, and 0".into()
                } else {
                    "state tuples other than q, letter tuples not inside {b,c}, and 0".into()
                }),
                derived: Derived::None,
            }
        }
        Construction::ThmNondcomm { algebra: m, b, c: cc } => {
            let nq = m.num_states();
            let perm = |x: usize| -> Result<Vec<usize>, WitnessError> {
                (0..nq)
                    .map(|q| m.delta(q, x))
                    .collect::<Option<Vec<_>>>()
                    .ok_or_else(|| WitnessError::BadParams("letters must be total permutations".into()))
            };
            let (pb, pc) = (perm(*b)?, perm(*cc)?);
            let order = |p: &[usize]| {
                (0..nq).map(|s| (1..=nq).find(|&k| (0..k).fold(s, |x, _| p[x]) == s).unwrap_or(1)).fold(1, lcm)
            };
            let lambda = lcm(order(&pb), order(&pc));
            let cinv = |q: usize| (0..lambda - 1).fold(q, |x, _| pc[x]);
            let (s, r) = (0..nq)
                .map(|s| (s, cinv(pb[s])))
                .find(|&(s, r)| s != r)
                .ok_or_else(|| WitnessError::BadParams("b c⁻¹ is the identity".into()))?;
            let nu = m.num_letters() - 1;
            let width = 2 * nq + n;
            let mut coords = Vec::with_capacity(width);
            for q in 0..nq {
                coords.push(format!("({},{})", m.state_names()[q], m.letter_names()[*b]));
                coords.push(format!("({},{})", m.state_names()[q], m.letter_names()[*cc]));
            }
            coords.extend(nat_labels);
            let dp = NondcommParams { b: *b, c: *cc, r, s, lambda, nu };
            ConstructionSpec {
                name: c.label(),
                nu,
                a0: (0..n).map(|i| nondcomm_v(m, &dp, n, Some(i))).collect(),
                b: index_sets(n, nu + 1).iter().map(|set| nondcomm_w(m, &dp, n, set)).collect(),
                g: nondcomm_v(m, &dp, n, None),
                algebra: m.clone(),
                truncation: n,
                coords,
                rule: UniverseRule::Generated,
                derived: Derived::Nondcomm(dp),
            }
        }
    };
    materialize(spec, cap)
}

fn nondcomm_v(m: &AutomaticAlgebra, d: &NondcommParams, n: usize, i: Option<usize>) -> PowerElement {
    let nq = m.num_states();
    let mut v = Vec::with_capacity(2 * nq + n);
    for q in 0..nq {
        v.push(Element::State(q));
        v.push(Element::State(q));
    }
    v.extend((0..n).map(|j| Element::State(if Some(j) == i { d.r } else { d.s })));
    PowerElement(v)
}

fn nondcomm_w(m: &AutomaticAlgebra, d: &NondcommParams, n: usize, set: &[usize]) -> PowerElement {
    let (b, c) = (Element::Letter(d.b), Element::Letter(d.c));
    let mut v = Vec::with_capacity(2 * m.num_states() + n);
    for _ in 0..m.num_states() {
        v.push(b);
        v.push(c);
    }
    v.extend((0..n).map(|j| if set.contains(&j) { b } else { c }));
    PowerElement(v)
}

/// All `k`-subsets of `0..n`, lexicographic.
fn index_sets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn defined_universe(spec: &ConstructionSpec, cap: usize) -> Result<Vec<PowerElement>, WitnessError> {
    let m = &spec.algebra;
    let n = spec.truncation;
    let guard = |count: usize| -> Result<(), WitnessError> {
        if count > cap {
            Err(PowerError::CapExceeded { what: "truncated universe".into(), size: count, cap }.into())
        } else {
            Ok(())
        }
    };
    let pow = |k: usize| k.checked_pow(n as u32).unwrap_or(usize::MAX);
    let mut out: Vec<PowerElement> = Vec::new();
    let name = spec.name.as_str();
    if name == "thm_pcomm_case1" {
        guard(pow(m.size()))?;
        out.extend(odometer(&m.elements(), n).filter(|v| v.contains(&Element::Zero)).map(PowerElement));
        out.extend(odometer(&letters_of(m), n).map(PowerElement));
        return Ok(out);
    }
    guard(pow(m.num_states()) + pow(m.num_letters()) + 1)?;
    let (qs, ls) = (states_of(m), letters_of(m));
    match name {
        "ex_all4_L" => {
            let qr = [st(m, "q"), st(m, "r")];
            out.extend(odometer(&qs, n).filter(|v| !v.iter().all(|x| qr.contains(x))).map(PowerElement));
            out.extend(odometer(&ls, n).map(PowerElement));
        }
        "lem_2state2_N4" => {
            let (q, b) = (st(m, "q"), lt(m, "b"));
            out.extend(odometer(&qs, n).filter(|v| !v.iter().all(|&x| x == q)).map(PowerElement));
            out.extend(odometer(&ls, n).filter(|v| !v.iter().all(|&x| x == b)).map(PowerElement));
        }
        "lem_2state3_N5" => {
            let q = st(m, "q");
            let bc = [lt(m, "b"), lt(m, "c")];
            out.extend(odometer(&qs, n).filter(|v| !v.iter().all(|&x| x == q)).map(PowerElement));
            out.extend(odometer(&ls, n).filter(|v| !v.iter().all(|x| bc.contains(x))).map(PowerElement));
        }
        _ => unreachable!("defined universe for {name}"),
    }
    out.push(PowerElement::constant(Element::Zero, n));
    Ok(out)
}

fn materialize(spec: ConstructionSpec, cap: usize) -> Result<Truncation, WitnessError> {
    let width = spec.coords.len();
    match &spec.rule {
        UniverseRule::Generated => {
            let gens: Vec<PowerElement> = spec.a0.iter().chain(&spec.b).cloned().collect();
            let elements = generate_subuniverse_capped(&spec.algebra, width, &gens, cap)?;
            let members = elements.iter().cloned().collect();
            Ok(Truncation { spec, elements, members, closure: Closure::ByGeneration })
        }
        UniverseRule::Defined(_) => {
            let elements = defined_universe(&spec, cap)?;
            let members: HashSet<PowerElement> = elements.iter().cloned().collect();
            let m = &spec.algebra;
            let k = elements.len();
            let closed_at = |x: usize, y: usize| members.contains(&power_product(m, &elements[x], &elements[y]));
            let closure = if k.saturating_mul(k) <= CLOSURE_PAIR_BUDGET {
                if let Some((x, y)) = par::find_first(Strategy::Parallel, k, |x| (0..k).find(|&y| !closed_at(x, y))) {
                    return Err(closure_failure(x, y));
                }
                Closure::Exhaustive { pairs: k * k }
            } else {
                let seed = 0u64;
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                for _ in 0..CLOSURE_SAMPLES {
                    let (x, y) = (rng.gen_range(0..k), rng.gen_range(0..k));
                    if !closed_at(x, y) {
                        return Err(closure_failure(x, y));
                    }
                }
                Closure::Sampled { pairs: CLOSURE_SAMPLES, seed }
            };
            Ok(Truncation { spec, elements, members, closure })
        }
    }
}

fn closure_failure(x: usize, y: usize) -> WitnessError {
    WitnessError::ProofIdentityFailed {
        identity: "A is closed under the product".into(),
        indices: format!("elements #{} and #{}", x + 1, y + 1),
    }
}

// ---------------------------------------------------------------- identities

/// One displayed identity checked over all admissible index tuples.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub identity: String,
    pub ranges: String,
    pub instances: usize,
    /// Index tuples (1-based) where the check failed.
    pub failures: Vec<String>,
}

impl IdentityCheck {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConstructionReport {
    pub name: String,
    pub truncation: usize,
    pub universe_size: usize,
    pub closure: Closure,
    pub identities: Vec<IdentityCheck>,
    pub g: String,
    pub g_in_a: bool,
}

impl ConstructionReport {
    pub fn passed(&self) -> bool {
        !self.g_in_a && self.identities.iter().all(IdentityCheck::passed)
    }
}

impl fmt::Display for ConstructionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "construction {} at N = {}", self.name, self.truncation)?;
        writeln!(f, "scope: {SCOPE_NOTE}")?;
        let closure = match &self.closure {
            Closure::ByGeneration => "generated".to_string(),
            Closure::Exhaustive { pairs } => format!("closed, {pairs} pairs checked"),
            Closure::Sampled { pairs, seed } => format!("closed on {pairs} sampled pairs (seed {seed})"),
        };
        writeln!(f, "|A| = {} ({closure})", self.universe_size)?;
        writeln!(f, "identities:")?;
        for c in &self.identities {
            let verdict = if c.passed() { "pass" } else { "FAIL" };
            writeln!(
                f,
                "  {}  [{}]  {}/{} {verdict}",
                c.identity,
                c.ranges,
                c.instances - c.failures.len(),
                c.instances
            )?;
            for bad in c.failures.iter().take(5) {
                writeln!(f, "    fails at {bad}")?;
            }
        }
        writeln!(f, "g = {} {} A", self.g, if self.g_in_a { "∈" } else { "∉" })?;
        writeln!(f, "--- machine")?;
        for c in &self.identities {
            writeln!(
                f,
                "identity\t{}\t{}\t{}\t{}",
                c.identity,
                c.ranges,
                c.instances,
                if c.passed() { "pass" } else { "fail" }
            )?;
        }
        write!(f, "g_not_in_A\t{}", if self.g_in_a { "fail" } else { "pass" })
    }
}

struct Checker<'a> {
    t: &'a Truncation,
    out: Vec<IdentityCheck>,
}

impl<'a> Checker<'a> {
    fn m(&self) -> &AutomaticAlgebra {
        &self.t.spec.algebra
    }

    fn prod(&self, xs: &[&PowerElement]) -> PowerElement {
        let mut it = xs.iter();
        let first = (*it.next().expect("nonempty product")).clone();
        it.fold(first, |acc, y| power_product(self.m(), &acc, y))
    }

    /// Records one identity; `cases` yields (indices, lhs, rhs).
    fn identity(&mut self, identity: &str, ranges: &str, cases: Vec<(String, PowerElement, PowerElement)>) {
        let failures = cases.iter().filter(|(_, l, r)| l != r).map(|(i, _, _)| i.clone()).collect();
        self.out.push(IdentityCheck {
            identity: identity.into(),
            ranges: ranges.into(),
            instances: cases.len(),
            failures,
        });
    }

    /// Records that every listed operand lies in `A`.
    fn members(&mut self, what: &str, ranges: &str, cases: Vec<(String, PowerElement)>) {
        let failures = cases.iter().filter(|(_, x)| !self.t.contains(x)).map(|(i, _)| i.clone()).collect();
        self.out.push(IdentityCheck {
            identity: format!("{what} lie in A"),
            ranges: ranges.into(),
            instances: cases.len(),
            failures,
        });
    }

    /// A derived scalar claim about `M`.
    fn claim(&mut self, identity: &str, holds: bool) {
        let failures = if holds { vec![] } else { vec!["-".to_string()] };
        self.out.push(IdentityCheck { identity: identity.into(), ranges: "-".into(), instances: 1, failures });
    }
}

fn distinct(xs: &[usize]) -> bool {
    xs.iter().enumerate().all(|(i, x)| !xs[..i].contains(x))
}

fn idx(names: &[&str], xs: &[usize]) -> String {
    names.iter().zip(xs).map(|(n, x)| format!("{n}={}", x + 1)).collect::<Vec<_>>().join(", ")
}

/// Checks every displayed identity and `g ∉ A`. Any failure is an error.
pub fn verify_construction(t: &Truncation) -> Result<ConstructionReport, WitnessError> {
    let report = construction_report(t);
    if let Some(c) = report.identities.iter().find(|c| !c.passed()) {
        return Err(WitnessError::ProofIdentityFailed { identity: c.identity.clone(), indices: c.failures[0].clone() });
    }
    if report.g_in_a {
        return Err(WitnessError::ProofIdentityFailed { identity: "g ∉ A".into(), indices: "-".into() });
    }
    Ok(report)
}

/// As [`verify_construction`] but returns the report even when something fails.
pub fn construction_report(t: &Truncation) -> ConstructionReport {
    let spec = &t.spec;
    let n = spec.truncation;
    let m = &spec.algebra;
    let z = Element::Zero;
    let mut ck = Checker { t, out: Vec::new() };
    let all = 0..n;
    match (spec.name.as_str(), &spec.derived) {
        (name, _) if name.starts_with("thm_wc") => {
            let (q, r, a) = (st(m, "q"), st(m, "r"), lt(m, "a"));
            let rr =
                |xs: &[usize]| ov(z, &std::iter::once((0, r)).chain(xs.iter().map(|&i| (i, r))).collect::<Vec<_>>(), n);
            let qq =
                |xs: &[usize]| ov(z, &std::iter::once((0, q)).chain(xs.iter().map(|&i| (i, q))).collect::<Vec<_>>(), n);
            let az = |k: usize| ov(a, &[(k, z)], n);
            let mut c1 = Vec::new();
            let mut c2 = Vec::new();
            let mut mem = Vec::new();
            for j in 1..n {
                for k in 1..n {
                    if j == k {
                        continue;
                    }
                    let (lo, hi) = (j.min(k), j.max(k));
                    c1.push((idx(&["j", "k"], &[j, k]), rr(&[j]), ck.prod(&[&qq(&[lo, hi]), &az(k)])));
                    mem.push((idx(&["j", "k"], &[j, k]), qq(&[lo, hi])));
                    for l in 1..n {
                        if distinct(&[j, k, l]) {
                            c2.push((
                                idx(&["j", "k", "l"], &[j, k, l]),
                                ck.prod(&[&qq(&[lo, hi]), &az(l)]),
                                rr(&[lo, hi]),
                            ));
                        }
                    }
                }
            }
            ck.members("0{q@1,q@j,q@k}", "j,k distinct in 2..N", mem);
            ck.identity("0{r@1,r@j} = 0{q@1,q@j,q@k} * a{0@k}", "j,k distinct in 2..N", c1);
            ck.identity("0{q@1,q@j,q@k} * a{0@l} = 0{r@1,r@j,r@k}", "j,k,l distinct in 2..N", c2);
            // A sits inside A0 ∪ B ∪ {0 r1 ri rj} ∪ {0, s_1, …}^N
            let s_or_zero = |x: &Element| x.is_zero() || x.state().is_some_and(|s| s >= 2);
            let known: HashSet<&PowerElement> = spec.a0.iter().chain(&spec.b).collect();
            let outside: Vec<(String, PowerElement, PowerElement)> = t
                .elements
                .iter()
                .enumerate()
                .filter(|(_, x)| {
                    let rs: Vec<usize> = (1..n).filter(|&i| x.0[i] == r).collect();
                    let three_r = x.0[0] == r && rs.len() == 2 && (1..n).all(|i| x.0[i] == r || x.0[i] == z);
                    !(known.contains(x) || three_r || x.0.iter().all(s_or_zero))
                })
                .map(|(i, x)| (format!("element #{}", i + 1), x.clone(), PowerElement(vec![])))
                .collect();
            ck.out.push(IdentityCheck {
                identity: "A ⊆ A0 ∪ B ∪ 0{r@1,r@i,r@j} ∪ {0,s_1,…}^N".into(),
                ranges: "all of A".into(),
                instances: t.size(),
                failures: outside.into_iter().map(|(i, _, _)| i).collect(),
            });
        }
        ("thm_pcomm_case1", Derived::Pcomm(pp)) => {
            let (qs, a, b) = (Element::State(pp.q), Element::Letter(pp.a), Element::Letter(pp.b));
            let (r, s) = (Element::State(pp.r), Element::State(pp.s));
            let t_el = pp.t.map_or(Element::Zero, Element::State);
            let mut w1 = vec![pp.b; pp.p + 1];
            w1.push(pp.a);
            w1.extend(&pp.cs);
            let mut w2 = vec![pp.a; pp.p + 2];
            w2.extend(&pp.cs);
            let mut w3 = vec![pp.a];
            w3.extend(vec![pp.b; pp.p]);
            w3.push(pp.a);
            w3.extend(&pp.cs);
            ck.claim("q b b^p a c_1…c_m = r", m.run(pp.q, &w1) == Some(pp.r));
            ck.claim("s a a^p a c_1…c_m = r", m.run(pp.s, &w2) == Some(pp.r));
            ck.claim("q a b^p a c_1…c_m = 0", m.run(pp.q, &w3).is_none());
            let tail: Vec<PowerElement> = std::iter::once(PowerElement::constant(a, n))
                .chain(pp.cs.iter().map(|&c| PowerElement::constant(Element::Letter(c), n)))
                .collect();
            let chain = |head: PowerElement, mid: &PowerElement, rep: &PowerElement, times: usize| {
                let mut acc = power_product(m, &head, mid);
                for _ in 0..times {
                    acc = power_product(m, &acc, rep);
                }
                for x in &tail {
                    acc = power_product(m, &acc, x);
                }
                acc
            };
            let bconst = PowerElement::constant(b, n);
            let mut cases: [Vec<(String, PowerElement, PowerElement)>; 6] = Default::default();
            let mut mem = Vec::new();
            for i in all.clone() {
                for j in all.clone() {
                    for k in all.clone() {
                        for l in all.clone() {
                            if !distinct(&[i, j, k, l]) {
                                continue;
                            }
                            let tag = idx(&["i", "j", "k", "l"], &[i, j, k, l]);
                            let bak = ov(b, &[(k, a)], n);
                            let h1 = ov(qs, &[(i, z), (k, s)], n);
                            let h2 = ov(qs, &[(i, z), (k, s), (l, z)], n);
                            let h3 = ov(qs, &[(i, z), (k, z), (l, z)], n);
                            let r0i = ov(r, &[(i, z)], n);
                            let r_t = ov(r, &[(i, z), (k, t_el), (l, z)], n);
                            let r_kl = ov(r, &[(i, z), (k, z), (l, z)], n);
                            let r_jkl = ov(r, &[(i, z), (j, z), (k, z), (l, z)], n);
                            cases[0].push((tag.clone(), r0i.clone(), chain(h1.clone(), &bak, &bak, pp.p)));
                            cases[1].push((
                                tag.clone(),
                                chain(h1.clone(), &ov(b, &[(l, a)], n), &bak, pp.p),
                                r_t.clone(),
                            ));
                            cases[2].push((tag.clone(), r_t, chain(h2.clone(), &ov(b, &[(l, z)], n), &bak, pp.p)));
                            cases[3].push((
                                tag.clone(),
                                chain(h2.clone(), &ov(b, &[(k, z)], n), &bak, pp.p),
                                r_kl.clone(),
                            ));
                            cases[4].push((tag.clone(), r_kl, chain(h3.clone(), &ov(b, &[(i, z)], n), &bconst, pp.p)));
                            cases[5].push((tag.clone(), chain(h3.clone(), &ov(b, &[(j, z)], n), &bconst, pp.p), r_jkl));
                            for x in [h1, h2, h3, bak, ov(b, &[(l, a)], n), ov(b, &[(k, z)], n)] {
                                mem.push((tag.clone(), x));
                            }
                        }
                    }
                }
            }
            let rng = "i,j,k,l distinct in 1..N";
            ck.members("operands", rng, mem);
            let names = [
                "r{0@i} = q{0@i,s@k} * b{a@k} * b{a@k}^p * a * c_1…c_m",
                "q{0@i,s@k} * b{a@l} * b{a@k}^p * a * c_1…c_m = r{0@i,t@k,0@l}",
                "r{0@i,t@k,0@l} = q{0@i,s@k,0@l} * b{0@l} * b{a@k}^p * a * c_1…c_m",
                "q{0@i,s@k,0@l} * b{0@k} * b{a@k}^p * a * c_1…c_m = r{0@i,0@k,0@l}",
                "r{0@i,0@k,0@l} = q{0@i,0@k,0@l} * b{0@i} * b^p * a * c_1…c_m",
                "q{0@i,0@k,0@l} * b{0@j} * b^p * a * c_1…c_m = r{0@i,0@j,0@k,0@l}",
            ];
            for (name, c) in names.iter().zip(cases) {
                ck.identity(name, rng, c);
            }
        }
        ("ex_all4_L", _) => {
            let (q, r, s, a, c) = (st(m, "q"), st(m, "r"), st(m, "s"), lt(m, "a"), lt(m, "c"));
            let (mut c1, mut c2, mut mem) = (Vec::new(), Vec::new(), Vec::new());
            for i in all.clone() {
                for k in all.clone() {
                    if i == k {
                        continue;
                    }
                    let x = ov(q, &[(i, s), (k, r)], n);
                    c1.push((idx(&["i", "k"], &[i, k]), ov(q, &[(i, s)], n), ck.prod(&[&x, &ov(c, &[(k, a)], n)])));
                    mem.push((idx(&["i", "k"], &[i, k]), x.clone()));
                    for l in all.clone() {
                        if distinct(&[i, k, l]) {
                            c2.push((
                                idx(&["i", "k", "l"], &[i, k, l]),
                                ck.prod(&[&x, &ov(c, &[(l, a)], n)]),
                                ov(q, &[(i, s), (k, s)], n),
                            ));
                        }
                    }
                }
            }
            ck.members("q{s@i,r@k}", "i,k distinct in 1..N", mem);
            ck.identity("q{s@i} = q{s@i,r@k} * c{a@k}", "i,k distinct in 1..N", c1);
            ck.identity("q{s@i,r@k} * c{a@l} = q{s@i,s@k}", "i,k,l distinct in 1..N", c2);
        }
        ("lem_2state2_N4", _) => {
            let (q, r, a, b) = (st(m, "q"), st(m, "r"), lt(m, "a"), lt(m, "b"));
            let (mut c1, mut c2) = (Vec::new(), Vec::new());
            for j in all.clone() {
                for k in all.clone() {
                    if j == k {
                        continue;
                    }
                    let base = ov(q, &[(k, r)], n);
                    let baj = ov(b, &[(j, a)], n);
                    c1.push((
                        idx(&["j", "k"], &[j, k]),
                        ov(q, &[(j, r)], n),
                        ck.prod(&[&base, &ov(b, &[(k, a)], n), &baj]),
                    ));
                    for l in all.clone() {
                        if distinct(&[j, k, l]) {
                            c2.push((
                                idx(&["j", "k", "l"], &[j, k, l]),
                                ck.prod(&[&base, &ov(b, &[(l, a)], n), &baj]),
                                ov(q, &[(j, r), (k, r)], n),
                            ));
                        }
                    }
                }
            }
            ck.identity("q{r@j} = q{r@k} * b{a@k} * b{a@j}", "j,k distinct in 1..N", c1);
            ck.identity("q{r@k} * b{a@l} * b{a@j} = q{r@j,r@k}", "j,k,l distinct in 1..N", c2);
        }
        ("lem_2state3_N5", _) => {
            let (q, r, a, b, c) = (st(m, "q"), st(m, "r"), lt(m, "a"), lt(m, "b"), lt(m, "c"));
            let (mut c1, mut c2) = (Vec::new(), Vec::new());
            for i in all.clone() {
                for j in all.clone() {
                    for k in all.clone() {
                        if !distinct(&[i, j, k]) {
                            continue;
                        }
                        let w = ov(b, &[(i, c), (k, a)], n);
                        let tag = idx(&["i", "j", "k"], &[i, j, k]);
                        c1.push((tag.clone(), ov(q, &[(k, r)], n), ck.prod(&[&ov(q, &[(j, r)], n), &w])));
                        c2.push((tag, ck.prod(&[&ov(q, &[(i, r)], n), &w]), ov(q, &[(i, r), (k, r)], n)));
                    }
                }
            }
            ck.identity("q{r@k} = q{r@j} * b{c@i,a@k}", "i,j,k distinct in 1..N", c1);
            ck.identity("q{r@i} * b{c@i,a@k} = q{r@i,r@k}", "i,j,k distinct in 1..N", c2);
        }
        (_, Derived::Nondcomm(d)) => {
            let inv_pow = d.lambda - 1;
            let w = |set: &[usize]| nondcomm_w(m, d, n, set);
            let v = |i: usize| nondcomm_v(m, d, n, Some(i));
            let times = |x: &PowerElement, y: &PowerElement, k: usize| {
                (0..k).fold(x.clone(), |acc, _| power_product(m, &acc, y))
            };
            let mut c1 = Vec::new();
            for i in all.clone() {
                for j in all.clone() {
                    if i == j {
                        continue;
                    }
                    let rest: Vec<usize> = (0..n).filter(|&x| x != i && x != j).collect();
                    for ks in index_sets(rest.len(), d.nu) {
                        let mut ki: Vec<usize> = ks.iter().map(|&x| rest[x]).collect();
                        let mut kj = ki.clone();
                        ki.push(i);
                        kj.push(j);
                        let tag = format!(
                            "{}, K={:?}",
                            idx(&["i", "j"], &[i, j]),
                            kj[..kj.len() - 1].iter().map(|x| x + 1).collect::<Vec<_>>()
                        );
                        let rhs = times(&power_product(m, &v(j), &w(&ki)), &w(&kj), inv_pow);
                        c1.push((tag, v(i), rhs));
                    }
                }
            }
            ck.identity("v_i = v_j * w_(K+i) * w_(K+j)^(λ-1)", "i ≠ j in 1..N, |K| = ν avoiding i,j", c1);
            // (w_I0 w_I1^{-1})^m fixes v_1 for index sets differing in one place
            let m_ord = {
                let sigma: Vec<usize> = (0..m.num_states())
                    .map(|q| (0..inv_pow).fold(m.delta(q, d.b).unwrap(), |x, _| m.delta(x, d.c).unwrap()))
                    .collect();
                (1..).find(|&k| (0..m.num_states()).all(|q| (0..k).fold(q, |x, _| sigma[x]) == q)).unwrap()
            };
            let sets = index_sets(n, d.nu + 1);
            let mut c2 = Vec::new();
            for s0 in &sets {
                for s1 in &sets {
                    if s0 == s1 || s0.iter().filter(|x| !s1.contains(x)).count() != 1 {
                        continue;
                    }
                    let mut acc = v(0);
                    for _ in 0..m_ord {
                        acc = times(&power_product(m, &acc, &w(s0)), &w(s1), inv_pow);
                    }
                    let tag = format!(
                        "I0={:?}, I1={:?}",
                        s0.iter().map(|x| x + 1).collect::<Vec<_>>(),
                        s1.iter().map(|x| x + 1).collect::<Vec<_>>()
                    );
                    c2.push((tag, acc, v(0)));
                }
            }
            ck.identity(
                &format!("v_1 * (w_I0 * w_I1^(λ-1))^{m_ord} = v_1"),
                "(ν+1)-sets I0, I1 differing in one index",
                c2,
            );
            ck.claim("r = s * b c⁻¹ with r ≠ s", {
                let sb = m.delta(d.s, d.b).unwrap();
                (0..inv_pow).fold(sb, |x, _| m.delta(x, d.c).unwrap()) == d.r && d.r != d.s
            });
        }
        _ => {}
    }
    ConstructionReport {
        name: spec.name.clone(),
        truncation: n,
        universe_size: t.size(),
        closure: t.closure.clone(),
        identities: ck.out,
        g: spec.g.render(m),
        g_in_a: t.contains(&spec.g),
    }
}

// ---------------------------------------------------------------- kernels

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelReport {
    pub nu: usize,
    pub a0_size: usize,
    /// Distinct restrictions `x↾A0` over all homs `x: A → M`.
    pub restriction_count: usize,
    /// Block sizes of `ker(x↾A0)` per restriction, largest first.
    pub blocks: Vec<Vec<usize>>,
    /// Indices (into `blocks`) of restrictions with two or more blocks larger than `nu`.
    pub violations: Vec<usize>,
}

impl KernelReport {
    /// Multiset of block-size profiles with counts.
    pub fn profile(&self) -> BTreeMap<Vec<usize>, usize> {
        let mut out = BTreeMap::new();
        for b in &self.blocks {
            *out.entry(b.clone()).or_insert(0) += 1;
        }
        out
    }
}

impl fmt::Display for KernelReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "kernel blocks on A0 (|A0| = {}, ν = {}): {} distinct restrictions of homs",
            self.a0_size, self.nu, self.restriction_count
        )?;
        for (sizes, count) in self.profile() {
            writeln!(f, "  {sizes:?} × {count}")?;
        }
        write!(f, "violations: {}", self.violations.len())
    }
}

/// Sorted block sizes of the kernel of `x` restricted to `A0`.
pub fn kernel_blocks(images: &[Element]) -> Vec<usize> {
    let mut count: HashMap<Element, usize> = HashMap::new();
    for &e in images {
        *count.entry(e).or_insert(0) += 1;
    }
    let mut sizes: Vec<usize> = count.into_values().collect();
    sizes.sort_unstable_by(|a, b| b.cmp(a));
    sizes
}

/// Every tuple `(x(a))_{a ∈ A0}` realized by some hom `x: A → M`, with its kernel blocks.
///
/// Only the restriction matters for the kernel, so instead of listing homs
/// (there can be |M|^|A| of them) each of the `|M|^|A0|` candidate tuples is
/// tested for extendability. `cap` bounds `|A|`.
pub fn kernel_block_analysis(t: &Truncation, nu: usize, cap: usize) -> Result<KernelReport, WitnessError> {
    let m = &t.spec.algebra;
    if t.size() > cap {
        return Err(PowerError::CapExceeded { what: "hom domain".into(), size: t.size(), cap }.into());
    }
    let a = FiniteGroupoid::from_power_elements(m, &t.elements)?;
    let pos: HashMap<&PowerElement, usize> = t.elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let a0: Vec<usize> = t.spec.a0.iter().map(|x| pos[x]).collect();
    let size = m.size();
    let candidates = size.checked_pow(a0.len() as u32).filter(|&c| c <= MAX_RESTRICTIONS).ok_or_else(|| {
        WitnessError::from(PowerError::CapExceeded {
            what: "restrictions to A0".into(),
            size: usize::MAX,
            cap: MAX_RESTRICTIONS,
        })
    })?;
    let ext = HomExtender::new(&a, m);
    let realized: Vec<Vec<Element>> = par::map_range(Strategy::Parallel, candidates, |code| {
        let images: Vec<Element> =
            (0..a0.len()).map(|x| m.element(code / size.pow((a0.len() - 1 - x) as u32) % size)).collect();
        let fixed: Vec<(usize, Element)> = a0.iter().copied().zip(images.iter().copied()).collect();
        ext.extend(&fixed).map(|_| images)
    })
    .into_iter()
    .flatten()
    .collect();
    let blocks: Vec<Vec<usize>> = realized.iter().map(|im| kernel_blocks(im)).collect();
    let violations =
        blocks.iter().enumerate().filter(|(_, b)| b.iter().filter(|&&s| s > nu).count() >= 2).map(|(i, _)| i).collect();
    Ok(KernelReport { nu, a0_size: a0.len(), restriction_count: realized.len(), blocks, violations })
}

// ---------------------------------------------------------------- local evaluations

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalEvalReport {
    pub k: usize,
    pub homs: usize,
    /// `|M|^|hom(A,M)|`.
    pub functions: u128,
    pub evaluations: u64,
    /// `k`-locally an evaluation but not an evaluation.
    pub local_only: u128,
    pub neither: u128,
    /// 3-locally an evaluation, range meets Σ, not an evaluation. Must be zero.
    pub letter_range_violations: u64,
}

impl LocalEvalReport {
    pub fn assert_letter_range(&self) -> Result<(), WitnessError> {
        if self.letter_range_violations == 0 {
            Ok(())
        } else {
            Err(WitnessError::LocalEvaluationViolated(format!(
                "{} maps are 3-locally evaluations with a letter in range but not evaluations",
                self.letter_range_violations
            )))
        }
    }
}

impl fmt::Display for LocalEvalReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "|hom(A,M)| = {}, maps f: hom(A,M) → M: {}", self.homs, self.functions)?;
        writeln!(f, "evaluations: {}", self.evaluations)?;
        writeln!(f, "{}-locally evaluations only: {}", self.k, self.local_only)?;
        writeln!(f, "neither: {}", self.neither)?;
        write!(f, "3-local with a letter in range, not evaluations: {}", self.letter_range_violations)
    }
}

const LOCAL_MAX_HOMS: usize = 64;
/// Search-node budget for the k-local enumeration.
const LOCAL_NODE_BUDGET: u64 = 50_000_000;

/// Depth-first enumeration of the `k`-locally-evaluation maps `hom(A,M) → M`.
struct LocalSearch<'a> {
    /// `columns[a][x] = x(a)` as element indices.
    columns: &'a [Vec<usize>],
    size: usize,
    k: usize,
    nodes: u64,
}

impl LocalSearch<'_> {
    /// Whether every subset of at most `k` assigned positions containing `t` agrees with some column.
    fn consistent(&self, f: &[usize], t: usize) -> bool {
        let others = self.k - 1;
        let mut pick: Vec<usize> = Vec::with_capacity(others);
        self.subsets_ok(f, t, 0, others, &mut pick)
    }

    fn subsets_ok(&self, f: &[usize], t: usize, start: usize, left: usize, pick: &mut Vec<usize>) -> bool {
        let matched = self.columns.iter().any(|col| col[t] == f[t] && pick.iter().all(|&y| col[y] == f[y]));
        if !matched {
            return false;
        }
        if left == 0 {
            return true;
        }
        for y in start..t {
            pick.push(y);
            let ok = self.subsets_ok(f, t, y + 1, left - 1, pick);
            pick.pop();
            if !ok {
                return false;
            }
        }
        true
    }

    /// Calls `visit` on every complete map; errors when the node budget runs out.
    fn run(&mut self, f: &mut Vec<usize>, h: usize, visit: &mut dyn FnMut(&[usize])) -> Result<(), WitnessError> {
        if f.len() == h {
            visit(f);
            return Ok(());
        }
        let t = f.len();
        for v in 0..self.size {
            self.nodes += 1;
            if self.nodes > LOCAL_NODE_BUDGET {
                return Err(PowerError::CapExceeded {
                    what: "local-evaluation search".into(),
                    size: self.nodes as usize,
                    cap: LOCAL_NODE_BUDGET as usize,
                }
                .into());
            }
            f.push(v);
            if self.consistent(f, t) {
                self.run(f, h, visit)?;
            }
            f.pop();
        }
        Ok(())
    }
}

/// Counts evaluations and `k`-locally-evaluation maps `hom(A, M) → M` for `A ≤ M^n`.
///
/// Maps are enumerated by backtracking on the local condition, so only locally
/// consistent prefixes are visited; `neither` is obtained by subtraction. For
/// `k = 1` the local maps are counted in closed form.
pub fn local_eval_probe(m: &AutomaticAlgebra, a: &[PowerElement], k: usize) -> Result<LocalEvalReport, WitnessError> {
    if k == 0 {
        return Err(WitnessError::BadParams("k must be positive".into()));
    }
    let g = FiniteGroupoid::from_power_elements(m, a)?;
    let homs = enumerate_homs(&g, m, HomOptions { cap: a.len().max(DEFAULT_KERNEL_CAP), ..HomOptions::default() })?;
    let h = homs.len();
    if h > LOCAL_MAX_HOMS {
        return Err(PowerError::CapExceeded { what: "hom(A,M)".into(), size: h, cap: LOCAL_MAX_HOMS }.into());
    }
    let size = m.size();
    let functions = (size as u128).checked_pow(h as u32).ok_or_else(|| {
        WitnessError::from(PowerError::CapExceeded {
            what: "maps hom(A,M) → M".into(),
            size: usize::MAX,
            cap: usize::MAX,
        })
    })?;
    let columns: Vec<Vec<usize>> = (0..a.len()).map(|ai| homs.iter().map(|x| m.index_of(x[ai])).collect()).collect();
    let eval_set: HashSet<&Vec<usize>> = columns.iter().collect();
    let evaluations = eval_set.len() as u64;

    let local_total: u128 = if k == 1 {
        (0..h).map(|x| columns.iter().map(|c| c[x]).collect::<HashSet<_>>().len() as u128).product()
    } else {
        let mut count = 0u128;
        let mut search = LocalSearch { columns: &columns, size, k: k.min(h.max(1)), nodes: 0 };
        search.run(&mut Vec::with_capacity(h), h, &mut |_| count += 1)?;
        count
    };

    let mut letter_range_violations = 0u64;
    let mut search = LocalSearch { columns: &columns, size, k: 3.min(h.max(1)), nodes: 0 };
    search.run(&mut Vec::with_capacity(h), h, &mut |f| {
        if f.iter().any(|&e| m.element(e).is_letter()) && !eval_set.contains(&f.to_vec()) {
            letter_range_violations += 1;
        }
    })?;

    let local_only = local_total - evaluations as u128;
    Ok(LocalEvalReport {
        k,
        homs: h,
        functions,
        evaluations,
        local_only,
        neither: functions - local_total,
        letter_range_violations,
    })
}

/// Plain enumeration of every map, for cross-checking on tiny inputs.
#[cfg(test)]
fn local_eval_brute(m: &AutomaticAlgebra, a: &[PowerElement], k: usize) -> (u64, u128, u64) {
    let g = FiniteGroupoid::from_power_elements(m, a).unwrap();
    let homs = enumerate_homs(&g, m, HomOptions::default()).unwrap();
    let h = homs.len();
    let size = m.size();
    let columns: Vec<Vec<usize>> = (0..a.len()).map(|ai| homs.iter().map(|x| m.index_of(x[ai])).collect()).collect();
    let subsets = |kk: usize| -> Vec<Vec<usize>> { (1..=kk.min(h)).flat_map(|s| index_sets(h, s)).collect() };
    let (sk, s3) = (subsets(k), subsets(3));
    let locally = |f: &[usize], sets: &[Vec<usize>]| {
        sets.iter().all(|y| columns.iter().any(|col| y.iter().all(|&x| col[x] == f[x])))
    };
    let (mut evals, mut local_only, mut bad) = (0u64, 0u128, 0u64);
    for code in 0..size.pow(h as u32) {
        let f: Vec<usize> = (0..h).map(|x| code / size.pow((h - 1 - x) as u32) % size).collect();
        let is_eval = columns.contains(&f);
        if is_eval {
            evals += 1;
        } else if locally(&f, &sk) {
            local_only += 1;
        }
        if !is_eval && f.iter().any(|&e| m.element(e).is_letter()) && locally(&f, &s3) {
            bad += 1;
        }
    }
    (evals, local_only, bad)
}

/// The small subalgebra of `N_0²` used by the desk-scale local-evaluation check.
pub fn n0_square_subalgebra() -> (AutomaticAlgebra, Vec<PowerElement>) {
    let m = catalog::n(0).unwrap();
    let (q, r, a) = (st(&m, "q"), st(&m, "r"), lt(&m, "a"));
    let gens = [PowerElement(vec![q, r]), PowerElement(vec![a, a]), PowerElement(vec![r, r])];
    let elems = crate::powers::generate_subuniverse(&m, 2, &gens);
    (m, elems)
}

/// `M` viewed as the diagonal subalgebra of `M¹`.
pub fn as_first_power(m: &AutomaticAlgebra) -> Vec<PowerElement> {
    m.elements().into_iter().map(|e| PowerElement(vec![e])).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn build(c: Construction, n: usize) -> Truncation {
        build_truncation(&c, n, DEFAULT_ELEMENT_CAP).unwrap()
    }

    #[test]
    fn thm_wc_zero_generators() {
        let t = build(Construction::ThmWc(0), 5);
        let m = &t.spec.algebra;
        assert_eq!(t.spec.a0.len(), 4);
        assert_eq!(t.spec.a0[0].render(m), "(r,r,0,0,0)");
        assert_eq!(t.spec.g.render(m), "(r,0,0,0,0)");
        // 6 q-triples and 4 letter tuples
        assert_eq!(t.spec.b.len(), 10);
        let rep = verify_construction(&t).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn all_constructions_pass_small() {
        for n in [3, 4, 5] {
            for c in [
                Construction::ThmWc(0),
                Construction::ThmWc(1),
                Construction::ExAll4L,
                Construction::Lem2State2N4,
                Construction::Lem2State3N5,
                Construction::from_name("thm_nondcomm", &[]).unwrap(),
                Construction::from_name("thm_pcomm_case1", &[]).unwrap(),
            ] {
                let t = build(c.clone(), n);
                let rep = verify_construction(&t).unwrap_or_else(|e| panic!("{} N={n}: {e}", c.label()));
                assert!(rep.passed());
            }
        }
    }

    #[test]
    fn degenerate_size_is_vacuous_for_four_indices() {
        let t = build(Construction::from_name("thm_pcomm_case1", &[]).unwrap(), 3);
        let rep = construction_report(&t);
        assert!(rep.identities.iter().filter(|c| c.identity.contains("r{0@i")).all(|c| c.instances == 0));
    }

    #[test]
    fn pcomm_params_on_n1() {
        let m = catalog::n(1).unwrap();
        let p = find_pcomm_params(&m).unwrap();
        // q·b·a = 0, q·a·b = r
        assert_eq!((m.letter_names()[p.a].as_str(), m.letter_names()[p.b].as_str()), ("b", "a"));
        assert!(p.cs.is_empty());
        assert_eq!((p.p, m.state_names()[p.s].as_str(), m.state_names()[p.r].as_str()), (1, "r", "r"));
    }

    #[test]
    fn lyndon_witness_elements() {
        let t = build(Construction::ExAll4L, 4);
        let m = &t.spec.algebra;
        assert_eq!(m.num_states(), 3);
        assert_eq!(m.letter_names(), &["a".to_string(), "c".to_string()]);
        assert_eq!(t.spec.a0[1].render(m), "(q,s,q,q)");
        assert!(!t.contains(&t.spec.g));
    }

    #[test]
    fn tampered_identity_is_reported() {
        let mut t = build(Construction::Lem2State2N4, 4);
        // swapping in N_5's table breaks the transcription
        t.spec.algebra = catalog::n(3).unwrap();
        let rep = construction_report(&t);
        assert!(!rep.passed());
    }

    #[test]
    fn nondcomm_kernels_at_four() {
        let t = build(Construction::from_name("thm_nondcomm", &[]).unwrap(), 4);
        let rep = kernel_block_analysis(&t, t.spec.nu, DEFAULT_KERNEL_CAP).unwrap();
        assert!(rep.restriction_count > 0);
        assert!(rep.violations.is_empty(), "{rep}");
        assert!(rep.blocks.iter().all(|b| b.iter().sum::<usize>() == 4));
    }

    #[test]
    fn projection_kernel_has_one_big_block() {
        let t = build(Construction::from_name("thm_nondcomm", &[]).unwrap(), 4);
        let nat0 = 2 * t.spec.algebra.num_states();
        for i in 0..4 {
            let images: Vec<Element> = t.spec.a0.iter().map(|v| v.0[nat0 + i]).collect();
            assert_eq!(kernel_blocks(&images), vec![3, 1]);
        }
    }

    #[test]
    fn two_state_kernels_have_one_big_block() {
        let t = build(Construction::Lem2State2N4, 4);
        let rep = kernel_block_analysis(&t, 1, DEFAULT_KERNEL_CAP).unwrap();
        assert!(rep.violations.is_empty(), "{rep}");
        // the projections are among the realized restrictions
        assert!(rep.profile().contains_key(&vec![3, 1]));
    }

    #[test]
    fn full_nu_is_vacuous() {
        let t = build(Construction::Lem2State2N4, 4);
        let rep = kernel_block_analysis(&t, t.spec.a0.len(), DEFAULT_KERNEL_CAP).unwrap();
        assert!(rep.violations.is_empty());
    }

    #[test]
    fn local_probe_f0() {
        let m = catalog::f(0);
        let rep = local_eval_probe(&m, &as_first_power(&m), 3).unwrap();
        assert_eq!(rep.letter_range_violations, 0);
        assert!(rep.evaluations >= 1);
        assert_eq!(rep.evaluations as u128 + rep.local_only + rep.neither, rep.functions);
    }

    #[test]
    fn local_search_matches_brute_force() {
        let mut checked = 0;
        let cases = [
            catalog::n(0).unwrap(),
            catalog::transposition(1).unwrap(),
            catalog::constant_letters(1).unwrap(),
            catalog::f(0),
        ];
        for m in cases {
            for gens in [vec![m.element(m.num_states())], vec![Element::State(0), m.element(m.num_states())]] {
                let gens: Vec<PowerElement> = gens.into_iter().map(|e| PowerElement(vec![e])).collect();
                let a = crate::powers::generate_subuniverse(&m, 1, &gens);
                if local_eval_probe(&m, &a, 1).unwrap().homs > 9 {
                    continue;
                }
                checked += 1;
                for k in 1..=3 {
                    let rep = local_eval_probe(&m, &a, k).unwrap();
                    let (e, lo, bad) = local_eval_brute(&m, &a, k);
                    assert_eq!((rep.evaluations, rep.local_only, rep.letter_range_violations), (e, lo, bad), "k={k}");
                }
            }
        }
        assert!(checked >= 3, "only {checked} small cases");
    }

    #[test]
    fn n0_square_is_small() {
        let (m, a) = n0_square_subalgebra();
        assert!(a.len() <= 6);
        let rep = local_eval_probe(&m, &a, 3).unwrap();
        rep.assert_letter_range().unwrap();
    }

    #[test]
    fn small_sizes_rejected() {
        assert!(matches!(build_truncation(&Construction::ThmWc(0), 2, 10), Err(WitnessError::BadParams(_))));
        assert!(matches!(Construction::from_name("nope", &[]), Err(WitnessError::UnknownConstruction(_))));
    }
}
