//! The acceptance suites, shared by the `suite` command and the acceptance test.

use std::collections::BTreeMap;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::AutomaticAlgebra;
use crate::catalog;
use crate::classifier::{certificate_valid, classify, gen_chain, Certificate, Outcome, Verdict};
use crate::groups::{huc_character, zero_column_sweep};
use crate::ops::{all_applicable, graph_is_compatible};
use crate::oracle;
use crate::par::Strategy;
use crate::powers::find_embedding;
use crate::random::{all_two_state, random_algebra, random_commuting_permutational};
use crate::structure::{component_group, components, whiskery_conditions};
use crate::terms::{check_identity, is_order_witness, order_sensitivity, parse_and_normalize, OrderSensitivity};
use crate::witness::{
    as_first_power, build_truncation, kernel_block_analysis, local_eval_probe, n0_square_subalgebra,
    verify_construction, Construction, DEFAULT_ELEMENT_CAP, DEFAULT_KERNEL_CAP,
};

pub const DEFAULT_SEED: u64 = 20_241;

pub const TITLES: [&str; 12] = [
    "golden verdicts",
    "chain alternation",
    "exhaustive two-state check",
    "whiskery equivalence on random algebras",
    "order-sensitivity against brute force",
    "compatible-operation soundness",
    "group construction on commuting permutations",
    "character construction on abelian groups",
    "zero-column sweep",
    "witness truncations",
    "certificate audit",
    "local evaluations at desk scale",
];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub id: usize,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {:>2}. {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.title, self.detail)
    }
}

fn result(id: usize, passed: bool, detail: impl Into<String>) -> CriterionResult {
    CriterionResult { id, title: TITLES[id - 1], passed, detail: detail.into() }
}

/// Runs one criterion (1-based).
pub fn run_criterion(id: usize, seed: u64) -> CriterionResult {
    match id {
        1 => golden_verdicts(),
        2 => chain_alternation(),
        3 => two_state_exhaustive(),
        4 => whiskery_equivalence(seed, 500),
        5 => order_sensitivity_exact(seed, 200),
        6 => compatible_ops(),
        7 => group_construction(seed, 100),
        8 => character_construction(seed),
        9 => zero_columns(),
        10 => witness_truncations(),
        11 => certificate_audit(),
        12 => local_evaluations(),
        _ => panic!("criteria are numbered 1 to 12"),
    }
}

pub fn run_all(seed: u64) -> Vec<CriterionResult> {
    (1..=12).map(|id| run_criterion(id, seed)).collect()
}

fn cat(name: &str, params: &[i64]) -> AutomaticAlgebra {
    catalog::catalog(name, params).expect("catalog entry")
}

/// The golden set with expected outcomes.
pub fn golden_set() -> Vec<(String, AutomaticAlgebra, Outcome)> {
    use Outcome::*;
    let mut out: Vec<(String, AutomaticAlgebra, Outcome)> = vec![
        ("B".into(), cat("B", &[]), NonDualizable),
        ("R".into(), cat("R", &[]), NonDualizable),
        ("L3star".into(), cat("L3star", &[]), NonDualizable),
    ];
    for m in 0..=2 {
        out.push((format!("F {m}"), catalog::f(m), NonDualizable));
    }
    for i in 0..=5 {
        out.push((format!("N {i}"), catalog::n(i).unwrap(), NonDualizable));
    }
    out.push(("C 3".into(), cat("C", &[3]), NonDualizable));
    out.push(("Cid 3".into(), cat("Cid", &[3]), Dualizable));
    for i in 1..=2 {
        out.push((format!("T {i}"), cat("T", &[i]), Dualizable));
    }
    for i in 1..=3 {
        out.push((format!("K {i}"), cat("K", &[i]), Dualizable));
    }
    out.push(("L".into(), cat("L", &[]), Unknown));
    out
}

fn golden_verdicts() -> CriterionResult {
    let mut bad = Vec::new();
    for (name, m, want) in golden_set() {
        match classify(&m) {
            Ok(v) if v.verdict == want => {
                if name == "L3star" && !matches!(v.certificate.innermost(), Certificate::RanKill { case: 2, .. }) {
                    bad.push(format!("L3star: expected a range-kill case 2 certificate, got rule {}", v.rule));
                }
                if want == Outcome::Unknown && v.trace.len() != crate::classifier::RULES.len() {
                    bad.push(format!("{name}: trace has {} entries", v.trace.len()));
                }
            }
            Ok(v) => bad.push(format!("{name}: {:?} by {}, expected {want:?}", v.verdict, v.rule)),
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    let n = golden_set().len();
    if bad.is_empty() {
        result(1, true, format!("{n}/{n} verdicts as expected"))
    } else {
        result(1, false, bad.join("; "))
    }
}

fn chain_alternation() -> CriterionResult {
    let got: Vec<String> = (1..=4)
        .map(|k| classify(&gen_chain(k)).map_or_else(|e| e.to_string(), |v| v.verdict.short().to_string()))
        .collect();
    let added = gen_chain(3).num_states() - gen_chain(2).num_states();
    let ok = got == ["ND", "D", "ND", "D"] && added == 7;
    result(2, ok, format!("verdicts {}; cycle adjoined at n = 3 has {added} states", got.join(", ")))
}

fn two_state_exhaustive() -> CriterionResult {
    let (xy_l, xy_r) = (parse_and_normalize("xy").unwrap(), parse_and_normalize("xyyy").unwrap());
    let (w_l, w_r) = (parse_and_normalize("wxyz").unwrap(), parse_and_normalize("wyxz").unwrap());
    let forbidden: Vec<AutomaticAlgebra> = (0..=5).map(|i| catalog::n(i).unwrap()).collect();
    let mut total = 0;
    let mut bad = Vec::new();
    for letters in 1..=2 {
        for m in all_two_state(letters) {
            total += 1;
            let eqs = check_identity(&m, &xy_l, &xy_r).holds() && check_identity(&m, &w_l, &w_r).holds();
            let embeds = forbidden.iter().any(|n| find_embedding(n, &m).is_some());
            if eqs == embeds {
                bad.push(format!("equations {eqs}, forbidden embeds {embeds} on {:?}", m.edges().collect::<Vec<_>>()));
            }
            match classify(&m) {
                Ok(v) if v.verdict == Outcome::Unknown => {
                    bad.push(format!("Unknown on {:?}", m.edges().collect::<Vec<_>>()))
                }
                Err(e) => bad.push(e.to_string()),
                _ => {}
            }
        }
    }
    result(
        3,
        bad.is_empty(),
        if bad.is_empty() { format!("{total} algebras, 0 discrepancies") } else { bad.join("; ") },
    )
}

fn whiskery_equivalence(seed: u64, count: usize) -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut bad = Vec::new();
    let mut failing = 0;
    for i in 0..count {
        let m = random_algebra(&mut rng, 4, 3, 0.6);
        let c = whiskery_conditions(&m);
        failing += !c.direct as usize;
        if !c.agree() {
            bad.push(format!("#{i}: {c:?}"));
        }
    }
    let detail = format!("{count} algebras ({failing} not whiskery), {} disagreements", bad.len());
    result(4, bad.is_empty(), if bad.is_empty() { detail } else { format!("{detail}: {}", bad.join("; ")) })
}

fn order_sensitivity_exact(seed: u64, count: usize) -> CriterionResult {
    const LEN: usize = 6;
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5);
    let mut corpus: Vec<(String, AutomaticAlgebra)> = catalog::named_set();
    corpus.extend((0..count).map(|i| (format!("random #{i}"), random_algebra(&mut rng, 3, 2, 0.6))));
    let mut bad = Vec::new();
    let mut sensitive = 0;
    let mut long_witnesses = 0;
    for (name, m) in &corpus {
        let brute = oracle::order_sensitive_brute(m, LEN);
        let decided = match order_sensitivity(m) {
            OrderSensitivity::Insensitive => None,
            OrderSensitivity::Witness { state, w1, w2 } => {
                if !is_order_witness(m, state, &w1, &w2) {
                    bad.push(format!("{name}: witness does not check"));
                }
                Some(w1.len())
            }
        };
        sensitive += decided.is_some() as usize;
        if decided.is_some_and(|l| l > LEN) {
            long_witnesses += 1;
        }
        // a witness of length ≤ LEN must be seen by brute force and vice versa
        if brute != decided.is_some_and(|l| l <= LEN) {
            bad.push(format!("{name}: brute force {brute}, decision {decided:?}"));
        }
    }
    let detail = format!(
        "{} algebras ({sensitive} sensitive, {long_witnesses} with shortest witness longer than {LEN}), {} disagreements",
        corpus.len(),
        bad.len()
    );
    result(5, bad.is_empty(), if bad.is_empty() { detail } else { format!("{detail}: {}", bad.join("; ")) })
}

fn compatible_ops() -> CriterionResult {
    let mut built: BTreeMap<String, usize> = BTreeMap::new();
    let mut bad = Vec::new();
    for (name, m) in catalog::named_set() {
        for (spec, op) in all_applicable(&m) {
            if let Ok(op) = op {
                *built.entry(spec.label()).or_insert(0) += 1;
                if !graph_is_compatible(&m, &op) {
                    bad.push(format!("{} on {name}", spec.label()));
                }
            }
        }
    }
    let expected = ["g", "join", "quasi-meet", "meet", "h", "lambda", "diamond", "malcev", "psi"];
    let missing: Vec<&str> = expected.iter().copied().filter(|l| !built.contains_key(*l)).collect();
    let summary = built.iter().map(|(l, n)| format!("{l}×{n}")).collect::<Vec<_>>().join(" ");
    let ok = bad.is_empty() && missing.is_empty();
    let detail = if ok {
        format!("all graphs compatible ({summary})")
    } else {
        format!("incompatible: [{}]; never built: [{}]", bad.join(", "), missing.join(", "))
    };
    result(6, ok, detail)
}

fn group_construction(seed: u64, count: usize) -> CriterionResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7);
    let mut bad = Vec::new();
    for i in 0..count {
        let m = random_commuting_permutational(&mut rng, 5);
        let block = components(&m).blocks[0].clone();
        let d = match component_group(&m, &block) {
            Ok(d) => d,
            Err(e) => {
                bad.push(format!("#{i}: {e}"));
                continue;
            }
        };
        let letter_law = d.letters.iter().all(|&a| {
            let img = d.image_of(a).unwrap();
            d.states
                .iter()
                .all(|&q| d.position(m.delta(q, a).unwrap()) == Some(d.group.op(d.position(q).unwrap(), img)))
        });
        if !letter_law {
            bad.push(format!("#{i}: q·a ≠ q * a"));
        }
        if !oracle::regular_action(&m, &block) {
            bad.push(format!("#{i}: action not regular"));
        }
    }
    result(
        7,
        bad.is_empty(),
        if bad.is_empty() { format!("{count} algebras, letter law and regularity hold") } else { bad.join("; ") },
    )
}

fn character_construction(seed: u64) -> CriterionResult {
    let mut checked = 0;
    let mut bad = Vec::new();
    let groups = oracle::abelian_groups_up_to(12, seed);
    for (label, h) in &groups {
        let endos = oracle::endomorphisms_brute(h);
        let e = h.exponent();
        for m in [e, 2 * e] {
            for u in 0..h.order() {
                checked += 1;
                match huc_character(h, m, u) {
                    Ok(w) => {
                        if let Err(why) = w.check(h).and_then(|_| oracle::character_property(h, m, u, &w.chi, &endos)) {
                            bad.push(format!("{label}, m={m}, u={u}: {why}"));
                        }
                    }
                    Err(err) => bad.push(format!("{label}, m={m}, u={u}: {err}")),
                }
            }
        }
    }
    let detail = format!("{} group types, {checked} (m, u) cases, {} failures", groups.len(), bad.len());
    result(8, bad.is_empty(), if bad.is_empty() { detail } else { format!("{detail}: {}", bad.join("; ")) })
}

fn zero_columns() -> CriterionResult {
    let mut parts = Vec::new();
    let mut failures = Vec::new();
    for m in [2, 3] {
        let s = zero_column_sweep(m, 3, Strategy::Parallel);
        parts.push(format!("Z{m}: {} matrices, {} meet the hypotheses", s.matrices, s.satisfying));
        failures.extend(s.failures);
    }
    let detail = format!("{}; {} failures", parts.join(", "), failures.len());
    result(
        9,
        failures.is_empty(),
        if failures.is_empty() { detail } else { format!("{detail}: {}", failures.join("; ")) },
    )
}

/// Constructions covered by the truncation criterion.
pub fn truncation_constructions() -> Vec<Construction> {
    let named = |n: &str| Construction::from_name(n, &[]).expect("known construction");
    vec![
        Construction::ThmWc(0),
        Construction::ThmWc(1),
        named("ex_all4_L"),
        named("lem_2state2_N4"),
        named("lem_2state3_N5"),
        named("thm_nondcomm"),
    ]
}

fn witness_truncations() -> CriterionResult {
    let mut bad = Vec::new();
    let mut lines = Vec::new();
    for c in truncation_constructions() {
        for n in [4, 6] {
            match build_truncation(&c, n, DEFAULT_ELEMENT_CAP).and_then(|t| verify_construction(&t).map(|_| t)) {
                Ok(t) => {
                    if n == 4 {
                        match kernel_block_analysis(&t, t.spec.nu, DEFAULT_KERNEL_CAP) {
                            Ok(k) if k.violations.is_empty() => lines.push(format!(
                                "{} ok, {} restrictions, ν = {}",
                                c.label(),
                                k.restriction_count,
                                k.nu
                            )),
                            Ok(k) => bad.push(format!("{} N=4: {} kernel violations", c.label(), k.violations.len())),
                            Err(e) => bad.push(format!("{} N=4 kernels: {e}", c.label())),
                        }
                    }
                }
                Err(e) => bad.push(format!("{} N={n}: {e}", c.label())),
            }
        }
    }
    result(10, bad.is_empty(), if bad.is_empty() { lines.join("; ") } else { bad.join("; ") })
}

/// Deliberately wrong variants of a verdict: another letter, state, word or embedding.
pub fn mutants(m: &AutomaticAlgebra, v: &Verdict) -> Vec<(String, Verdict)> {
    let mut out = Vec::new();
    let with = |c: Certificate| Verdict { certificate: rewrap(&v.certificate, c), ..v.clone() };
    let other_state = |s: &str| m.state_names().iter().find(|x| *x != s).cloned();
    let other_letter = |a: &str| m.letter_names().iter().find(|x| *x != a).cloned();
    match v.certificate.innermost() {
        Certificate::WhiskeryFailure { letter, state, m: k, embedding } => {
            if let Some(b) = other_letter(letter) {
                out.push((
                    "letter".into(),
                    with(Certificate::WhiskeryFailure {
                        letter: b,
                        state: state.clone(),
                        m: *k,
                        embedding: embedding.clone(),
                    }),
                ));
            }
            out.push((
                "embedding size".into(),
                with(Certificate::WhiskeryFailure {
                    letter: letter.clone(),
                    state: state.clone(),
                    m: k + 1,
                    embedding: embedding.clone(),
                }),
            ));
            let mut e = embedding.clone();
            if let Some(pos) = e.iter().position(|(x, _)| x == "r") {
                e[pos].1 = "0".into();
                out.push((
                    "embedding image".into(),
                    with(Certificate::WhiskeryFailure {
                        letter: letter.clone(),
                        state: state.clone(),
                        m: *k,
                        embedding: e,
                    }),
                ));
            }
        }
        Certificate::RanKill { case, letter, state, word } => {
            let mut w = word.clone();
            w.pop();
            if w.len() + 1 == word.len() {
                out.push((
                    "word".into(),
                    with(Certificate::RanKill { case: *case, letter: letter.clone(), state: state.clone(), word: w }),
                ));
            }
            out.push((
                "case".into(),
                with(Certificate::RanKill {
                    case: 3 - case,
                    letter: letter.clone(),
                    state: state.clone(),
                    word: word.clone(),
                }),
            ));
            if let Some(b) = other_letter(letter) {
                out.push((
                    "letter".into(),
                    with(Certificate::RanKill { case: *case, letter: b, state: state.clone(), word: word.clone() }),
                ));
            }
        }
        Certificate::OrderSensitive { state, w1, w2 } => {
            out.push((
                "word".into(),
                with(Certificate::OrderSensitive { state: state.clone(), w1: w2.clone(), w2: w1.clone() }),
            ));
        }
        Certificate::TwoStateForbidden { forbidden, embedding, failed_identity, counterexample } => {
            let mut e = embedding.clone();
            e.reverse();
            let ys: Vec<String> = embedding.iter().map(|(_, y)| y.clone()).collect();
            for (i, (_, y)) in e.iter_mut().enumerate() {
                *y = ys[(i + 1) % ys.len()].clone();
            }
            e.reverse();
            out.push((
                "embedding".into(),
                with(Certificate::TwoStateForbidden {
                    forbidden: *forbidden,
                    embedding: e,
                    failed_identity: failed_identity.clone(),
                    counterexample: counterexample.clone(),
                }),
            ));
        }
        Certificate::CommutingPermutations { b, c, m: k, components } => {
            out.push((
                "order".into(),
                with(Certificate::CommutingPermutations {
                    b: b.clone(),
                    c: c.clone(),
                    m: k + 1,
                    components: components.clone(),
                }),
            ));
            out.push((
                "letter".into(),
                with(Certificate::CommutingPermutations {
                    b: c.clone(),
                    c: c.clone(),
                    m: *k,
                    components: components.clone(),
                }),
            ));
        }
        Certificate::SingleLetterWhiskery { letter } => {
            out.push(("letter".into(), with(Certificate::SingleLetterWhiskery { letter: format!("{letter}_") })));
        }
        Certificate::ConstantLetters { values } => {
            let mut vs = values.clone();
            if let Some(s) = other_state(&vs[0].1) {
                vs[0].1 = s;
                out.push(("state".into(), with(Certificate::ConstantLetters { values: vs })));
            }
        }
        Certificate::LetterAffine { components } => {
            let mut cs = components.clone();
            let alt = cs[0].letter_images.first().and_then(|(_, img)| cs[0].states.iter().find(|s| *s != img).cloned());
            if let Some(alt) = alt {
                cs[0].letter_images[0].1 = alt;
                out.push(("letter image".into(), with(Certificate::LetterAffine { components: cs })));
            }
        }
        _ => {}
    }
    if let Certificate::ReductionChain { steps, inner } = &v.certificate {
        let mut steps = steps.clone();
        let names: Vec<String> = m.state_names().iter().chain(m.letter_names()).cloned().collect();
        if let Some(entry) = steps[0].embedding.iter_mut().find(|(x, _, _)| names.contains(x)) {
            let swap = names.iter().find(|n| **n != entry.0).cloned();
            if let Some(other) = swap {
                entry.0 = other;
                out.push((
                    "reduction embedding".into(),
                    Verdict { certificate: Certificate::ReductionChain { steps, inner: inner.clone() }, ..v.clone() },
                ));
            }
        }
    }
    // a verdict that disagrees with its certificate
    if v.verdict != Outcome::Unknown {
        let flipped = if v.verdict == Outcome::Dualizable { Outcome::NonDualizable } else { Outcome::Dualizable };
        out.push(("verdict".into(), Verdict { verdict: flipped, ..v.clone() }));
    }
    out
}

/// `inner` placed under the reduction wrappers of `c`.
fn rewrap(c: &Certificate, inner: Certificate) -> Certificate {
    match c {
        Certificate::ReductionChain { steps, inner: i } => {
            Certificate::ReductionChain { steps: steps.clone(), inner: Box::new(rewrap(i, inner)) }
        }
        _ => inner,
    }
}

fn certificate_audit() -> CriterionResult {
    let mut accepted = 0;
    let mut emitted = 0;
    let mut rejected = 0;
    let mut mutated = 0;
    let mut bad = Vec::new();
    for (name, m, _) in golden_set() {
        let Ok(v) = classify(&m) else { continue };
        emitted += 1;
        if certificate_valid(&m, &v) {
            accepted += 1;
        } else {
            bad.push(format!("{name}: emitted certificate rejected"));
        }
        for (kind, mv) in mutants(&m, &v) {
            mutated += 1;
            if certificate_valid(&m, &mv) {
                bad.push(format!("{name}: mutant ({kind}) accepted"));
            } else {
                rejected += 1;
            }
        }
    }
    let ok = bad.is_empty() && mutated >= 20;
    let detail = format!("{accepted}/{emitted} emitted accepted, {rejected}/{mutated} mutants rejected");
    result(11, ok, if bad.is_empty() { detail } else { format!("{detail}: {}", bad.join("; ")) })
}

fn local_evaluations() -> CriterionResult {
    let f0 = catalog::f(0);
    let (n0, sub) = n0_square_subalgebra();
    let cases = [("F_0 on F_0", f0.clone(), as_first_power(&f0)), ("N_0 on a subalgebra of N_0²", n0, sub)];
    let mut parts = Vec::new();
    let mut ok = true;
    for (label, m, a) in cases {
        match local_eval_probe(&m, &a, 3) {
            Ok(r) => {
                ok &= r.assert_letter_range().is_ok();
                parts.push(format!(
                    "{label}: |A| = {}, {} homs, {} evaluations, {} 3-local only, {} letter-range violations",
                    a.len(),
                    r.homs,
                    r.evaluations,
                    r.local_only,
                    r.letter_range_violations
                ));
            }
            Err(e) => {
                ok = false;
                parts.push(format!("{label}: {e}"));
            }
        }
    }
    result(12, ok, parts.join("; "))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mutants_cover_golden_set() {
        let n: usize = golden_set().iter().filter_map(|(_, m, _)| classify(m).ok().map(|v| mutants(m, &v).len())).sum();
        assert!(n >= 20, "{n}");
    }

    #[test]
    fn cheap_criteria() {
        for id in [1, 2, 9, 11, 12] {
            let r = run_criterion(id, DEFAULT_SEED);
            assert!(r.passed, "{r}");
        }
    }
}
