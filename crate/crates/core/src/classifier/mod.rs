//! Rule engine producing verdicts with checkable certificates.
//!
//! Rules run in a fixed order; the order is part of the output contract.

pub mod certificate;
pub mod chain;
pub mod normalize;
pub mod verify;

pub use certificate::{
    Certificate, GroupCertificate, LoopComponent, Outcome, ReductionKind, ReductionStep, TraceEntry, Verdict,
};
pub use chain::gen_chain;
pub use normalize::normalize_algebra;
pub use verify::{certificate_valid, verify_certificate};

use crate::algebra::{AutomaticAlgebra, Element, Word};
use crate::catalog;
use crate::error::{ClassifyError, Error};
use crate::ops::constant_values;
use crate::powers::find_embedding;
use crate::structure::{
    letter_affine_analysis, nondcomm_check, rankill_check, whiskery_check, AbelianGroupData, LetterAffine, Whiskery,
};
use crate::terms::{check_identity, order_sensitivity, parse_and_normalize, CheckResult, OrderSensitivity};

use certificate::{IDENTITY_WXYZ, IDENTITY_XY};

/// Rule identifiers in evaluation order.
pub const RULES: [&str; 12] = [
    "zero_semigroup",
    "normalize",
    "whiskery",
    "rankill",
    "order_sensitivity",
    "single_letter",
    "two_state",
    "constant_letters",
    "all_loops",
    "letter_affine",
    "commuting_permutations",
    "unknown",
];

fn word_names(m: &AutomaticAlgebra, w: &Word) -> Vec<String> {
    w.0.iter().map(|&a| m.letter_names()[a].clone()).collect()
}

fn hom_names(src: &AutomaticAlgebra, dst: &AutomaticAlgebra, h: &[Element]) -> Vec<(String, String)> {
    src.elements().into_iter().zip(h).map(|(x, &y)| (src.name(x).to_string(), dst.name(y).to_string())).collect()
}

pub fn group_certificate(m: &AutomaticAlgebra, d: &AbelianGroupData) -> GroupCertificate {
    let sname = |x: usize| m.state_names()[d.states[x]].clone();
    let k = d.states.len();
    GroupCertificate {
        states: (0..k).map(sname).collect(),
        identity: sname(d.identity()),
        table: (0..k).map(|x| (0..k).map(|y| sname(d.group.op(x, y))).collect()).collect(),
        letter_images: d
            .letters
            .iter()
            .zip(&d.letter_images)
            .map(|(&a, &g)| (m.letter_names()[a].clone(), sname(g)))
            .collect(),
        dropped_letters: d.dropped_letters.iter().map(|&a| m.letter_names()[a].clone()).collect(),
        subgroup_h: d.subgroup_h.iter().map(|&x| sname(x)).collect(),
    }
}

/// Outcome of the two-state rule: equations, forbidden embeddings, cross-checked.
pub fn two_state_rule(n: &AutomaticAlgebra) -> Result<(Outcome, Certificate), ClassifyError> {
    let e1 = (parse_and_normalize("xy").unwrap(), parse_and_normalize("xyyy").unwrap());
    let e2 = (parse_and_normalize("wxyz").unwrap(), parse_and_normalize("wyxz").unwrap());
    let r1 = check_identity(n, &e1.0, &e1.1);
    let r2 = check_identity(n, &e2.0, &e2.1);
    let forbidden: Vec<(usize, AutomaticAlgebra, Option<Vec<Element>>)> = (0..=5)
        .map(|i| {
            let ni = catalog::n(i).expect("N_0..N_5 exist");
            let e = find_embedding(&ni, n);
            (i, ni, e)
        })
        .collect();
    let holds = r1.holds() && r2.holds();
    let embeds = forbidden.iter().find(|(_, _, e)| e.is_some());
    if holds != embeds.is_none() {
        return Err(ClassifyError::InternalInconsistency(format!(
            "two-state equations {} but forbidden embedding {}",
            if holds { "hold" } else { "fail" },
            if embeds.is_some() { "exists" } else { "is absent" }
        )));
    }
    if holds {
        return Ok((
            Outcome::Dualizable,
            Certificate::TwoStateEquations { identities: vec![IDENTITY_XY.into(), IDENTITY_WXYZ.into()] },
        ));
    }
    let (i, ni, e) = embeds.unwrap();
    let (failed, cex) = match (&r1, &r2) {
        (CheckResult::Counterexample(a), _) => (IDENTITY_XY, a),
        (_, CheckResult::Counterexample(a)) => (IDENTITY_WXYZ, a),
        _ => unreachable!("one identity fails"),
    };
    Ok((
        Outcome::NonDualizable,
        Certificate::TwoStateForbidden {
            forbidden: *i,
            embedding: hom_names(ni, n, e.as_ref().unwrap()),
            failed_identity: failed.into(),
            counterexample: cex.0.iter().map(|(v, x)| (v.clone(), n.name(*x).to_string())).collect(),
        },
    ))
}

fn all_loops(n: &AutomaticAlgebra) -> bool {
    n.edges().all(|(q, _, r)| q == r)
}

struct Engine {
    trace: Vec<TraceEntry>,
}

impl Engine {
    fn note(&mut self, rule: &str, fired: bool, detail: impl Into<String>) {
        self.trace.push(TraceEntry { rule: rule.into(), fired, detail: detail.into() });
    }

    fn done(self, outcome: Outcome, rule: &str, certificate: Certificate) -> Verdict {
        Verdict { verdict: outcome, rule: rule.into(), certificate, trace: self.trace }
    }
}

/// Classifies `m`, returning a verdict whose certificate checks against `m`.
pub fn classify(m: &AutomaticAlgebra) -> Result<Verdict, Error> {
    let mut eng = Engine { trace: Vec::new() };
    let is_zero = |x: &AutomaticAlgebra| x.num_states() == 0 || x.num_letters() == 0;
    if is_zero(m) {
        eng.note(RULES[0], true, "no states or no letters");
        return Ok(eng.done(Outcome::Dualizable, RULES[0], Certificate::ZeroSemigroup));
    }
    eng.note(RULES[0], false, format!("{} states, {} letters", m.num_states(), m.num_letters()));

    let (n, steps) = normalize_algebra(m)?;
    let removed: Vec<&str> = steps.iter().map(|s| s.removed.as_str()).collect();
    eng.note(
        RULES[1],
        !steps.is_empty(),
        if steps.is_empty() { "already normal".to_string() } else { format!("dropped {}", removed.join(", ")) },
    );
    let wrap = |c: Certificate| {
        if steps.is_empty() {
            c
        } else {
            Certificate::ReductionChain { steps: steps.clone(), inner: Box::new(c) }
        }
    };
    if is_zero(&n) {
        eng.note(RULES[0], true, "normalized algebra is a zero semigroup");
        return Ok(eng.done(Outcome::Dualizable, RULES[0], wrap(Certificate::ZeroSemigroup)));
    }

    match whiskery_check(&n)? {
        Whiskery::Failure { letter, state, m: k, embedding } => {
            let (a, q) = (n.letter_names()[letter].clone(), n.state_names()[state].clone());
            eng.note(RULES[2], true, format!("{a} is not whiskery at {q}; F_{k} embeds"));
            let cert = Certificate::WhiskeryFailure {
                letter: a,
                state: q,
                m: k,
                embedding: hom_names(&catalog::f(k), &n, &embedding),
            };
            return Ok(eng.done(Outcome::NonDualizable, RULES[2], wrap(cert)));
        }
        Whiskery::AllPass => eng.note(RULES[2], false, "every letter acts as whiskery cycles"),
    }

    match rankill_check(&n) {
        Some(w) => {
            let (a, q) = (n.letter_names()[w.letter].clone(), n.state_names()[w.state].clone());
            eng.note(RULES[3], true, format!("case {}: {a} at {q} via \"{}\"", w.case, n.format_word(&w.word)));
            let cert = Certificate::RanKill { case: w.case, letter: a, state: q, word: word_names(&n, &w.word) };
            return Ok(eng.done(Outcome::NonDualizable, RULES[3], wrap(cert)));
        }
        None => eng.note(RULES[3], false, "no range/kill path"),
    }

    match order_sensitivity(&n) {
        OrderSensitivity::Witness { state, w1, w2 } => {
            let q = n.state_names()[state].clone();
            eng.note(RULES[4], true, format!("{q}·{} = 0 but {q}·{} ≠ 0", n.format_word(&w1), n.format_word(&w2)));
            let cert = Certificate::OrderSensitive { state: q, w1: word_names(&n, &w1), w2: word_names(&n, &w2) };
            return Ok(eng.done(Outcome::NonDualizable, RULES[4], wrap(cert)));
        }
        OrderSensitivity::Insensitive => eng.note(RULES[4], false, "kill behaviour ignores letter order"),
    }

    if n.num_letters() == 1 {
        let a = n.letter_names()[0].clone();
        eng.note(RULES[5], true, format!("single whiskery letter {a}"));
        return Ok(eng.done(Outcome::Dualizable, RULES[5], wrap(Certificate::SingleLetterWhiskery { letter: a })));
    }
    eng.note(RULES[5], false, format!("{} letters", n.num_letters()));

    if n.num_states() == 2 {
        let (outcome, cert) = two_state_rule(&n)?;
        let detail = match &cert {
            Certificate::TwoStateForbidden { forbidden, failed_identity, .. } => {
                format!("N_{forbidden} embeds; {failed_identity} fails")
            }
            _ => "both equations hold; no forbidden embedding".to_string(),
        };
        eng.note(RULES[6], true, detail);
        return Ok(eng.done(outcome, RULES[6], wrap(cert)));
    }
    eng.note(RULES[6], false, format!("{} states", n.num_states()));

    if let Some(values) = constant_values(&n) {
        eng.note(RULES[7], true, "every letter is total and constant");
        let values = values
            .iter()
            .enumerate()
            .map(|(a, &q)| (n.letter_names()[a].clone(), n.state_names()[q].clone()))
            .collect();
        return Ok(eng.done(Outcome::Dualizable, RULES[7], wrap(Certificate::ConstantLetters { values })));
    }
    eng.note(RULES[7], false, "some letter is partial or not constant");

    if all_loops(&n) {
        eng.note(RULES[8], true, "every edge is a loop");
        let components = (0..n.num_states())
            .map(|q| LoopComponent {
                state: n.state_names()[q].clone(),
                letters: (0..n.num_letters())
                    .filter(|&a| n.delta(q, a).is_some())
                    .map(|a| n.letter_names()[a].clone())
                    .collect(),
            })
            .collect();
        return Ok(eng.done(Outcome::Dualizable, RULES[8], wrap(Certificate::AllLoops { components })));
    }
    eng.note(RULES[8], false, "some edge is not a loop");

    match letter_affine_analysis(&n) {
        LetterAffine::Yes(data) => {
            eng.note(RULES[9], true, format!("{} component(s), letter images form cosets", data.len()));
            let components = data.iter().map(|d| group_certificate(&n, d)).collect();
            return Ok(eng.done(Outcome::Dualizable, RULES[9], wrap(Certificate::LetterAffine { components })));
        }
        LetterAffine::No { component, reason, triple } => {
            let t = triple
                .map(|(x, y, z)| {
                    format!(" at ({}, {}, {})", n.letter_names()[x], n.letter_names()[y], n.letter_names()[z])
                })
                .unwrap_or_default();
            eng.note(RULES[9], false, format!("component {component}: {reason}{t}"));
        }
    }

    match nondcomm_check(&n) {
        Some(w) => {
            let (b, c) = (n.letter_names()[w.b].clone(), n.letter_names()[w.c].clone());
            eng.note(
                RULES[10],
                true,
                format!("ρ_{b} ρ_{c}⁻¹ has order {}; no component contains a matching coset", w.m),
            );
            let components =
                w.components.iter().map(|r| r.states.iter().map(|&q| n.state_names()[q].clone()).collect()).collect();
            let cert = Certificate::CommutingPermutations { b, c, m: w.m, components };
            return Ok(eng.done(Outcome::NonDualizable, RULES[10], wrap(cert)));
        }
        None => eng.note(RULES[10], false, "conditions for commuting permutations not met"),
    }

    eng.note(RULES[11], true, "no rule applies");
    Ok(eng.done(Outcome::Unknown, RULES[11], Certificate::Inconclusive))
}

/// Every rule from `whiskery` on, evaluated independently on the normalized algebra.
///
/// Dualizability rules report `Some(Dualizable)` whenever their theorem applies on its
/// own; the single-letter rule includes its whiskery hypothesis.
pub fn independent_rule_outcomes(m: &AutomaticAlgebra) -> Result<Vec<(&'static str, Option<Outcome>)>, Error> {
    let (n, _) = normalize_algebra(m)?;
    if n.num_states() == 0 || n.num_letters() == 0 {
        return Ok(vec![(RULES[0], Some(Outcome::Dualizable))]);
    }
    let whiskery_fails = matches!(whiskery_check(&n)?, Whiskery::Failure { .. });
    let nd = |b: bool| b.then_some(Outcome::NonDualizable);
    let d = |b: bool| b.then_some(Outcome::Dualizable);
    let mut out = vec![
        (RULES[2], nd(whiskery_fails)),
        (RULES[3], nd(rankill_check(&n).is_some())),
        (RULES[4], nd(matches!(order_sensitivity(&n), OrderSensitivity::Witness { .. }))),
        (RULES[5], d(n.num_letters() == 1 && !whiskery_fails)),
    ];
    let two = if n.num_states() == 2 { Some(two_state_rule(&n)?.0) } else { None };
    out.push((RULES[6], two));
    out.push((RULES[7], d(constant_values(&n).is_some())));
    out.push((RULES[8], d(all_loops(&n))));
    out.push((RULES[9], d(matches!(letter_affine_analysis(&n), LetterAffine::Yes(_)))));
    out.push((RULES[10], nd(nondcomm_check(&n).is_some())));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog as cat;

    fn verdict(name: &str, params: &[i64]) -> Verdict {
        classify(&cat(name, params).unwrap()).unwrap()
    }

    #[test]
    fn golden_rules() {
        let cases: &[(&str, &[i64], Outcome, &str)] = &[
            ("B", &[], Outcome::NonDualizable, "whiskery"),
            ("R", &[], Outcome::NonDualizable, "whiskery"),
            ("L3star", &[], Outcome::NonDualizable, "rankill"),
            ("F", &[0], Outcome::NonDualizable, "whiskery"),
            ("F", &[2], Outcome::NonDualizable, "whiskery"),
            ("N", &[1], Outcome::NonDualizable, "rankill"),
            ("N", &[2], Outcome::NonDualizable, "rankill"),
            ("N", &[4], Outcome::NonDualizable, "two_state"),
            ("N", &[5], Outcome::NonDualizable, "two_state"),
            ("C", &[3], Outcome::NonDualizable, "commuting_permutations"),
            ("Cid", &[3], Outcome::Dualizable, "letter_affine"),
            ("T", &[1], Outcome::Dualizable, "single_letter"),
            ("T", &[2], Outcome::Dualizable, "two_state"),
            ("K", &[1], Outcome::Dualizable, "single_letter"),
            ("K", &[2], Outcome::Dualizable, "two_state"),
            ("L", &[], Outcome::Unknown, "unknown"),
        ];
        for (name, p, o, rule) in cases {
            let v = verdict(name, p);
            assert_eq!((v.verdict, v.rule.as_str()), (*o, *rule), "{name} {p:?}");
            assert!(certificate_valid(&cat(name, p).unwrap(), &v), "{name} {p:?}");
        }
    }

    #[test]
    fn witnesses_match_examples() {
        match verdict("L3star", &[]).certificate {
            Certificate::RanKill { case, letter, state, word } => {
                assert_eq!((case, letter.as_str(), state.as_str()), (2, "b", "s"));
                assert_eq!(word, vec!["a", "c"]);
            }
            c => panic!("{c:?}"),
        }
        match verdict("R", &[]).certificate {
            Certificate::WhiskeryFailure { letter, state, .. } => {
                assert_eq!((letter.as_str(), state.as_str()), ("a", "r"))
            }
            c => panic!("{c:?}"),
        }
        match verdict("C", &[3]).certificate {
            Certificate::CommutingPermutations { b, c, m, .. } => {
                assert_eq!((b.as_str(), c.as_str(), m), ("b", "c", 3))
            }
            c => panic!("{c:?}"),
        }
    }

    #[test]
    fn chain_alternates() {
        let got: Vec<Outcome> = (1..=4).map(|k| classify(&gen_chain(k)).unwrap().verdict).collect();
        assert_eq!(got, vec![Outcome::NonDualizable, Outcome::Dualizable, Outcome::NonDualizable, Outcome::Dualizable]);
    }

    #[test]
    fn unknown_keeps_full_trace() {
        let v = verdict("L", &[]);
        let rules: Vec<&str> = v.trace.iter().map(|t| t.rule.as_str()).collect();
        assert_eq!(rules, RULES.to_vec());
        assert!(v.trace[..11].iter().all(|t| !t.fired || t.rule == "normalize"));
    }
}
