//! Plain-text reports. Section headers start with `== ` and are stable.

use std::fmt::Write;

use autdual::catalog;
use autdual::classifier::Verdict;
use autdual::structure::{
    components, letter_affine_analysis, letter_sets, permutation_profile, rankill_check, whiskery_conditions,
    LetterAffine, LetterOnComponent,
};
use autdual::terms::{order_sensitivity, OrderSensitivity};
use autdual::{AutomaticAlgebra, Error};

fn states(m: &AutomaticAlgebra, qs: &[usize]) -> String {
    format!("{{{}}}", qs.iter().map(|&q| m.state_names()[q].as_str()).collect::<Vec<_>>().join(", "))
}

pub fn verdict_text(v: &Verdict) -> String {
    let mut out = String::new();
    writeln!(out, "verdict: {} ({:?})", v.verdict.short(), v.verdict).unwrap();
    writeln!(out, "rule: {}", v.rule).unwrap();
    writeln!(out, "trace:").unwrap();
    for t in &v.trace {
        writeln!(out, "  {:<24} {:<5} {}", t.rule, if t.fired { "fired" } else { "-" }, t.detail).unwrap();
    }
    out
}

/// Annotation for catalog algebras whose published verdict is stronger than the derived one.
pub fn literature_note(m: &AutomaticAlgebra) -> Option<String> {
    (*m == catalog::lyndon()).then(|| {
        "reported elsewhere (not derived here): this is Lyndon's algebra L, known from the literature \
         to be non-dualizable; none of the implemented rules decides it"
            .to_string()
    })
}

pub fn analysis(m: &AutomaticAlgebra) -> Result<String, Error> {
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "== algebra").unwrap();
    writeln!(w, "{} states, {} letters, {} elements", m.num_states(), m.num_letters(), m.size()).unwrap();

    writeln!(w, "== components").unwrap();
    let comps = components(m);
    for (i, b) in comps.blocks.iter().enumerate() {
        writeln!(w, "  {i}: {}", states(m, b)).unwrap();
    }

    writeln!(w, "== letter sets").unwrap();
    for (a, ls) in letter_sets(m).iter().enumerate() {
        writeln!(
            w,
            "  {}: dom {} ran {} ks {}",
            m.letter_names()[a],
            states(m, &ls.dom),
            states(m, &ls.ran),
            states(m, &ls.ks)
        )
        .unwrap();
    }

    writeln!(w, "== whiskery").unwrap();
    let wc = whiskery_conditions(m);
    writeln!(w, "  direct: {}", if wc.direct { "pass" } else { "fail" }).unwrap();
    writeln!(w, "  quasi-identity: {}", if wc.quasi_identity { "holds" } else { "fails" }).unwrap();
    match wc.fm_embeds {
        Some(k) => writeln!(w, "  F_{k} embeds").unwrap(),
        None => writeln!(w, "  no F_m embeds").unwrap(),
    }
    if !wc.agree() {
        return Err(Error::Structure(autdual::error::StructureError::InternalInconsistency(
            "whiskery conditions disagree".into(),
        )));
    }

    writeln!(w, "== range/kill").unwrap();
    match rankill_check(m) {
        Some(rk) => writeln!(
            w,
            "  case {}: letter {}, state {}, word {}",
            rk.case,
            m.letter_names()[rk.letter],
            m.state_names()[rk.state],
            if rk.word.is_empty() { "(empty)".to_string() } else { m.format_word(&rk.word) }
        )
        .unwrap(),
        None => writeln!(w, "  none").unwrap(),
    }

    writeln!(w, "== order sensitivity").unwrap();
    match order_sensitivity(m) {
        OrderSensitivity::Witness { state, w1, w2 } => writeln!(
            w,
            "  sensitive: {}·{} = 0, {}·{} ≠ 0",
            m.state_names()[state],
            m.format_word(&w1),
            m.state_names()[state],
            m.format_word(&w2)
        )
        .unwrap(),
        _ => writeln!(w, "  insensitive").unwrap(),
    }

    writeln!(w, "== permutation profile").unwrap();
    let p = permutation_profile(m);
    writeln!(w, "  permutational: {}, commuting: {}", p.permutational, p.commuting).unwrap();
    for (i, row) in p.per_component.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .enumerate()
            .map(|(a, kind)| {
                let tag = match kind {
                    LetterOnComponent::Permutation => "perm",
                    LetterOnComponent::Undefined => "undef",
                    LetterOnComponent::Partial => "partial",
                };
                format!("{}={tag}", m.letter_names()[a])
            })
            .collect();
        writeln!(w, "  component {i}: {}", cells.join(" ")).unwrap();
    }

    writeln!(w, "== letter-affine").unwrap();
    match letter_affine_analysis(m) {
        LetterAffine::Yes(data) => {
            for (i, d) in data.iter().enumerate() {
                let factors: Vec<String> = d.decomposition.iter().map(|f| format!("Z{}", f.order)).collect();
                writeln!(
                    w,
                    "  component {i}: group of order {} ({}), |H| = {}, exponent {}",
                    d.group.order(),
                    if factors.is_empty() { "trivial".to_string() } else { factors.join("×") },
                    d.subgroup_h.len(),
                    d.exponent
                )
                .unwrap();
            }
        }
        LetterAffine::No { component, reason, .. } => writeln!(w, "  no (component {component}): {reason}").unwrap(),
    }
    Ok(out)
}
