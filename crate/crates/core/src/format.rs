//! Plain-text algebra files.
//!
//! ```text
//! # comment
//! states q r s
//! letters a b c
//! trans q a r
//! ```

use crate::algebra::{AutomaticAlgebra, ZERO_NAME};
use crate::error::{AlgebraError, Error};

fn parse_err(line: usize, reason: impl Into<String>) -> Error {
    Error::Parse { line, reason: reason.into() }
}

/// Parses an algebra file. Name order fixes the indices.
pub fn parse_algebra_file(text: &str) -> Result<AutomaticAlgebra, Error> {
    let mut states: Option<Vec<String>> = None;
    let mut letters: Option<Vec<String>> = None;
    let mut edges: Vec<(usize, String, String, String)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = line.split_whitespace().collect();
        let Some((&kw, rest)) = toks.split_first() else { continue };
        for t in rest {
            if *t == ZERO_NAME {
                return Err(AlgebraError::ReservedName(t.to_string()).into());
            }
            if !t.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(parse_err(line_no, format!("invalid name `{t}`")));
            }
        }
        match kw {
            "states" | "letters" => {
                if !edges.is_empty() {
                    return Err(parse_err(line_no, format!("`{kw}` after `trans`")));
                }
                let slot = if kw == "states" { &mut states } else { &mut letters };
                if slot.is_some() {
                    return Err(parse_err(line_no, format!("second `{kw}` line")));
                }
                *slot = Some(rest.iter().map(|s| s.to_string()).collect());
            }
            "trans" => {
                if states.is_none() || letters.is_none() {
                    return Err(parse_err(line_no, "`trans` before `states` and `letters`"));
                }
                let [q, a, r] = rest else {
                    return Err(parse_err(line_no, "`trans` takes exactly three names"));
                };
                edges.push((line_no, q.to_string(), a.to_string(), r.to_string()));
            }
            other => return Err(parse_err(line_no, format!("unknown keyword `{other}`"))),
        }
    }
    let states = states.ok_or_else(|| parse_err(0, "missing `states` line"))?;
    let letters = letters.ok_or_else(|| parse_err(0, "missing `letters` line"))?;
    let base = AutomaticAlgebra::from_edges::<String>(&states, &letters, &[])?;
    let mut delta: Vec<Vec<Option<usize>>> = vec![vec![None; letters.len()]; states.len()];
    for (line_no, q, a, r) in edges {
        let qi = base.state_index(&q).ok_or_else(|| parse_err(line_no, format!("unknown state `{q}`")))?;
        let ai = base.letter_index(&a).ok_or_else(|| parse_err(line_no, format!("unknown letter `{a}`")))?;
        let ri = base.state_index(&r).ok_or_else(|| parse_err(line_no, format!("unknown state `{r}`")))?;
        match delta[qi][ai] {
            Some(old) if old != ri => {
                return Err(AlgebraError::ConflictingTransition {
                    state: q,
                    letter: a,
                    first: states[old].clone(),
                    second: r,
                }
                .into())
            }
            _ => delta[qi][ai] = Some(ri),
        }
    }
    Ok(AutomaticAlgebra::from_table(states, letters, delta)?)
}

/// Emits the canonical file for `m`: edges in state-major, letter-minor order.
pub fn emit_algebra_file(m: &AutomaticAlgebra) -> String {
    let mut out = String::new();
    out.push_str("states");
    for s in m.state_names() {
        out.push(' ');
        out.push_str(s);
    }
    out.push_str("\nletters");
    for l in m.letter_names() {
        out.push(' ');
        out.push_str(l);
    }
    out.push('\n');
    for (q, a, r) in m.edges() {
        out.push_str(&format!("trans {} {} {}\n", m.state_names()[q], m.letter_names()[a], m.state_names()[r]));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn boozer_file() {
        let text =
            "# Figure-style presentation\nstates q r s\nletters a b c\ntrans q a r\ntrans r b r # loop\ntrans r c s\n";
        assert_eq!(parse_algebra_file(text).unwrap(), catalog::boozer());
    }

    #[test]
    fn conflicting_and_reserved() {
        let e = parse_algebra_file("states q r s\nletters a\ntrans q a r\ntrans q a s\n").unwrap_err();
        assert!(matches!(e, Error::Algebra(AlgebraError::ConflictingTransition { .. })));
        let e = parse_algebra_file("states q 0\nletters a\n").unwrap_err();
        assert!(matches!(e, Error::Algebra(AlgebraError::ReservedName(_))));
        let e = parse_algebra_file("letters a\ntrans q a q\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_algebra_file("states q\nletters a\ntrans q a\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn round_trip_catalog() {
        for (name, m) in catalog::named_set() {
            assert_eq!(parse_algebra_file(&emit_algebra_file(&m)).unwrap(), m, "{name}");
        }
    }
}
