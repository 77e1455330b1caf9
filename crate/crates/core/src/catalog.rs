//! Named algebras.
//!
//! | name     | params | algebra |
//! |----------|--------|---------|
//! | `B`      |        | q -a-> r, r -b-> r, r -c-> s |
//! | `L`      |        | total 3-state Lyndon automaton |
//! | `L3star` |        | 3-state automaton with inherently non-finitely based theory |
//! | `R`      |        | r -a-> q, r -b-> r, q -c-> q |
//! | `F`      | m ≥ 0  | tail q -a-> r -a-> s1 into an a-cycle of length m |
//! | `N`      | 0..=5  | minimal non-dualizable 2-state algebras |
//! | `C`      | odd prime p | p-cycle b and its inverse c |
//! | `Cid`    | odd prime p | `C p` plus an identity letter `e` |
//! | `T`      | 1, 2   | transposition algebras (2 adds an identity letter) |
//! | `K`      | 1..=3  | 2-state constant-letter algebras |
//! | `chain`  | n ≥ 1  | n-th member of the alternating chain |

use crate::algebra::AutomaticAlgebra;
use crate::classifier::gen_chain;
use crate::error::AlgebraError;

fn build(states: &[&str], letters: &[&str], edges: &[(&str, &str, &str)]) -> AutomaticAlgebra {
    AutomaticAlgebra::from_edges(states, letters, edges).expect("catalog tables are well formed")
}

pub fn boozer() -> AutomaticAlgebra {
    build(&["q", "r", "s"], &["a", "b", "c"], &[("q", "a", "r"), ("r", "b", "r"), ("r", "c", "s")])
}

pub fn lyndon() -> AutomaticAlgebra {
    build(
        &["q", "r", "s"],
        &["a", "b", "c"],
        &[
            ("q", "a", "q"),
            ("q", "b", "q"),
            ("q", "c", "q"),
            ("r", "a", "q"),
            ("r", "b", "r"),
            ("r", "c", "s"),
            ("s", "a", "s"),
            ("s", "b", "s"),
            ("s", "c", "s"),
        ],
    )
}

pub fn l3star() -> AutomaticAlgebra {
    build(
        &["q", "r", "s"],
        &["a", "b", "c"],
        &[
            ("q", "a", "r"),
            ("q", "c", "q"),
            ("r", "a", "r"),
            ("r", "b", "s"),
            ("r", "c", "q"),
            ("s", "a", "r"),
            ("s", "b", "s"),
        ],
    )
}

pub fn r_algebra() -> AutomaticAlgebra {
    build(&["q", "r"], &["a", "b", "c"], &[("r", "a", "q"), ("r", "b", "r"), ("q", "c", "q")])
}

pub fn f(m: usize) -> AutomaticAlgebra {
    let mut states: Vec<String> = vec!["q".into(), "r".into()];
    states.extend((1..=m).map(|i| format!("s{i}")));
    let mut edges: Vec<(String, String, String)> = vec![("q".into(), "a".into(), "r".into())];
    if m > 0 {
        edges.push(("r".into(), "a".into(), "s1".into()));
        for i in 1..=m {
            let next = if i == m { 1 } else { i + 1 };
            edges.push((format!("s{i}"), "a".into(), format!("s{next}")));
        }
    }
    let states_ref: Vec<&str> = states.iter().map(String::as_str).collect();
    let edges_ref: Vec<(&str, &str, &str)> =
        edges.iter().map(|(a, b, c)| (a.as_str(), b.as_str(), c.as_str())).collect();
    build(&states_ref, &["a"], &edges_ref)
}

pub fn n(i: usize) -> Result<AutomaticAlgebra, AlgebraError> {
    let qr = ["q", "r"];
    Ok(match i {
        0 => build(&qr, &["a"], &[("q", "a", "r")]),
        1 => build(&qr, &["a", "b"], &[("q", "a", "r"), ("r", "a", "r"), ("r", "b", "r")]),
        2 => build(&qr, &["a", "b"], &[("q", "a", "r"), ("r", "a", "q"), ("r", "b", "r")]),
        3 => build(&qr, &["a", "b"], &[("q", "a", "r"), ("r", "a", "r"), ("q", "b", "q")]),
        4 => build(&qr, &["a", "b"], &[("q", "a", "r"), ("r", "a", "r"), ("q", "b", "r"), ("r", "b", "q")]),
        5 => build(
            &qr,
            &["a", "b", "c"],
            &[("q", "a", "r"), ("r", "a", "r"), ("r", "b", "q"), ("q", "b", "q"), ("q", "c", "q"), ("r", "c", "r")],
        ),
        _ => return Err(AlgebraError::BadParams(format!("N takes 0..=5, got {i}"))),
    })
}

pub fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn cycle_pair(p: usize, extra_identity: bool) -> Result<AutomaticAlgebra, AlgebraError> {
    if !is_prime(p) || p == 2 {
        return Err(AlgebraError::BadParams(format!("C takes an odd prime, got {p}")));
    }
    let states: Vec<String> = (1..=p).map(|i| i.to_string()).collect();
    let mut letters = vec!["b".to_string(), "c".to_string()];
    if extra_identity {
        letters.push("e".into());
    }
    let delta = (0..p)
        .map(|i| {
            let mut row = vec![Some((i + 1) % p), Some((i + p - 1) % p)];
            if extra_identity {
                row.push(Some(i));
            }
            row
        })
        .collect();
    AutomaticAlgebra::from_table(states, letters, delta)
}

pub fn c(p: usize) -> Result<AutomaticAlgebra, AlgebraError> {
    cycle_pair(p, false)
}

pub fn c_with_identity(p: usize) -> Result<AutomaticAlgebra, AlgebraError> {
    cycle_pair(p, true)
}

pub fn transposition(i: usize) -> Result<AutomaticAlgebra, AlgebraError> {
    let qr = ["q", "r"];
    Ok(match i {
        1 => build(&qr, &["a"], &[("q", "a", "r"), ("r", "a", "q")]),
        2 => build(&qr, &["a", "b"], &[("q", "a", "r"), ("r", "a", "q"), ("q", "b", "q"), ("r", "b", "r")]),
        _ => return Err(AlgebraError::BadParams(format!("T takes 1 or 2, got {i}"))),
    })
}

pub fn constant_letters(i: usize) -> Result<AutomaticAlgebra, AlgebraError> {
    let qr = ["q", "r"];
    Ok(match i {
        1 => build(&qr, &["a"], &[("r", "a", "q"), ("q", "a", "q")]),
        2 => build(&qr, &["a", "b"], &[("r", "a", "q"), ("q", "a", "q"), ("q", "b", "r"), ("r", "b", "r")]),
        3 => build(&qr, &["a", "b"], &[("r", "a", "q"), ("q", "a", "q"), ("q", "b", "q"), ("r", "b", "r")]),
        _ => return Err(AlgebraError::BadParams(format!("K takes 1..=3, got {i}"))),
    })
}

fn one_param(name: &str, params: &[i64]) -> Result<usize, AlgebraError> {
    match params {
        [x] if *x >= 0 => Ok(*x as usize),
        _ => Err(AlgebraError::BadParams(format!("{name} takes one non-negative integer"))),
    }
}

/// Looks up a named algebra.
pub fn catalog(name: &str, params: &[i64]) -> Result<AutomaticAlgebra, AlgebraError> {
    let none = |m: AutomaticAlgebra| {
        if params.is_empty() {
            Ok(m)
        } else {
            Err(AlgebraError::BadParams(format!("{name} takes no parameters")))
        }
    };
    match name {
        "B" => none(boozer()),
        "L" => none(lyndon()),
        "L3star" => none(l3star()),
        "R" => none(r_algebra()),
        "F" => Ok(f(one_param(name, params)?)),
        "N" => n(one_param(name, params)?),
        "C" => c(one_param(name, params)?),
        "Cid" => c_with_identity(one_param(name, params)?),
        "T" => transposition(one_param(name, params)?),
        "K" => constant_letters(one_param(name, params)?),
        "chain" => {
            let k = one_param(name, params)?;
            if k == 0 {
                return Err(AlgebraError::BadParams("chain takes n ≥ 1".into()));
            }
            Ok(gen_chain(k))
        }
        _ => Err(AlgebraError::UnknownName(name.to_string())),
    }
}

/// Catalog entries with their display names, in a fixed order.
pub fn named_set() -> Vec<(String, AutomaticAlgebra)> {
    let mut out = vec![
        ("B".to_string(), boozer()),
        ("L".to_string(), lyndon()),
        ("L3star".to_string(), l3star()),
        ("R".to_string(), r_algebra()),
    ];
    for m in 0..=3 {
        out.push((format!("F {m}"), f(m)));
    }
    for i in 0..=5 {
        out.push((format!("N {i}"), n(i).unwrap()));
    }
    out.push(("C 3".into(), c(3).unwrap()));
    out.push(("C 5".into(), c(5).unwrap()));
    out.push(("Cid 3".into(), c_with_identity(3).unwrap()));
    for i in 1..=2 {
        out.push((format!("T {i}"), transposition(i).unwrap()));
    }
    for i in 1..=3 {
        out.push((format!("K {i}"), constant_letters(i).unwrap()));
    }
    for k in 1..=3 {
        out.push((format!("chain {k}"), gen_chain(k)));
    }
    out
}

/// The named set without its names.
pub fn all_small() -> Vec<AutomaticAlgebra> {
    named_set().into_iter().map(|(_, m)| m).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::format::emit_algebra_file;

    const GOLDEN: &[(&str, &str)] = &[
        ("B", "states q r s\nletters a b c\ntrans q a r\ntrans r b r\ntrans r c s\n"),
        (
            "L",
            "states q r s\nletters a b c\ntrans q a q\ntrans q b q\ntrans q c q\ntrans r a q\ntrans r b r\n\
             trans r c s\ntrans s a s\ntrans s b s\ntrans s c s\n",
        ),
        (
            "L3star",
            "states q r s\nletters a b c\ntrans q a r\ntrans q c q\ntrans r a r\ntrans r b s\ntrans r c q\n\
             trans s a r\ntrans s b s\n",
        ),
        ("R", "states q r\nletters a b c\ntrans q c q\ntrans r a q\ntrans r b r\n"),
        ("F 0", "states q r\nletters a\ntrans q a r\n"),
        ("F 1", "states q r s1\nletters a\ntrans q a r\ntrans r a s1\ntrans s1 a s1\n"),
        ("F 2", "states q r s1 s2\nletters a\ntrans q a r\ntrans r a s1\ntrans s1 a s2\ntrans s2 a s1\n"),
        ("N 0", "states q r\nletters a\ntrans q a r\n"),
        ("N 1", "states q r\nletters a b\ntrans q a r\ntrans r a r\ntrans r b r\n"),
        ("N 2", "states q r\nletters a b\ntrans q a r\ntrans r a q\ntrans r b r\n"),
        ("N 3", "states q r\nletters a b\ntrans q a r\ntrans q b q\ntrans r a r\n"),
        ("N 4", "states q r\nletters a b\ntrans q a r\ntrans q b r\ntrans r a r\ntrans r b q\n"),
        (
            "N 5",
            "states q r\nletters a b c\ntrans q a r\ntrans q b q\ntrans q c q\ntrans r a r\ntrans r b q\ntrans r c r\n",
        ),
        (
            "C 3",
            "states 1 2 3\nletters b c\ntrans 1 b 2\ntrans 1 c 3\ntrans 2 b 3\ntrans 2 c 1\ntrans 3 b 1\ntrans 3 c 2\n",
        ),
        ("T 1", "states q r\nletters a\ntrans q a r\ntrans r a q\n"),
        ("K 1", "states q r\nletters a\ntrans q a q\ntrans r a q\n"),
    ];

    #[test]
    fn golden_tables() {
        for (name, text) in GOLDEN {
            let mut it = name.split(' ');
            let n = it.next().unwrap();
            let params: Vec<i64> = it.map(|p| p.parse().unwrap()).collect();
            let m = catalog(n, &params).unwrap();
            assert_eq!(emit_algebra_file(&m), *text, "{name}");
        }
    }

    #[test]
    fn bad_params() {
        assert!(matches!(catalog("C", &[4]), Err(AlgebraError::BadParams(_))));
        assert!(matches!(catalog("C", &[2]), Err(AlgebraError::BadParams(_))));
        assert!(matches!(catalog("N", &[6]), Err(AlgebraError::BadParams(_))));
        assert!(matches!(catalog("Q", &[]), Err(AlgebraError::UnknownName(_))));
        assert!(matches!(catalog("B", &[1]), Err(AlgebraError::BadParams(_))));
    }

    #[test]
    fn spec_examples() {
        let f0 = catalog("F", &[0]).unwrap();
        assert_eq!((f0.num_states(), f0.num_letters(), f0.edges().count()), (2, 1, 1));
        let c3 = catalog("C", &[3]).unwrap();
        assert_eq!(c3.delta(0, 0), Some(1));
        assert_eq!(c3.delta(2, 0), Some(0));
        assert_eq!(c3.delta(0, 1), Some(2));
        let n4 = catalog("N", &[4]).unwrap();
        assert_eq!(n4.delta(0, 1), Some(1));
        assert_eq!(n4.delta(1, 1), Some(0));
    }
}
