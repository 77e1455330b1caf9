//! Groupoid terms, left-chain normal forms, and exhaustive model checking.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{AutomaticAlgebra, Element, Word};
use crate::error::TermError;
use crate::par::{self, Strategy};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupoidTerm {
    Var(String),
    Prod(Box<GroupoidTerm>, Box<GroupoidTerm>),
}

impl GroupoidTerm {
    pub fn var(name: &str) -> Self {
        GroupoidTerm::Var(name.to_string())
    }

    pub fn prod(l: GroupoidTerm, r: GroupoidTerm) -> Self {
        GroupoidTerm::Prod(Box::new(l), Box::new(r))
    }

    /// Evaluates without normalizing.
    pub fn eval(&self, m: &AutomaticAlgebra, lookup: &dyn Fn(&str) -> Element) -> Element {
        match self {
            GroupoidTerm::Var(v) => lookup(v),
            GroupoidTerm::Prod(l, r) => m.product(l.eval(m, lookup), r.eval(m, lookup)),
        }
    }

    pub fn variables(&self, out: &mut Vec<String>) {
        match self {
            GroupoidTerm::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            GroupoidTerm::Prod(l, r) => {
                l.variables(out);
                r.variables(out);
            }
        }
    }
}

/// Canonical form of a term: constantly zero, or `u v₁ v₂ … vₙ` bracketed from the left.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormalTerm {
    ZeroEquivalent,
    LeftChain { head: String, tail: Vec<String> },
}

impl NormalTerm {
    pub fn chain(head: &str, tail: &[&str]) -> Self {
        NormalTerm::LeftChain { head: head.to_string(), tail: tail.iter().map(|s| s.to_string()).collect() }
    }

    pub fn variables(&self, out: &mut Vec<String>) {
        if let NormalTerm::LeftChain { head, tail } = self {
            for v in std::iter::once(head).chain(tail) {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
        }
    }

    /// Re-reads the normal form as a term; normalizing that term gives `self` back.
    pub fn to_term(&self) -> Option<GroupoidTerm> {
        match self {
            NormalTerm::ZeroEquivalent => None,
            NormalTerm::LeftChain { head, tail } => {
                Some(tail.iter().fold(GroupoidTerm::var(head), |acc, v| GroupoidTerm::prod(acc, GroupoidTerm::var(v))))
            }
        }
    }
}

impl fmt::Display for NormalTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormalTerm::ZeroEquivalent => write!(f, "0"),
            NormalTerm::LeftChain { head, tail } => {
                let single = std::iter::once(head).chain(tail).all(|v| v.chars().count() == 1);
                if single {
                    write!(f, "{head}")?;
                    for v in tail {
                        write!(f, "{v}")?;
                    }
                    Ok(())
                } else {
                    write!(f, "{head}")?;
                    for v in tail {
                        write!(f, "*{v}")?;
                    }
                    Ok(())
                }
            }
        }
    }
}

pub fn normalize(t: &GroupoidTerm) -> NormalTerm {
    match t {
        GroupoidTerm::Var(v) => NormalTerm::LeftChain { head: v.clone(), tail: Vec::new() },
        GroupoidTerm::Prod(l, r) => match (normalize(l), r.as_ref()) {
            (NormalTerm::LeftChain { head, mut tail }, GroupoidTerm::Var(y)) => {
                tail.push(y.clone());
                NormalTerm::LeftChain { head, tail }
            }
            _ => NormalTerm::ZeroEquivalent,
        },
    }
}

pub type Equation = (NormalTerm, NormalTerm);

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiIdentity {
    pub premises: Vec<Equation>,
    pub conclusion: Equation,
}

impl QuasiIdentity {
    pub fn variables(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (l, r) in self.premises.iter().chain(std::iter::once(&self.conclusion)) {
            l.variables(&mut out);
            r.variables(&mut out);
        }
        out
    }

    /// `vxx ≈ wxx ⟹ vx ≈ wx`.
    pub fn whiskery() -> Self {
        QuasiIdentity {
            premises: vec![(NormalTerm::chain("v", &["x", "x"]), NormalTerm::chain("w", &["x", "x"]))],
            conclusion: (NormalTerm::chain("v", &["x"]), NormalTerm::chain("w", &["x"])),
        }
    }
}

impl fmt::Display for QuasiIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let eqs: Vec<String> = self.premises.iter().map(|(l, r)| format!("{l} = {r}")).collect();
        write!(f, "{} => {} = {}", eqs.join(" & "), self.conclusion.0, self.conclusion.1)
    }
}

/// A parsed `check-eq` expression.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Identity(Equation),
    Quasi(QuasiIdentity),
}

/// A variable assignment in declaration order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment(pub Vec<(String, Element)>);

impl Assignment {
    pub fn get(&self, v: &str) -> Option<Element> {
        self.0.iter().find(|(n, _)| n == v).map(|(_, e)| *e)
    }

    pub fn render(&self, m: &AutomaticAlgebra) -> String {
        self.0.iter().map(|(v, e)| format!("{v}={}", m.name(*e))).collect::<Vec<_>>().join(", ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CheckResult {
    Holds,
    Counterexample(Assignment),
}

impl CheckResult {
    pub fn holds(&self) -> bool {
        matches!(self, CheckResult::Holds)
    }
}

// ---------------------------------------------------------------- parsing

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Star,
    LParen,
    RParen,
    Eq,
    Amp,
    Implies,
}

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, TermError> {
    let single = !src.contains('*');
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '*' => {
                out.push((Tok::Star, pos));
                i += 1;
            }
            '(' => {
                out.push((Tok::LParen, pos));
                i += 1;
            }
            ')' => {
                out.push((Tok::RParen, pos));
                i += 1;
            }
            '&' => {
                out.push((Tok::Amp, pos));
                i += 1;
            }
            '≈' => {
                out.push((Tok::Eq, pos));
                i += 1;
            }
            '⟹' => {
                out.push((Tok::Implies, pos));
                i += 1;
            }
            '=' => {
                if chars.get(i + 1).map(|x| x.1) == Some('>') {
                    out.push((Tok::Implies, pos));
                    i += 2;
                } else {
                    out.push((Tok::Eq, pos));
                    i += 1;
                }
            }
            c if c.is_alphanumeric() || c == '_' => {
                if single {
                    out.push((Tok::Ident(c.to_string()), pos));
                    i += 1;
                } else {
                    let mut j = i;
                    while j < chars.len() && (chars[j].1.is_alphanumeric() || chars[j].1 == '_') {
                        j += 1;
                    }
                    out.push((Tok::Ident(chars[i..j].iter().map(|x| x.1).collect()), pos));
                    i = j;
                }
            }
            other => return Err(TermError::Syntax { pos, msg: format!("unexpected character `{other}`") }),
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
    end: usize,
    juxtaposition: bool,
}

impl Parser {
    fn new(src: &str) -> Result<Self, TermError> {
        Ok(Parser { toks: tokenize(src)?, at: 0, end: src.len(), juxtaposition: !src.contains('*') })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.0)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map(|t| t.1).unwrap_or(self.end)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, TermError> {
        Err(TermError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn atom(&mut self) -> Result<GroupoidTerm, TermError> {
        match self.peek().cloned() {
            Some(Tok::Ident(name)) => {
                self.at += 1;
                Ok(GroupoidTerm::Var(name))
            }
            Some(Tok::LParen) => {
                self.at += 1;
                let t = self.term()?;
                if self.peek() != Some(&Tok::RParen) {
                    return self.err("expected `)`");
                }
                self.at += 1;
                Ok(t)
            }
            Some(t) => self.err(format!("unexpected token {t:?}")),
            None => self.err("unexpected end of input"),
        }
    }

    fn term(&mut self) -> Result<GroupoidTerm, TermError> {
        let mut acc = self.atom()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.at += 1;
                    let r = self.atom()?;
                    acc = GroupoidTerm::prod(acc, r);
                }
                Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    if !self.juxtaposition {
                        return self.err("juxtaposition needs single-character variables; use `*`");
                    }
                    let r = self.atom()?;
                    acc = GroupoidTerm::prod(acc, r);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn equation(&mut self) -> Result<Equation, TermError> {
        let l = normalize(&self.term()?);
        if self.peek() != Some(&Tok::Eq) {
            return self.err("expected `=`");
        }
        self.at += 1;
        let r = normalize(&self.term()?);
        Ok((l, r))
    }

    fn finish(&self) -> Result<(), TermError> {
        if self.at == self.toks.len() {
            Ok(())
        } else {
            self.err("trailing input")
        }
    }
}

pub fn parse_term(src: &str) -> Result<GroupoidTerm, TermError> {
    let mut p = Parser::new(src)?;
    let t = p.term()?;
    p.finish()?;
    Ok(t)
}

pub fn parse_and_normalize(src: &str) -> Result<NormalTerm, TermError> {
    parse_term(src).map(|t| normalize(&t))
}

/// Parses `lhs = rhs` or `eq & … & eq => eq`.
pub fn parse_expr(src: &str) -> Result<Expr, TermError> {
    let mut p = Parser::new(src)?;
    let mut eqs = vec![p.equation()?];
    loop {
        match p.peek() {
            Some(Tok::Amp) => {
                p.at += 1;
                eqs.push(p.equation()?);
            }
            Some(Tok::Implies) => {
                p.at += 1;
                let conclusion = p.equation()?;
                p.finish()?;
                return Ok(Expr::Quasi(QuasiIdentity { premises: eqs, conclusion }));
            }
            None if eqs.len() == 1 => return Ok(Expr::Identity(eqs.pop().unwrap())),
            None => return p.err("premises need `=>` and a conclusion"),
            Some(_) => return p.err("expected `&`, `=>` or end of input"),
        }
    }
}

// ---------------------------------------------------------------- checking

/// A normal term compiled to variable positions.
#[derive(Clone, Debug)]
enum Compiled {
    Zero,
    Chain(usize, Vec<usize>),
}

fn compile(t: &NormalTerm, vars: &[String]) -> Compiled {
    let idx = |v: &String| vars.iter().position(|x| x == v).expect("variable declared");
    match t {
        NormalTerm::ZeroEquivalent => Compiled::Zero,
        NormalTerm::LeftChain { head, tail } => Compiled::Chain(idx(head), tail.iter().map(idx).collect()),
    }
}

fn eval_compiled(m: &AutomaticAlgebra, c: &Compiled, vals: &[Element]) -> Element {
    match c {
        Compiled::Zero => Element::Zero,
        Compiled::Chain(h, tail) => tail.iter().fold(vals[*h], |acc, &v| m.product(acc, vals[v])),
    }
}

/// Evaluates a normal term under `lookup`.
pub fn eval_normal(m: &AutomaticAlgebra, t: &NormalTerm, lookup: &dyn Fn(&str) -> Element) -> Element {
    match t {
        NormalTerm::ZeroEquivalent => Element::Zero,
        NormalTerm::LeftChain { head, tail } => tail.iter().fold(lookup(head), |acc, v| m.product(acc, lookup(v))),
    }
}

fn decode(m: &AutomaticAlgebra, mut idx: usize, k: usize) -> Vec<Element> {
    let n = m.size();
    let mut vals = vec![Element::Zero; k];
    for slot in vals.iter_mut().rev() {
        *slot = m.element(idx % n);
        idx /= n;
    }
    vals
}

fn assignment_count(m: &AutomaticAlgebra, k: usize) -> usize {
    m.size().checked_pow(k as u32).expect("assignment space fits in usize")
}

/// First assignment (first variable most significant) satisfying `bad`.
fn first_bad<F>(m: &AutomaticAlgebra, vars: &[String], strategy: Strategy, bad: F) -> CheckResult
where
    F: Fn(&[Element]) -> bool + Sync + Send,
{
    let k = vars.len();
    let total = assignment_count(m, k);
    match par::find_first(strategy, total, |i| {
        let vals = decode(m, i, k);
        bad(&vals).then_some(vals)
    }) {
        None => CheckResult::Holds,
        Some((_, vals)) => CheckResult::Counterexample(Assignment(vars.iter().cloned().zip(vals).collect())),
    }
}

pub fn check_identity(m: &AutomaticAlgebra, lhs: &NormalTerm, rhs: &NormalTerm) -> CheckResult {
    check_identity_with(m, lhs, rhs, Strategy::default())
}

pub fn check_identity_with(
    m: &AutomaticAlgebra,
    lhs: &NormalTerm,
    rhs: &NormalTerm,
    strategy: Strategy,
) -> CheckResult {
    let mut vars = Vec::new();
    lhs.variables(&mut vars);
    rhs.variables(&mut vars);
    let (l, r) = (compile(lhs, &vars), compile(rhs, &vars));
    first_bad(m, &vars, strategy, |vals| eval_compiled(m, &l, vals) != eval_compiled(m, &r, vals))
}

pub fn check_quasi_identity(m: &AutomaticAlgebra, q: &QuasiIdentity) -> CheckResult {
    check_quasi_identity_with(m, q, Strategy::default())
}

pub fn check_quasi_identity_with(m: &AutomaticAlgebra, q: &QuasiIdentity, strategy: Strategy) -> CheckResult {
    let vars = q.variables();
    let premises: Vec<(Compiled, Compiled)> =
        q.premises.iter().map(|(l, r)| (compile(l, &vars), compile(r, &vars))).collect();
    let (cl, cr) = (compile(&q.conclusion.0, &vars), compile(&q.conclusion.1, &vars));
    first_bad(m, &vars, strategy, |vals| {
        premises.iter().all(|(l, r)| eval_compiled(m, l, vals) == eval_compiled(m, r, vals))
            && eval_compiled(m, &cl, vals) != eval_compiled(m, &cr, vals)
    })
}

pub fn check_expr(m: &AutomaticAlgebra, e: &Expr) -> CheckResult {
    match e {
        Expr::Identity((l, r)) => check_identity(m, l, r),
        Expr::Quasi(q) => check_quasi_identity(m, q),
    }
}

// ---------------------------------------------------------------- order sensitivity

/// Outcome of the permutation quasi-equation test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum OrderSensitivity {
    Insensitive,
    /// `q·w1 = 0 ≠ q·w2`, where `w2` rearranges `w1`.
    Witness {
        state: usize,
        w1: Word,
        w2: Word,
    },
}

/// Shortest common suffix separating a nonzero pair into exactly one zero side.
fn separating_suffix(m: &AutomaticAlgebra, x: usize, y: usize) -> Option<Vec<usize>> {
    // Pair space over Q; the zero side terminates the search.
    let mut prev: HashMap<(usize, usize), ((usize, usize), usize)> = HashMap::new();
    let mut queue = VecDeque::from([(x, y)]);
    let mut seen = std::collections::HashSet::from([(x, y)]);
    let rebuild = |prev: &HashMap<(usize, usize), ((usize, usize), usize)>, mut at: (usize, usize), last: usize| {
        let mut w = vec![last];
        while let Some(&(p, a)) = prev.get(&at) {
            w.push(a);
            at = p;
        }
        w.reverse();
        w
    };
    while let Some((u, v)) = queue.pop_front() {
        for a in 0..m.num_letters() {
            match (m.delta(u, a), m.delta(v, a)) {
                (Some(u2), Some(v2)) => {
                    if seen.insert((u2, v2)) {
                        prev.insert((u2, v2), ((u, v), a));
                        queue.push_back((u2, v2));
                    }
                }
                (None, None) => {}
                _ => return Some(rebuild(&prev, (u, v), a)),
            }
        }
    }
    None
}

/// Decides whether some rearrangement of a word flips a run between killed and alive.
///
/// A flip under an arbitrary permutation implies one under a single adjacent swap,
/// so it suffices to look at pairs `(s·ab, s·ba)` and search for a separating suffix.
pub fn order_sensitivity(m: &AutomaticAlgebra) -> OrderSensitivity {
    let mut best: Option<(usize, usize, usize, Vec<usize>, bool)> = None;
    for s in 0..m.num_states() {
        for a in 0..m.num_letters() {
            for b in (a + 1)..m.num_letters() {
                let ab = m.run(s, &[a, b]);
                let ba = m.run(s, &[b, a]);
                let found = match (ab, ba) {
                    (None, None) => None,
                    (Some(_), None) => Some((Vec::new(), true)),
                    (None, Some(_)) => Some((Vec::new(), false)),
                    (Some(x), Some(y)) if x == y => None,
                    (Some(x), Some(y)) => separating_suffix(m, x, y).map(|suf| {
                        let ab_dies = m.run(x, &suf).is_none();
                        (suf, !ab_dies)
                    }),
                };
                if let Some((suf, ab_alive)) = found {
                    let better = match &best {
                        None => true,
                        Some(bst) => suf.len() < bst.3.len(),
                    };
                    if better {
                        best = Some((s, a, b, suf, ab_alive));
                    }
                }
            }
        }
    }
    match best {
        None => OrderSensitivity::Insensitive,
        Some((s, a, b, suf, ab_alive)) => {
            let (first, second) = if ab_alive { ([b, a], [a, b]) } else { ([a, b], [b, a]) };
            let mut w1 = first.to_vec();
            w1.extend_from_slice(&suf);
            let mut w2 = second.to_vec();
            w2.extend_from_slice(&suf);
            OrderSensitivity::Witness { state: s, w1: Word(w1), w2: Word(w2) }
        }
    }
}

/// Checks an order-sensitivity witness against the algebra.
pub fn is_order_witness(m: &AutomaticAlgebra, state: usize, w1: &Word, w2: &Word) -> bool {
    if state >= m.num_states() || w1.letters().iter().chain(w2.letters()).any(|&a| a >= m.num_letters()) {
        return false;
    }
    let mut s1 = w1.0.clone();
    let mut s2 = w2.0.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    s1 == s2 && m.run(state, &w1.0).is_none() && m.run(state, &w2.0).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    fn nt(s: &str) -> NormalTerm {
        parse_and_normalize(s).unwrap()
    }

    #[test]
    fn normalization_examples() {
        assert_eq!(nt("x*(y*z)"), NormalTerm::ZeroEquivalent);
        assert_eq!(nt("((w*x)*y)*z"), NormalTerm::chain("w", &["x", "y", "z"]));
        assert_eq!(nt("qabab"), NormalTerm::chain("q", &["a", "b", "a", "b"]));
        assert_eq!(nt("x(yz)"), NormalTerm::ZeroEquivalent);
        assert_eq!(nt("foo * bar"), NormalTerm::chain("foo", &["bar"]));
    }

    #[test]
    fn normalization_is_idempotent() {
        for s in ["qabab", "x(yz)", "(xy)(z)", "((ab)c)d"] {
            let n = nt(s);
            if let Some(t) = n.to_term() {
                assert_eq!(normalize(&t), n);
            }
        }
    }

    #[test]
    fn syntax_errors_carry_positions() {
        assert!(matches!(parse_term("x*(y"), Err(TermError::Syntax { pos: 4, .. })));
        assert!(matches!(parse_term("xx * yy zz"), Err(TermError::Syntax { pos: 8, .. })));
        assert!(matches!(parse_term("x+y"), Err(TermError::Syntax { pos: 1, .. })));
        assert!(parse_expr("xy = x & y").is_err());
    }

    #[test]
    fn identity_examples() {
        let n0 = catalog::n(0).unwrap();
        let q = Element::State(0);
        let a = Element::Letter(0);
        match check_identity(&n0, &nt("xy"), &nt("xyyy")) {
            CheckResult::Counterexample(asg) => {
                assert_eq!(asg.get("x"), Some(q));
                assert_eq!(asg.get("y"), Some(a));
            }
            CheckResult::Holds => panic!("N_0 fails xy = xyyy"),
        }
        let n4 = catalog::n(4).unwrap();
        match check_identity(&n4, &nt("wxyz"), &nt("wyxz")) {
            CheckResult::Counterexample(asg) => {
                assert_eq!(asg.render(&n4), "w=q, x=a, y=b, z=b");
            }
            CheckResult::Holds => panic!("N_4 fails wxyz = wyxz"),
        }
        let b = catalog::boozer();
        assert!(check_identity(&b, &nt("x*(y*z)"), &nt("u*(v*w)")).holds());
    }

    #[test]
    fn quasi_identity_examples() {
        let f0 = catalog::f(0);
        match check_quasi_identity(&f0, &QuasiIdentity::whiskery()) {
            CheckResult::Counterexample(asg) => assert_eq!(asg.render(&f0), "v=q, x=a, w=r"),
            CheckResult::Holds => panic!(),
        }
        assert!(check_quasi_identity(&catalog::c(3).unwrap(), &QuasiIdentity::whiskery()).holds());
        let Expr::Quasi(trivial) = parse_expr("x = y => x = y").unwrap() else { panic!() };
        assert!(check_quasi_identity(&catalog::boozer(), &trivial).holds());
    }

    #[test]
    fn strategies_agree_on_counterexamples() {
        for m in catalog::all_small().into_iter().filter(|m| m.size() <= 10) {
            let l = nt("wxyz");
            let r = nt("wyxz");
            assert_eq!(
                check_identity_with(&m, &l, &r, Strategy::Sequential),
                check_identity_with(&m, &l, &r, Strategy::Parallel)
            );
        }
    }

    #[test]
    fn order_sensitivity_examples() {
        let n1 = catalog::n(1).unwrap();
        match order_sensitivity(&n1) {
            OrderSensitivity::Witness { state, w1, w2 } => {
                assert_eq!(state, 0);
                assert_eq!(n1.format_word(&w1), "ba");
                assert_eq!(n1.format_word(&w2), "ab");
            }
            OrderSensitivity::Insensitive => panic!(),
        }
        assert_eq!(order_sensitivity(&catalog::lyndon()), OrderSensitivity::Insensitive);
        assert_eq!(order_sensitivity(&catalog::f(2)), OrderSensitivity::Insensitive);
    }

    #[test]
    fn witnesses_recheck() {
        for m in catalog::all_small() {
            if let OrderSensitivity::Witness { state, w1, w2 } = order_sensitivity(&m) {
                assert!(is_order_witness(&m, state, &w1, &w2));
            }
        }
    }
}
