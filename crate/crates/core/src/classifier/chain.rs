//! The alternating chain `M_1 ≤ M_2 ≤ …`.

use std::collections::{HashSet, VecDeque};

use crate::algebra::AutomaticAlgebra;
use crate::catalog;

fn least_prime_above(n: usize) -> usize {
    (n + 1..).find(|&p| catalog::is_prime(p)).expect("primes are unbounded")
}

fn letter_perm(m: &AutomaticAlgebra, a: usize) -> Vec<usize> {
    (0..m.num_states()).map(|q| m.delta(q, a).expect("chain letters are total")).collect()
}

/// Adds letters until the actions form a group; new letters `g1, g2, …` in BFS order.
fn close_under_composition(m: &AutomaticAlgebra, next_g: &mut usize) -> AutomaticAlgebra {
    let gens: Vec<Vec<usize>> = (0..m.num_letters()).map(|a| letter_perm(m, a)).collect();
    let mut seen: HashSet<Vec<usize>> = gens.iter().cloned().collect();
    let mut queue: VecDeque<Vec<usize>> = gens.iter().cloned().collect();
    let mut added: Vec<Vec<usize>> = Vec::new();
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y: Vec<usize> = x.iter().map(|&s| g[s]).collect();
            if seen.insert(y.clone()) {
                added.push(y.clone());
                queue.push_back(y);
            }
        }
    }
    let mut letters = m.letter_names().to_vec();
    let mut columns = gens;
    for p in added {
        letters.push(format!("g{next_g}"));
        *next_g += 1;
        columns.push(p);
    }
    let delta = (0..m.num_states()).map(|q| columns.iter().map(|c| Some(c[q])).collect()).collect();
    AutomaticAlgebra::from_table(m.state_names().to_vec(), letters, delta).expect("fresh names")
}

/// Adjoins a `C_p` block with letters `b_k, c_k`, `p` the least prime above `|Σ| + 3`.
fn adjoin_cycle(m: &AutomaticAlgebra, stage: usize) -> AutomaticAlgebra {
    let p = least_prime_above(m.num_letters() + 3);
    let old_q = m.num_states();
    let old_l = m.num_letters();
    let mut states = m.state_names().to_vec();
    states.extend((1..=p).map(|i| format!("s{stage}_{i}")));
    let mut letters = m.letter_names().to_vec();
    letters.push(format!("b_{stage}"));
    letters.push(format!("c_{stage}"));
    let mut delta: Vec<Vec<Option<usize>>> = Vec::new();
    for q in 0..old_q {
        let mut row: Vec<Option<usize>> = (0..old_l).map(|a| m.delta(q, a)).collect();
        row.push(Some(q));
        row.push(Some(q));
        delta.push(row);
    }
    for i in 0..p {
        let q = old_q + i;
        let mut row: Vec<Option<usize>> = vec![Some(q); old_l];
        row.push(Some(old_q + (i + 1) % p));
        row.push(Some(old_q + (i + p - 1) % p));
        delta.push(row);
    }
    AutomaticAlgebra::from_table(states, letters, delta).expect("fresh names")
}

/// `M_n`: `M_1 = C_3`; odd steps close the letters to a group, even steps adjoin a fresh cycle pair.
pub fn gen_chain(n: usize) -> AutomaticAlgebra {
    assert!(n >= 1, "chain index starts at 1");
    let mut m = catalog::c(3).expect("3 is an odd prime");
    let mut next_g = 1;
    for k in 2..=n {
        m = if k % 2 == 0 { close_under_composition(&m, &mut next_g) } else { adjoin_cycle(&m, k) };
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_members() {
        assert_eq!(gen_chain(1), catalog::c(3).unwrap());
        let m2 = gen_chain(2);
        assert_eq!((m2.num_states(), m2.num_letters()), (3, 3));
        assert_eq!(m2.letter_names()[2], "g1");
        let m3 = gen_chain(3);
        assert_eq!((m3.num_states(), m3.num_letters()), (10, 5));
        assert_eq!(m3.state_names()[3], "s3_1");
        let m4 = gen_chain(4);
        assert_eq!((m4.num_states(), m4.num_letters()), (10, 21));
    }
}
