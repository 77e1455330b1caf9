//! Seeded generators for test corpora.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::algebra::AutomaticAlgebra;
use crate::groups::Group;

fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Random algebra with `1..=max_states` states and `1..=max_letters` letters.
///
/// Each transition is defined with probability `density`.
pub fn random_algebra<R: Rng>(rng: &mut R, max_states: usize, max_letters: usize, density: f64) -> AutomaticAlgebra {
    let nq = rng.gen_range(1..=max_states);
    let nl = rng.gen_range(1..=max_letters);
    let delta =
        (0..nq).map(|_| (0..nl).map(|_| rng.gen_bool(density).then(|| rng.gen_range(0..nq))).collect()).collect();
    AutomaticAlgebra::from_table(names("q", nq), names("a", nl), delta).expect("generated names are valid")
}

/// Every algebra on states `q, r` with `letters` letters, in table order.
pub fn all_two_state(letters: usize) -> Vec<AutomaticAlgebra> {
    let cells = 2 * letters;
    let letter_names: Vec<String> = ["a", "b", "c", "d"][..letters].iter().map(|s| s.to_string()).collect();
    (0..3usize.pow(cells as u32))
        .map(|mut code| {
            let mut delta = vec![vec![None; letters]; 2];
            for q in 0..2 {
                for a in 0..letters {
                    delta[q][a] = match code % 3 {
                        0 => None,
                        t => Some(t - 1),
                    };
                    code /= 3;
                }
            }
            AutomaticAlgebra::from_table(vec!["q".into(), "r".into()], letter_names.clone(), delta).unwrap()
        })
        .collect()
}

/// A connected permutational algebra with commuting letters.
///
/// States are `Z_m × Z_n` with `mn ≤ max_states`, shuffled; each letter
/// translates by a group element, and the letters generate the group.
pub fn random_commuting_permutational<R: Rng>(rng: &mut R, max_states: usize) -> AutomaticAlgebra {
    let m = rng.gen_range(1..=max_states.max(1));
    let n = rng.gen_range(1..=max_states.max(1) / m);
    let g = Group::cyclic(m).direct_product(&Group::cyclic(n));
    let order = g.order();
    let mut images: Vec<usize> = Vec::new();
    while g.subgroup_generated(&images).len() < order || images.is_empty() {
        images.push(rng.gen_range(0..order));
    }
    // a few redundant letters now and then
    for _ in 0..rng.gen_range(0..=1) {
        images.push(rng.gen_range(0..order));
    }
    let mut label: Vec<usize> = (0..order).collect();
    label.shuffle(rng);
    let mut delta = vec![vec![None; images.len()]; order];
    for x in 0..order {
        for (a, &t) in images.iter().enumerate() {
            delta[label[x]][a] = Some(label[g.op(x, t)]);
        }
    }
    AutomaticAlgebra::from_table(names("q", order), names("a", images.len()), delta).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::{component_group, components};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn two_state_counts() {
        assert_eq!(all_two_state(1).len(), 9);
        assert_eq!(all_two_state(2).len(), 81);
    }

    #[test]
    fn commuting_permutational_is_connected() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..50 {
            let m = random_commuting_permutational(&mut rng, 5);
            assert!(m.is_total());
            assert_eq!(components(&m).blocks.len(), 1);
            component_group(&m, &components(&m).blocks[0]).unwrap();
        }
    }

    #[test]
    fn random_is_seeded() {
        let a = random_algebra(&mut ChaCha8Rng::seed_from_u64(9), 4, 3, 0.6);
        let b = random_algebra(&mut ChaCha8Rng::seed_from_u64(9), 4, 3, 0.6);
        assert_eq!(a, b);
    }
}
