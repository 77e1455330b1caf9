mod common;

use autdual::classifier::normalize::normalize_algebra;
use autdual::classifier::verify::certificate_valid;
use autdual::classifier::{classify, independent_rule_outcomes};
use autdual::format::{emit_algebra_file, parse_algebra_file};
use autdual::groups::{annihilator, Group};
use autdual::oracle::order_sensitive_brute;
use autdual::powers::{generate_subuniverse, PowerElement};
use autdual::structure::{whiskery_check, whiskery_conditions, Whiskery};
use autdual::suites::mutants;
use autdual::terms::{
    check_quasi_identity, eval_normal, normalize, order_sensitivity, GroupoidTerm, OrderSensitivity, QuasiIdentity,
};
use autdual::{Element, Outcome};
use common::{arb_algebra, arb_algebra_words};
use proptest::prelude::*;

fn arb_term(depth: u32) -> impl Strategy<Value = GroupoidTerm> {
    let leaf = prop::sample::select(vec!["x", "y", "z"]).prop_map(GroupoidTerm::var);
    leaf.prop_recursive(depth, 16, 2, |inner| (inner.clone(), inner).prop_map(|(l, r)| GroupoidTerm::prod(l, r)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn zero_absorbs_and_products_are_flat(m in arb_algebra(4, 3)) {
        for x in m.elements() {
            prop_assert_eq!(m.product(Element::Zero, x), Element::Zero);
            prop_assert_eq!(m.product(x, Element::Zero), Element::Zero);
            for y in m.elements() {
                if m.product(x, y) != Element::Zero {
                    prop_assert!(x.is_state() && y.is_letter());
                }
            }
        }
    }

    #[test]
    fn words_act_by_concatenation((m, x, u, v) in arb_algebra_words(4, 3, 4)) {
        prop_assert_eq!(m.apply_word(x, &u.concat(&v)), m.apply_word(m.apply_word(x, &u), &v));
    }

    #[test]
    fn normal_form_evaluates_like_the_term(m in arb_algebra(3, 2), t in arb_term(3), xs in prop::collection::vec(0usize..64, 3)) {
        let vals: Vec<Element> = xs.iter().map(|&i| m.element(i % m.size())).collect();
        let lookup = |v: &str| vals[match v { "x" => 0, "y" => 1, _ => 2 }];
        prop_assert_eq!(t.eval(&m, &lookup), eval_normal(&m, &normalize(&t), &lookup));
    }

    #[test]
    fn emitted_files_parse_back(m in arb_algebra(4, 3)) {
        prop_assert_eq!(parse_algebra_file(&emit_algebra_file(&m)).unwrap(), m);
    }

    #[test]
    fn certificates_check(m in arb_algebra(4, 3)) {
        let v = classify(&m).unwrap();
        prop_assert!(certificate_valid(&m, &v), "{} rejected", v.rule);
    }

    #[test]
    fn mutated_certificates_fail(m in arb_algebra(4, 3)) {
        let v = classify(&m).unwrap();
        for (kind, bad) in mutants(&m, &v) {
            prop_assert!(!certificate_valid(&m, &bad), "{} mutant of {} accepted", kind, v.rule);
        }
    }

    #[test]
    fn normalizing_first_changes_nothing(m in arb_algebra(4, 3)) {
        let (n, _) = normalize_algebra(&m).unwrap();
        let (n2, steps) = normalize_algebra(&n).unwrap();
        prop_assert!(steps.is_empty());
        prop_assert_eq!(&n2, &n);
        prop_assert_eq!(classify(&n).unwrap().verdict, classify(&m).unwrap().verdict);
    }

    #[test]
    fn rules_never_disagree(m in arb_algebra(4, 3)) {
        let outcomes = independent_rule_outcomes(&m).unwrap();
        let fired = |o: Outcome| outcomes.iter().filter(|(_, x)| *x == Some(o)).map(|(r, _)| *r).collect::<Vec<_>>();
        let (d, nd) = (fired(Outcome::Dualizable), fired(Outcome::NonDualizable));
        prop_assert!(d.is_empty() || nd.is_empty(), "D by {:?}, ND by {:?}", d, nd);
    }

    #[test]
    fn whiskery_conditions_agree(m in arb_algebra(4, 3)) {
        let w = whiskery_conditions(&m);
        prop_assert!(w.agree(), "{:?}", w);
        let by_rule = matches!(whiskery_check(&m).unwrap(), Whiskery::AllPass);
        prop_assert_eq!(check_quasi_identity(&m, &QuasiIdentity::whiskery()).holds(), by_rule);
    }

    #[test]
    fn order_sensitivity_matches_search(m in arb_algebra(3, 2)) {
        let exact = matches!(order_sensitivity(&m), OrderSensitivity::Witness { .. });
        prop_assert_eq!(exact, order_sensitive_brute(&m, 6));
    }

    #[test]
    fn subuniverses_are_closures(
        m in arb_algebra(2, 2),
        n in 1usize..=2,
        xs in prop::collection::vec(prop::collection::vec(0usize..16, 2), 1..4),
        extra in prop::collection::vec(prop::collection::vec(0usize..16, 2), 0..3),
    ) {
        let elt = |v: &Vec<usize>| PowerElement(v[..n].iter().map(|&i| m.element(i % m.size())).collect());
        let x: Vec<PowerElement> = xs.iter().map(elt).collect();
        let mut y = x.clone();
        y.extend(extra.iter().map(elt));
        let sx = generate_subuniverse(&m, n, &x);
        let sy = generate_subuniverse(&m, n, &y);
        let mut again = generate_subuniverse(&m, n, &sx);
        let mut sorted = sx.clone();
        again.sort();
        sorted.sort();
        prop_assert_eq!(again, sorted);
        prop_assert!(sx.iter().all(|e| sy.contains(e)));
    }

    #[test]
    fn double_annihilator_is_the_subgroup(
        m in prop::sample::select(vec![2usize, 3, 4, 6]),
        k in 1usize..=3,
        gens in prop::collection::vec(prop::collection::vec(0usize..6, 3), 0..3),
    ) {
        let g = (0..k).fold(Group::cyclic(1), |acc, _| acc.direct_product(&Group::cyclic(m)));
        let to_index = |v: &[usize]| v[..k].iter().fold(0, |acc, &x| acc * m + x % m);
        let gen_idx: Vec<usize> = gens.iter().map(|v| to_index(v)).collect();
        // the product's element order is lexicographic in the coordinates
        let sub = g.subgroup_generated(&gen_idx);
        let to_vec = |mut i: usize| {
            let mut v = vec![0; k];
            for slot in v.iter_mut().rev() {
                *slot = i % m;
                i /= m;
            }
            v
        };
        let mut h: Vec<Vec<usize>> = sub.into_iter().map(to_vec).collect();
        h.sort();
        let mut back = annihilator(m, k, &annihilator(m, k, &h));
        back.sort();
        prop_assert_eq!(back, h);
    }
}
