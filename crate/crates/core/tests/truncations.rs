use autdual::powers::PowerElement;
use autdual::witness::{
    build_truncation, construction_report, Construction, Truncation, CONSTRUCTION_NAMES, DEFAULT_ELEMENT_CAP,
};
use autdual::Element;

fn pad(x: &PowerElement, v: Element, extra: usize) -> PowerElement {
    let mut out = x.0.clone();
    out.extend(std::iter::repeat_n(v, extra));
    PowerElement(out)
}

fn truncation(c: &Construction, n: usize) -> Truncation {
    build_truncation(c, n, DEFAULT_ELEMENT_CAP).unwrap()
}

#[test]
fn wc_truncations_grow_by_padding() {
    let c = Construction::ThmWc(1);
    for n in 3..=5 {
        let small = truncation(&c, n);
        for big_n in n + 1..=5 {
            let big = truncation(&c, big_n);
            let extra = big_n - n;
            let m = &small.spec.algebra;
            for x in &small.elements {
                let ok = m.elements().into_iter().any(|v| big.contains(&pad(x, v, extra)));
                assert!(ok, "{} has no padding inside the {big_n}-truncation", x.render(m));
            }
            assert!(big.size() >= small.size());
        }
    }
}

#[test]
fn two_state_truncations_grow_by_padding() {
    let c = Construction::Lem2State2N4;
    for n in 3..=5 {
        let small = truncation(&c, n);
        let m = &small.spec.algebra;
        let q = Element::State(m.state_index("q").unwrap());
        let b = Element::Letter(m.letter_index("b").unwrap());
        for big_n in n + 1..=5 {
            let big = truncation(&c, big_n);
            for x in &small.elements {
                let v = match x.get(0) {
                    Element::State(_) => q,
                    Element::Letter(_) => b,
                    Element::Zero => Element::Zero,
                };
                assert!(big.contains(&pad(x, v, big_n - n)), "{} lost at {big_n}", x.render(m));
            }
        }
    }
}

#[test]
fn identities_hold_at_four_and_six() {
    for name in CONSTRUCTION_NAMES {
        let params: &[i64] = if name == "thm_wc" { &[1] } else { &[] };
        let c = Construction::from_name(name, params).unwrap();
        for n in [4, 6] {
            let t = truncation(&c, n);
            let r = construction_report(&t);
            assert!(r.passed(), "{name} at {n}:\n{r}");
            assert!(!t.contains(&t.spec.g), "{name} at {n}: g inside A");
        }
    }
}
