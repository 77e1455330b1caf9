use autdual::classifier::gen_chain;
use autdual::groups::zero_column_sweep;
use autdual::par::Strategy;
use autdual::powers::{enumerate_homs, generate_subuniverse, FiniteGroupoid, HomOptions, PowerElement};
use autdual::terms::{check_identity_with, parse_and_normalize};
use autdual::{catalog, Element};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const STRATEGIES: [Strategy; 2] = [Strategy::Sequential, Strategy::Parallel];

fn identity_sweep(c: &mut Criterion) {
    let m = gen_chain(3);
    let lhs = parse_and_normalize("w*x*y*z").unwrap();
    let rhs = parse_and_normalize("w*y*x*z").unwrap();
    let mut g = c.benchmark_group("identity_sweep");
    for s in STRATEGIES {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{s:?}")), &s, |b, &s| {
            b.iter(|| check_identity_with(&m, &lhs, &rhs, s))
        });
    }
    g.finish();
}

fn hom_enumeration(c: &mut Criterion) {
    let m = catalog::c(3).unwrap();
    let st = |i| Element::State(i);
    let lt = |i| Element::Letter(i);
    let gens = vec![
        PowerElement(vec![st(0), st(1), st(2)]),
        PowerElement(vec![lt(0), lt(1), lt(0)]),
        PowerElement(vec![lt(1), lt(1), lt(0)]),
    ];
    let elems = generate_subuniverse(&m, 3, &gens);
    let a = FiniteGroupoid::from_power_elements(&m, &elems).unwrap();
    let mut g = c.benchmark_group("hom_enumeration");
    for s in STRATEGIES {
        let opts = HomOptions { cap: elems.len(), strategy: s, ..HomOptions::default() };
        g.bench_with_input(BenchmarkId::from_parameter(format!("{s:?}")), &opts, |b, &opts| {
            b.iter(|| enumerate_homs(&a, &m, opts).unwrap())
        });
    }
    g.finish();
}

fn zero_columns(c: &mut Criterion) {
    let mut g = c.benchmark_group("zero_column_sweep_z3");
    g.sample_size(10);
    for s in STRATEGIES {
        g.bench_with_input(BenchmarkId::from_parameter(format!("{s:?}")), &s, |b, &s| {
            b.iter(|| zero_column_sweep(3, 3, s))
        });
    }
    g.finish();
}

criterion_group!(benches, identity_sweep, hom_enumeration, zero_columns);
criterion_main!(benches);
