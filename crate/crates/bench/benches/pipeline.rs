use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lineadm_bench::sample_system;
use lineadm_core::format::fixtures;
use lineadm_core::{
    build_incidence, choose_h0, correct_dichotomy, correct_no_cycle, cycles, decide_admissible, generate_condition_c,
    normalize, obstruction_check, oracle_search, search_multinets, verify_certificate, ShiftSearchConfig,
};
use std::hint::black_box;

fn incidence(c: &mut Criterion) {
    let mut g = c.benchmark_group("incidence");
    for n in [8, 12, 16] {
        let arr = generate_condition_c(7, n).unwrap();
        g.bench_with_input(BenchmarkId::new("build", n), &arr, |b, arr| b.iter(|| build_incidence(black_box(arr))));
        let inc = build_incidence(&arr).unwrap();
        g.bench_with_input(BenchmarkId::new("cycles", n), &inc, |b, inc| b.iter(|| cycles(black_box(inc))));
    }
    g.finish();
}

fn correction(c: &mut Criterion) {
    let mut g = c.benchmark_group("correction");
    let inc = build_incidence(&fixtures::example_one().0).unwrap();
    let ls = sample_system(inc.n_lines(), 1);
    let rv = normalize(&ls, 0);
    g.bench_function("no-cycle/ex1", |b| b.iter(|| correct_no_cycle(&inc, black_box(&rv), 0)));
    let cert = correct_no_cycle(&inc, &rv, 0).unwrap();
    g.bench_function("verify/ex1", |b| b.iter(|| verify_certificate(&inc, &ls, black_box(&cert))));

    let inc2 = build_incidence(&fixtures::example_two().0).unwrap();
    let ls2 = sample_system(inc2.n_lines(), 2);
    let rv2 = normalize(&ls2, 0);
    g.bench_function("dichotomy/ex2", |b| b.iter(|| correct_dichotomy(&inc2, black_box(&rv2), 0)));

    let gen = build_incidence(&generate_condition_c(3, 12).unwrap()).unwrap();
    let ls3 = sample_system(12, 3);
    let cfg = ShiftSearchConfig::default();
    g.bench_function("dispatch/gen-12", |b| b.iter(|| decide_admissible(&gen, black_box(&ls3), &cfg)));
    let h0 = choose_h0(&gen);
    g.bench_function("normalize/gen-12", |b| b.iter(|| normalize(black_box(&ls3), h0)));
    g.finish();
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("search");
    g.sample_size(10);
    let (arr, systems) = fixtures::example_two();
    let inc = build_incidence(&arr).unwrap();
    let halves = &systems[0].1;
    for bound in [1, 2, 3] {
        let cfg = ShiftSearchConfig { bound, node_budget: 100_000_000 };
        g.bench_with_input(BenchmarkId::new("oracle/ex2-halves", bound), &cfg, |b, cfg| {
            b.iter(|| oracle_search(&inc, halves, cfg))
        });
    }
    g.bench_function("obstruction/ex2-halves", |b| b.iter(|| obstruction_check(&inc, black_box(halves))));
    let fermat = fixtures::fermat_incidence();
    g.bench_function("multinet/fermat", |b| b.iter(|| search_multinets(black_box(&fermat), 3, 2, 16)));
    g.finish();
}

criterion_group!(benches, incidence, correction, search);
criterion_main!(benches);
