//! Sequential against rayon-parallel execution of the same kernels.
//!
//! `cargo bench -p nustar --bench parallel_vs_sequential`

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nustar::corpus::{load_corpus, run_corpus, BUNDLED_CORPUS};
use nustar::disc::{coeffs_of_poly, discriminant_poly, generalized_discriminants};
use nustar::equising::{coordinate_invariance_test, Options, SurfaceGerm};
use nustar::parse::parse_poly;
use nustar::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn chain(c: &mut Criterion) {
    // degree 6 in z over (x, y)
    let p = parse_poly("z^6 + x*y*z^4 - x^3*z^3 + y^4*z^2 + x^2*y^3*z + x^7 - y^7", &["x", "y", "z"], &[]).unwrap();
    let coeffs = coeffs_of_poly(&p, 2);
    let mut g = c.benchmark_group("generalized_discriminants");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| generalized_discriminants(black_box(&coeffs), e).unwrap())
        });
    }
    g.finish();
}

fn sylvester(c: &mut Criterion) {
    let p = parse_poly("z^5 + x*y^3*z + x^2*z^2 - y^5 + x^3*y*z^3", &["x", "y", "z"], &[]).unwrap();
    let mut g = c.benchmark_group("discriminant_bareiss");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::from_parameter(name), &exec, |b, &e| {
            b.iter(|| discriminant_poly(black_box(&p), "z", e).unwrap())
        });
    }
    g.finish();
}

fn invariance(c: &mut Criterion) {
    let f = parse_poly("x^2 + y^3 + z^4", &["x", "y", "z"], &[]).unwrap();
    let germ = SurfaceGerm::new(f, &[]).unwrap();
    let mut g = c.benchmark_group("coordinate_invariance");
    g.sample_size(10);
    for (name, exec) in MODES {
        let opts = Options { exec, ..Options::default() };
        g.bench_function(name, |b| b.iter(|| coordinate_invariance_test(&germ, &[1, 2, 3], &opts).unwrap()));
    }
    g.finish();
}

fn corpus(c: &mut Criterion) {
    let entries: Vec<_> = load_corpus(BUNDLED_CORPUS).unwrap().into_iter().filter(|e| !e.has_tag("slow")).collect();
    let mut g = c.benchmark_group("corpus_without_slow_entries");
    g.sample_size(10);
    for (name, exec, threads) in [("sequential", Exec::Sequential, 1), ("parallel", Exec::Parallel, 4)] {
        let opts = Options { exec, ..Options::default() };
        g.bench_function(name, |b| b.iter(|| run_corpus(&entries, &opts, threads)));
    }
    g.finish();
}

criterion_group!(benches, chain, sylvester, invariance, corpus);
criterion_main!(benches);
