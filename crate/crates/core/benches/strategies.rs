use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use pdeforge_core::boolean::{interpolate_sumproduct, verify_pde, TruthTable};
use pdeforge_core::circuit::{pdp_search, SearchConfig};
use pdeforge_core::exec::Strategy;
use pdeforge_core::mlpoly::{MLPoly, Monomial};
use pdeforge_core::orbits::iso_classes;
use pdeforge_core::ring::RingKind;

const STRATEGIES: [(&str, Strategy); 2] = [("sequential", Strategy::Sequential), ("parallel", Strategy::Parallel)];

fn bench_verify(c: &mut Criterion) {
    let mut group = c.benchmark_group("verify_pde");
    for n in [10usize, 14] {
        let table = TruthTable::from_fn(n, |b| b.count_ones() % 3 == 1).unwrap();
        let p = interpolate_sumproduct(&table, RingKind::Rational).unwrap();
        for (name, s) in STRATEGIES {
            group.bench_with_input(BenchmarkId::new(name, n), &n, |b, _| {
                b.iter(|| verify_pde(&p, &table, 1, s).unwrap())
            });
        }
    }
    group.finish();
}

fn bench_classes(c: &mut Criterion) {
    let mut group = c.benchmark_group("iso_classes");
    group.sample_size(10);
    for (name, s) in STRATEGIES {
        group.bench_function(BenchmarkId::new(name, 4), |b| b.iter(|| iso_classes(4, None, s).unwrap()));
    }
    group.finish();
}

fn bench_search(c: &mut Criterion) {
    let ring = RingKind::Rational;
    let target = MLPoly::from_terms(
        3,
        ring,
        [
            (Monomial::ONE, ring.one()),
            (Monomial::var(0), ring.one()),
            (Monomial::from_vars([0, 1]), ring.one()),
            (Monomial::from_vars([1, 2]), ring.one()),
        ],
    )
    .unwrap();
    let mut group = c.benchmark_group("pdp_search");
    group.sample_size(10);
    for (name, s) in STRATEGIES {
        let mut cfg = SearchConfig::new(2, 2);
        cfg.starts = 16;
        cfg.strategy = s;
        group.bench_function(name, |b| b.iter(|| pdp_search(&target, &cfg).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, bench_verify, bench_classes, bench_search);
criterion_main!(benches);
