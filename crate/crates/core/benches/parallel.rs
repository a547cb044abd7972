//! Tree transfer and the formality solve on a one-thread pool against the
//! default pool. Build with `--no-default-features` for the plain sequential
//! fallback.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use pdgca::catalog;
use pdgca::extension::extend;
use pdgca::hodge::find_hodge;
use pdgca::obstruction::formality_decision;
use pdgca::transfer::{transfer_trees, HarmonicBasis};

fn pools() -> Vec<(&'static str, rayon::ThreadPool)> {
    vec![
        ("one-thread", rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap()),
        ("default", rayon::ThreadPoolBuilder::new().build().unwrap()),
    ]
}

fn bench(c: &mut Criterion) {
    let a = extend(&catalog::nonformal_7(), 1);
    let dec = find_hodge(&a).unwrap();
    let ring = HarmonicBasis::new(&dec).ring(&a);
    let mu3 = transfer_trees(&dec, 3).mu3();

    let mut g = c.benchmark_group("transfer_trees");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_with_input(BenchmarkId::new(name, "nonformal-7[t1], k=5"), &dec, |b, d| b.iter(|| pool.install(|| transfer_trees(d, 5))));
    }
    g.finish();

    let mut g = c.benchmark_group("formality");
    g.sample_size(10);
    for (name, pool) in pools() {
        g.bench_with_input(BenchmarkId::new(name, "nonformal-7[t1]"), &mu3, |b, m| b.iter(|| pool.install(|| formality_decision(m, &ring))));
    }
    g.finish();
}

criterion_group!(benches, bench);
criterion_main!(benches);
