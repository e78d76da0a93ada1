use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use nhf::corank_engine::run_corank_one;
use nhf::equal_rank::{classify_equal_rank_with, DEFAULT_CAP};
use nhf::finsler_lab::curvature::flag_curvature_batch;
use nhf::finsler_lab::metrics::catalog_metric;
use nhf::finsler_lab::FdConfig;
use nhf::par::Exec;
use nhf::root_systems::{RootSystem, TypeLabel};

fn modes() -> [(&'static str, Exec); 2] {
    [("parallel", Exec::Parallel), ("sequential", Exec::Sequential)]
}

fn corank(c: &mut Criterion) {
    let mut g = c.benchmark_group("corank_one");
    g.sample_size(10);
    for (l, n) in [(TypeLabel::B, 4), (TypeLabel::F4, 4)] {
        let rs = RootSystem::build(l, n).unwrap();
        for (name, exec) in modes() {
            g.bench_with_input(BenchmarkId::new(name, format!("{l}{n}")), &rs, |b, rs| {
                b.iter(|| run_corank_one(rs, exec).unwrap())
            });
        }
    }
    g.finish();
}

fn equal_rank(c: &mut Criterion) {
    let mut g = c.benchmark_group("equal_rank");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_function(BenchmarkId::new(name, "C4"), |b| {
            b.iter(|| classify_equal_rank_with(TypeLabel::C, 4, DEFAULT_CAP, exec).unwrap())
        });
    }
    g.finish();
}

fn flag_batch(c: &mut Criterion) {
    let m = catalog_metric("round-sphere").unwrap();
    let flags: Vec<_> = (0..32)
        .map(|i| {
            let t = 0.4 + 0.07 * i as f64;
            (vec![t, 0.1 * i as f64], vec![t.cos(), 1.0], vec![1.0, -t.sin()])
        })
        .collect();
    let mut g = c.benchmark_group("flag_curvature");
    g.sample_size(10);
    for (name, exec) in modes() {
        g.bench_function(BenchmarkId::new(name, "sphere x32"), |b| {
            b.iter(|| flag_curvature_batch(m.as_ref(), &flags, FdConfig::default(), exec))
        });
    }
    g.finish();
}

criterion_group!(benches, corank, equal_rank, flag_batch);
criterion_main!(benches);
