use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use fresco_lab::suite::{run_suite_with, ExecMode, SuiteConfig};

fn config(cases: usize) -> SuiteConfig {
    SuiteConfig {
        seed: 7,
        cases,
        cert_degree: 24,
        guard: 6,
        properties: vec!["product_formula".into(), "higher_divides_bernstein".into(), "division_round_trip".into()],
        ..SuiteConfig::default()
    }
}

fn bench_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("suite");
    group.sample_size(10);
    for cases in [4, 16] {
        let cfg = config(cases);
        for (label, mode) in [("sequential", ExecMode::Sequential), ("parallel", ExecMode::Parallel)] {
            group.bench_with_input(BenchmarkId::new(label, cases), &cfg, |b, cfg| {
                b.iter(|| run_suite_with(cfg, mode).expect("suite runs"))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_modes);
criterion_main!(benches);
