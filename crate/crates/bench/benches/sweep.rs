use criterion::{criterion_group, criterion_main, Criterion};

use tgame_bench::sweep_corpus;
use tgame_core::verify::experiment_sweep;
use tgame_core::SolveLimits;

fn sweep(c: &mut Criterion) {
    let corpus = sweep_corpus();
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("mixed3_40", |b| {
        b.iter(|| {
            let out = experiment_sweep(&corpus, None, &SolveLimits::default(), "bench").unwrap();
            assert!(out.report.is_success());
            out.rows.len()
        })
    });
    group.finish();
}

criterion_group!(benches, sweep);
criterion_main!(benches);
