use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use tgame_bench::{dense3, sparse3, SOLVER_SIZES};
use tgame_core::solver::{transversal_number, worst_case_vs_strategy};
use tgame_core::strategies::EdgeHitter3;
use tgame_core::{PlayerRole, SolveLimits, Solver};

fn game_value(c: &mut Criterion) {
    let mut group = c.benchmark_group("tau_g");
    group.sample_size(10);
    for m in SOLVER_SIZES {
        let h = sparse3(m, 1);
        group.bench_with_input(BenchmarkId::new("sparse", m), &h, |b, h| {
            b.iter(|| Solver::new(h, SolveLimits::default()).unwrap().tau_g().unwrap())
        });
        let h = dense3(m, 1);
        group.bench_with_input(BenchmarkId::new("dense", m), &h, |b, h| {
            b.iter(|| Solver::new(h, SolveLimits::default()).unwrap().tau_g().unwrap())
        });
        group.bench_with_input(BenchmarkId::new("dense_pruned", m), &h, |b, h| {
            b.iter(|| {
                Solver::new(h, SolveLimits::default())
                    .unwrap()
                    .with_pruning(true)
                    .tau_g()
                    .unwrap()
            })
        });
        group.bench_with_input(BenchmarkId::new("dense_parallel", m), &h, |b, h| {
            b.iter(|| {
                Solver::new(h, SolveLimits::default())
                    .unwrap()
                    .with_parallel(true)
                    .tau_g()
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn transversal(c: &mut Criterion) {
    let mut group = c.benchmark_group("tau");
    for m in [20, 40] {
        let h = dense3(m, 2);
        group.bench_with_input(BenchmarkId::from_parameter(m), &h, |b, h| {
            b.iter(|| transversal_number(black_box(h), &SolveLimits::default()).unwrap())
        });
    }
    group.finish();
}

fn strategy_audit(c: &mut Criterion) {
    let h = dense3(12, 3);
    c.bench_function("eh3_worst_case_m12", |b| {
        b.iter(|| {
            worst_case_vs_strategy(&h, &EdgeHitter3::new(), PlayerRole::EdgeHitter, &SolveLimits::default())
                .unwrap()
                .length
        })
    });
}

criterion_group!(benches, game_value, transversal, strategy_audit);
criterion_main!(benches);
