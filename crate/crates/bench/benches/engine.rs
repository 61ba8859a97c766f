use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use leafcoh::cohomology::{bott_chern_dim, cohomology_dim, operator_matrix, OperatorTag};
use leafcoh::operators::dbar_twisted;
use leafcoh::sequences::{relative_reports, snake_les};
use leafcoh::{run_suite, Suite, SuiteInput};
use leafcoh_bench::{forms, laurent, scene, square_map, SEED};

fn operators(c: &mut Criterion) {
    let model = scene(4);
    let batch = forms(&model, 1, 1, 32);
    c.bench_function("dbar_f on 32 (1,1)-forms", |b| {
        b.iter(|| {
            for phi in &batch {
                black_box(dbar_twisted(phi, model.f()).unwrap());
            }
        })
    });
    let mut g = c.benchmark_group("operator_matrix");
    for budget in [2i64, 3, 4] {
        g.bench_with_input(BenchmarkId::from_parameter(budget), &budget, |b, &d| {
            b.iter(|| operator_matrix(OperatorTag::DbarF, &model, 0, 1, d, d + 1).unwrap())
        });
    }
    g.finish();
}

fn cohomology(c: &mut Criterion) {
    let mut g = c.benchmark_group("cohomology");
    g.sample_size(10);
    for budget in [1u32, 2] {
        let model = scene(budget + 1);
        g.bench_with_input(BenchmarkId::new("dolbeault (0,1)", budget), &budget, |b, &d| {
            b.iter(|| cohomology_dim(&model, 0, 1, d).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("bott-chern (1,1)", budget), &budget, |b, &d| {
            b.iter(|| bott_chern_dim(&model, 1, 1, d).unwrap())
        });
    }
    g.finish();
}

fn sequences(c: &mut Criterion) {
    let mut g = c.benchmark_group("sequences");
    g.sample_size(10);
    let ses = laurent(4);
    g.bench_function("snake on Laurent cover D=4", |b| b.iter(|| snake_les(&ses).unwrap()));
    let (mu, fp) = square_map();
    g.bench_function("relative reports z^2, f'=z", |b| b.iter(|| relative_reports(&mu, &fp, 0, 2).unwrap()));
    g.finish();
}

fn suites(c: &mut Criterion) {
    let mut g = c.benchmark_group("suites");
    g.sample_size(10);
    let input = SuiteInput::new(scene(3));
    g.bench_function("operators x 50", |b| b.iter(|| run_suite(Suite::Operators, &input, 50, SEED).unwrap()));
    g.finish();
}

criterion_group!(benches, operators, cohomology, sequences, suites);
criterion_main!(benches);
