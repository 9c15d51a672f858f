use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use frustration::blockdiag::{random_hamiltonian, verify_block_diagonalization};
use frustration::collapse::{collapse, CollapseMode};
use frustration::models::{run_point, substream_rng, ModelSpec};
use frustration::modular::decompose;
use frustration::scf::{scf_verdict, DEFAULT_BUDGET};
use frustration_bench::{brick_graph, gnp_graph};

fn modular(c: &mut Criterion) {
    let mut group = c.benchmark_group("decompose");
    for p in [0.05, 0.2] {
        let g = brick_graph(p, 0);
        group.bench_with_input(BenchmarkId::new("brick", p), &g, |b, g| b.iter(|| decompose(black_box(g))));
    }
    let g = gnp_graph(60, 0.3, 0);
    group.bench_function("gnp60", |b| b.iter(|| decompose(black_box(&g))));
    group.finish();
}

fn collapsing(c: &mut Criterion) {
    let mut group = c.benchmark_group("collapse");
    let g = brick_graph(0.1, 3);
    for mode in [CollapseMode::Twins, CollapseMode::Full] {
        group.bench_with_input(BenchmarkId::new("brick", format!("{mode:?}")), &g, |b, g| {
            b.iter(|| collapse(black_box(g), mode))
        });
    }
    group.finish();
}

fn scf(c: &mut Criterion) {
    let g = gnp_graph(20, 0.05, 4);
    c.bench_function("scf_verdict/gnp20", |b| b.iter(|| scf_verdict(black_box(&g), DEFAULT_BUDGET)));
}

fn experiment(c: &mut Criterion) {
    let mut group = c.benchmark_group("run_point");
    group.sample_size(10);
    let spec = ModelSpec::Gnp { n: 20, p: 0.1 };
    group.bench_function("gnp20x200", |b| {
        b.iter(|| run_point(&spec, 200, 5, CollapseMode::Full, DEFAULT_BUDGET))
    });
    group.finish();
}

fn blockdiag(c: &mut Criterion) {
    let h = random_hamiltonian(&mut substream_rng(6, 0), 5, 10);
    c.bench_function("verify_block_diagonalization/5q", |b| b.iter(|| verify_block_diagonalization(black_box(&h))));
}

criterion_group!(benches, modular, collapsing, scf, experiment, blockdiag);
criterion_main!(benches);
