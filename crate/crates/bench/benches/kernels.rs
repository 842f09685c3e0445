use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use esmix_bench::{bundle, state};
use esmix_core::solver::{relax_step, Integrator, RelaxationModel};
use esmix_core::{match_moments, moments, TargetMoments, Variant, VelocityGrid};

fn grids() -> Vec<(usize, VelocityGrid)> {
    [16, 32].into_iter().map(|p| (p, VelocityGrid::uniform(3, p, -8.0, 8.0).unwrap())).collect()
}

fn bench_moments(c: &mut Criterion) {
    let mut group = c.benchmark_group("moments");
    for (p, g) in grids() {
        let f = state(&g);
        group.bench_with_input(BenchmarkId::from_parameter(p), &f[0], |b, f| {
            b.iter(|| moments(black_box(f), 1.0, &g).unwrap())
        });
    }
    group.finish();
}

fn bench_match(c: &mut Criterion) {
    let mut group = c.benchmark_group("match_moments");
    let target = TargetMoments { n: 1.0, u: [0.3, -0.1, 0.2], temperature: 1.1 };
    for (p, g) in grids() {
        group.bench_with_input(BenchmarkId::from_parameter(p), &target, |b, t| {
            b.iter(|| match_moments(black_box(t), 1.0, &g).unwrap())
        });
    }
    group.finish();
}

fn bench_relax_step(c: &mut Criterion) {
    let mut group = c.benchmark_group("relax_step");
    group.sample_size(20);
    let g = VelocityGrid::reference(3);
    for variant in Variant::ALL {
        for integrator in [Integrator::Exp, Integrator::Rk4] {
            let model = RelaxationModel::new(bundle(variant), true).unwrap();
            let id = BenchmarkId::new(variant.name(), integrator);
            group.bench_with_input(id, &model, |b, m| {
                b.iter_batched(
                    || state(&g),
                    |mut f| relax_step(m, &mut f, 0.05, integrator, &g).unwrap(),
                    criterion::BatchSize::LargeInput,
                )
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_moments, bench_match, bench_relax_step);
criterion_main!(benches);
