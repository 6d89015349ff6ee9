use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use quartic_hecke::charfn::{CharFnParams, EulerProduct};
use quartic_hecke::density::{find_y_max, inverse_transform, GridSpec, DECAY_TARGET};
use quartic_hecke::lfunc::Ensemble;
use quartic_hecke::Exec;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn ensemble(c: &mut Criterion) {
    let mut g = c.benchmark_group("ensemble_build");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, 20_000), &exec, |b, &exec| {
            b.iter(|| Ensemble::build(1.0, 20_000, exec).unwrap())
        });
    }
    g.finish();
}

fn euler_product(c: &mut Criterion) {
    let prod = EulerProduct::new(CharFnParams::new(1.0, 1_000_000).unwrap()).unwrap();
    let mut g = c.benchmark_group("euler_product");
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "P=1e6"), &exec, |b, &exec| {
            b.iter(|| prod.eval_with(1.0, exec))
        });
    }
    g.finish();
}

fn density(c: &mut Criterion) {
    let prod = EulerProduct::new(CharFnParams::new(0.75, 10_000).unwrap()).unwrap();
    let phi = |y: f64| prod.eval(y).value;
    let y_max = find_y_max(phi, DECAY_TARGET, 1.0, 1e4).unwrap();
    let grid = GridSpec {
        h_t: 0.05,
        ..GridSpec::default()
    };
    let mut g = c.benchmark_group("inverse_transform");
    g.sample_size(10);
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new(name, "sigma=0.75"), &exec, |b, &exec| {
            b.iter(|| inverse_transform(phi, &grid, y_max, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, ensemble, euler_product, density);
criterion_main!(benches);
