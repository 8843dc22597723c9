use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use weakbea::expansion::SdeModel;
use weakbea::kernel::TransitionKernel;
use weakbea::mc::{weak_estimate, McConfig};
use weakbea::{Execution, TrigPoly};

const POLICIES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn monte_carlo(c: &mut Criterion) {
    let cfg = McConfig::new(SdeModel::langevin(), 0.1, 50, 20_000, 1);
    let phi = TrigPoly::cos(1, 1.0);
    let mut group = c.benchmark_group("weak_estimate");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| weak_estimate(&cfg, &phi, exec).unwrap())
        });
    }
    group.finish();
}

fn kernel_rows(c: &mut Criterion) {
    let model = SdeModel::langevin();
    let mut group = c.benchmark_group("transition_matrix");
    group.sample_size(10);
    for (name, exec) in POLICIES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| TransitionKernel::build(&model, 0.05, 129, 40, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, monte_carlo, kernel_rows);
criterion_main!(benches);
