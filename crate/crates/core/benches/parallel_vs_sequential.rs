use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lipexp::expansion::{self, ExpansionMode};
use lipexp::graph::{self, RandomRegularOptions};
use lipexp::height::Mode;
use lipexp::par;
use lipexp::samplers::{self, McmcParams};
use lipexp::transform::{verify_counting, KRule};

fn modes() -> [(&'static str, bool); 2] {
    [("parallel", true), ("sequential", false)]
}

fn exhaustive_lambda(c: &mut Criterion) {
    let g = graph::gen_random_regular(12, 3, 1, RandomRegularOptions::default()).unwrap();
    let mut group = c.benchmark_group("exhaustive_lambda_n12");
    group.sample_size(10);
    for (name, on) in modes() {
        par::set_parallel(on);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| expansion::exhaustive_lambda(&g, ExpansionMode::General).unwrap())
        });
    }
    group.finish();
}

fn enumerate(c: &mut Criterion) {
    let g = graph::petersen();
    let mut group = c.benchmark_group("enumerate_petersen_m2");
    group.sample_size(10);
    for (name, on) in modes() {
        par::set_parallel(on);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| samplers::enumerate(&g, 0, Mode::Lipschitz(2), 1 << 24).unwrap().count)
        });
    }
    group.finish();
}

fn chains(c: &mut Criterion) {
    let g = graph::gen_random_regular(256, 6, 2, RandomRegularOptions::default()).unwrap();
    let params = McmcParams { burnin: 20_000, thin: 256, n_samples: 100 };
    let mut group = c.benchmark_group("mcmc_8_chains_n256");
    group.sample_size(10);
    for (name, on) in modes() {
        par::set_parallel(on);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                samplers::run_chains(&g, 0, Mode::Lipschitz(1), params, 3, 8, |_| 0i64, |acc, f| *acc += f.max() as i64)
                    .unwrap()
            })
        });
    }
    group.finish();
}

fn transform(c: &mut Criterion) {
    let g = graph::petersen();
    let lambda = expansion::exhaustive_lambda(&g, ExpansionMode::General).unwrap().lambda;
    let mut group = c.benchmark_group("verify_counting_petersen");
    group.sample_size(10);
    for (name, on) in modes() {
        par::set_parallel(on);
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| verify_counting(&g, 0, 5, 1, Mode::Lipschitz(1), KRule::Phase { lambda }, 1 << 22).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, exhaustive_lambda, enumerate, chains, transform);
criterion_main!(benches);
