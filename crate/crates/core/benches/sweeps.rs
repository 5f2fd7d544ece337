use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rabkit_core::building::Building;
use rabkit_core::catalog::{heawood, running_example};
use rabkit_core::hyperplanes::{check_special, Subgroup};
use rabkit_core::parallel;
use rabkit_core::verify::{run_suite, Suite, VerifyConfig};

fn pools() -> [(&'static str, Option<usize>); 2] {
    [("sequential", Some(1)), ("pool", None)]
}

fn on_pool<R: Send>(threads: Option<usize>, f: impl FnOnce() -> R + Send) -> R {
    match threads {
        Some(n) => parallel::with_threads(n, f),
        None => f(),
    }
}

fn building_suite(c: &mut Criterion) {
    let b = Building::new(running_example());
    let cfg = VerifyConfig { radius: 3, seed: 0 };
    let mut group = c.benchmark_group("building suite, radius 3");
    group.sample_size(10);
    for (name, threads) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| on_pool(threads, || run_suite(&b, Suite::Building, &cfg)))
        });
    }
    group.finish();
}

fn special_kernel(c: &mut Criterion) {
    let b = Building::new(running_example());
    let mut group = c.benchmark_group("kernel specialness, length 4");
    group.sample_size(10);
    for (name, threads) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| on_pool(threads, || check_special(&b, &Subgroup::Kernel, 4, 3)))
        });
    }
    group.finish();
}

fn heawood_links(c: &mut Criterion) {
    let b = Building::new(heawood(2));
    let cfg = VerifyConfig { radius: 1, seed: 0 };
    let mut group = c.benchmark_group("heawood hyperplanes, radius 1");
    group.sample_size(10);
    for (name, threads) in pools() {
        group.bench_function(BenchmarkId::from_parameter(name), |bench| {
            bench.iter(|| on_pool(threads, || run_suite(&b, Suite::Hyperplanes, &cfg)))
        });
    }
    group.finish();
}

criterion_group!(benches, building_suite, special_kernel, heawood_links);
criterion_main!(benches);
