use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use epv_bench::{prepared, synthetic_actions};
use epv_core::mixture::{gibbs_fit, PriorSpec, SamplerConfig};
use epv_core::ratings::rate_players;
use epv_core::surfaces::{render_grid, SdFormula};
use epv_core::CentreSet;

fn weights(c: &mut Criterion) {
    let centres = CentreSet::standard();
    let locations: Vec<(f64, f64)> = synthetic_actions(10_000, 1)
        .iter()
        .map(|a| (a.x, a.y))
        .collect();
    let mut group = c.benchmark_group("weights");
    group.throughput(Throughput::Elements(locations.len() as u64));
    group.bench_function("support_10k", |b| {
        b.iter(|| {
            for &(x, y) in &locations {
                black_box(centres.support(x, y).unwrap());
            }
        })
    });
    group.finish();
}

fn gibbs(c: &mut Criterion) {
    let prior = PriorSpec::league_default();
    let config = SamplerConfig {
        chains: 2,
        iterations: 200,
        burn_in: 100,
        thinning: 1,
        ..SamplerConfig::with_seed(3)
    };
    let mut group = c.benchmark_group("gibbs");
    group.sample_size(10);
    for n in [1_000usize, 10_000] {
        let data = prepared(n, 2);
        group.throughput(Throughput::Elements((n * config.iterations) as u64));
        group.bench_with_input(BenchmarkId::from_parameter(n), &data, |b, data| {
            b.iter(|| gibbs_fit(data, &prior, &config).unwrap())
        });
    }
    group.finish();
}

fn surfaces_and_ratings(c: &mut Criterion) {
    let actions = synthetic_actions(5_000, 4);
    let data = prepared(5_000, 4);
    let config = SamplerConfig {
        chains: 2,
        iterations: 150,
        burn_in: 50,
        thinning: 1,
        ..SamplerConfig::with_seed(5)
    };
    let post = gibbs_fit(&data, &PriorSpec::league_default(), &config).unwrap();
    let mut group = c.benchmark_group("outputs");
    group.sample_size(20);
    group.bench_function("grid_1m", |b| {
        b.iter(|| render_grid(&post, 1.0, SdFormula::Printed).unwrap())
    });
    group.bench_function("ratings_5k", |b| {
        b.iter(|| rate_players(&actions, &post).unwrap())
    });
    group.finish();
}

criterion_group!(benches, weights, gibbs, surfaces_and_ratings);
criterion_main!(benches);
