use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use facecap::empirical::{pairwise_score_histogram, pairwise_score_histogram_sequential};
use facecap::oracle::{mc_cap_fraction, sample_uniform_sphere, SamplerConfig};
use facecap::HistogramConfig;

fn histogram(c: &mut Criterion) {
    let mut group = c.benchmark_group("pairwise_histogram");
    group.sample_size(10);
    for &(rows, dim) in &[(2_000usize, 128usize), (4_000, 512)] {
        let e = sample_uniform_sphere(&SamplerConfig::new(dim, 1, rows).unwrap()).unwrap();
        let cfg = HistogramConfig::default();
        let id = format!("{rows}x{dim}");
        group.throughput(Throughput::Elements((rows * (rows - 1) / 2) as u64));
        group.bench_with_input(BenchmarkId::new("parallel", &id), &e, |b, e| {
            b.iter(|| pairwise_score_histogram(e, &cfg).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("sequential", &id), &e, |b, e| {
            b.iter(|| pairwise_score_histogram_sequential(e, &cfg).unwrap())
        });
    }
    group.finish();
}

fn tile_size(c: &mut Criterion) {
    let mut group = c.benchmark_group("tile_size");
    group.sample_size(10);
    let e = sample_uniform_sphere(&SamplerConfig::new(512, 2, 3_000).unwrap()).unwrap();
    for tile in [64usize, 128, 256, 512] {
        let cfg = HistogramConfig { tile, ..HistogramConfig::default() };
        group.bench_with_input(BenchmarkId::from_parameter(tile), &cfg, |b, cfg| {
            b.iter(|| pairwise_score_histogram(&e, cfg).unwrap())
        });
    }
    group.finish();
}

fn monte_carlo(c: &mut Criterion) {
    let mut group = c.benchmark_group("mc_cap_fraction");
    group.sample_size(10);
    for n in [4usize, 64] {
        group.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| mc_cap_fraction(n, 1.2, 200_000, 7).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, histogram, tile_size, monte_carlo);
criterion_main!(benches);
