use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use recon_core::channels::{read_coverage_with, CoverageOptions};
use recon_core::verifier::ConflictGraph;
use recon_core::words::{balanced_words, DEFAULT_ENUMERATION_BUDGET};
use recon_core::{Channel, Construction, Exec};

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn coverage(c: &mut Criterion) {
    let mut group = c.benchmark_group("read_coverage");
    group.sample_size(10);
    for (n, ch) in [(10, Channel::D), (10, Channel::Edit), (12, Channel::D)] {
        let words = balanced_words(n, DEFAULT_ENUMERATION_BUDGET).unwrap();
        for (name, exec) in MODES {
            for filter in [true, false] {
                let id = format!("{}/n{n}/{name}/{}", ch.name(), if filter { "filtered" } else { "all" });
                let opts = CoverageOptions { exec, filter };
                group.bench_function(id, |b| {
                    b.iter(|| read_coverage_with(ch, black_box(&words), opts).unwrap())
                });
            }
        }
    }
    group.finish();
}

fn conflict_graph(c: &mut Criterion) {
    let mut group = c.benchmark_group("conflict_graph");
    group.sample_size(10);
    let words = balanced_words(10, DEFAULT_ENUMERATION_BUDGET).unwrap();
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("SD/n10/N3", name), &exec, |b, &exec| {
            b.iter(|| ConflictGraph::build(black_box(&words), Channel::SD, 3, exec).unwrap())
        });
    }
    group.finish();
}

fn construction_filter(c: &mut Criterion) {
    let mut group = c.benchmark_group("construction");
    group.sample_size(10);
    let cons = Construction::R2b { n: 16, l: 2, m: 8 };
    for (name, exec) in MODES {
        group.bench_with_input(BenchmarkId::new("r2b/n16", name), &exec, |b, &exec| {
            b.iter(|| black_box(&cons).build_with(DEFAULT_ENUMERATION_BUDGET, exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, coverage, conflict_graph, construction_filter);
criterion_main!(benches);
