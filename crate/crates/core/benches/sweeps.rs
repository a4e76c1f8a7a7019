//! Sequential versus parallel sweeps.
//!
//! Run with: cargo bench -p dma-core
//! Without the `parallel` feature both variants run sequentially.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use dma_core::binary::solve_p4_with;
use dma_core::exec::Exec;
use dma_core::experiments::rate_setup;
use dma_core::model::DmaDesign;
use dma_core::oracle::grid_max_gain;
use dma_core::rate::{average_strategy_rates, linspace};
use dma_core::scenario::Scenario;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn grid_oracle(c: &mut Criterion) {
    let d = DmaDesign::reference().with_elements(3).unwrap();
    let mut group = c.benchmark_group("grid_max_gain_n3_200");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| grid_max_gain(&d, black_box(-0.3), black_box(15e9), 200, exec).unwrap())
        });
    }
    group.finish();
}

fn binary_search(c: &mut Criterion) {
    let d = DmaDesign::reference().with_elements(16).unwrap();
    let mut group = c.benchmark_group("solve_p4_n16");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| solve_p4_with(&d, black_box(0.4), black_box(15e9), false, exec).unwrap())
        });
    }
    group.finish();
}

fn rate_average(c: &mut Criterion) {
    let s = Scenario::default();
    let setup = rate_setup(&s, &s.design().unwrap(), None).unwrap();
    let angles = linspace(-0.5, 0.5, 37);
    let mut group = c.benchmark_group("average_strategy_rates_37");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| average_strategy_rates(black_box(&setup), black_box(&angles), exec).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, grid_oracle, binary_search, rate_average);
criterion_main!(benches);
