use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use ehrhard::grid::{Axis, Grid};
use ehrhard::profile::Profile;
use ehrhard::rigidity::{exhaustive_search, SEARCH_TOLERANCE};
use ehrhard::Execution;

/// A connected G of `k` cells: rigid, so the search visits every partition.
fn rigid(k: usize) -> Profile {
    let grid = Grid::line(Axis::uniform(-2.0, 2.0, k).unwrap().extended());
    let mut values = vec![0.0];
    values.extend((0..k).map(|i| 0.1 + 0.8 * i as f64 / k as f64));
    values.push(1.0);
    Profile::from_values(grid, &values).unwrap()
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("exhaustive-search");
    group.sample_size(10);
    for k in [8, 12, 14] {
        let p = rigid(k);
        for exec in [Execution::Sequential, Execution::Parallel] {
            let label = if exec.is_parallel() { "parallel" } else { "sequential" };
            group.bench_with_input(BenchmarkId::new(label, k), &p, |b, p| {
                b.iter(|| exhaustive_search(black_box(p), 16, SEARCH_TOLERANCE, exec).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, search);
criterion_main!(benches);
