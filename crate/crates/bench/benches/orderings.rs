use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use lso_bench::{desk_family, filled_graph, points};
use lso_core::grid_orders::directional_orderings;
use lso_core::lso::build_gap;
use lso_core::{Color, PointRecord};

fn compare(c: &mut Criterion) {
    let mut group = c.benchmark_group("compare");
    for d in [1, 2, 3] {
        let f = build_gap(0.25, 0.125, d).expect("valid parameters");
        let pts = points(1, 256, d);
        let ids: Vec<_> = (0..64).map(|i| f.id_at(i * f.len() / 64).expect("in range")).collect();
        group.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, _| {
            let mut k = 0usize;
            b.iter(|| {
                k = k.wrapping_add(1);
                let id = ids[k % 64];
                black_box(f.compare(id, &pts[k % 256], &pts[(k * 7 + 3) % 256]).expect("valid"))
            })
        });
    }
    group.finish();
}

fn update(c: &mut Criterion) {
    let mut group = c.benchmark_group("insert_delete");
    group.sample_size(10);
    for n in [50, 200] {
        let mut g = filled_graph(desk_family(0.25, 2), 2, n);
        let fresh = points(3, 1, 2).remove(0);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| {
                g.insert(PointRecord {
                    id: u64::MAX,
                    point: fresh.clone(),
                    color: Color::None,
                })
                .expect("fresh id");
                g.delete(u64::MAX).expect("live id")
            })
        });
    }
    group.finish();
}

fn directional(c: &mut Criterion) {
    let mut group = c.benchmark_group("directional_orderings");
    group.sample_size(10);
    for t in [4, 8] {
        group.bench_with_input(BenchmarkId::from_parameter(t), &t, |b, &t| {
            b.iter(|| directional_orderings(black_box(t), 2).expect("valid grid"))
        });
    }
    group.finish();
}

criterion_group!(benches, compare, update, directional);
criterion_main!(benches);
