//! Benchmark fixtures.

use lso_core::lso::build_gap_with;
use lso_core::rng::uniform_points;
use lso_core::{Color, LocalityGraph, LsoFamily, PointRecord, Resolution, UnitPoint};

/// Gap family with `γ = 1/8` at desk resolution.
pub fn desk_family(eps: f64, d: usize) -> LsoFamily {
    build_gap_with(eps, 0.125, d, Resolution::DeskScale).expect("valid parameters")
}

pub fn points(seed: u64, n: usize, d: usize) -> Vec<UnitPoint> {
    uniform_points(seed, n, d)
}

/// Locality graph holding `n` uniform points with ids `0..n`.
pub fn filled_graph(family: LsoFamily, seed: u64, n: usize) -> LocalityGraph {
    let d = family.d();
    let mut g = LocalityGraph::new(family);
    for (i, p) in points(seed, n, d).into_iter().enumerate() {
        g.insert(PointRecord {
            id: i as u64,
            point: p,
            color: Color::None,
        })
        .expect("fresh id");
    }
    g
}
