use std::cmp::Ordering;

use lso_core::grid_orders::GridOrdering;
use lso_core::lso::{build_classic_with, build_gap_with, read_family, write_family};
use lso_core::oracle::{reference_compare, shift_lca_side};
use lso_core::rng::{uniform_points, SplitMix64};
use lso_core::{build_classic, build_gap, GridOrderSet, LsoFamily, LsoParams, Resolution};

fn random_agreement(f: &LsoFamily, seed: u64, trials: usize) {
    let pts = uniform_points(seed, 500, f.d());
    let mut rng = SplitMix64::new(seed ^ 0xabc);
    for _ in 0..trials {
        let id = f.id_at(rng.below(f.len() as u64) as usize).unwrap();
        let p = &pts[rng.below(500) as usize];
        let q = &pts[rng.below(500) as usize];
        assert_eq!(f.compare(id, p, q).unwrap(), reference_compare(f, id, p, q), "{id:?} {p:?} {q:?}");
    }
}

#[test]
fn comparator_matches_reference() {
    random_agreement(&build_gap(0.25, 0.125, 2).unwrap(), 1, 40_000);
    random_agreement(&build_gap(0.25, 0.125, 1).unwrap(), 2, 30_000);
    random_agreement(&build_classic_with(0.25, 3, Resolution::DeskScale).unwrap(), 3, 30_000);
}

#[test]
fn comparator_matches_reference_on_near_points() {
    // pairs sharing long prefixes exercise deep splits
    let f = build_gap_with(0.25, 0.125, 2, Resolution::DeskScale).unwrap();
    let mut rng = SplitMix64::new(9);
    for _ in 0..20_000 {
        let p = rng.unit_point(2);
        let k = 1 + rng.below(50) as u32;
        let coords: Vec<u64> = p.fixed().iter().map(|&x| (x ^ (rng.next_u64() >> (64 - k))) & ((1 << 52) - 1)).collect();
        let q = lso_core::UnitPoint::from_fixed(coords, 52).unwrap();
        let id = f.id_at(rng.below(f.len() as u64) as usize).unwrap();
        assert_eq!(f.compare(id, &p, &q).unwrap(), reference_compare(&f, id, &p, &q));
    }
}

#[test]
fn orders_are_antisymmetric_and_transitive() {
    let f = build_gap(0.25, 0.125, 2).unwrap();
    let pts = uniform_points(4, 1000, 2);
    let mut rng = SplitMix64::new(5);
    for _ in 0..100_000 {
        let id = f.id_at(rng.below(f.len() as u64) as usize).unwrap();
        let [a, b, c] = [0; 3].map(|_| &pts[rng.below(1000) as usize]);
        let ab = f.compare(id, a, b).unwrap();
        let bc = f.compare(id, b, c).unwrap();
        let ac = f.compare(id, a, c).unwrap();
        assert_eq!(ab, f.compare(id, b, a).unwrap().reverse());
        if ab != Ordering::Greater && bc != Ordering::Greater {
            assert_ne!(ac, Ordering::Greater);
        }
    }
}

#[test]
fn some_shift_houses_each_pair() {
    for d in 1..=3 {
        let f = build_gap(0.25, 0.125, d).unwrap();
        let bound = 2.0 * f.params().shift_count() as f64;
        let pts = uniform_points(10 + d as u64, 300, d);
        for w in pts.windows(2) {
            let (p, q) = (&w[0], &w[1]);
            let dist = lso_core::geometry::dist(&p.to_f64(), &q.to_f64()).unwrap();
            let (_, side) = shift_lca_side(&f, p, q).unwrap();
            assert!(side <= bound * dist, "d={d} side {side} dist {dist}");
        }
    }
}

#[test]
fn binary_format_round_trips() {
    let mut fams = vec![
        build_gap(0.25, 0.125, 2).unwrap(),
        build_classic(0.5, 1).unwrap(),
    ];
    let params = LsoParams::gap(0.5, 0.5, 1).unwrap().with_resolution(Resolution::MaxLambda(1)).unwrap();
    let orders = GridOrderSet::explicit(2, 1, vec![GridOrdering::identity(2, 1).unwrap()]).unwrap();
    fams.push(LsoFamily::with_orders(params, orders).unwrap());
    let pts = uniform_points(6, 50, 2);
    for f in fams {
        let mut buf = Vec::new();
        write_family(&f, &mut buf).unwrap();
        let g = read_family(buf.as_slice()).unwrap();
        assert_eq!(g.len(), f.len());
        assert_eq!(g.params(), f.params());
        let pts: Vec<_> = pts.iter().map(|p| lso_core::UnitPoint::from_f64(&p.to_f64()[..f.d()]).unwrap()).collect();
        for i in (0..f.len()).step_by(1 + f.len() / 200) {
            let id = f.id_at(i).unwrap();
            for w in pts.windows(2) {
                assert_eq!(f.compare(id, &w[0], &w[1]).unwrap(), g.compare(id, &w[0], &w[1]).unwrap());
            }
        }
    }
}

fn sizes(build: impl Fn(f64) -> LsoFamily) -> Vec<f64> {
    [0.25, 0.125, 0.0625].iter().map(|&e| build(e).len() as f64).collect()
}

#[test]
fn classic_size_grows_about_two_to_the_d() {
    for d in [1, 2] {
        let m = sizes(|e| build_classic(e, d).unwrap());
        let lo = 2f64.powi(d as i32 - 1);
        let hi = 2f64.powi(d as i32 + 2);
        for w in m.windows(2) {
            let r = w[1] / w[0];
            assert!((lo..=hi).contains(&r), "d={d} ratio {r}");
        }
    }
}

#[test]
fn gap_size_growth_within_envelope() {
    for d in [1, 2] {
        let m = sizes(|e| build_gap(e, 0.125, d).unwrap());
        let lo = 2f64.powi(d as i32 - 2);
        let hi = 2f64.powi(d as i32 + 1);
        for w in m.windows(2) {
            let r = w[1] / w[0];
            assert!((lo..=hi).contains(&r), "d={d} ratio {r}");
        }
    }
}
