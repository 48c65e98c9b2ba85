use lso_core::grid_orders::{
    all_pairs_orderings, directional_orderings, directional_orderings_with, directional_set, gap_orderings,
    DirectionSource, GridOrderSet,
};
use lso_core::oracle::{shuffled_orderings, verify_gap_orderings, verify_grid_conclusion};

fn conclusion_holds(t: usize, d: usize) {
    let set = directional_set(t, d, DirectionSource::CellPairs).unwrap();
    let report = verify_grid_conclusion(&set).unwrap().unwrap_or_else(|v| panic!("t={t} d={d}: {v:?}"));
    let n = t.pow(d as u32);
    assert_eq!(report.pairs_checked, n * (n - 1) / 2);
}

#[test]
fn trivial_grid_passes() {
    let set = directional_set(1, 2, DirectionSource::CellPairs).unwrap();
    let r = verify_grid_conclusion(&set).unwrap().unwrap();
    assert_eq!(r.pairs_checked, 0);
}

#[test]
fn directional_conclusion_small_grids() {
    for (t, d) in [(2, 1), (8, 1), (2, 2), (4, 2), (8, 2), (2, 3), (4, 3)] {
        conclusion_holds(t, d);
    }
}

#[test]
fn directional_conclusion_t16() {
    conclusion_holds(16, 2);
}

#[test]
fn sphere_net_directions_also_work() {
    let orders = directional_orderings_with(4, 2, DirectionSource::SphereNet).unwrap();
    let set = GridOrderSet::explicit(4, 2, orders).unwrap();
    verify_grid_conclusion(&set).unwrap().unwrap();
}

#[test]
fn directional_count_constant() {
    // C·t^(d-1) at t = 8 in the plane; recorded as C ≈ 100
    let c = directional_orderings(8, 2).unwrap().len() as f64 / 8.0;
    assert!(c <= 104.0, "C = {c}");
}

#[test]
fn shuffled_orderings_fail_with_witness() {
    for count in [8, 64] {
        let set = shuffled_orderings(8, 2, count, 1).unwrap();
        let v = verify_grid_conclusion(&set).unwrap().unwrap_err();
        assert!(v.cells.0 < v.cells.1);
        let o = set.materialize(v.ordering).unwrap();
        let (ra, rb) = (o.rank(v.cells.0), o.rank(v.cells.1));
        let w = o.rank(v.witness);
        assert!(ra.min(rb) < w && w < ra.max(rb), "witness lies between the pair");
    }
}

#[test]
fn gap_orderings_at_t16() {
    for alpha in [4, 8, 16] {
        let set = gap_orderings(16, alpha, 2).unwrap();
        let r = verify_gap_orderings(&set).unwrap().unwrap();
        assert!(r.pairs_checked > 0, "alpha = {alpha}");
    }
}

#[test]
fn gap_orderings_two_levels() {
    // β = 2 in d = 1
    let set = gap_orderings(32, 20, 1).unwrap();
    assert_eq!(set.beta, 2);
    let r = verify_gap_orderings(&set).unwrap().unwrap();
    assert!(r.pairs_checked > 0);
}

#[test]
fn gap_orderings_vacuous_when_nothing_qualifies() {
    let set = gap_orderings(32, 32, 1).unwrap();
    assert_eq!(verify_gap_orderings(&set).unwrap().unwrap().pairs_checked, 0);
}

#[test]
fn oversized_grid_is_rejected_by_checker() {
    let set = GridOrderSet::walecki(128, 2).unwrap();
    assert!(verify_grid_conclusion(&set).is_err());
}

#[test]
fn all_pairs_tables_are_permutations() {
    for o in all_pairs_orderings(5, 2).unwrap() {
        assert!(o.is_permutation());
    }
}
