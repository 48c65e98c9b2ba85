//! Brute-force checkers for the locality guarantees, the grid-ordering
//! properties and the lower-bound instances.
//!
//! Real-valued predicates allow [`TOL`] slack; rank comparisons are exact.
//! Pair loops run in parallel but always report the first failing pair in
//! lexicographic order.

mod grid;
mod lower;

use std::cmp::Ordering;
use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::{dist_point_segment_unchecked, dist_unchecked, UnitPoint};
use crate::lso::{LsoFamily, OrderingId};

pub use grid::{
    shuffled_orderings, verify_gap_orderings, verify_grid_conclusion, GridReport, GridViolation,
};
pub use lower::{
    lower_bound_grid_instance, lower_bound_sphere_instance, spanner_edge_lower_bound_report,
    GridLowerBound, SpannerBoundRow, SphereLowerBound,
};

/// Slack on real-valued comparisons.
pub const TOL: f64 = 1e-9;

/// Families up to this many orderings are searched exhaustively once the
/// suggested candidates fail.
pub const EXHAUSTIVE_CAP: usize = 1 << 20;

/// Candidates tried per (shift, tree class) before falling back.
const PER_SPLIT: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Predicate {
    /// A between-point is farther than `εℓ` from the segment.
    Hippodrome,
    /// A between-point is farther than the allowed radius from both ends.
    Ball,
    /// Two between-points are farther apart than `(1+ε)ℓ`.
    Diameter,
    /// A point near `p` and a point near `q` are closer than `(1-2γ)ℓ`.
    Gap,
}

/// A pair with no good ordering, and what went wrong in the closest one.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalityViolation {
    /// Indices into the point set, `pair.0 < pair.1`.
    pub pair: (usize, usize),
    /// Ordering with the fewest failing between-points among those tried.
    pub ordering: OrderingId,
    pub predicate: Predicate,
    /// Offending between-point.
    pub witness: usize,
    /// Second point for [`Predicate::Diameter`] and [`Predicate::Gap`].
    pub other: Option<usize>,
    /// Whether every ordering of the family was tried.
    pub exhaustive: bool,
}

#[derive(Clone, Copy, Debug)]
enum Mode {
    Classic { eps: f64 },
    Gap { eps: f64, gamma: f64 },
}

/// Exact comparison by explicit descent of the quadtree over `[0,2)^d`:
/// find the deepest cell holding both shifted points by halving, move up to
/// the node of the ordering's tree class, and rank the children the points
/// fall in.
pub fn reference_compare(f: &LsoFamily, id: OrderingId, p: &UnitPoint, q: &UnitPoint) -> Ordering {
    let params = f.params();
    let shift = params.shift(id.shift, p.frac_bits());
    let scale = (1u64 << p.frac_bits()) as f64;
    let sp: Vec<f64> = p.fixed().iter().zip(&shift).map(|(x, s)| (x + s) as f64 / scale).collect();
    let sq: Vec<f64> = q.fixed().iter().zip(&shift).map(|(x, s)| (x + s) as f64 / scale).collect();
    if sp == sq {
        return Ordering::Equal;
    }
    // cell index of x at depth k has side 2^(1-k)
    let cell = |x: f64, k: i64| -> i64 { (x * 2f64.powi((k - 1) as i32)).floor() as i64 };
    let mut h = 0i64;
    while sp.iter().zip(&sq).all(|(&a, &b)| cell(a, h + 1) == cell(b, h + 1)) {
        h += 1;
    }
    let lambda = params.lambda as i64;
    let tree = id.tree as i64;
    let level = tree + lambda * (h - tree).div_euclid(lambda);
    let side = params.side as i64;
    let linear = |pt: &[f64]| -> usize {
        pt.iter()
            .rev()
            .fold(0i64, |acc, &x| acc * side + cell(x, level + lambda).rem_euclid(side)) as usize
    };
    let g = f.grid_orders();
    g.rank(id.grid, linear(&sp)).cmp(&g.rank(id.grid, linear(&sq)))
}

/// Edge multiset of the locality graph on `points`, computed by sorting the
/// whole set in every ordering.
pub fn edges_from_scratch(f: &LsoFamily, points: &[(u64, UnitPoint)]) -> Vec<((u64, u64), u32)> {
    let counts = (0..f.len())
        .into_par_iter()
        .fold(BTreeMap::<(u64, u64), u32>::new, |mut acc, i| {
            let id = f.id_at(i).expect("in range");
            let mut order: Vec<&(u64, UnitPoint)> = points.iter().collect();
            order.sort_by(|a, b| f.compare(id, &a.1, &b.1).expect("valid").then(a.0.cmp(&b.0)));
            for w in order.windows(2) {
                let k = (w[0].0.min(w[1].0), w[0].0.max(w[1].0));
                *acc.entry(k).or_default() += 1;
            }
            acc
        })
        .reduce(BTreeMap::new, |mut a, b| {
            for (k, c) in b {
                *a.entry(k).or_default() += c;
            }
            a
        });
    counts.into_iter().collect()
}

/// Smallest side of a quadtree cell containing both shifted points, over all
/// shifts, with the shift achieving it. `None` for equal points.
pub fn shift_lca_side(f: &LsoFamily, p: &UnitPoint, q: &UnitPoint) -> Option<(usize, f64)> {
    let sp = f.shifted_all(p);
    let sq = f.shifted_all(q);
    (0..sp.len())
        .filter_map(|i| crate::lso::divergence_depth(&sp[i], &sq[i]).map(|h| (i, 2f64.powi(1 - h as i32))))
        .min_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)))
}

struct Check<'a> {
    f: &'a LsoFamily,
    pts: &'a [UnitPoint],
    coords: Vec<Vec<f64>>,
    mode: Mode,
}

/// Outcome of checking one ordering for one pair.
struct Failure {
    count: usize,
    predicate: Predicate,
    witness: usize,
    other: Option<usize>,
}

impl Check<'_> {
    fn between(&self, id: OrderingId, i: usize, j: usize) -> Vec<usize> {
        let (p, q) = (&self.pts[i], &self.pts[j]);
        let (lo, hi) = match self.f.compare(id, p, q).expect("valid") {
            Ordering::Greater => (j, i),
            _ => (i, j),
        };
        (0..self.pts.len())
            .filter(|&u| u != i && u != j)
            .filter(|&u| {
                let a = self.f.compare(id, &self.pts[lo], &self.pts[u]).expect("valid").then(lo.cmp(&u));
                let b = self.f.compare(id, &self.pts[u], &self.pts[hi]).expect("valid").then(u.cmp(&hi));
                a == Ordering::Less && b == Ordering::Less
            })
            .collect()
    }

    /// `None` when every predicate holds in ordering `id`.
    fn check(&self, id: OrderingId, i: usize, j: usize) -> Option<Failure> {
        let (p, q) = (&self.coords[i], &self.coords[j]);
        let ell = dist_unchecked(p, q);
        let between = self.between(id, i, j);
        let mut first: Option<Failure> = None;
        let mut count = 0;
        let mut note = |pred: Predicate, w: usize, o: Option<usize>, first: &mut Option<Failure>| {
            count += 1;
            if first.is_none() {
                *first = Some(Failure {
                    count: 0,
                    predicate: pred,
                    witness: w,
                    other: o,
                });
            }
        };
        let radius = match self.mode {
            Mode::Classic { eps } => eps,
            Mode::Gap { gamma, .. } => gamma,
        };
        for &u in &between {
            let x = &self.coords[u];
            if let Mode::Gap { eps, .. } = self.mode {
                if dist_point_segment_unchecked(x, p, q) > eps * ell + TOL {
                    note(Predicate::Hippodrome, u, None, &mut first);
                    continue;
                }
            }
            if dist_unchecked(x, p).min(dist_unchecked(x, q)) > radius * ell + TOL {
                note(Predicate::Ball, u, None, &mut first);
            }
        }
        if let Mode::Gap { eps, gamma } = self.mode {
            if first.is_none() {
                'outer: for (a, &u) in between.iter().enumerate() {
                    for &v in &between[a + 1..] {
                        if dist_unchecked(&self.coords[u], &self.coords[v]) > (1.0 + eps) * ell + TOL {
                            note(Predicate::Diameter, u, Some(v), &mut first);
                            break 'outer;
                        }
                    }
                }
            }
            if first.is_none() {
                let near = |a: &[f64], u: usize| dist_unchecked(&self.coords[u], a) <= gamma * ell + TOL;
                let xs: Vec<usize> = between.iter().copied().filter(|&u| near(p, u)).collect();
                let ys: Vec<usize> = between.iter().copied().filter(|&u| near(q, u)).collect();
                'gap: for &x in &xs {
                    for &y in &ys {
                        if x != y && dist_unchecked(&self.coords[x], &self.coords[y]) < (1.0 - 2.0 * gamma) * ell - TOL {
                            note(Predicate::Gap, x, Some(y), &mut first);
                            break 'gap;
                        }
                    }
                }
            }
        }
        first.map(|mut f| {
            f.count = count;
            f
        })
    }

    fn pair(&self, i: usize, j: usize) -> Option<LocalityViolation> {
        if self.pts[i] == self.pts[j] {
            return None;
        }
        let mut tried = std::collections::HashSet::new();
        let mut best: Option<(OrderingId, Failure)> = None;
        let consider = |id: OrderingId, best: &mut Option<(OrderingId, Failure)>| -> bool {
            match self.check(id, i, j) {
                None => true,
                Some(fail) => {
                    if best.as_ref().is_none_or(|(_, b)| fail.count < b.count) {
                        *best = Some((id, fail));
                    }
                    false
                }
            }
        };
        for id in self.f.witness_candidates(&self.pts[i], &self.pts[j], PER_SPLIT) {
            if tried.insert(id) && consider(id, &mut best) {
                return None;
            }
        }
        let exhaustive = self.f.len() <= EXHAUSTIVE_CAP;
        if exhaustive {
            for id in self.f.ids() {
                if !tried.contains(&id) && consider(id, &mut best) {
                    return None;
                }
            }
        }
        let (ordering, fail) = best.expect("at least one ordering tried");
        Some(LocalityViolation {
            pair: (i, j),
            ordering,
            predicate: fail.predicate,
            witness: fail.witness,
            other: fail.other,
            exhaustive,
        })
    }

    fn run(&self) -> Result<(), LocalityViolation> {
        let n = self.pts.len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        match pairs.par_iter().find_map_first(|&(i, j)| self.pair(i, j)) {
            Some(v) => Err(v),
            None => Ok(()),
        }
    }
}

/// Checks that every pair has an ordering whose between-points all lie
/// within `eps·ℓ` of one of the two ends.
pub fn verify_locality(f: &LsoFamily, pts: &[UnitPoint], eps: f64) -> Result<(), LocalityViolation> {
    Check {
        f,
        pts,
        coords: pts.iter().map(UnitPoint::to_f64).collect(),
        mode: Mode::Classic { eps },
    }
    .run()
}

/// Checks the gap guarantee: every pair has an ordering whose between-points
/// lie in the `eps·ℓ` hippodrome and within `gamma·ℓ` of an end, are pairwise
/// within `(1+eps)ℓ`, and split into two clusters `(1-2gamma)ℓ` apart.
pub fn verify_locality_gap(
    f: &LsoFamily,
    pts: &[UnitPoint],
    eps: f64,
    gamma: f64,
) -> Result<(), LocalityViolation> {
    Check {
        f,
        pts,
        coords: pts.iter().map(UnitPoint::to_f64).collect(),
        mode: Mode::Gap { eps, gamma },
    }
    .run()
}

/// Re-evaluates the failed predicate of a violation; `true` when it still
/// fails.
pub fn reproduce(
    f: &LsoFamily,
    pts: &[UnitPoint],
    v: &LocalityViolation,
    eps: f64,
    gamma: Option<f64>,
) -> bool {
    let c: Vec<Vec<f64>> = pts.iter().map(UnitPoint::to_f64).collect();
    let (p, q) = (&c[v.pair.0], &c[v.pair.1]);
    let ell = dist_unchecked(p, q);
    let check = Check {
        f,
        pts,
        coords: c.clone(),
        mode: Mode::Classic { eps },
    };
    if !check.between(v.ordering, v.pair.0, v.pair.1).contains(&v.witness) {
        return false;
    }
    let u = &c[v.witness];
    match v.predicate {
        Predicate::Hippodrome => dist_point_segment_unchecked(u, p, q) > eps * ell + TOL,
        Predicate::Ball => {
            dist_unchecked(u, p).min(dist_unchecked(u, q)) > gamma.unwrap_or(eps) * ell + TOL
        }
        Predicate::Diameter => v
            .other
            .is_some_and(|o| dist_unchecked(u, &c[o]) > (1.0 + eps) * ell + TOL),
        Predicate::Gap => v.other.is_some_and(|o| {
            dist_unchecked(u, &c[o]) < (1.0 - 2.0 * gamma.unwrap_or(eps)) * ell - TOL
        }),
    }
}

/// First ordering in which pair `(i, j)` meets the gap guarantee.
pub fn gap_witness(f: &LsoFamily, pts: &[UnitPoint], i: usize, j: usize, eps: f64, gamma: f64) -> Option<OrderingId> {
    let check = Check {
        f,
        pts,
        coords: pts.iter().map(UnitPoint::to_f64).collect(),
        mode: Mode::Gap { eps, gamma },
    };
    let mut cands = f.witness_candidates(&pts[i], &pts[j], PER_SPLIT);
    if f.len() <= EXHAUSTIVE_CAP {
        cands.extend(f.ids());
    }
    cands.into_iter().find(|&id| check.check(id, i, j).is_none())
}

/// Longest hop between consecutive points of the run from `p` to `q` in
/// ordering `id` (both ends included), relative to `|pq|`, with the hop's
/// endpoints.
pub fn longest_hop(f: &LsoFamily, pts: &[UnitPoint], i: usize, j: usize, id: OrderingId) -> (f64, usize, usize) {
    let check = Check {
        f,
        pts,
        coords: pts.iter().map(UnitPoint::to_f64).collect(),
        mode: Mode::Classic { eps: 0.0 },
    };
    let (lo, hi) = match f.compare(id, &pts[i], &pts[j]).expect("valid") {
        Ordering::Greater => (j, i),
        _ => (i, j),
    };
    let mut run = check.between(id, i, j);
    run.sort_by(|&a, &b| f.compare(id, &pts[a], &pts[b]).expect("valid").then(a.cmp(&b)));
    run.insert(0, lo);
    run.push(hi);
    let ell = dist_unchecked(&check.coords[i], &check.coords[j]);
    run.windows(2)
        .map(|w| (dist_unchecked(&check.coords[w[0]], &check.coords[w[1]]) / ell, w[0], w[1]))
        .max_by(|a, b| a.0.total_cmp(&b.0))
        .expect("run has two ends")
}
