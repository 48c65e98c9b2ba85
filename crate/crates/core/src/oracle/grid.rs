use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist_unchecked, segment_meets_box};
use crate::grid_orders::{cell_box, cell_gap, center_of, GapOrderingSet, GridOrderSet, GridOrdering};
use crate::rng::SplitMix64;

use super::TOL;

/// Largest grid the grid checkers accept.
const MAX_CELLS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridReport {
    /// Cell pairs the guarantee applies to.
    pub pairs_checked: usize,
    /// Largest number of orderings tried for one pair.
    pub max_tries: usize,
}

/// A cell pair no ordering serves.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridViolation {
    pub cells: (usize, usize),
    /// Ordering with the fewest bad between-cells.
    pub ordering: usize,
    /// A bad between-cell of that ordering.
    pub witness: usize,
}

struct Ctx<'a> {
    set: &'a GridOrderSet,
    t: usize,
    d: usize,
    centers: Vec<Vec<f64>>,
    boxes: Vec<(Vec<f64>, Vec<f64>)>,
    orders: Vec<GridOrdering>,
}

impl<'a> Ctx<'a> {
    fn new(set: &'a GridOrderSet) -> Result<Self> {
        let (t, d) = (set.t(), set.d());
        let n = set.cells();
        if n > MAX_CELLS {
            return Err(Error::TooLarge(format!("grid check over {n} cells")));
        }
        Ok(Self {
            set,
            t,
            d,
            centers: (0..n).map(|c| center_of(c, t, d)).collect(),
            boxes: (0..n).map(|c| cell_box(c, t, d)).collect(),
            orders: (0..set.len()).map(|i| set.materialize(i)).collect::<Result<_>>()?,
        })
    }

    fn between(&self, o: usize, a: usize, b: usize) -> &[u32] {
        let ord = &self.orders[o];
        let (ra, rb) = (ord.rank(a), ord.rank(b));
        let (lo, hi) = (ra.min(rb), ra.max(rb));
        &ord.order()[lo + 1..hi]
    }

    /// Number of bad between-cells and the first of them.
    fn score(&self, o: usize, a: usize, b: usize, bad: impl Fn(usize) -> bool, diameter: bool) -> (usize, usize) {
        let between = self.between(o, a, b);
        let mut count = 0;
        let mut first = usize::MAX;
        for &c in between {
            if bad(c as usize) {
                count += 1;
                first = first.min(c as usize);
            }
        }
        if count == 0 && diameter {
            let limit = dist_unchecked(&self.centers[a], &self.centers[b]) + TOL;
            'outer: for (i, &c) in between.iter().enumerate() {
                for &e in &between[i + 1..] {
                    if dist_unchecked(&self.centers[c as usize], &self.centers[e as usize]) > limit {
                        count = 1;
                        first = c as usize;
                        break 'outer;
                    }
                }
            }
        }
        (count, first)
    }

    fn stabbed(&self, c: usize, a: usize, b: usize) -> bool {
        let (lo, hi) = &self.boxes[c];
        segment_meets_box(&self.centers[a], &self.centers[b], lo, hi, TOL)
    }

    fn search(
        &self,
        a: usize,
        b: usize,
        bad: impl Fn(usize) -> bool + Copy,
        diameter: bool,
    ) -> std::result::Result<usize, GridViolation> {
        let mut tried = vec![false; self.orders.len()];
        let mut best = (usize::MAX, 0, 0);
        let mut tries = 0;
        let order = self.set.candidates(a, b).into_iter().chain(0..self.orders.len());
        for o in order {
            if std::mem::replace(&mut tried[o], true) {
                continue;
            }
            tries += 1;
            let (count, witness) = self.score(o, a, b, bad, diameter);
            if count == 0 {
                return Ok(tries);
            }
            if count < best.0 {
                best = (count, o, witness);
            }
        }
        Err(GridViolation {
            cells: (a, b),
            ordering: best.1,
            witness: best.2,
        })
    }

    fn run(
        &self,
        qualifies: impl Fn(usize, usize) -> bool + Sync,
        check: impl Fn(usize, usize) -> std::result::Result<usize, GridViolation> + Sync,
    ) -> std::result::Result<GridReport, GridViolation> {
        let n = self.centers.len();
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .filter(|&(a, b)| qualifies(a, b))
            .collect();
        let results: Vec<std::result::Result<usize, GridViolation>> =
            pairs.par_iter().map(|&(a, b)| check(a, b)).collect();
        let mut max_tries = 0;
        for r in results {
            max_tries = max_tries.max(r?);
        }
        Ok(GridReport {
            pairs_checked: pairs.len(),
            max_tries,
        })
    }
}

/// Every cell pair has an ordering whose between-cells all meet the segment
/// joining the pair's centers and are pairwise no farther apart (center to
/// center) than the pair itself.
pub fn verify_grid_conclusion(set: &GridOrderSet) -> Result<std::result::Result<GridReport, GridViolation>> {
    let ctx = Ctx::new(set)?;
    Ok(ctx.run(
        |_, _| true,
        |a, b| ctx.search(a, b, |c| !ctx.stabbed(c, a, b), true),
    ))
}

/// Every cell pair at set distance at least `αΔ` has an ordering whose
/// between-cells all meet the center segment and lie within `(α/4)Δ` of one
/// of the two cells.
pub fn verify_gap_orderings(set: &GapOrderingSet) -> Result<std::result::Result<GridReport, GridViolation>> {
    let ctx = Ctx::new(&set.orders)?;
    let alpha = set.alpha as f64;
    let (t, d) = (ctx.t, ctx.d);
    Ok(ctx.run(
        |a, b| cell_gap(a, b, t, d) >= alpha - TOL,
        |a, b| {
            ctx.search(
                a,
                b,
                |c| {
                    !ctx.stabbed(c, a, b)
                        || cell_gap(c, a, t, d).min(cell_gap(c, b, t, d)) > alpha / 4.0 + TOL
                },
                false,
            )
        },
    ))
}

/// `count` uniformly shuffled orderings of a `t`-grid, for negative controls.
pub fn shuffled_orderings(t: usize, d: usize, count: usize, seed: u64) -> Result<GridOrderSet> {
    let n = t.pow(d as u32);
    let mut rng = SplitMix64::new(seed);
    let orders = (0..count)
        .map(|_| {
            let mut order: Vec<u32> = (0..n as u32).collect();
            for i in (1..n).rev() {
                order.swap(i, rng.below(i as u64 + 1) as usize);
            }
            GridOrdering::from_order(t, d, order)
        })
        .collect::<Result<Vec<_>>>()?;
    GridOrderSet::explicit(t, d, orders)
}
