//! Orderings of `[0,1)^d` built from grid orderings and shifted ε-quadtrees.
//!
//! An ordering is a triple (shift, tree class, grid ordering). Two points are
//! shifted, the ε-quadtree node of the given class where they split is
//! found from their highest differing bit, and the grid ordering decides by
//! the ranks of the two child cells they land in.

mod compare;
mod format;
mod params;

use serde::{Deserialize, Serialize};

pub use compare::{divergence_depth, grid_cell_of};
pub use format::{read_family, write_family, MAGIC};
pub use params::{classic_denominator, desk_lambda, FamilyKind, LsoParams, Resolution};

use crate::error::{Error, Result};
use crate::geometry::{ShiftedPoint, UnitPoint};
use crate::grid_orders::{gap_orderings, GridOrderSet};

/// One ordering of a family: shift, ε-quadtree class and grid ordering.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrderingId {
    pub shift: usize,
    pub tree: usize,
    pub grid: usize,
}

/// Coarse-level structure of a gap family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapInfo {
    pub alpha: usize,
    pub beta: usize,
    pub top_count: usize,
    pub bottom_count: Option<usize>,
}

/// A family of orderings of `[0,1)^d`.
#[derive(Clone, Debug)]
pub struct LsoFamily {
    pub(crate) params: LsoParams,
    pub(crate) orders: GridOrderSet,
    pub(crate) gap: Option<GapInfo>,
}

impl LsoFamily {
    /// A family over arbitrary grid orderings of the `Ɛ`-grid.
    pub fn with_orders(params: LsoParams, orders: GridOrderSet) -> Result<Self> {
        if orders.t() != params.side || orders.d() != params.d {
            return Err(Error::Parameter(format!(
                "grid orderings over a {}-grid in d = {}, family needs {} in d = {}",
                orders.t(),
                orders.d(),
                params.side,
                params.d
            )));
        }
        if orders.is_empty() {
            return Err(Error::Empty);
        }
        Ok(Self {
            params,
            orders,
            gap: None,
        })
    }

    pub fn params(&self) -> &LsoParams {
        &self.params
    }

    pub fn kind(&self) -> FamilyKind {
        self.params.kind
    }

    pub fn grid_orders(&self) -> &GridOrderSet {
        &self.orders
    }

    pub fn gap_info(&self) -> Option<&GapInfo> {
        self.gap.as_ref()
    }

    pub fn d(&self) -> usize {
        self.params.d
    }

    /// Number of orderings, `(D+1)·λ·|grid orderings|`.
    pub fn len(&self) -> usize {
        self.params.shift_count() * self.params.lambda as usize * self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Ordering with flat index `i`, shift-major then tree class.
    pub fn id_at(&self, i: usize) -> Result<OrderingId> {
        if i >= self.len() {
            return Err(Error::InvalidOrdering);
        }
        let g = self.orders.len();
        let l = self.params.lambda as usize;
        Ok(OrderingId {
            shift: i / (l * g),
            tree: i / g % l,
            grid: i % g,
        })
    }

    pub fn index_of(&self, id: OrderingId) -> Result<usize> {
        self.check_id(id)?;
        let g = self.orders.len();
        Ok((id.shift * self.params.lambda as usize + id.tree) * g + id.grid)
    }

    pub fn ids(&self) -> impl Iterator<Item = OrderingId> + '_ {
        (0..self.len()).map(|i| self.id_at(i).expect("in range"))
    }

    pub(crate) fn check_id(&self, id: OrderingId) -> Result<()> {
        if id.shift < self.params.shift_count()
            && id.tree < self.params.lambda as usize
            && id.grid < self.orders.len()
        {
            Ok(())
        } else {
            Err(Error::InvalidOrdering)
        }
    }

    pub(crate) fn check_point(&self, p: &UnitPoint) -> Result<()> {
        if p.dim() == self.params.d {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.params.d,
                got: p.dim(),
            })
        }
    }

    /// `p` shifted by every shift of the family, in shift order.
    pub fn shifted_all(&self, p: &UnitPoint) -> Vec<ShiftedPoint> {
        (0..self.params.shift_count())
            .map(|i| p.shifted(&self.params.shift(i, p.frac_bits())))
            .collect()
    }

    /// Orderings most likely to keep `p` and `q` close, best first: for every
    /// shift and tree class, the grid orderings suggested for the two cells
    /// the points split into. Not exhaustive for explicit grid sets beyond
    /// the first few suggestions per cell pair.
    pub fn witness_candidates(&self, p: &UnitPoint, q: &UnitPoint, per_split: usize) -> Vec<OrderingId> {
        let mut out = Vec::new();
        for shift in 0..self.params.shift_count() {
            for tree in 0..self.params.lambda as usize {
                let Some((a, b)) = self.split_cells(shift, tree, p, q) else {
                    continue;
                };
                for grid in self.orders.candidates(a, b).into_iter().take(per_split) {
                    out.push(OrderingId { shift, tree, grid });
                }
            }
        }
        out
    }
}

/// The classic family at the theorem grid.
pub fn build_classic(eps: f64, d: usize) -> Result<LsoFamily> {
    build_classic_with(eps, d, Resolution::Theorem)
}

/// The classic family: Walecki orderings of the `Ɛ`-grid.
pub fn build_classic_with(eps: f64, d: usize, res: Resolution) -> Result<LsoFamily> {
    let params = LsoParams::classic(eps, d)?.with_resolution(res)?;
    let orders = GridOrderSet::walecki(params.side, d)?;
    LsoFamily::with_orders(params, orders)
}

/// The gap family at the theorem grid.
pub fn build_gap(eps: f64, gamma: f64, d: usize) -> Result<LsoFamily> {
    build_gap_with(eps, gamma, d, Resolution::Theorem)
}

/// The gap family: gap orderings of the `Ɛ`-grid at scale `α`.
pub fn build_gap_with(eps: f64, gamma: f64, d: usize, res: Resolution) -> Result<LsoFamily> {
    let params = LsoParams::gap(eps, gamma, d)?.with_resolution(res)?;
    let set = gap_orderings(params.side, params.alpha, d)?;
    let gap = GapInfo {
        alpha: set.alpha,
        beta: set.beta,
        top_count: set.top_count(),
        bottom_count: set.bottom_count(),
    };
    let mut family = LsoFamily::with_orders(params, set.orders)?;
    family.gap = Some(gap);
    Ok(family)
}

#[cfg(test)]
mod tests {
    use std::cmp::Ordering;

    use super::*;
    use crate::grid_orders::GridOrdering;
    use crate::rng::{uniform_points, SplitMix64};

    #[test]
    fn family_sizes() {
        let f = build_gap(0.5, 0.5, 1).unwrap();
        assert_eq!(f.len(), 3 * 4 * 8);
        let g = f.gap_info().unwrap();
        assert_eq!((g.alpha, g.beta, g.bottom_count), (4, 1, None));

        let f = build_gap(0.25, 0.125, 2).unwrap();
        assert_eq!(f.params().side, 128);
        assert_eq!(f.len(), 3 * 7 * 8192);
        let c = build_classic(0.25, 2).unwrap();
        assert_eq!(c.len(), f.len());

        let f = build_gap_with(0.25, 0.125, 2, Resolution::DeskScale).unwrap();
        assert_eq!(f.len(), 3 * 6 * 2048);
    }

    #[test]
    fn ids_round_trip() {
        let f = build_gap(0.5, 0.5, 1).unwrap();
        for i in 0..f.len() {
            assert_eq!(f.index_of(f.id_at(i).unwrap()).unwrap(), i);
        }
        assert!(f.id_at(f.len()).is_err());
        assert!(f.check_id(OrderingId { shift: 3, tree: 0, grid: 0 }).is_err());
    }

    #[test]
    fn hand_traced_compare() {
        // d = 1, λ = 1, identity table: 0.25 and 0.75 split at depth 1
        let params = LsoParams::gap(0.5, 0.5, 1).unwrap().with_resolution(Resolution::MaxLambda(1)).unwrap();
        let orders = GridOrderSet::explicit(2, 1, vec![GridOrdering::identity(2, 1).unwrap()]).unwrap();
        let f = LsoFamily::with_orders(params, orders).unwrap();
        let p = UnitPoint::from_f64(&[0.25]).unwrap();
        let q = UnitPoint::from_f64(&[0.75]).unwrap();
        let id = OrderingId { shift: 0, tree: 0, grid: 0 };
        assert_eq!(f.compare(id, &p, &q).unwrap(), Ordering::Less);
        assert_eq!(f.compare(id, &q, &p).unwrap(), Ordering::Greater);
        assert_eq!(f.compare(id, &p, &p).unwrap(), Ordering::Equal);
    }

    #[test]
    fn antisymmetric_and_transitive() {
        let f = build_gap_with(0.25, 0.125, 2, Resolution::DeskScale).unwrap();
        let pts = uniform_points(7, 300, 2);
        let mut rng = SplitMix64::new(8);
        for _ in 0..20_000 {
            let id = f.id_at(rng.below(f.len() as u64) as usize).unwrap();
            let [a, b, c] = [0; 3].map(|_| &pts[rng.below(300) as usize]);
            let ab = f.compare(id, a, b).unwrap();
            assert_eq!(ab, f.compare(id, b, a).unwrap().reverse());
            assert_eq!(ab == Ordering::Equal, a == b);
            let bc = f.compare(id, b, c).unwrap();
            if ab == bc && ab != Ordering::Equal {
                assert_eq!(f.compare(id, a, c).unwrap(), ab);
            }
        }
    }

    #[test]
    fn walecki_candidates_make_pairs_adjacent_cells() {
        let f = build_gap_with(0.25, 0.125, 2, Resolution::DeskScale).unwrap();
        let pts = uniform_points(3, 20, 2);
        for p in &pts {
            for q in &pts {
                if p == q {
                    continue;
                }
                let c = f.witness_candidates(p, q, 1);
                assert_eq!(c.len(), f.params().shift_count() * f.params().lambda as usize);
                for id in c {
                    let (a, b) = f.split_cells(id.shift, id.tree, p, q).unwrap();
                    let g = f.grid_orders();
                    assert_eq!(g.rank(id.grid, a).abs_diff(g.rank(id.grid, b)), 1);
                }
            }
        }
    }

    #[test]
    fn dimension_checked() {
        let f = build_gap(0.5, 0.5, 1).unwrap();
        let p = UnitPoint::from_f64(&[0.1, 0.2]).unwrap();
        let id = f.id_at(0).unwrap();
        assert!(matches!(f.compare(id, &p, &p), Err(Error::DimensionMismatch { .. })));
    }
}
