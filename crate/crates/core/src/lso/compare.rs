//! Bit-level comparison of two points under one ordering of a family.
//!
//! Coordinates of a shifted point have one integer bit and `W` fractional
//! bits. The regular quadtree over `[0,2)^d` has its root at depth 0 and
//! cells of side `2^(1-k)` at depth `k`; the bit with index `W - k` tells
//! which depth-`(k+1)` child a point falls in.

use std::cmp::Ordering;

use crate::error::{param, Error, Result};
use crate::geometry::{ShiftedPoint, UnitPoint};
use crate::grid_orders::CellIndex;

use super::{LsoFamily, OrderingId};

/// Deepest depth at which `p` and `q` share a quadtree cell, or `None` when
/// the points are equal.
pub fn divergence_depth(p: &ShiftedPoint, q: &ShiftedPoint) -> Option<u32> {
    debug_assert_eq!(p.frac_bits(), q.frac_bits());
    let x = fixed_divergence(p.fixed(), q.fixed());
    (x != 0).then(|| p.frac_bits() - (63 - x.leading_zeros()))
}

#[inline]
fn fixed_divergence(p: &[u64], q: &[u64]) -> u64 {
    p.iter().zip(q).fold(0, |acc, (a, b)| acc | (a ^ b))
}

/// Index of `x`'s cell among the `2^lambda` children per axis of its depth
/// `level` ancestor: the bits at depths `level .. level+lambda`. Depths
/// above the root read as 0 and depths below the last stored bit read as 0.
#[inline]
pub(crate) fn child_index(x: u64, frac_bits: u32, level: i64, lambda: u32) -> u64 {
    let s = frac_bits as i64 + 1 - (level + lambda as i64);
    let v = if s >= 64 {
        0
    } else if s >= 0 {
        x >> s
    } else {
        x << (-s).min(63)
    };
    v & ((1u64 << lambda) - 1)
}

/// Cell of `p` in the `2^lambda`-grid subdividing its depth-`level` ancestor.
pub fn grid_cell_of(p: &ShiftedPoint, level: i64, lambda: u32) -> Result<CellIndex> {
    let w = p.frac_bits() as i64;
    if lambda == 0 || lambda > 32 {
        return Err(param(format!("lambda {lambda} out of range")));
    }
    if level < -(lambda as i64) || level > w {
        return Err(param(format!("depth {level} out of range for W = {w}")));
    }
    Ok(CellIndex {
        coords: p
            .fixed()
            .iter()
            .map(|&x| child_index(x, p.frac_bits(), level, lambda) as usize)
            .collect(),
    })
}

/// Depth of the ε-quadtree node of tree class `tree` where the points split:
/// the unique `L ≡ tree (mod λ)` with `L ≤ h < L + λ`.
#[inline]
pub(crate) fn split_level(h: u32, tree: usize, lambda: u32) -> i64 {
    let tree = tree as i64;
    tree + lambda as i64 * (h as i64 - tree).div_euclid(lambda as i64)
}

#[inline]
pub(crate) fn linear_cell(fixed: &[u64], frac_bits: u32, level: i64, lambda: u32) -> usize {
    fixed.iter().rev().fold(0usize, |acc, &x| {
        (acc << lambda) | child_index(x, frac_bits, level, lambda) as usize
    })
}

impl LsoFamily {
    /// Compares `p` and `q` in ordering `id`.
    pub fn compare(&self, id: OrderingId, p: &UnitPoint, q: &UnitPoint) -> Result<Ordering> {
        self.check_id(id)?;
        self.check_point(p)?;
        self.check_point(q)?;
        if p.frac_bits() != q.frac_bits() {
            return Err(param("points differ in fixed-point precision"));
        }
        let shift = self.params.shift(id.shift, p.frac_bits());
        Ok(self.compare_fixed(id, &p.shifted(&shift), &q.shifted(&shift)))
    }

    /// Compares points already shifted by shift `id.shift`.
    pub fn compare_shifted(&self, id: OrderingId, p: &ShiftedPoint, q: &ShiftedPoint) -> Result<Ordering> {
        self.check_id(id)?;
        if p.dim() != self.params.d || q.dim() != self.params.d {
            return Err(Error::DimensionMismatch {
                expected: self.params.d,
                got: if p.dim() != self.params.d { p.dim() } else { q.dim() },
            });
        }
        if p.frac_bits() != q.frac_bits() {
            return Err(param("points differ in fixed-point precision"));
        }
        Ok(self.compare_fixed(id, p, q))
    }

    /// Unchecked comparison of shifted points.
    #[inline]
    pub(crate) fn compare_fixed(&self, id: OrderingId, p: &ShiftedPoint, q: &ShiftedPoint) -> Ordering {
        let (a, b) = (p.fixed(), q.fixed());
        let x = fixed_divergence(a, b);
        if x == 0 {
            return Ordering::Equal;
        }
        let w = p.frac_bits();
        let h = w - (63 - x.leading_zeros());
        let lambda = self.params.lambda;
        let level = split_level(h, id.tree, lambda);
        let ca = linear_cell(a, w, level, lambda);
        let cb = linear_cell(b, w, level, lambda);
        debug_assert_ne!(ca, cb);
        self.orders
            .rank(id.grid, ca)
            .cmp(&self.orders.rank(id.grid, cb))
    }

    /// Cells of the two points in the grid that splits them, for tree class
    /// `tree` under shift `shift`; `None` when the shifted points coincide.
    pub fn split_cells(&self, shift: usize, tree: usize, p: &UnitPoint, q: &UnitPoint) -> Option<(usize, usize)> {
        let s = self.params.shift(shift, p.frac_bits());
        let (sp, sq) = (p.shifted(&s), q.shifted(&s));
        let h = divergence_depth(&sp, &sq)?;
        let w = p.frac_bits();
        let level = split_level(h, tree, self.params.lambda);
        Some((
            linear_cell(sp.fixed(), w, level, self.params.lambda),
            linear_cell(sq.fixed(), w, level, self.params.lambda),
        ))
    }
}
