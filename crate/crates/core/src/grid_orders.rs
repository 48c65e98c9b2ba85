//! Orderings of the cells of a `t`-grid over the unit cube.
//!
//! Three families:
//! - all-pairs orderings from the Walecki decomposition of the complete graph,
//!   where every two cells are adjacent in some ordering;
//! - directional orderings, where every two cells have an ordering whose
//!   cells in between stab the segment joining their centers;
//! - two-level gap orderings composing the two over a coarse and a fine grid.
//!
//! Cells are addressed by their linear index `Σ coords[j] * t^j`.

use std::collections::HashMap;

use crate::error::{param, Error, Result};
use crate::geometry::{dot, project_unchecked, MAX_DIM};
use crate::packing::{direction_net, greedy_indices, partition_indices};

/// Largest number of cells for which orderings are materialized as tables.
pub const MAX_EXPLICIT_CELLS: usize = 1 << 16;

/// Largest total table size (orderings × cells) a construction may allocate.
pub const MAX_TABLE_WORDS: usize = 1 << 27;

/// A cell of a `t`-grid, by per-axis integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CellIndex {
    pub coords: Vec<usize>,
}

impl CellIndex {
    pub fn linear(&self, t: usize) -> usize {
        self.coords.iter().rev().fold(0, |acc, &c| acc * t + c)
    }

    pub fn from_linear(mut idx: usize, t: usize, d: usize) -> Self {
        let mut coords = Vec::with_capacity(d);
        for _ in 0..d {
            coords.push(idx % t);
            idx /= t;
        }
        Self { coords }
    }
}

/// Center of cell `c` in a `t`-grid of the unit cube.
pub fn cell_center(c: &CellIndex, t: usize) -> Vec<f64> {
    c.coords
        .iter()
        .map(|&x| (x as f64 + 0.5) / t as f64)
        .collect()
}

pub(crate) fn center_of(idx: usize, t: usize, d: usize) -> Vec<f64> {
    cell_center(&CellIndex::from_linear(idx, t, d), t)
}

/// Lower and upper corners of a cell in the unit cube.
pub(crate) fn cell_box(idx: usize, t: usize, d: usize) -> (Vec<f64>, Vec<f64>) {
    let c = CellIndex::from_linear(idx, t, d);
    let side = 1.0 / t as f64;
    let lo: Vec<f64> = c.coords.iter().map(|&x| x as f64 * side).collect();
    let hi = lo.iter().map(|x| x + side).collect();
    (lo, hi)
}

/// Euclidean distance between two cells as point sets, in cell-side units.
pub(crate) fn cell_gap(a: usize, b: usize, t: usize, d: usize) -> f64 {
    let (ca, cb) = (CellIndex::from_linear(a, t, d), CellIndex::from_linear(b, t, d));
    ca.coords
        .iter()
        .zip(&cb.coords)
        .map(|(&x, &y)| {
            let g = x.abs_diff(y).saturating_sub(1) as f64;
            g * g
        })
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn cell_count(t: usize, d: usize) -> Result<usize> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::Dimension(d));
    }
    if t == 0 {
        return Err(param("grid side t must be positive"));
    }
    (0..d)
        .try_fold(1usize, |acc, _| acc.checked_mul(t))
        .filter(|&n| n <= 1 << 40)
        .ok_or_else(|| Error::TooLarge(format!("{t}^{d} grid cells")))
}

/// A total order of the cells of a `t`-grid, stored as a rank table and its
/// inverse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GridOrdering {
    t: usize,
    d: usize,
    rank: Vec<u32>,
    order: Vec<u32>,
}

impl GridOrdering {
    /// Builds from the cells listed first to last; must be a permutation.
    pub fn from_order(t: usize, d: usize, order: Vec<u32>) -> Result<Self> {
        let n = cell_count(t, d)?;
        if order.len() != n {
            return Err(param(format!("ordering lists {} of {n} cells", order.len())));
        }
        let mut rank = vec![u32::MAX; n];
        for (pos, &c) in order.iter().enumerate() {
            let slot = rank
                .get_mut(c as usize)
                .ok_or_else(|| param(format!("cell {c} out of range")))?;
            if *slot != u32::MAX {
                return Err(param(format!("cell {c} listed twice")));
            }
            *slot = pos as u32;
        }
        Ok(Self { t, d, rank, order })
    }

    pub fn identity(t: usize, d: usize) -> Result<Self> {
        let n = cell_count(t, d)?;
        Self::from_order(t, d, (0..n as u32).collect())
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.rank.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rank.is_empty()
    }

    #[inline]
    pub fn rank(&self, cell: usize) -> usize {
        self.rank[cell] as usize
    }

    #[inline]
    pub fn cell_at(&self, pos: usize) -> usize {
        self.order[pos] as usize
    }

    pub fn ranks(&self) -> &[u32] {
        &self.rank
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    /// Rank table is a permutation of `0..t^d`.
    pub fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.rank.len()];
        self.rank.iter().all(|&r| {
            let r = r as usize;
            r < seen.len() && !std::mem::replace(&mut seen[r], true)
        })
    }
}

// Walecki zigzag on an even number of vertices `n`: path `j` visits
// j, j+1, j-1, j+2, j-2, ..., j+n/2 (mod n).

#[inline]
fn zigzag_position(n: usize, j: usize, v: usize) -> usize {
    let delta = (v + n - j) % n;
    if delta == 0 {
        0
    } else if delta <= n / 2 {
        2 * delta - 1
    } else {
        2 * (n - delta)
    }
}

#[inline]
fn zigzag_vertex(n: usize, j: usize, pos: usize) -> usize {
    if pos % 2 == 1 {
        (j + pos.div_ceil(2)) % n
    } else {
        (j + n - pos / 2 % n) % n
    }
}

/// The path containing edge `{a, b}`: consecutive pairs of path `j` sum to
/// `2j` or `2j + 1` modulo `n`.
#[inline]
fn zigzag_path_for(n: usize, a: usize, b: usize) -> usize {
    ((a + b) % n) / 2
}

/// The `n/2` Walecki Hamiltonian paths of `K_n` (`n` even); every unordered
/// pair of vertices is adjacent in exactly one of them.
pub fn walecki_orderings(n: usize) -> Result<Vec<Vec<usize>>> {
    if n == 0 || n % 2 == 1 {
        return Err(param(format!("Walecki decomposition needs a positive even n, got {n}")));
    }
    Ok((0..n / 2)
        .map(|j| (0..n).map(|pos| zigzag_vertex(n, j, pos)).collect())
        .collect())
}

/// Walecki paths over the cells of a `t`-grid, materialized.
///
/// An odd cell count gets one dummy vertex that is deleted from every path;
/// deleting a vertex only merges its two neighbors, so no real pair loses
/// adjacency.
pub fn all_pairs_orderings(t: usize, d: usize) -> Result<Vec<GridOrdering>> {
    let set = GridOrderSet::walecki(t, d)?;
    let n = set.cells();
    if n > MAX_EXPLICIT_CELLS || set.len().saturating_mul(n) > MAX_TABLE_WORDS {
        return Err(Error::TooLarge(format!("{} all-pairs tables of {n} cells", set.len())));
    }
    (0..set.len()).map(|i| set.materialize(i)).collect()
}

/// A set of grid orderings, either implicit (Walecki) or stored as tables.
#[derive(Clone, Debug)]
pub enum GridOrderSet {
    /// Walecki paths over `t^d` cells, with rank computed on demand.
    Walecki { t: usize, d: usize },
    /// Arbitrary explicit tables.
    Explicit {
        t: usize,
        d: usize,
        orders: Vec<GridOrdering>,
    },
    /// Directional orderings; `lines` lists, per direction, the orderings it
    /// produced.
    Directional {
        t: usize,
        d: usize,
        orders: Vec<GridOrdering>,
        lines: Vec<(Vec<f64>, Vec<usize>)>,
    },
    /// Two-level orderings: ordering `i * bottom_count + k` pairs coarse
    /// Walecki path `i` over the `(t/beta)^d` grid with fine ordering `k`.
    Composed {
        t: usize,
        d: usize,
        beta: usize,
        bottom_count: usize,
        orders: Vec<GridOrdering>,
    },
}

impl GridOrderSet {
    pub fn walecki(t: usize, d: usize) -> Result<Self> {
        cell_count(t, d)?;
        Ok(Self::Walecki { t, d })
    }

    pub fn explicit(t: usize, d: usize, orders: Vec<GridOrdering>) -> Result<Self> {
        let n = cell_count(t, d)?;
        if orders.is_empty() {
            return Err(Error::Empty);
        }
        if let Some(o) = orders.iter().find(|o| o.t != t || o.d != d || o.len() != n) {
            return Err(param(format!(
                "ordering over a {}-grid in d = {} does not match {t}-grid in d = {d}",
                o.t, o.d
            )));
        }
        Ok(Self::Explicit { t, d, orders })
    }

    pub fn t(&self) -> usize {
        match self {
            Self::Walecki { t, .. }
            | Self::Explicit { t, .. }
            | Self::Directional { t, .. }
            | Self::Composed { t, .. } => *t,
        }
    }

    pub fn d(&self) -> usize {
        match self {
            Self::Walecki { d, .. }
            | Self::Explicit { d, .. }
            | Self::Directional { d, .. }
            | Self::Composed { d, .. } => *d,
        }
    }

    pub fn cells(&self) -> usize {
        self.t().pow(self.d() as u32)
    }

    fn padded(&self) -> usize {
        let n = self.cells();
        n + n % 2
    }

    pub fn len(&self) -> usize {
        match self {
            Self::Walecki { .. } => self.padded() / 2,
            Self::Explicit { orders, .. }
            | Self::Directional { orders, .. }
            | Self::Composed { orders, .. } => orders.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_implicit(&self) -> bool {
        matches!(self, Self::Walecki { .. })
    }

    /// Position of `cell` in ordering `idx`.
    #[inline]
    pub fn rank(&self, idx: usize, cell: usize) -> usize {
        match self {
            Self::Walecki { .. } => {
                let n = self.cells();
                let big = self.padded();
                let p = zigzag_position(big, idx, cell);
                if big == n {
                    p
                } else {
                    let dummy = zigzag_position(big, idx, n);
                    p - usize::from(p > dummy)
                }
            }
            Self::Explicit { orders, .. }
            | Self::Directional { orders, .. }
            | Self::Composed { orders, .. } => orders[idx].rank(cell),
        }
    }

    /// Cell at position `pos` of ordering `idx`.
    pub fn cell_at(&self, idx: usize, pos: usize) -> usize {
        match self {
            Self::Walecki { .. } => {
                let n = self.cells();
                let big = self.padded();
                let pos = if big == n {
                    pos
                } else {
                    let dummy = zigzag_position(big, idx, n);
                    pos + usize::from(pos >= dummy)
                };
                zigzag_vertex(big, idx, pos)
            }
            Self::Explicit { orders, .. }
            | Self::Directional { orders, .. }
            | Self::Composed { orders, .. } => orders[idx].cell_at(pos),
        }
    }

    pub fn materialize(&self, idx: usize) -> Result<GridOrdering> {
        match self {
            Self::Explicit { orders, .. }
            | Self::Directional { orders, .. }
            | Self::Composed { orders, .. } => Ok(orders[idx].clone()),
            Self::Walecki { t, d } => {
                let n = self.cells();
                if n > MAX_EXPLICIT_CELLS {
                    return Err(Error::TooLarge(format!("table of {n} cells")));
                }
                GridOrdering::from_order(*t, *d, (0..n).map(|p| self.cell_at(idx, p) as u32).collect())
            }
        }
    }

    /// Orderings worth trying first when looking for one that keeps cells
    /// `a` and `b` close: exactly the adjacency path for Walecki sets, the
    /// matching coarse block for composed sets, and for explicit sets every
    /// ordering sorted by how far apart it places the two cells.
    pub fn candidates(&self, a: usize, b: usize) -> Vec<usize> {
        match self {
            Self::Walecki { .. } => {
                if a == b {
                    return vec![0];
                }
                vec![zigzag_path_for(self.padded(), a, b)]
            }
            Self::Composed {
                t,
                d,
                beta,
                bottom_count,
                orders,
            } => {
                let coarse_t = t / beta;
                let parent = |c: usize| {
                    let ci = CellIndex::from_linear(c, *t, *d);
                    CellIndex {
                        coords: ci.coords.iter().map(|x| x / beta).collect(),
                    }
                    .linear(coarse_t)
                };
                let (pa, pb) = (parent(a), parent(b));
                if pa == pb {
                    return (0..orders.len()).collect();
                }
                let coarse = coarse_t.pow(*d as u32);
                let top = zigzag_path_for(coarse + coarse % 2, pa, pb);
                (top * bottom_count..(top + 1) * bottom_count).collect()
            }
            Self::Directional { t, d, orders, lines } => {
                if lines.is_empty() {
                    return (0..orders.len()).collect();
                }
                let (ca, cb) = (center_of(a, *t, *d), center_of(b, *t, *d));
                let diff: Vec<f64> = cb.iter().zip(&ca).map(|(x, y)| x - y).collect();
                let mut by_angle: Vec<(f64, usize)> = lines
                    .iter()
                    .enumerate()
                    .map(|(i, (v, _))| (-dot(v, &diff).abs(), i))
                    .collect();
                by_angle.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
                let mut used = vec![false; orders.len()];
                let mut out = Vec::new();
                for (_, i) in by_angle {
                    for &o in &lines[i].1 {
                        if !std::mem::replace(&mut used[o], true) {
                            out.push(o);
                        }
                    }
                }
                out.extend((0..orders.len()).filter(|&o| !used[o]));
                out
            }
            Self::Explicit { orders, .. } => {
                let mut idx: Vec<usize> = (0..orders.len()).collect();
                idx.sort_by_key(|&i| orders[i].rank(a).abs_diff(orders[i].rank(b)));
                idx
            }
        }
    }
}

/// Where directional orderings take their directions from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DirectionSource {
    /// Directions realized by pairs of cell centers, thinned to the net
    /// resolution. Every pair of cells is served by an exact direction.
    #[default]
    CellPairs,
    /// A packing of the whole unit sphere at the net resolution.
    SphereNet,
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Primitive integer vectors with entries in `(-t, t)`, first nonzero entry
/// positive: the directions between cell centers, up to sign.
fn lattice_directions(t: usize, d: usize) -> Vec<Vec<f64>> {
    let k = t as i64 - 1;
    let mut out = Vec::new();
    let mut v = vec![-k; d];
    if k == 0 {
        return out;
    }
    loop {
        let first = v.iter().find(|&&x| x != 0).copied();
        if first.is_some_and(|f| f > 0) && v.iter().fold(0, |g, &x| gcd(g, x)) == 1 {
            let n = (v.iter().map(|&x| (x * x) as f64).sum::<f64>()).sqrt();
            out.push(v.iter().map(|&x| x as f64 / n).collect());
        }
        let mut j = 0;
        loop {
            if j == d {
                return out;
            }
            v[j] += 1;
            if v[j] <= k {
                break;
            }
            v[j] = -k;
            j += 1;
        }
    }
}

/// Directional orderings of a `t`-grid over the unit cube.
///
/// With cell side `Δ = 1/t`, `τ = Δ/(8d)`, `R = √d` and `ψ = 2√d Δ`: for each
/// direction `v` of a `τ/2`-resolution net, the projected centers are thinned
/// to a `τ/2`-packing, split into `ψ`-separated groups, and each group yields
/// one ordering. For every group point in scan order, the cells whose centers
/// lie within `τ` of the line through it along `v` are appended sorted by
/// their coordinate along `v` (ties by linear index); untouched cells follow
/// in ascending linear index. Since `τ < Δ/2`, a center within `τ` of the
/// line means the line stabs the cell.
///
/// Duplicate orderings are dropped, keeping the first occurrence.
///
/// Lattice directions are finer than the net resolution until `t` is in the
/// thousands, so with [`DirectionSource::CellPairs`] the count grows like
/// `t^d` at practical sizes: 82, 801 and 8071 orderings for `t = 4, 8, 16`
/// in the plane.
pub fn directional_orderings(t: usize, d: usize) -> Result<Vec<GridOrdering>> {
    directional_orderings_with(t, d, DirectionSource::default())
}

pub fn directional_orderings_with(
    t: usize,
    d: usize,
    source: DirectionSource,
) -> Result<Vec<GridOrdering>> {
    match directional_set(t, d, source)? {
        GridOrderSet::Directional { orders, .. } => Ok(orders),
        _ => unreachable!(),
    }
}

/// Directional orderings together with the direction each came from, so
/// that searches can try the orderings aligned with a pair first.
pub fn directional_set(t: usize, d: usize, source: DirectionSource) -> Result<GridOrderSet> {
    let n = cell_count(t, d)?;
    if n > MAX_EXPLICIT_CELLS {
        return Err(Error::TooLarge(format!("directional orderings over {n} cells")));
    }
    if t == 1 {
        return Ok(GridOrderSet::Directional {
            t,
            d,
            orders: vec![GridOrdering::identity(t, d)?],
            lines: Vec::new(),
        });
    }
    let delta = 1.0 / t as f64;
    let tau = delta / (8.0 * d as f64);
    let big_r = (d as f64).sqrt();
    let psi = 2.0 * (d as f64).sqrt() * delta;

    let directions: Vec<Vec<f64>> = match source {
        DirectionSource::SphereNet => direction_net(big_r, tau / 2.0, d)?
            .directions
            .into_iter()
            .map(|v| v.components().to_vec())
            .collect(),
        DirectionSource::CellPairs => {
            let all = lattice_directions(t, d);
            let resolution = (tau / 2.0 / big_r).min(0.25);
            greedy_indices(&all, resolution)
                .into_iter()
                .map(|i| all[i].clone())
                .collect()
        }
    };

    let centers: Vec<Vec<f64>> = (0..n).map(|c| center_of(c, t, d)).collect();
    let mut seen: HashMap<Vec<u32>, usize> = HashMap::new();
    let mut orders = Vec::new();
    let mut lines = Vec::with_capacity(directions.len());
    for v in directions {
        let mut mine = Vec::new();
        for order in orderings_for_direction(&v, &centers, tau, psi) {
            let next = orders.len();
            let idx = *seen.entry(order.clone()).or_insert(next);
            if idx == next {
                if orders.len().saturating_mul(n) > MAX_TABLE_WORDS {
                    return Err(Error::TooLarge(format!("over {} directional tables", orders.len())));
                }
                orders.push(GridOrdering::from_order(t, d, order)?);
            }
            mine.push(idx);
        }
        lines.push((v, mine));
    }
    if orders.is_empty() {
        orders.push(GridOrdering::identity(t, d)?);
    }
    Ok(GridOrderSet::Directional { t, d, orders, lines })
}

fn orderings_for_direction(v: &[f64], centers: &[Vec<f64>], tau: f64, psi: f64) -> Vec<Vec<u32>> {
    let n = centers.len();
    let proj: Vec<Vec<f64>> = centers.iter().map(|c| project_unchecked(v, c)).collect();
    let along: Vec<f64> = centers.iter().map(|c| dot(c, v)).collect();
    let net_idx = greedy_indices(&proj, tau / 2.0);
    let net: Vec<Vec<f64>> = net_idx.iter().map(|&i| proj[i].clone()).collect();

    // cells within tau of each net line, via a hash grid of side tau
    let key = |p: &[f64]| -> Vec<i64> { p.iter().map(|x| (x / tau).floor() as i64).collect() };
    let mut buckets: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (c, p) in proj.iter().enumerate() {
        buckets.entry(key(p)).or_default().push(c);
    }
    let offsets = offsets(v.len());
    let tau2 = tau * tau;
    let near: Vec<Vec<usize>> = net
        .iter()
        .map(|p| {
            let k = key(p);
            let mut cells: Vec<usize> = offsets
                .iter()
                .filter_map(|o| {
                    let nk: Vec<i64> = k.iter().zip(o).map(|(a, b)| a + b).collect();
                    buckets.get(&nk)
                })
                .flatten()
                .copied()
                .filter(|&c| crate::geometry::dist2_unchecked(&proj[c], p) <= tau2)
                .collect();
            cells.sort_by(|&a, &b| along[a].total_cmp(&along[b]).then(a.cmp(&b)));
            cells
        })
        .collect();

    let groups = partition_indices(&net, psi).expect("psi exceeds the net radius");
    groups
        .iter()
        .map(|group| {
            let mut used = vec![false; n];
            let mut order = Vec::with_capacity(n);
            for &g in group {
                for &c in &near[g] {
                    assert!(!used[c], "cell {c} stabbed by two lines of one group");
                    used[c] = true;
                    order.push(c as u32);
                }
            }
            order.extend((0..n).filter(|&c| !used[c]).map(|c| c as u32));
            order
        })
        .collect()
}

fn offsets(d: usize) -> Vec<Vec<i64>> {
    (0..3usize.pow(d as u32))
        .map(|mut k| {
            (0..d)
                .map(|_| {
                    let o = (k % 3) as i64 - 1;
                    k /= 3;
                    o
                })
                .collect()
        })
        .collect()
}

/// Two-level orderings with a gap, over a `t`-grid (`t` a power of two).
#[derive(Clone, Debug)]
pub struct GapOrderingSet {
    pub t: usize,
    pub alpha: usize,
    pub d: usize,
    /// Side of a coarse cell, in fine cells.
    pub beta: usize,
    top_count: usize,
    bottom_count: Option<usize>,
    pub orders: GridOrderSet,
}

impl GapOrderingSet {
    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }

    pub fn top_count(&self) -> usize {
        self.top_count
    }

    /// Number of fine orderings composed under each coarse one; `None` when
    /// `beta = 1` and the fine orderings never break a tie.
    pub fn bottom_count(&self) -> Option<usize> {
        self.bottom_count
    }

    /// `(coarse ordering, fine ordering)` behind ordering `idx`.
    pub fn provenance(&self, idx: usize) -> (usize, Option<usize>) {
        match self.bottom_count {
            None => (idx, None),
            Some(b) => (idx / b, Some(idx % b)),
        }
    }
}

/// Largest power of two strictly below `⌈α/(8d)⌉`, or 1 when there is none.
pub fn coarse_factor(alpha: usize, d: usize) -> usize {
    let bound = alpha.div_ceil(8 * d);
    let mut beta = 1;
    while beta * 2 < bound {
        beta *= 2;
    }
    beta
}

/// Gap orderings: coarse cells of side `β` are ordered by a Walecki path of
/// the `(t/β)`-grid; inside each coarse cell, fine cells follow a directional
/// ordering or its reverse. Cell `c` sorts by `(coarse rank of c's parent, fine rank of c)`.
///
/// When `β = 1` every coarse cell is a single fine cell, the fine ordering
/// never breaks a tie, and the set is exactly the Walecki set of the grid.
pub fn gap_orderings(t: usize, alpha: usize, d: usize) -> Result<GapOrderingSet> {
    if !t.is_power_of_two() {
        return Err(param(format!("t must be a power of two, got {t}")));
    }
    if alpha == 0 || alpha > t {
        return Err(param(format!("alpha must be in [1, {t}], got {alpha}")));
    }
    cell_count(t, d)?;
    let beta = coarse_factor(alpha, d);
    if beta == 1 {
        let orders = GridOrderSet::walecki(t, d)?;
        return Ok(GapOrderingSet {
            t,
            alpha,
            d,
            beta,
            top_count: orders.len(),
            bottom_count: None,
            orders,
        });
    }
    let coarse_t = t / beta;
    let top = GridOrderSet::walecki(coarse_t, d)?;
    // the coarse path may visit the pair in either direction, so each fine
    // ordering is also used reversed
    let mut bottom = directional_orderings(t, d)?;
    let reversed = bottom
        .iter()
        .map(|o| GridOrdering::from_order(t, d, o.order().iter().rev().copied().collect()))
        .collect::<Result<Vec<_>>>()?;
    bottom.extend(reversed);
    let n = t.pow(d as u32);
    let total = top.len() * bottom.len();
    if total.saturating_mul(n) > MAX_TABLE_WORDS {
        return Err(Error::TooLarge(format!("{total} composed tables of {n} cells")));
    }
    let parents: Vec<usize> = (0..n)
        .map(|c| {
            let ci = CellIndex::from_linear(c, t, d);
            CellIndex {
                coords: ci.coords.iter().map(|x| x / beta).collect(),
            }
            .linear(coarse_t)
        })
        .collect();
    let mut orders = Vec::with_capacity(total);
    for ti in 0..top.len() {
        for b in &bottom {
            let mut cells: Vec<u32> = (0..n as u32).collect();
            cells.sort_by_key(|&c| (top.rank(ti, parents[c as usize]), b.rank(c as usize)));
            orders.push(GridOrdering::from_order(t, d, cells)?);
        }
    }
    Ok(GapOrderingSet {
        t,
        alpha,
        d,
        beta,
        top_count: top.len(),
        bottom_count: Some(bottom.len()),
        orders: GridOrderSet::Composed {
            t,
            d,
            beta,
            bottom_count: bottom.len(),
            orders,
        },
    })
}
