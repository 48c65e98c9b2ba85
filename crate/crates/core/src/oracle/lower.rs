use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::geometry::{dist_point_segment_unchecked, dist_unchecked};
use crate::lso::build_gap;
use crate::packing::sphere_packing;

use super::TOL;

/// The integer grid `{1..m}^d` with `m = ⌊1/(εd)⌋`, on which no pair has a
/// third point within `εℓ` of either end, so every pair needs its own
/// adjacency.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridLowerBound {
    pub m: usize,
    /// Points rescaled into the unit cube by `x / (m+1)`.
    pub points: Vec<Vec<f64>>,
    pub premise_holds: bool,
    /// First pair and third point breaking the premise, as point indices.
    pub violation: Option<(usize, usize, usize)>,
    /// `m^d / 2` orderings are needed.
    pub bound: f64,
}

pub fn lower_bound_grid_instance(eps: f64, d: usize) -> Result<GridLowerBound> {
    if !(eps > 0.0) || d == 0 {
        return Err(param("need eps > 0 and d ≥ 1"));
    }
    let m = (1.0 / (eps * d as f64)).floor() as usize;
    if m < 2 {
        return Err(param(format!("grid side m = {m} below 2")));
    }
    let count = m.checked_pow(d as u32).filter(|&c| c <= 100_000);
    let count = count.ok_or_else(|| param(format!("{m}^{d} points exceed 10^5")))?;
    let pts: Vec<Vec<f64>> = (0..count)
        .map(|mut i| {
            (0..d)
                .map(|_| {
                    let x = (i % m + 1) as f64;
                    i /= m;
                    x
                })
                .collect()
        })
        .collect();
    let mut violation = None;
    'search: for a in 0..count {
        for b in a + 1..count {
            let r = eps * dist_unchecked(&pts[a], &pts[b]);
            for u in 0..count {
                if u != a
                    && u != b
                    && dist_unchecked(&pts[u], &pts[a]).min(dist_unchecked(&pts[u], &pts[b])) <= r + TOL
                {
                    violation = Some((a, b, u));
                    break 'search;
                }
            }
        }
    }
    let scale = 1.0 / (m + 1) as f64;
    Ok(GridLowerBound {
        m,
        points: pts.iter().map(|p| p.iter().map(|x| x * scale).collect()).collect(),
        premise_holds: violation.is_none(),
        violation,
        bound: count as f64 / 2.0,
    })
}

/// A `4ε`-packing `N` of the unit sphere plus the origin: no point of `N`
/// other than `p` enters the `ε`-hippodrome of the segment from the origin
/// to `p`, so each ordering serves at most two of the pairs `(o, p)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SphereLowerBound {
    /// The packing; the origin is implicit.
    pub packing: Vec<Vec<f64>>,
    pub premise_holds: bool,
    /// Packing point `p` and intruder `u`, as packing indices.
    pub violation: Option<(usize, usize)>,
    /// `|N| / 2` orderings are needed.
    pub bound: f64,
}

pub fn lower_bound_sphere_instance(eps: f64, d: usize) -> Result<SphereLowerBound> {
    if !(eps > 0.0 && 4.0 * eps < 1.0) {
        return Err(param(format!("need 0 < 4 eps < 1, got eps = {eps}")));
    }
    let net = sphere_packing(d, 4.0 * eps)?;
    let origin = vec![0.0; d];
    let mut violation = None;
    'search: for (i, p) in net.points.iter().enumerate() {
        for (j, u) in net.points.iter().enumerate() {
            if i != j && dist_point_segment_unchecked(u, &origin, p) <= eps + TOL {
                violation = Some((i, j));
                break 'search;
            }
        }
    }
    Ok(SphereLowerBound {
        bound: net.len() as f64 / 2.0,
        premise_holds: violation.is_none(),
        violation,
        packing: net.points,
    })
}

/// One row of the family-size versus spanner-size comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpannerBoundRow {
    pub eps: f64,
    pub d: usize,
    pub lambda: u32,
    /// Orderings in the gap family with `γ = 1/8`.
    pub m: usize,
    /// `(1/ε)^(d-1)`, the edges per point any `(1+ε)`-spanner may need.
    pub floor: f64,
    /// `m (n-1)`, the most edges the locality graph can have.
    pub edge_bound: f64,
}

pub fn spanner_edge_lower_bound_report(eps_list: &[f64], d: usize, n: usize) -> Result<Vec<SpannerBoundRow>> {
    eps_list
        .iter()
        .map(|&eps| {
            let f = build_gap(eps, 0.125, d)?;
            Ok(SpannerBoundRow {
                eps,
                d,
                lambda: f.params().lambda,
                m: f.len(),
                floor: (1.0 / eps).powi(d as i32 - 1),
                edge_bound: f.len() as f64 * n.saturating_sub(1) as f64,
            })
        })
        .collect()
}
