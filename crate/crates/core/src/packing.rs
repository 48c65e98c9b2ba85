//! r-packings (nets) of finite point sets and of the unit sphere.
//!
//! All constructions are greedy in input-scan order: a point is accepted iff
//! it is farther than `r` from every point accepted before it. The result is
//! `r`-separated by construction and `r`-covers the input because every
//! rejected point had an accepted point within `r`.

use std::collections::HashMap;

use crate::error::{param, Error, Result};
use crate::geometry::{dist2_unchecked, norm, Direction, MAX_DIM};

/// An `r`-separated, `r`-covering subset of some ground set.
#[derive(Clone, Debug, PartialEq)]
pub struct Packing {
    pub points: Vec<Vec<f64>>,
    pub radius: f64,
    /// Number of ground-set points the packing was extracted from.
    pub source_size: usize,
}

impl Packing {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Directions whose pairwise distance exceeds `resolution`, covering the
/// sphere up to `resolution`.
#[derive(Clone, Debug)]
pub struct DirectionNet {
    pub directions: Vec<Direction>,
    pub resolution: f64,
}

/// Accept-iff-far greedy, returning indices of accepted points.
///
/// Low dimensions use a hash grid of side `r`; the accepted set is identical
/// to the quadratic scan because the acceptance rule does not change.
pub(crate) fn greedy_indices(points: &[Vec<f64>], r: f64) -> Vec<usize> {
    let r2 = r * r;
    let d = points.first().map_or(0, |p| p.len());
    let mut accepted = Vec::new();
    if d > 3 || points.len() < 64 {
        for (i, p) in points.iter().enumerate() {
            if accepted
                .iter()
                .all(|&j: &usize| dist2_unchecked(p, &points[j]) > r2)
            {
                accepted.push(i);
            }
        }
        return accepted;
    }
    let key = |p: &[f64]| -> Vec<i64> { p.iter().map(|x| (x / r).floor() as i64).collect() };
    let mut grid: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    let offsets: Vec<Vec<i64>> = neighbor_offsets(d);
    for (i, p) in points.iter().enumerate() {
        let k = key(p);
        let far = offsets.iter().all(|off| {
            let nk: Vec<i64> = k.iter().zip(off).map(|(a, b)| a + b).collect();
            grid.get(&nk).is_none_or(|bucket| {
                bucket
                    .iter()
                    .all(|&j| dist2_unchecked(p, &points[j]) > r2)
            })
        });
        if far {
            accepted.push(i);
            grid.entry(k).or_default().push(i);
        }
    }
    accepted
}

fn neighbor_offsets(d: usize) -> Vec<Vec<i64>> {
    let mut out = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-1..=1).map(move |o| {
                    let mut w = v.clone();
                    w.push(o);
                    w
                })
            })
            .collect();
    }
    out
}

/// Greedy `r`-packing of `points` in scan order.
pub fn greedy_packing(points: &[Vec<f64>], r: f64) -> Result<Packing> {
    if points.is_empty() {
        return Err(Error::Empty);
    }
    if !(r > 0.0) {
        return Err(param(format!("packing radius must be positive, got {r}")));
    }
    let idx = greedy_indices(points, r);
    Ok(Packing {
        points: idx.into_iter().map(|i| points[i].clone()).collect(),
        radius: r,
        source_size: points.len(),
    })
}

/// Upper bound `C_d / r^(d-1)` on the size of any `r`-separated subset of
/// the unit sphere, with `C_d = d * 2^d * 1.5^(d-1)`.
///
/// Balls of radius `r/2` around the points are disjoint and sit inside the
/// shell of radii `1 ± r/2`; the constant is that volume ratio bounded for
/// `r < 1`.
pub fn sphere_packing_bound(d: usize, r: f64) -> f64 {
    let d_f = d as f64;
    d_f * 2f64.powi(d as i32) * 1.5f64.powi(d as i32 - 1) / r.powi(d as i32 - 1)
}

/// Cap on the number of grid cells scanned when building a sphere packing.
const SPHERE_GRID_CAP: f64 = 6.0e7;

/// Points on the unit sphere, one per grid cell of side `side` that meets the
/// sphere: the cell center pushed radially onto the sphere.
fn sphere_candidates(d: usize, side: f64) -> Result<Vec<Vec<f64>>> {
    let k = (1.0 / side).ceil() as i64 + 1;
    let cells = (2.0 * k as f64).powi(d as i32);
    if cells > SPHERE_GRID_CAP {
        return Err(Error::TooLarge(format!(
            "sphere grid with {cells:.0} cells (d = {d}, side = {side})"
        )));
    }
    let mut out = Vec::new();
    let mut idx = vec![-k; d];
    loop {
        let (mut near, mut far) = (0.0, 0.0);
        for &i in &idx {
            let lo = i as f64 * side;
            let hi = lo + side;
            let n = if lo > 0.0 {
                lo
            } else if hi < 0.0 {
                -hi
            } else {
                0.0
            };
            let f = lo.abs().max(hi.abs());
            near += n * n;
            far += f * f;
        }
        if near <= 1.0 && far >= 1.0 {
            let c: Vec<f64> = idx.iter().map(|&i| (i as f64 + 0.5) * side).collect();
            let n = norm(&c);
            out.push(c.iter().map(|x| x / n).collect());
        }
        // odometer increment
        let mut j = 0;
        loop {
            if j == d {
                return Ok(out);
            }
            idx[j] += 1;
            if idx[j] < k {
                break;
            }
            idx[j] = -k;
            j += 1;
        }
    }
}

/// An `r`-packing of the unit sphere in `R^d`.
///
/// Grid cells of side `r/√d` meeting the sphere each contribute the radially
/// projected cell center; these `r`-cover the sphere and are greedily thinned
/// to `r`-separation. A second pass over a grid four times finer adds every
/// candidate still farther than `r` from the set, which shrinks the residual
/// coverage gaps of the thinning step without breaking separation.
///
/// Maximality holds over the candidates, so every point of the sphere is
/// within `5r/4` of the packing (the fine candidates are `r/4`-dense).
pub fn sphere_packing(d: usize, r: f64) -> Result<Packing> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::Dimension(d));
    }
    if !(r > 0.0 && r < 1.0) {
        return Err(param(format!("sphere packing radius must be in (0,1), got {r}")));
    }
    if d == 1 {
        return Ok(Packing {
            points: vec![vec![-1.0], vec![1.0]],
            radius: r,
            source_size: 2,
        });
    }
    let side = r / (d as f64).sqrt();
    let mut cand = sphere_candidates(d, side)?;
    let first = cand.len();
    let fine = sphere_candidates(d, side / 4.0).unwrap_or_default();
    cand.extend(fine);
    let idx = greedy_indices(&cand, r);
    Ok(Packing {
        points: idx.into_iter().map(|i| cand[i].clone()).collect(),
        radius: r,
        source_size: first,
    })
}

/// Directions such that every pair at distance `≤ big_r` has some direction
/// with projected distance `≤ tau`: a sphere packing at `min(tau/big_r, 1/4)`.
pub fn direction_net(big_r: f64, tau: f64, d: usize) -> Result<DirectionNet> {
    if !(tau > 0.0 && big_r > tau) {
        return Err(param(format!("direction net needs R > tau > 0 (R = {big_r}, tau = {tau})")));
    }
    let resolution = (tau / big_r).min(0.25);
    let pack = sphere_packing(d, resolution)?;
    let directions = pack
        .points
        .iter()
        .map(|p| Direction::normalize(p))
        .collect::<Result<Vec<_>>>()?;
    Ok(DirectionNet {
        directions,
        resolution,
    })
}

/// Splits an `r`-packing into `big_r`-separated groups by repeatedly
/// extracting a greedy `big_r`-packing of what is left.
///
/// Groups hold indices into `net.points`, each group in scan order.
pub fn separated_partition(net: &Packing, big_r: f64) -> Result<Vec<Vec<usize>>> {
    if !(big_r > net.radius) {
        return Err(param(format!(
            "partition radius {big_r} must exceed packing radius {}",
            net.radius
        )));
    }
    partition_indices(&net.points, big_r)
}

pub(crate) fn partition_indices(points: &[Vec<f64>], big_r: f64) -> Result<Vec<Vec<usize>>> {
    let mut remaining: Vec<usize> = (0..points.len()).collect();
    let mut groups = Vec::new();
    while !remaining.is_empty() {
        let sub: Vec<Vec<f64>> = remaining.iter().map(|&i| points[i].clone()).collect();
        let picked = greedy_indices(&sub, big_r);
        let mut take = vec![false; remaining.len()];
        for &k in &picked {
            take[k] = true;
        }
        groups.push(picked.iter().map(|&k| remaining[k]).collect());
        remaining = remaining
            .iter()
            .zip(&take)
            .filter(|(_, &t)| !t)
            .map(|(&i, _)| i)
            .collect();
    }
    Ok(groups)
}

/// Bound on the group count of [`separated_partition`]: `3^d (R/r)^d`.
///
/// A point landing in group `i` is within `R` of a point of each earlier
/// group, and `r`-separated points in a ball of radius `R` number at most
/// `(2R/r + 1)^d ≤ 3^d (R/r)^d`.
pub fn partition_bound(d: usize, r: f64, big_r: f64) -> f64 {
    3f64.powi(d as i32) * (big_r / r).powi(d as i32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::dist_unchecked;
    use crate::rng::SplitMix64;

    fn assert_packing(ground: &[Vec<f64>], pack: &Packing) {
        for (i, a) in pack.points.iter().enumerate() {
            for b in &pack.points[i + 1..] {
                assert!(dist_unchecked(a, b) > pack.radius, "separation");
            }
        }
        for p in ground {
            assert!(
                pack.points.iter().any(|q| dist_unchecked(p, q) <= pack.radius),
                "covering"
            );
        }
    }

    fn random_vecs(seed: u64, n: usize, d: usize, scale: f64) -> Vec<Vec<f64>> {
        let mut rng = SplitMix64::new(seed);
        (0..n)
            .map(|_| (0..d).map(|_| rng.next_f64() * scale).collect())
            .collect()
    }

    fn random_unit(rng: &mut SplitMix64, d: usize) -> Vec<f64> {
        // Gaussian via Box-Muller, then normalized.
        loop {
            let v: Vec<f64> = (0..d)
                .map(|_| {
                    let u1 = rng.next_f64().max(1e-300);
                    let u2 = rng.next_f64();
                    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
                })
                .collect();
            let n = norm(&v);
            if n > 1e-9 {
                return v.iter().map(|x| x / n).collect();
            }
        }
    }

    #[test]
    fn greedy_examples() {
        let single = vec![vec![0.3, 0.3]];
        assert_eq!(greedy_packing(&single, 0.5).unwrap().points, single);

        let line = vec![vec![0.0], vec![0.5], vec![1.0]];
        let p = greedy_packing(&line, 0.6).unwrap();
        assert_eq!(p.points, vec![vec![0.0], vec![1.0]]);

        assert_eq!(greedy_packing(&[], 0.1), Err(Error::Empty));
        assert!(greedy_packing(&line, 0.0).is_err());
    }

    #[test]
    fn greedy_random_is_packing() {
        let pts = random_vecs(3, 100, 2, 1.0);
        let p = greedy_packing(&pts, 0.1).unwrap();
        assert_packing(&pts, &p);
        // hashed path agrees with the quadratic scan
        let big = random_vecs(4, 2000, 2, 1.0);
        let hashed = greedy_indices(&big, 0.05);
        let mut plain = Vec::new();
        for (i, q) in big.iter().enumerate() {
            if plain.iter().all(|&j: &usize| dist_unchecked(q, &big[j]) > 0.05) {
                plain.push(i);
            }
        }
        assert_eq!(hashed, plain);
        assert_packing(&big, &greedy_packing(&big, 0.05).unwrap());
    }

    #[test]
    fn sphere_examples() {
        let s = sphere_packing(1, 0.5).unwrap();
        assert_eq!(s.points, vec![vec![-1.0], vec![1.0]]);
        assert!(sphere_packing(2, 1.9).is_err());
        assert!(sphere_packing(2, 0.0).is_err());

        let s = sphere_packing(2, 0.1).unwrap();
        assert!((32..=63).contains(&s.len()), "got {}", s.len());
    }

    fn check_sphere(d: usize, r: f64, seed: u64) -> usize {
        let s = sphere_packing(d, r).unwrap();
        for p in &s.points {
            assert!((norm(p) - 1.0).abs() <= 1e-9);
        }
        for (i, a) in s.points.iter().enumerate() {
            for b in &s.points[i + 1..] {
                assert!(dist_unchecked(a, b) > r);
            }
        }
        assert!((s.len() as f64) <= sphere_packing_bound(d, r));
        let mut rng = SplitMix64::new(seed);
        for _ in 0..10_000 {
            let u = random_unit(&mut rng, d);
            assert!(
                s.points.iter().any(|p| dist_unchecked(p, &u) <= 1.25 * r),
                "uncovered sample {u:?}"
            );
        }
        s.len()
    }

    #[test]
    fn sphere_packings_cover_and_separate() {
        for (d, r) in [(2, 0.1), (2, 0.03), (3, 0.25), (3, 0.125), (4, 0.5)] {
            check_sphere(d, r, 11 + d as u64);
        }
    }

    #[test]
    fn sphere_growth_envelope() {
        for d in [2usize, 3] {
            let a = sphere_packing(d, 1.0 / 8.0).unwrap().len() as f64;
            let b = sphere_packing(d, 1.0 / 16.0).unwrap().len() as f64;
            let ratio = b / a;
            let lo = 2f64.powi(d as i32 - 2);
            let hi = 2f64.powi(d as i32 + 1);
            assert!(ratio >= lo && ratio <= hi, "d={d} ratio {ratio}");
        }
    }

    #[test]
    fn direction_net_examples() {
        assert!(direction_net(1.0, 1.0, 2).is_err());
        let net = direction_net(4.0, 2.0, 2).unwrap();
        assert_eq!(net.resolution, 0.25);
        assert!((net.directions.len() as f64) <= sphere_packing_bound(2, 0.25));

        let net = direction_net(10.0, 1.0, 2).unwrap();
        let mut rng = SplitMix64::new(99);
        for _ in 0..10_000 {
            let p = [rng.next_f64() * 10.0, rng.next_f64() * 10.0];
            let ang = rng.next_f64() * 2.0 * std::f64::consts::PI;
            let len = rng.next_f64() * 10.0;
            let q = [p[0] + len * ang.cos(), p[1] + len * ang.sin()];
            let best = net
                .directions
                .iter()
                .map(|v| crate::geometry::projected_dist(v, &p, &q).unwrap())
                .fold(f64::INFINITY, f64::min);
            assert!(best <= 1.0, "no witness direction: {best}");
        }
    }

    #[test]
    fn partition_examples() {
        let one = Packing {
            points: vec![vec![0.5]],
            radius: 0.1,
            source_size: 1,
        };
        assert_eq!(separated_partition(&one, 1.0).unwrap(), vec![vec![0]]);

        let line = Packing {
            points: vec![vec![0.0], vec![1.0], vec![2.0], vec![3.0]],
            radius: 0.9,
            source_size: 4,
        };
        assert_eq!(
            separated_partition(&line, 1.5).unwrap(),
            vec![vec![0, 2], vec![1, 3]]
        );
        assert!(separated_partition(&line, 0.9).is_err());
    }

    #[test]
    fn partition_random() {
        let ground = random_vecs(5, 4000, 2, 60.0);
        let net = greedy_packing(&ground, 2.0).unwrap();
        let net = Packing {
            points: net.points.into_iter().take(200).collect(),
            ..net
        };
        let groups = separated_partition(&net, 6.0).unwrap();
        let mut all: Vec<usize> = groups.iter().flatten().copied().collect();
        all.sort_unstable();
        assert_eq!(all, (0..net.len()).collect::<Vec<_>>());
        for g in &groups {
            for (i, &a) in g.iter().enumerate() {
                for &b in &g[i + 1..] {
                    assert!(dist_unchecked(&net.points[a], &net.points[b]) > 6.0);
                }
            }
        }
        assert!((groups.len() as f64) <= partition_bound(2, 2.0, 6.0));
    }
}
