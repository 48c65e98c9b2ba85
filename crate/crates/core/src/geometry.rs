//! Points, distances, hippodromes and projections.
//!
//! Input points live in `[0,1)^d` and are stored as fixed-point fractions so
//! that the ordering comparators can work with exact bit operations. All
//! metric predicates run in `f64`.

use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Default number of fractional bits of a [`UnitPoint`] coordinate.
pub const FRAC_BITS: u32 = 52;

/// Largest supported dimension.
pub const MAX_DIM: usize = 8;

/// Tolerance on the norm of a [`Direction`].
pub const UNIT_TOLERANCE: f64 = 1e-12;

/// A point of `[0,1)^d`; coordinate `j` is `coords[j] / 2^frac_bits`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnitPoint {
    coords: Vec<u64>,
    frac_bits: u32,
}

impl UnitPoint {
    /// Converts real coordinates by truncation, so the result stays below 1.
    pub fn from_f64(coords: &[f64]) -> Result<Self> {
        Self::from_f64_with_bits(coords, FRAC_BITS)
    }

    pub fn from_f64_with_bits(coords: &[f64], frac_bits: u32) -> Result<Self> {
        check_dim(coords.len())?;
        if frac_bits == 0 || frac_bits > FRAC_BITS {
            return Err(Error::Parameter(format!("fractional bits {frac_bits}")));
        }
        let scale = (1u64 << frac_bits) as f64;
        let coords = coords
            .iter()
            .map(|&x| {
                if !(0.0..1.0).contains(&x) {
                    return Err(Error::CoordinateRange(x));
                }
                Ok((x * scale).floor() as u64)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { coords, frac_bits })
    }

    /// Builds a point from raw fixed-point words (each must be `< 2^frac_bits`).
    pub fn from_fixed(coords: Vec<u64>, frac_bits: u32) -> Result<Self> {
        check_dim(coords.len())?;
        if frac_bits == 0 || frac_bits > FRAC_BITS {
            return Err(Error::Parameter(format!("fractional bits {frac_bits}")));
        }
        if let Some(&x) = coords.iter().find(|&&x| x >> frac_bits != 0) {
            return Err(Error::CoordinateRange(x as f64 / (1u64 << frac_bits) as f64));
        }
        Ok(Self { coords, frac_bits })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn fixed(&self) -> &[u64] {
        &self.coords
    }

    pub fn to_f64(&self) -> Vec<f64> {
        let scale = (1u64 << self.frac_bits) as f64;
        self.coords.iter().map(|&x| x as f64 / scale).collect()
    }

    /// Adds a per-coordinate shift given in the same fixed-point scale.
    ///
    /// Shift words must be `< 2^frac_bits`, so the sum stays below 2.
    pub fn shifted(&self, shift: &[u64]) -> ShiftedPoint {
        debug_assert_eq!(shift.len(), self.coords.len());
        ShiftedPoint {
            coords: self
                .coords
                .iter()
                .zip(shift)
                .map(|(&x, &s)| x + s)
                .collect(),
            frac_bits: self.frac_bits,
        }
    }
}

/// A point of `[0,2)^d`: [`FRAC_BITS`] fractional bits plus one integer bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ShiftedPoint {
    coords: Vec<u64>,
    frac_bits: u32,
}

impl ShiftedPoint {
    pub fn from_fixed(coords: Vec<u64>, frac_bits: u32) -> Result<Self> {
        check_dim(coords.len())?;
        if let Some(&x) = coords.iter().find(|&&x| x >> (frac_bits + 1) != 0) {
            return Err(Error::CoordinateRange(x as f64 / (1u64 << frac_bits) as f64));
        }
        Ok(Self { coords, frac_bits })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn frac_bits(&self) -> u32 {
        self.frac_bits
    }

    pub fn fixed(&self) -> &[u64] {
        &self.coords
    }

    /// Exact: every coordinate has at most 53 significant bits.
    pub fn to_f64(&self) -> Vec<f64> {
        let scale = (1u64 << self.frac_bits) as f64;
        self.coords.iter().map(|&x| x as f64 / scale).collect()
    }
}

/// A unit vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Direction {
    components: Vec<f64>,
}

impl Direction {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        let n = norm(&components);
        if (n - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnit(n));
        }
        Ok(Self { components })
    }

    /// Rescales a nonzero vector to unit length.
    pub fn normalize(v: &[f64]) -> Result<Self> {
        let n = norm(v);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::NotUnit(n));
        }
        Ok(Self {
            components: v.iter().map(|x| x / n).collect(),
        })
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }
}

/// The closed segment between `a` and `b` (possibly degenerate).
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

impl Segment {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        same_dim(&a, &b)?;
        Ok(Self { a, b })
    }
}

fn check_dim(d: usize) -> Result<()> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::Dimension(d));
    }
    Ok(())
}

fn same_dim(p: &[f64], q: &[f64]) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch {
            expected: p.len(),
            got: q.len(),
        });
    }
    Ok(())
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn dot(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| a * b).sum()
}

#[inline]
pub(crate) fn dist2_unchecked(p: &[f64], q: &[f64]) -> f64 {
    p.iter().zip(q).map(|(a, b)| (a - b) * (a - b)).sum()
}

#[inline]
pub(crate) fn dist_unchecked(p: &[f64], q: &[f64]) -> f64 {
    dist2_unchecked(p, q).sqrt()
}

pub(crate) fn dist_point_segment_unchecked(u: &[f64], a: &[f64], b: &[f64]) -> f64 {
    let len2 = dist2_unchecked(a, b);
    if len2 == 0.0 {
        return dist_unchecked(u, a);
    }
    let t = u
        .iter()
        .zip(a)
        .zip(b)
        .map(|((u, a), b)| (u - a) * (b - a))
        .sum::<f64>()
        / len2;
    let t = t.clamp(0.0, 1.0);
    u.iter()
        .zip(a)
        .zip(b)
        .map(|((u, a), b)| {
            let foot = a + t * (b - a);
            (u - foot) * (u - foot)
        })
        .sum::<f64>()
        .sqrt()
}

/// Euclidean distance.
pub fn dist(p: &[f64], q: &[f64]) -> Result<f64> {
    same_dim(p, q)?;
    Ok(dist_unchecked(p, q))
}

/// Distance from `u` to the closed segment `s`.
pub fn dist_point_segment(u: &[f64], s: &Segment) -> Result<f64> {
    same_dim(u, &s.a)?;
    Ok(dist_point_segment_unchecked(u, &s.a, &s.b))
}

/// Whether `u` lies in the hippodrome of radius `r` around `s` (boundary included).
pub fn in_hippodrome(u: &[f64], s: &Segment, r: f64) -> bool {
    u.len() == s.a.len() && r >= 0.0 && dist_point_segment_unchecked(u, &s.a, &s.b) <= r + UNIT_TOLERANCE
}

/// Projection onto the hyperplane through the origin orthogonal to `v`.
pub fn project(v: &Direction, p: &[f64]) -> Result<Vec<f64>> {
    same_dim(v.components(), p)?;
    Ok(project_unchecked(v.components(), p))
}

pub(crate) fn project_unchecked(v: &[f64], p: &[f64]) -> Vec<f64> {
    let s = dot(p, v);
    p.iter().zip(v).map(|(x, vx)| x - vx * s).collect()
}

/// Distance between the projections of `p` and `q` along `v`.
pub fn projected_dist(v: &Direction, p: &[f64], q: &[f64]) -> Result<f64> {
    same_dim(p, q)?;
    let diff: Vec<f64> = p.iter().zip(q).map(|(a, b)| a - b).collect();
    Ok(norm(&project(v, &diff)?))
}

/// Whether the segment `ab` meets the box `[lo, hi]` inflated by `tol`.
pub(crate) fn segment_meets_box(a: &[f64], b: &[f64], lo: &[f64], hi: &[f64], tol: f64) -> bool {
    let (mut t0, mut t1) = (0.0f64, 1.0f64);
    for j in 0..a.len() {
        let (l, h) = (lo[j] - tol, hi[j] + tol);
        let dir = b[j] - a[j];
        if dir == 0.0 {
            if a[j] < l || a[j] > h {
                return false;
            }
            continue;
        }
        let (mut ta, mut tb) = ((l - a[j]) / dir, (h - a[j]) / dir);
        if ta > tb {
            std::mem::swap(&mut ta, &mut tb);
        }
        t0 = t0.max(ta);
        t1 = t1.min(tb);
        if t0 > t1 {
            return false;
        }
    }
    true
}

/// Parses the point text format: one point per line, whitespace-separated
/// decimals in `[0,1)`, `#` comments and blank lines ignored.
///
/// When `dim` is `None`, the first point fixes the dimension.
pub fn parse_points(text: &str, dim: Option<usize>) -> Result<Vec<UnitPoint>> {
    let mut out = Vec::new();
    let mut dim = dim;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let coords = line
            .split_whitespace()
            .map(|s| s.parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Parse {
                line: i + 1,
                msg: e.to_string(),
            })?;
        let d = *dim.get_or_insert(coords.len());
        if coords.len() != d {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("expected {d} coordinates, got {}", coords.len()),
            });
        }
        let p = UnitPoint::from_f64(&coords).map_err(|e| Error::Parse {
            line: i + 1,
            msg: e.to_string(),
        })?;
        out.push(p);
    }
    Ok(out)
}

/// Writes real points in the point text format (17 significant digits).
pub fn format_points<P: AsRef<[f64]>>(points: &[P]) -> String {
    let mut s = String::new();
    for p in points {
        let mut first = true;
        for x in p.as_ref() {
            if !first {
                s.push(' ');
            }
            first = false;
            let _ = write!(s, "{x:.17}");
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const EPS: f64 = 1e-12;

    #[test]
    fn dist_examples() {
        assert_eq!(dist(&[0.0, 0.0], &[0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(dist(&[0.0, 0.0], &[3.0, 4.0]).unwrap(), 5.0);
        assert!((dist(&[0.1, 0.2], &[0.4, 0.6]).unwrap() - 0.5).abs() < EPS);
        assert!(matches!(
            dist(&[0.0], &[0.0, 1.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn point_segment_examples() {
        let s = Segment::new(vec![-1.0, 0.0], vec![1.0, 0.0]).unwrap();
        assert_eq!(dist_point_segment(&[0.0, 1.0], &s).unwrap(), 1.0);
        assert_eq!(dist_point_segment(&[2.0, 0.0], &s).unwrap(), 1.0);
        let degenerate = Segment::new(vec![0.0, 0.0], vec![0.0, 0.0]).unwrap();
        let got = dist_point_segment(&[0.5, 0.5], &degenerate).unwrap();
        assert!((got - 0.5f64.sqrt()).abs() < EPS);
    }

    #[test]
    fn hippodrome_examples() {
        let s = Segment::new(vec![-1.0, 0.0], vec![1.0, 0.0]).unwrap();
        assert!(in_hippodrome(&[0.3, 0.0], &s, 0.0));
        assert!(!in_hippodrome(&[0.0, 1.0], &s, 0.5));
        assert!(in_hippodrome(&[0.0, 1.0], &s, 1.0));
    }

    #[test]
    fn projection_examples() {
        let x = Direction::new(vec![1.0, 0.0]).unwrap();
        let y = Direction::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(project(&x, &[3.0, 4.0]).unwrap(), vec![0.0, 4.0]);
        assert_eq!(project(&y, &[3.0, 4.0]).unwrap(), vec![3.0, 0.0]);
        let diag = Direction::normalize(&[1.0, 1.0]).unwrap();
        let p = project(&diag, &[1.0, 0.0]).unwrap();
        assert!((p[0] - 0.5).abs() < 1e-9 && (p[1] + 0.5).abs() < 1e-9);

        assert_eq!(projected_dist(&x, &[0.2, 0.3], &[0.2, 0.3]).unwrap(), 0.0);
        let along = Direction::normalize(&[3.0, 4.0]).unwrap();
        assert!(projected_dist(&along, &[0.0, 0.0], &[3.0, 4.0]).unwrap() < 1e-12);
        assert!((projected_dist(&x, &[0.0, 0.0], &[3.0, 4.0]).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn direction_must_be_unit() {
        assert!(matches!(Direction::new(vec![1.0, 1.0]), Err(Error::NotUnit(_))));
        assert!(Direction::normalize(&[0.0, 0.0]).is_err());
    }

    #[test]
    fn fixed_point_truncates() {
        let p = UnitPoint::from_f64(&[0.5, 0.999_999_999_999_999_9]).unwrap();
        assert_eq!(p.fixed()[0], 1 << 51);
        assert!(p.fixed()[1] < 1 << FRAC_BITS);
        assert!(UnitPoint::from_f64(&[1.0]).is_err());
        assert!(UnitPoint::from_f64(&[-0.1]).is_err());
        assert!(UnitPoint::from_f64(&[0.0; 9]).is_err());
    }

    #[test]
    fn segment_box_test() {
        let lo = [0.0, 0.0];
        let hi = [1.0, 1.0];
        assert!(segment_meets_box(&[-1.0, 0.5], &[2.0, 0.5], &lo, &hi, 0.0));
        assert!(!segment_meets_box(&[-1.0, 1.5], &[2.0, 1.5], &lo, &hi, 0.0));
        // touches the corner only
        assert!(segment_meets_box(&[-1.0, 0.0], &[1.0, 2.0], &lo, &hi, 1e-9));
        assert!(segment_meets_box(&[0.5, 0.5], &[0.5, 0.5], &lo, &hi, 0.0));
    }

    #[test]
    fn point_text_round_trip() {
        let text = "# header\n0.25 0.5\n\n0.75 0.125\n";
        let pts = parse_points(text, None).unwrap();
        assert_eq!(pts.len(), 2);
        let back = parse_points(&format_points(&pts.iter().map(|p| p.to_f64()).collect::<Vec<_>>()), Some(2)).unwrap();
        assert_eq!(pts, back);
        assert!(matches!(
            parse_points("0.1 0.2\n0.3\n", None),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_points("1.5\n", None), Err(Error::Parse { line: 1, .. })));
    }

    fn vec3() -> impl Strategy<Value = Vec<f64>> {
        proptest::collection::vec(-2.0f64..2.0, 3)
    }

    proptest! {
        #[test]
        fn metric_axioms(p in vec3(), q in vec3(), r in vec3()) {
            let pq = dist(&p, &q).unwrap();
            prop_assert_eq!(pq, dist(&q, &p).unwrap());
            prop_assert!(pq <= dist(&p, &r).unwrap() + dist(&r, &q).unwrap() + 1e-12);
        }

        #[test]
        fn projection_idempotent_and_contracting(v in vec3(), p in vec3(), q in vec3()) {
            prop_assume!(norm(&v) > 1e-3);
            let v = Direction::normalize(&v).unwrap();
            let once = project(&v, &p).unwrap();
            let twice = project(&v, &once).unwrap();
            prop_assert!(dist(&once, &twice).unwrap() <= 1e-9);
            prop_assert!(dot(&once, v.components()).abs() <= 1e-9);
            prop_assert!(projected_dist(&v, &p, &q).unwrap() <= dist(&p, &q).unwrap() + 1e-12);
        }
    }

    #[test]
    fn fixed_round_trip_many() {
        let mut rng = crate::rng::SplitMix64::new(7);
        let eps = 1.0 / (1u64 << FRAC_BITS) as f64;
        for _ in 0..100_000 {
            let x = rng.next_f64();
            let p = UnitPoint::from_f64(&[x]).unwrap();
            let back = p.to_f64()[0];
            assert!(back <= x && x - back <= eps);
        }
    }
}
