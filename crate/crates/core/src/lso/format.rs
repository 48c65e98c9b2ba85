//! Little-endian binary encoding of a family.
//!
//! ```text
//! bytes 0..4    "LSO1"
//! then u64 words:
//!   version (1), kind (0 classic, 1 gap), eps (f64 bits),
//!   gamma (f64 bits, all ones when absent), d, lambda, theorem lambda,
//!   side, alpha, big_d,
//!   set tag (0 Walecki, 1 explicit tables, 2 two-level tables),
//!   beta, bottom count (all ones when absent), top count,
//!   ordering count k, cell count n
//! then, for tags 1 and 2, k rank tables of n u32 each
//! ```
//!
//! Walecki sets are implicit, so tag 0 carries no tables.

use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::grid_orders::{GridOrderSet, GridOrdering};

use super::{FamilyKind, GapInfo, LsoFamily, LsoParams};

pub const MAGIC: &[u8; 4] = b"LSO1";
const VERSION: u64 = 1;
const NONE: u64 = u64::MAX;

fn io(e: std::io::Error) -> Error {
    Error::Format(e.to_string())
}

pub fn write_family<W: Write>(f: &LsoFamily, mut out: W) -> Result<()> {
    let p = &f.params;
    let (tag, beta) = match &f.orders {
        GridOrderSet::Walecki { .. } => (0, 1),
        GridOrderSet::Explicit { .. } | GridOrderSet::Directional { .. } => (1, 1),
        GridOrderSet::Composed { beta, .. } => (2, *beta as u64),
    };
    let gap = f.gap.as_ref();
    let words = [
        VERSION,
        match p.kind {
            FamilyKind::Classic => 0,
            FamilyKind::Gap => 1,
        },
        p.eps.to_bits(),
        p.gamma.map_or(NONE, f64::to_bits),
        p.d as u64,
        p.lambda as u64,
        p.theorem_lambda as u64,
        p.side as u64,
        p.alpha as u64,
        p.big_d as u64,
        tag,
        gap.map_or(beta, |g| g.beta as u64),
        gap.and_then(|g| g.bottom_count).map_or(NONE, |b| b as u64),
        gap.map_or(f.orders.len() as u64, |g| g.top_count as u64),
        f.orders.len() as u64,
        f.orders.cells() as u64,
    ];
    out.write_all(MAGIC).map_err(io)?;
    for w in words {
        out.write_all(&w.to_le_bytes()).map_err(io)?;
    }
    if tag != 0 {
        let mut buf = Vec::with_capacity(f.orders.cells() * 4);
        for i in 0..f.orders.len() {
            buf.clear();
            for c in 0..f.orders.cells() {
                buf.extend_from_slice(&(f.orders.rank(i, c) as u32).to_le_bytes());
            }
            out.write_all(&buf).map_err(io)?;
        }
    }
    Ok(())
}

fn word<R: Read>(r: &mut R) -> Result<u64> {
    let mut b = [0u8; 8];
    r.read_exact(&mut b).map_err(io)?;
    Ok(u64::from_le_bytes(b))
}

fn small(w: u64, what: &str) -> Result<usize> {
    usize::try_from(w)
        .ok()
        .filter(|&v| v < 1 << 40)
        .ok_or_else(|| Error::Format(format!("{what} out of range")))
}

pub fn read_family<R: Read>(mut r: R) -> Result<LsoFamily> {
    let mut magic = [0u8; 4];
    r.read_exact(&mut magic).map_err(io)?;
    if &magic != MAGIC {
        return Err(Error::Format("bad magic".into()));
    }
    let mut w = [0u64; 16];
    for x in w.iter_mut() {
        *x = word(&mut r)?;
    }
    let [version, kind, eps, gamma, d, lambda, theorem_lambda, side, alpha, big_d, tag, beta, bottom, top, k, n] = w;
    if version != VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let kind = match kind {
        0 => FamilyKind::Classic,
        1 => FamilyKind::Gap,
        _ => return Err(Error::Format(format!("unknown kind {kind}"))),
    };
    let gamma = (gamma != NONE).then(|| f64::from_bits(gamma));
    let lambda = u32::try_from(lambda).map_err(|_| Error::Format("lambda".into()))?;
    let theorem_lambda = u32::try_from(theorem_lambda).map_err(|_| Error::Format("lambda".into()))?;
    let params = LsoParams::from_stored(kind, f64::from_bits(eps), gamma, small(d, "d")?, lambda, theorem_lambda)
        .map_err(|e| Error::Format(e.to_string()))?;
    if params.side as u64 != side || params.alpha as u64 != alpha || params.big_d as u64 != big_d {
        return Err(Error::Format("derived parameters disagree".into()));
    }
    let (k, n) = (small(k, "ordering count")?, small(n, "cell count")?);
    let (beta, top) = (small(beta, "beta")?, small(top, "top count")?);
    let bottom = if bottom == NONE { None } else { Some(small(bottom, "bottom count")?) };
    let t = params.side;
    let d = params.d;
    let orders = match tag {
        0 => GridOrderSet::walecki(t, d)?,
        1 | 2 => {
            let mut tables = Vec::with_capacity(k);
            let mut buf = vec![0u8; n * 4];
            for _ in 0..k {
                r.read_exact(&mut buf).map_err(io)?;
                let mut order = vec![0u32; n];
                for (c, chunk) in buf.chunks_exact(4).enumerate() {
                    let rank = u32::from_le_bytes(chunk.try_into().expect("4 bytes")) as usize;
                    *order
                        .get_mut(rank)
                        .ok_or_else(|| Error::Format(format!("rank {rank} out of range")))? = c as u32;
                }
                tables.push(GridOrdering::from_order(t, d, order).map_err(|e| Error::Format(e.to_string()))?);
            }
            if tag == 1 {
                GridOrderSet::explicit(t, d, tables)?
            } else {
                let bottom_count = bottom.ok_or_else(|| Error::Format("two-level set without bottom count".into()))?;
                GridOrderSet::Composed {
                    t,
                    d,
                    beta,
                    bottom_count,
                    orders: tables,
                }
            }
        }
        _ => return Err(Error::Format(format!("unknown set tag {tag}"))),
    };
    if orders.len() != k || orders.cells() != n {
        return Err(Error::Format("ordering count or cell count disagrees".into()));
    }
    let mut family = LsoFamily::with_orders(params, orders)?;
    if kind == FamilyKind::Gap {
        family.gap = Some(GapInfo {
            alpha: family.params.alpha,
            beta,
            top_count: top,
            bottom_count: bottom,
        });
    }
    Ok(family)
}
