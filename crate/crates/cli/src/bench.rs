use std::fmt::Write as _;
use std::time::Instant;

use serde::Serialize;

use lso_core::lso::{build_classic_with, build_gap_with};
use lso_core::rng::SplitMix64;
use lso_core::{Color, LocalityGraph, LsoFamily, PointRecord, Resolution};

use crate::args::{BenchArgs, Format};
use crate::commands::kind_name;
use crate::output::{check_dim, check_eps, emit, json};
use crate::Status;

/// Columns of the CSV table, in order.
pub const COLUMNS: &str = "eps,d,kind,lambda,m,theorem_m,build_ms,mean_update_us,edges_per_point";

#[derive(Serialize)]
struct Row {
    eps: f64,
    d: usize,
    kind: &'static str,
    lambda: u32,
    m: usize,
    theorem_m: Option<usize>,
    build_ms: f64,
    mean_update_us: f64,
    edges_per_point: f64,
}

fn family(classic: bool, eps: f64, gamma: f64, d: usize, res: Resolution) -> lso_core::Result<LsoFamily> {
    if classic {
        build_classic_with(eps, d, res)
    } else {
        build_gap_with(eps, gamma, d, res)
    }
}

fn row(a: &BenchArgs, eps: f64, classic: bool) -> anyhow::Result<Row> {
    let d = a.dim;
    let start = Instant::now();
    let f = family(classic, eps, a.gamma, d, a.resolution.0)?;
    let build_ms = start.elapsed().as_secs_f64() * 1e3;
    let theorem_m = family(classic, eps, a.gamma, d, Resolution::Theorem).ok().map(|t| t.len());
    let (kind, lambda, m) = (kind_name(f.kind()), f.params().lambda, f.len());
    let mut rng = SplitMix64::new(a.seed);
    let mut g = LocalityGraph::new(f);
    let mut live = Vec::new();
    let mut next = 0u64;
    let mut insert = |g: &mut LocalityGraph, rng: &mut SplitMix64, live: &mut Vec<u64>| -> anyhow::Result<()> {
        g.insert(PointRecord {
            id: next,
            point: rng.unit_point(d),
            color: Color::None,
        })?;
        live.push(next);
        next += 1;
        Ok(())
    };
    for _ in 0..a.points {
        insert(&mut g, &mut rng, &mut live)?;
    }
    let start = Instant::now();
    for k in 0..a.ops {
        if k % 2 == 0 && !live.is_empty() {
            let i = rng.below(live.len() as u64) as usize;
            g.delete(live.swap_remove(i))?;
        } else {
            insert(&mut g, &mut rng, &mut live)?;
        }
    }
    let mean_update_us = if a.ops == 0 {
        0.0
    } else {
        start.elapsed().as_secs_f64() * 1e6 / a.ops as f64
    };
    let edges_per_point = if g.is_empty() { 0.0 } else { g.edge_count() as f64 / g.len() as f64 };
    Ok(Row {
        eps,
        d,
        kind,
        lambda,
        m,
        theorem_m,
        build_ms,
        mean_update_us,
        edges_per_point,
    })
}

pub fn bench(a: BenchArgs) -> anyhow::Result<Status> {
    check_dim(a.dim)?;
    for &e in &a.eps {
        check_eps(e)?;
    }
    let mut rows = Vec::new();
    for &eps in &a.eps {
        for classic in [true, false] {
            rows.push(row(&a, eps, classic)?);
        }
    }
    let text = match a.output.format {
        Format::Json => json(&serde_json::json!({ "columns": COLUMNS.split(',').collect::<Vec<_>>(), "rows": rows }))?,
        Format::Csv => {
            let mut s = format!("{COLUMNS}\n");
            for r in &rows {
                let tm = r.theorem_m.map(|x| x.to_string()).unwrap_or_default();
                writeln!(
                    s,
                    "{},{},{},{},{},{tm},{:.3},{:.3},{:.3}",
                    r.eps, r.d, r.kind, r.lambda, r.m, r.build_ms, r.mean_update_us, r.edges_per_point
                )?;
            }
            s
        }
    };
    emit(&text, a.out.as_deref())?;
    Ok(Status::Ok)
}
