use std::fmt::Write as _;
use std::time::Instant;

use anyhow::Context;
use serde::Serialize;

use lso_core::geometry::dist;
use lso_core::oracle::edges_from_scratch;
use lso_core::stream::{parse_stream, random_stream, StreamLine, StreamOp, StreamSpec};
use lso_core::{BcpState, Color, LocalityGraph, UnitPoint};

use crate::args::{Format, StreamArgs};
use crate::commands::build_family;
use crate::output::{check_family_args, emit, json, read};
use crate::Status;

fn load_ops(a: &StreamArgs, colored: bool) -> anyhow::Result<Vec<StreamLine>> {
    Ok(match &a.ops {
        Some(p) => parse_stream(&read(p)?, Some(a.family.dim))?,
        None => random_stream(
            a.seed,
            StreamSpec {
                ops: a.random,
                d: a.family.dim,
                peak: a.peak,
                colored,
            },
        )
        .into_iter()
        .enumerate()
        .map(|(i, op)| StreamLine { line: i + 1, op })
        .collect(),
    })
}

fn apply(g: &mut LocalityGraph, l: &StreamLine) -> anyhow::Result<(usize, usize)> {
    let d = match &l.op {
        StreamOp::Insert(r) => g.insert(r.clone()),
        StreamOp::Delete(id) => g.delete(*id),
    }
    .with_context(|| format!("line {}", l.line))?;
    Ok((d.added.len(), d.removed.len()))
}

fn op_fields(op: &StreamOp) -> (&'static str, u64) {
    match op {
        StreamOp::Insert(r) => ("+", r.id),
        StreamOp::Delete(id) => ("-", *id),
    }
}

#[derive(Serialize)]
struct OpRow {
    line: usize,
    op: &'static str,
    id: u64,
    added: usize,
    removed: usize,
    n: usize,
    edges: usize,
    max_degree: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    micros: Option<f64>,
}

#[derive(Serialize)]
struct StreamSummary {
    ops: usize,
    n: usize,
    edges: usize,
    max_degree: usize,
    m: usize,
    lambda: u32,
    theorem_lambda: u32,
    checks: usize,
    checks_failed: usize,
    first_failed_line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_op_micros: Option<f64>,
}

#[derive(Serialize)]
struct StreamReport {
    summary: StreamSummary,
    ops: Vec<OpRow>,
}

fn live(g: &LocalityGraph) -> Vec<(u64, UnitPoint)> {
    g.records().map(|r| (r.id, r.point.clone())).collect()
}

fn micros(a: &StreamArgs, start: Instant) -> Option<f64> {
    a.timings.then(|| start.elapsed().as_secs_f64() * 1e6)
}

pub fn stream(a: StreamArgs) -> anyhow::Result<Status> {
    check_family_args(&a.family)?;
    let ops = load_ops(&a, false)?;
    let f = build_family(&a.family, a.resolution.0)?;
    let mut g = LocalityGraph::new(f.clone());
    let mut rows = Vec::with_capacity(ops.len());
    let (mut checks, mut failed, mut first_failed) = (0, 0, None);
    let mut total = 0.0;
    for (k, l) in ops.iter().enumerate() {
        let start = Instant::now();
        let (added, removed) = apply(&mut g, l)?;
        let t = micros(&a, start);
        total += t.unwrap_or(0.0);
        let (op, id) = op_fields(&l.op);
        rows.push(OpRow {
            line: l.line,
            op,
            id,
            added,
            removed,
            n: g.len(),
            edges: g.edge_count(),
            max_degree: g.max_degree(),
            micros: t,
        });
        if a.check.is_some_and(|c| c > 0 && ((k + 1) % c == 0 || k + 1 == ops.len())) {
            checks += 1;
            if g.edge_multiset() != edges_from_scratch(&f, &live(&g)) {
                failed += 1;
                first_failed.get_or_insert(l.line);
            }
        }
    }
    let summary = StreamSummary {
        ops: ops.len(),
        n: g.len(),
        edges: g.edge_count(),
        max_degree: g.max_degree(),
        m: f.len(),
        lambda: f.params().lambda,
        theorem_lambda: f.params().theorem_lambda,
        checks,
        checks_failed: failed,
        first_failed_line: first_failed,
        mean_op_micros: a.timings.then(|| if ops.is_empty() { 0.0 } else { total / ops.len() as f64 }),
    };
    let text = match a.output.format {
        Format::Json => json(&StreamReport { summary, ops: rows })?,
        Format::Csv => {
            let mut s = String::from("line,op,id,added,removed,n,edges,max_degree,micros\n");
            for r in &rows {
                let t = r.micros.map(|x| format!("{x:.3}")).unwrap_or_default();
                writeln!(s, "{},{},{},{},{},{},{},{},{t}", r.line, r.op, r.id, r.added, r.removed, r.n, r.edges, r.max_degree)?;
            }
            s
        }
    };
    emit(&text, a.out.as_deref())?;
    Ok(if failed == 0 { Status::Ok } else { Status::Violation })
}

#[derive(Serialize)]
struct BcpRow {
    line: usize,
    op: &'static str,
    id: u64,
    red: Option<u64>,
    blue: Option<u64>,
    dist: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    brute: Option<Option<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    micros: Option<f64>,
}

#[derive(Serialize)]
struct BcpSummary {
    ops: usize,
    n: usize,
    m: usize,
    lambda: u32,
    theorem_lambda: u32,
    checks: usize,
    checks_failed: usize,
    first_failed_line: Option<usize>,
    worst_ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mean_op_micros: Option<f64>,
}

#[derive(Serialize)]
struct BcpReport {
    summary: BcpSummary,
    ops: Vec<BcpRow>,
}

fn brute(g: &LocalityGraph) -> Option<f64> {
    let of = |c| g.records().filter(move |r| r.color == c).map(|r| r.point.to_f64());
    let blue: Vec<Vec<f64>> = of(Color::Blue).collect();
    of(Color::Red)
        .flat_map(|r| blue.iter().map(move |b| dist(&r, b).expect("same dimension")))
        .min_by(f64::total_cmp)
}

pub fn bcp(a: StreamArgs) -> anyhow::Result<Status> {
    check_family_args(&a.family)?;
    let eps = a.family.eps;
    let ops = load_ops(&a, true)?;
    let mut s = BcpState::new(eps, a.family.dim, a.resolution.0)?;
    let params = s.graph().family().params().clone();
    let m = s.graph().orderings();
    let mut rows = Vec::with_capacity(ops.len());
    let (mut checks, mut failed, mut first_failed) = (0, 0, None);
    let mut worst: Option<f64> = None;
    let mut total = 0.0;
    for (k, l) in ops.iter().enumerate() {
        let start = Instant::now();
        match &l.op {
            StreamOp::Insert(r) => s.insert(r.clone()).map(|_| ()),
            StreamOp::Delete(id) => s.delete(*id).map(|_| ()),
        }
        .with_context(|| format!("line {}", l.line))?;
        let pair = s.query();
        let t = micros(&a, start);
        total += t.unwrap_or(0.0);
        let check = a.check.is_some_and(|c| c > 0 && (k + 1) % c == 0);
        let best = check.then(|| brute(s.graph()));
        if let Some(best) = best {
            checks += 1;
            let ok = match (pair, best) {
                (None, None) => true,
                (Some(p), Some(b)) => {
                    if b > 0.0 {
                        worst = Some(worst.unwrap_or(1.0).max(p.dist / b));
                    }
                    p.dist <= (1.0 + eps) * b + 1e-9
                }
                _ => false,
            };
            if !ok {
                failed += 1;
                first_failed.get_or_insert(l.line);
            }
        }
        let (op, id) = op_fields(&l.op);
        rows.push(BcpRow {
            line: l.line,
            op,
            id,
            red: pair.map(|p| p.red),
            blue: pair.map(|p| p.blue),
            dist: pair.map(|p| p.dist),
            brute: best,
            micros: t,
        });
    }
    let summary = BcpSummary {
        ops: ops.len(),
        n: s.graph().len(),
        m,
        lambda: params.lambda,
        theorem_lambda: params.theorem_lambda,
        checks,
        checks_failed: failed,
        first_failed_line: first_failed,
        worst_ratio: worst,
        mean_op_micros: a.timings.then(|| if ops.is_empty() { 0.0 } else { total / ops.len() as f64 }),
    };
    let text = match a.output.format {
        Format::Json => json(&BcpReport { summary, ops: rows })?,
        Format::Csv => {
            let opt = |x: Option<String>| x.unwrap_or_default();
            let mut out = String::from("line,op,id,red,blue,dist,brute,micros\n");
            for r in &rows {
                writeln!(
                    out,
                    "{},{},{},{},{},{},{},{}",
                    r.line,
                    r.op,
                    r.id,
                    opt(r.red.map(|x| x.to_string())),
                    opt(r.blue.map(|x| x.to_string())),
                    opt(r.dist.map(|x| format!("{x:?}"))),
                    opt(r.brute.flatten().map(|x| format!("{x:?}"))),
                    opt(r.micros.map(|x| format!("{x:.3}"))),
                )?;
            }
            out
        }
    };
    emit(&text, a.out.as_deref())?;
    Ok(if failed == 0 { Status::Ok } else { Status::Violation })
}
