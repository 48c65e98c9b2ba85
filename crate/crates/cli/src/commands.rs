use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufReader, BufWriter};

use anyhow::Context;
use serde::Serialize;

use lso_core::geometry::{format_points, parse_points};
use lso_core::grid_orders::{directional_set, gap_orderings, DirectionSource};
use lso_core::locality_graph::{spanner_edges, spanner_params, stretch_check};
use lso_core::lso::{build_classic_with, build_gap_with, read_family, write_family};
use lso_core::oracle::{
    lower_bound_grid_instance, lower_bound_sphere_instance, reproduce, spanner_edge_lower_bound_report,
    verify_gap_orderings, verify_grid_conclusion, verify_locality, verify_locality_gap, GridReport, GridViolation,
    LocalityViolation,
};
use lso_core::packing::sphere_packing;
use lso_core::rng::uniform_points;
use lso_core::{Color, FamilyKind, GridOrderSet, LocalityGraph, LsoFamily, LsoParams, PointRecord, Resolution};

use crate::args::{
    BoundKind, BuildArgs, FamilyArgs, Format, GridKind, GridOrdersArgs, Kind, LowerboundArgs, Mode, PackSphereArgs,
    SpannerArgs, VerifyArgs,
};
use crate::output::{check_dim, check_eps, check_family_args, emit, json, read};
use crate::Status;

pub fn build_family(f: &FamilyArgs, res: Resolution) -> anyhow::Result<LsoFamily> {
    check_family_args(f)?;
    Ok(match f.kind {
        Kind::Classic => build_classic_with(f.eps, f.dim, res)?,
        Kind::Gap => build_gap_with(f.eps, f.gamma, f.dim, res)?,
    })
}

#[derive(Serialize)]
pub struct FamilySummary {
    #[serde(flatten)]
    params: LsoParams,
    shifts: usize,
    grid_orderings: usize,
    beta: Option<usize>,
    m: usize,
}

pub fn summary(f: &LsoFamily) -> FamilySummary {
    FamilySummary {
        params: f.params().clone(),
        shifts: f.params().shift_count(),
        grid_orderings: f.grid_orders().len(),
        beta: f.gap_info().map(|g| g.beta),
        m: f.len(),
    }
}

pub fn build(a: BuildArgs) -> anyhow::Result<Status> {
    let f = build_family(&a.family, a.resolution.0)?;
    let file = File::create(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let mut w = BufWriter::new(file);
    write_family(&f, &mut w)?;
    std::io::Write::flush(&mut w)?;
    emit(&json(&summary(&f))?, None)?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct LocalityReport {
    mode: &'static str,
    passed: bool,
    points: usize,
    m: usize,
    eps: f64,
    gamma: Option<f64>,
    violation: Option<LocalityViolation>,
    reproduced: Option<bool>,
}

#[derive(Serialize)]
struct GridCheckReport {
    mode: &'static str,
    passed: bool,
    t: usize,
    d: usize,
    alpha: Option<usize>,
    orderings: usize,
    report: Option<GridReport>,
    violation: Option<GridViolation>,
}

fn grid_report(
    mode: &'static str,
    set: &GridOrderSet,
    alpha: Option<usize>,
    r: Result<GridReport, GridViolation>,
) -> GridCheckReport {
    let passed = r.is_ok();
    let (report, violation) = match r {
        Ok(g) => (Some(g), None),
        Err(v) => (None, Some(v)),
    };
    GridCheckReport {
        mode,
        passed,
        t: set.t(),
        d: set.d(),
        alpha,
        orderings: set.len(),
        report,
        violation,
    }
}

pub fn verify(a: VerifyArgs) -> anyhow::Result<Status> {
    let (text, passed) = match a.mode {
        Mode::Classic | Mode::Gap => {
            let path = a.family.as_ref().context("--family is required in this mode")?;
            let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
            let f = read_family(BufReader::new(file))?;
            let pts_path = a.points.as_ref().context("--points is required in this mode")?;
            let pts = parse_points(&read(pts_path)?, Some(f.d()))?;
            let eps = a.eps.unwrap_or(f.params().eps);
            let (mode, gamma, r) = if a.mode == Mode::Classic {
                ("classic", None, verify_locality(&f, &pts, eps))
            } else {
                let gamma = a.gamma.or(f.params().gamma).context("--gamma is required for a classic family")?;
                ("gap", Some(gamma), verify_locality_gap(&f, &pts, eps, gamma))
            };
            let violation = r.err();
            let reproduced = violation.as_ref().map(|v| reproduce(&f, &pts, v, eps, gamma));
            let rep = LocalityReport {
                mode,
                passed: violation.is_none(),
                points: pts.len(),
                m: f.len(),
                eps,
                gamma,
                violation,
                reproduced,
            };
            (json(&rep)?, rep.passed)
        }
        Mode::Grid => {
            check_dim(a.dim)?;
            let set = directional_set(a.t, a.dim, DirectionSource::CellPairs)?;
            let rep = grid_report("grid", &set, None, verify_grid_conclusion(&set)?);
            (json(&rep)?, rep.passed)
        }
        Mode::Gaporders => {
            check_dim(a.dim)?;
            let set = gap_orderings(a.t, a.alpha, a.dim)?;
            let r = verify_gap_orderings(&set)?;
            let rep = grid_report("gaporders", &set.orders, Some(set.alpha), r);
            (json(&rep)?, rep.passed)
        }
    };
    emit(&text, a.out.as_deref())?;
    Ok(if passed { Status::Ok } else { Status::Violation })
}

#[derive(Serialize)]
struct SpannerReport {
    eps: f64,
    d: usize,
    lambda: u32,
    theorem_lambda: u32,
    m: usize,
    n: usize,
    edges: usize,
    max_degree: usize,
    max_stretch: Option<f64>,
    witness: Option<(u64, u64)>,
    passed: Option<bool>,
}

pub fn spanner(a: SpannerArgs) -> anyhow::Result<Status> {
    check_eps(a.eps)?;
    check_dim(a.dim)?;
    let pts = match &a.points {
        Some(p) => parse_points(&read(p)?, Some(a.dim))?,
        None => uniform_points(a.seed, a.n, a.dim),
    };
    let (e, g) = spanner_params(a.eps);
    let f = build_gap_with(e, g, a.dim, a.resolution.0)?;
    let (lambda, theorem_lambda, m) = (f.params().lambda, f.params().theorem_lambda, f.len());
    let mut graph = LocalityGraph::new(f);
    for (i, p) in pts.into_iter().enumerate() {
        graph.insert(PointRecord {
            id: i as u64,
            point: p,
            color: Color::None,
        })?;
    }
    let (ids, coords, edges) = spanner_edges(&graph);
    let stretch = if a.check { Some(stretch_check(&edges, &coords)?) } else { None };
    let passed = stretch.as_ref().map(|s| s.max_stretch <= 1.0 + a.eps + 1e-9);
    let rep = SpannerReport {
        eps: a.eps,
        d: a.dim,
        lambda,
        theorem_lambda,
        m,
        n: ids.len(),
        edges: edges.len(),
        max_degree: graph.max_degree(),
        max_stretch: stretch.as_ref().map(|s| s.max_stretch),
        witness: stretch.as_ref().and_then(|s| s.witness).map(|(i, j)| (ids[i], ids[j])),
        passed,
    };
    if let Some(out) = &a.out {
        let mut s = String::from("a,b,length\n");
        for &(i, j, w) in &edges {
            writeln!(s, "{},{},{w:?}", ids[i], ids[j])?;
        }
        emit(&s, Some(out))?;
    }
    emit(&json(&rep)?, None)?;
    Ok(if passed == Some(false) { Status::Violation } else { Status::Ok })
}

pub fn pack_sphere(a: PackSphereArgs) -> anyhow::Result<Status> {
    check_dim(a.dim)?;
    let p = sphere_packing(a.dim, a.radius)?;
    emit(&format_points(&p.points), a.out.as_deref())?;
    Ok(Status::Ok)
}

pub fn grid_orders(a: GridOrdersArgs) -> anyhow::Result<Status> {
    check_dim(a.dim)?;
    let set = match a.kind {
        GridKind::Walecki => GridOrderSet::walecki(a.t, a.dim)?,
        GridKind::Directional => directional_set(a.t, a.dim, DirectionSource::CellPairs)?,
        GridKind::Gap => {
            let alpha = a.alpha.context("--alpha is required for gap orderings")?;
            gap_orderings(a.t, alpha, a.dim)?.orders
        }
    };
    let mut s = String::new();
    for i in 0..set.len() {
        for pos in 0..set.cells() {
            if pos > 0 {
                s.push(' ');
            }
            write!(s, "{}", set.cell_at(i, pos))?;
        }
        s.push('\n');
    }
    emit(&s, a.out.as_deref())?;
    Ok(Status::Ok)
}

pub fn lowerbound(a: LowerboundArgs) -> anyhow::Result<Status> {
    check_dim(a.dim)?;
    let single = || -> anyhow::Result<f64> {
        match a.eps.as_slice() {
            [e] => Ok(*e),
            _ => Err(lso_core::Error::Parameter("this bound takes a single --eps".into()).into()),
        }
    };
    let (text, passed) = match a.kind {
        BoundKind::Grid => {
            let r = lower_bound_grid_instance(single()?, a.dim)?;
            (csv_or_json(a.output.format, &r, || {
                format!("eps,d,m,points,premise_holds,bound\n{},{},{},{},{},{}\n", single().unwrap_or_default(), a.dim, r.m, r.points.len(), r.premise_holds, r.bound)
            })?, r.premise_holds)
        }
        BoundKind::Sphere => {
            let r = lower_bound_sphere_instance(single()?, a.dim)?;
            (csv_or_json(a.output.format, &r, || {
                format!("eps,d,points,premise_holds,bound\n{},{},{},{},{}\n", single().unwrap_or_default(), a.dim, r.packing.len(), r.premise_holds, r.bound)
            })?, r.premise_holds)
        }
        BoundKind::Spanner => {
            let rows = spanner_edge_lower_bound_report(&a.eps, a.dim, a.n)?;
            let text = match a.output.format {
                Format::Json => json(&serde_json::json!({ "rows": rows }))?,
                Format::Csv => {
                    let mut s = String::from("eps,d,lambda,m,floor,edge_bound\n");
                    for r in &rows {
                        writeln!(s, "{},{},{},{},{},{}", r.eps, r.d, r.lambda, r.m, r.floor, r.edge_bound)?;
                    }
                    s
                }
            };
            (text, true)
        }
    };
    emit(&text, a.out.as_deref())?;
    Ok(if passed { Status::Ok } else { Status::Violation })
}

fn csv_or_json<T: Serialize>(format: Format, body: &T, csv: impl FnOnce() -> String) -> anyhow::Result<String> {
    Ok(match format {
        Format::Json => json(body)?,
        Format::Csv => csv(),
    })
}

pub fn kind_name(k: FamilyKind) -> &'static str {
    match k {
        FamilyKind::Classic => "classic",
        FamilyKind::Gap => "gap",
    }
}
