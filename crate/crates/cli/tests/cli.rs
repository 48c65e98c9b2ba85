use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lso(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lso")).args(args).output().expect("runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited")
}

fn json_of(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn build_then_verify() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("family.bin");
    let pts = dir.path().join("pts.txt");
    std::fs::write(&pts, "0.1 0.2\n0.5 0.5\n0.9 0.3\n0.45 0.55\n0.12 0.21\n").unwrap();

    let o = lso(&["build", "--eps", "0.25", "--gamma", "0.125", "--dim", "2", "--out", path(&fam)]);
    assert_eq!(code(&o), 0);
    let s = json_of(&o);
    assert_eq!(s["schema"], 1);
    assert_eq!(s["m"], 172032);

    let o = lso(&["verify", "--mode", "gap", "--family", path(&fam), "--points", path(&pts)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(json_of(&o)["passed"], true);

    let o = lso(&["build", "--kind", "classic", "--eps", "0.25", "--dim", "2", "--out", path(&fam)]);
    assert_eq!(code(&o), 0);
    let o = lso(&["verify", "--mode", "classic", "--family", path(&fam), "--points", path(&pts)]);
    assert_eq!(code(&o), 0);
}

#[test]
fn verify_grid_modes() {
    let o = lso(&["verify", "--mode", "grid", "--t", "4", "--dim", "2"]);
    assert_eq!(code(&o), 0);
    let r = json_of(&o);
    assert_eq!(r["orderings"], 82);
    assert_eq!(r["report"]["pairs_checked"], 120);
    let o = lso(&["verify", "--mode", "gaporders", "--t", "16", "--alpha", "8", "--dim", "2"]);
    assert_eq!(code(&o), 0);
}

fn stream_file(dir: &Path, text: &str) -> String {
    let p = dir.join("ops.txt");
    std::fs::write(&p, text).unwrap();
    path(&p).to_string()
}

#[test]
fn stream_summaries() {
    let dir = tempfile::tempdir().unwrap();
    let o = lso(&["stream", "--ops", &stream_file(dir.path(), "")]);
    assert_eq!(code(&o), 0);
    let s = &json_of(&o)["summary"];
    assert_eq!((s["n"].as_u64(), s["edges"].as_u64()), (Some(0), Some(0)));

    let o = lso(&["stream", "--ops", &stream_file(dir.path(), "+ 1 N 0.1 0.2\n+ 2 N 0.7 0.4\n")]);
    assert_eq!(code(&o), 0);
    assert_eq!(json_of(&o)["summary"]["edges"], 1);
}

#[test]
fn stream_errors_map_to_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("+ 1 N 0.1 0.2\n+ 1 N 0.3 0.3\n", 3, "line 2"),
        ("- 4\n", 3, "line 1"),
        ("+ 1 N 0.1 0.2\n\n+ 2 N 0.3\n", 2, "line 3"),
        ("+ 1 N 0.1 1.2\n", 2, "line 1"),
    ];
    for (text, want, line) in cases {
        let o = lso(&["stream", "--ops", &stream_file(dir.path(), text)]);
        assert_eq!(code(&o), want, "{text:?}");
        assert!(String::from_utf8_lossy(&o.stderr).contains(line), "{text:?}");
    }
    assert_eq!(code(&lso(&["stream", "--eps", "0.9"])), 2);
    assert_eq!(code(&lso(&["stream", "--dim", "9"])), 2);
    assert_eq!(code(&lso(&["stream", "--bogus"])), 2);
}

#[test]
fn checked_random_stream_passes_and_is_reproducible() {
    let args = ["stream", "--random", "1000", "--check", "50", "--resolution", "3", "--seed", "4"];
    let a = lso(&args);
    assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
    let s = &json_of(&a)["summary"];
    assert_eq!(s["checks"], 20);
    assert_eq!(s["checks_failed"], 0);
    assert_eq!(a.stdout, lso(&args).stdout);
}

#[test]
fn bcp_stream_checked_every_op() {
    let o = lso(&["bcp", "--random", "300", "--peak", "60", "--check", "1", "--resolution", "4"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let s = &json_of(&o)["summary"];
    assert_eq!(s["checks"], 300);
    assert!(s["worst_ratio"].as_f64().unwrap() <= 1.25 + 1e-9);
}

#[test]
fn spanner_check() {
    let dir = tempfile::tempdir().unwrap();
    let edges = dir.path().join("edges.csv");
    let o = lso(&["spanner", "--n", "60", "--eps", "0.5", "--resolution", "4", "--check", "--out", path(&edges)]);
    assert_eq!(code(&o), 0);
    let r = json_of(&o);
    assert_eq!(r["passed"], true);
    let lines = std::fs::read_to_string(&edges).unwrap().lines().count();
    assert_eq!(lines as u64, r["edges"].as_u64().unwrap() + 1);
}

#[test]
fn pack_sphere_points() {
    let o = lso(&["pack-sphere", "--dim", "2", "--radius", "0.1"]);
    assert_eq!(code(&o), 0);
    let n = String::from_utf8(o.stdout).unwrap().lines().count();
    assert!((32..=63).contains(&n), "{n}");
}

#[test]
fn grid_orders_lines() {
    let o = lso(&["grid-orders", "--kind", "walecki", "--t", "2", "--d", "2"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 2);
    for l in text.lines() {
        let mut cells: Vec<u32> = l.split(' ').map(|x| x.parse().unwrap()).collect();
        cells.sort();
        assert_eq!(cells, vec![0, 1, 2, 3]);
    }
    assert_eq!(code(&lso(&["grid-orders", "--kind", "gap", "--t", "8"])), 2);
}

#[test]
fn lowerbound_reports() {
    let o = lso(&["lowerbound", "--kind", "grid", "--eps", "0.25", "--dim", "1"]);
    assert_eq!(code(&o), 0);
    let r = json_of(&o);
    assert_eq!((r["m"].as_u64(), r["bound"].as_f64()), (Some(4), Some(2.0)));

    let o = lso(&["lowerbound", "--kind", "spanner", "--eps", "0.25,0.125", "--dim", "2", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let floors: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(4).unwrap()).collect();
    assert_eq!(floors, ["4", "8"]);
}

#[test]
fn bench_rows() {
    let o = lso(&["bench", "--eps", "0.25", "--points", "20", "--ops", "10", "--resolution", "3", "--format", "csv"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "eps,d,kind,lambda,m,theorem_m,build_ms,mean_update_us,edges_per_point");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("0.25,2,classic,3,"));
    assert!(lines[2].starts_with("0.25,2,gap,3,"));
}
