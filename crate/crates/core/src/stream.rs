//! Update streams: `+ <id> <R|B|N> <coords...>` inserts, `- <id>` deletes,
//! one per line. Blank lines and lines starting with `#` are skipped.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geometry::UnitPoint;
use crate::locality_graph::{Color, PointRecord};
use crate::rng::SplitMix64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StreamOp {
    Insert(PointRecord),
    Delete(u64),
}

/// An op with the 1-based line it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamLine {
    pub line: usize,
    pub op: StreamOp,
}

fn parse_color(s: &str) -> Option<Color> {
    match s {
        "R" => Some(Color::Red),
        "B" => Some(Color::Blue),
        "N" => Some(Color::None),
        _ => None,
    }
}

fn color_char(c: Color) -> char {
    match c {
        Color::Red => 'R',
        Color::Blue => 'B',
        Color::None => 'N',
    }
}

/// Parses a stream; the dimension is `dim` or, when absent, that of the
/// first insert.
pub fn parse_stream(text: &str, dim: Option<usize>) -> Result<Vec<StreamLine>> {
    let mut dim = dim;
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |msg: String| Error::Parse { line, msg };
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let mut tok = s.split_whitespace();
        let kind = tok.next().expect("nonempty line");
        let id: u64 = tok
            .next()
            .ok_or_else(|| err("missing id".into()))?
            .parse()
            .map_err(|_| err("id is not an unsigned integer".into()))?;
        let op = match kind {
            "-" => {
                if tok.next().is_some() {
                    return Err(err("trailing tokens after delete".into()));
                }
                StreamOp::Delete(id)
            }
            "+" => {
                let c = tok.next().ok_or_else(|| err("missing color".into()))?;
                let color = parse_color(c).ok_or_else(|| err(format!("bad color {c:?}")))?;
                let coords = tok
                    .map(|t| t.parse::<f64>().map_err(|_| err(format!("bad coordinate {t:?}"))))
                    .collect::<Result<Vec<f64>>>()?;
                let want = *dim.get_or_insert(coords.len());
                if coords.len() != want {
                    return Err(err(format!("expected {want} coordinates, got {}", coords.len())));
                }
                let point = UnitPoint::from_f64(&coords).map_err(|e| err(e.to_string()))?;
                StreamOp::Insert(PointRecord { id, point, color })
            }
            _ => return Err(err(format!("unknown op {kind:?}"))),
        };
        out.push(StreamLine { line, op });
    }
    Ok(out)
}

pub fn format_stream(ops: &[StreamOp]) -> String {
    let mut s = String::new();
    for op in ops {
        match op {
            StreamOp::Delete(id) => writeln!(s, "- {id}").expect("string write"),
            StreamOp::Insert(r) => {
                write!(s, "+ {} {}", r.id, color_char(r.color)).expect("string write");
                for x in r.point.to_f64() {
                    write!(s, " {x:?}").expect("string write");
                }
                s.push('\n');
            }
        }
    }
    s
}

/// Shape of a synthetic stream.
#[derive(Clone, Copy, Debug)]
pub struct StreamSpec {
    pub ops: usize,
    pub d: usize,
    /// Live points never exceed this; the first `peak` ops fill up to it.
    pub peak: usize,
    /// Colors alternate to keep red and blue balanced; otherwise all `N`.
    pub colored: bool,
}

/// Deterministic random stream: fill to `peak`, then delete a random live
/// point or insert a fresh one with equal odds (insert when empty, delete
/// when full). Ids are consecutive from 0.
pub fn random_stream(seed: u64, spec: StreamSpec) -> Vec<StreamOp> {
    let mut rng = SplitMix64::new(seed);
    let mut live: Vec<(u64, Color)> = Vec::new();
    let mut next = 0u64;
    let mut out = Vec::with_capacity(spec.ops);
    for k in 0..spec.ops {
        let insert = if live.is_empty() {
            true
        } else if live.len() >= spec.peak {
            false
        } else {
            k < spec.peak || rng.below(2) == 0
        };
        if insert {
            let color = if !spec.colored {
                Color::None
            } else {
                let red = live.iter().filter(|l| l.1 == Color::Red).count();
                if red * 2 <= live.len() {
                    Color::Red
                } else {
                    Color::Blue
                }
            };
            out.push(StreamOp::Insert(PointRecord {
                id: next,
                point: rng.unit_point(spec.d),
                color,
            }));
            live.push((next, color));
            next += 1;
        } else {
            let i = rng.below(live.len() as u64) as usize;
            out.push(StreamOp::Delete(live.swap_remove(i).0));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_examples() {
        let ops = parse_stream("# demo\n+ 1 R 0.25 0.5\n\n- 1\n", None).unwrap();
        assert_eq!(ops.len(), 2);
        assert_eq!(ops[0].line, 2);
        assert_eq!(ops[1], StreamLine { line: 4, op: StreamOp::Delete(1) });
        match &ops[0].op {
            StreamOp::Insert(r) => {
                assert_eq!(r.color, Color::Red);
                assert_eq!(r.point.to_f64(), vec![0.25, 0.5]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_lines() {
        let cases = [
            ("+ 1 R 0.1\n+ 2 R 0.1 0.2\n", 2),
            ("+ x R 0.1\n", 1),
            ("\n* 1\n", 2),
            ("+ 1 Q 0.1\n", 1),
            ("+ 1 R 1.5\n", 1),
            ("- 1 2\n", 1),
        ];
        for (text, line) in cases {
            match parse_stream(text, None) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }

    #[test]
    fn random_stream_round_trips_and_respects_peak() {
        let spec = StreamSpec { ops: 400, d: 2, peak: 50, colored: true };
        let ops = random_stream(5, spec);
        assert_eq!(ops, random_stream(5, spec));
        let parsed: Vec<StreamOp> = parse_stream(&format_stream(&ops), Some(2))
            .unwrap()
            .into_iter()
            .map(|l| l.op)
            .collect();
        assert_eq!(parsed, ops);
        let mut live = 0i64;
        for op in &ops {
            live += if matches!(op, StreamOp::Insert(_)) { 1 } else { -1 };
            assert!((0..=50).contains(&live));
        }
    }
}
