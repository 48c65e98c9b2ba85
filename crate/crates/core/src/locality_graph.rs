//! Dynamic locality graph: every ordering of a family keeps the live points
//! sorted, and two points are joined when they are consecutive in at least
//! one ordering. The graph doubles as a spanner and as the candidate set
//! for bichromatic closest pair.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeSet, BinaryHeap, HashMap};

use ordered_float::OrderedFloat;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dist_unchecked, ShiftedPoint, UnitPoint};
use crate::lso::{build_gap_with, LsoFamily, OrderingId, Resolution};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Color {
    Red,
    Blue,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointRecord {
    pub id: u64,
    pub point: UnitPoint,
    pub color: Color,
}

/// An edge between two point ids (`a < b`) with its Euclidean length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: u64,
    pub b: u64,
    pub len: f64,
}

/// Distinct edges that appeared or disappeared during one update.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EdgeDelta {
    pub added: Vec<Edge>,
    pub removed: Vec<Edge>,
}

struct Slot {
    rec: PointRecord,
    coords: Vec<f64>,
    shifted: Vec<ShiftedPoint>,
    degree: usize,
}

pub struct LocalityGraph {
    family: LsoFamily,
    ids: Vec<OrderingId>,
    slots: Vec<Option<Slot>>,
    free: Vec<u32>,
    by_id: HashMap<u64, u32>,
    lists: Vec<Vec<u32>>,
    edges: HashMap<(u32, u32), u32>,
    frac_bits: Option<u32>,
}

#[inline]
fn key(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

impl LocalityGraph {
    pub fn new(family: LsoFamily) -> Self {
        let m = family.len();
        Self {
            ids: family.ids().collect(),
            family,
            slots: Vec::new(),
            free: Vec::new(),
            by_id: HashMap::new(),
            lists: vec![Vec::new(); m],
            edges: HashMap::new(),
            frac_bits: None,
        }
    }

    pub fn family(&self) -> &LsoFamily {
        &self.family
    }

    /// Number of orderings, the `m` of the degree and edge bounds.
    pub fn orderings(&self) -> usize {
        self.lists.len()
    }

    pub fn len(&self) -> usize {
        self.by_id.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_id.is_empty()
    }

    pub fn contains(&self, id: u64) -> bool {
        self.by_id.contains_key(&id)
    }

    pub fn record(&self, id: u64) -> Option<&PointRecord> {
        self.by_id.get(&id).map(|&s| &self.slot(s).rec)
    }

    pub fn records(&self) -> impl Iterator<Item = &PointRecord> {
        self.slots.iter().flatten().map(|s| &s.rec)
    }

    fn slot(&self, s: u32) -> &Slot {
        self.slots[s as usize].as_ref().expect("live slot")
    }

    fn cmp_slots(&self, ordering: usize, a: u32, b: u32) -> Ordering {
        let id = self.ids[ordering];
        let (sa, sb) = (self.slot(a), self.slot(b));
        self.family
            .compare_fixed(id, &sa.shifted[id.shift], &sb.shifted[id.shift])
            .then(sa.rec.id.cmp(&sb.rec.id))
    }

    fn edge(&self, k: (u32, u32)) -> Edge {
        let (sa, sb) = (self.slot(k.0), self.slot(k.1));
        let (a, b) = (sa.rec.id.min(sb.rec.id), sa.rec.id.max(sb.rec.id));
        Edge {
            a,
            b,
            len: dist_unchecked(&sa.coords, &sb.coords),
        }
    }

    /// Applies accumulated reference-count changes, recording distinct-edge
    /// transitions.
    fn apply(&mut self, changes: HashMap<(u32, u32), i64>, delta: &mut EdgeDelta) {
        let mut changes: Vec<_> = changes.into_iter().filter(|&(_, c)| c != 0).collect();
        changes.sort_unstable();
        for (k, c) in changes {
            let old = self.edges.get(&k).copied().unwrap_or(0) as i64;
            let new = old + c;
            assert!(new >= 0, "edge reference count below zero");
            if new == 0 {
                self.edges.remove(&k);
            } else {
                self.edges.insert(k, new as u32);
            }
            if old == 0 && new > 0 {
                delta.added.push(self.edge(k));
                self.bump_degree(k, 1);
            } else if old > 0 && new == 0 {
                delta.removed.push(self.edge(k));
                self.bump_degree(k, -1);
            }
        }
    }

    fn bump_degree(&mut self, k: (u32, u32), by: isize) {
        for s in [k.0, k.1] {
            let slot = self.slots[s as usize].as_mut().expect("live slot");
            slot.degree = slot.degree.checked_add_signed(by).expect("degree underflow");
        }
    }

    pub fn insert(&mut self, rec: PointRecord) -> Result<EdgeDelta> {
        self.family.check_point(&rec.point)?;
        if self.by_id.contains_key(&rec.id) {
            return Err(Error::DuplicateId(rec.id));
        }
        match self.frac_bits {
            Some(w) if w != rec.point.frac_bits() => {
                return Err(Error::Parameter("points differ in fixed-point precision".into()))
            }
            _ => self.frac_bits = Some(rec.point.frac_bits()),
        }
        let slot = Slot {
            coords: rec.point.to_f64(),
            shifted: self.family.shifted_all(&rec.point),
            degree: 0,
            rec,
        };
        let id = slot.rec.id;
        let s = match self.free.pop() {
            Some(s) => {
                self.slots[s as usize] = Some(slot);
                s
            }
            None => {
                self.slots.push(Some(slot));
                (self.slots.len() - 1) as u32
            }
        };
        self.by_id.insert(id, s);

        let mut changes: HashMap<(u32, u32), i64> = HashMap::new();
        let mut lists = std::mem::take(&mut self.lists);
        for (i, list) in lists.iter_mut().enumerate() {
            let pos = list.partition_point(|&o| self.cmp_slots(i, o, s) == Ordering::Less);
            let pred = pos.checked_sub(1).map(|p| list[p]);
            let succ = list.get(pos).copied();
            if let (Some(a), Some(b)) = (pred, succ) {
                *changes.entry(key(a, b)).or_default() -= 1;
            }
            for n in pred.into_iter().chain(succ) {
                *changes.entry(key(n, s)).or_default() += 1;
            }
            list.insert(pos, s);
        }
        self.lists = lists;
        let mut delta = EdgeDelta::default();
        self.apply(changes, &mut delta);
        Ok(delta)
    }

    pub fn delete(&mut self, id: u64) -> Result<EdgeDelta> {
        let s = *self.by_id.get(&id).ok_or(Error::UnknownId(id))?;
        let mut changes: HashMap<(u32, u32), i64> = HashMap::new();
        let mut lists = std::mem::take(&mut self.lists);
        for (i, list) in lists.iter_mut().enumerate() {
            let pos = list.partition_point(|&o| self.cmp_slots(i, o, s) == Ordering::Less);
            debug_assert_eq!(list[pos], s);
            let pred = pos.checked_sub(1).map(|p| list[p]);
            let succ = list.get(pos + 1).copied();
            if let (Some(a), Some(b)) = (pred, succ) {
                *changes.entry(key(a, b)).or_default() += 1;
            }
            for n in pred.into_iter().chain(succ) {
                *changes.entry(key(n, s)).or_default() -= 1;
            }
            list.remove(pos);
        }
        self.lists = lists;
        let mut delta = EdgeDelta::default();
        self.apply(changes, &mut delta);
        debug_assert_eq!(self.slot(s).degree, 0);
        self.slots[s as usize] = None;
        self.free.push(s);
        self.by_id.remove(&id);
        if self.by_id.is_empty() {
            self.frac_bits = None;
        }
        Ok(delta)
    }

    /// Distinct edges with their reference counts, sorted by id pair.
    pub fn edge_multiset(&self) -> Vec<((u64, u64), u32)> {
        let mut out: Vec<_> = self
            .edges
            .iter()
            .map(|(&k, &c)| {
                let e = self.edge(k);
                ((e.a, e.b), c)
            })
            .collect();
        out.sort_unstable();
        out
    }

    /// Distinct edges with lengths, sorted by id pair.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out: Vec<Edge> = self.edges.keys().map(|&k| self.edge(k)).collect();
        out.sort_by_key(|e| (e.a, e.b));
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Sum of reference counts over all distinct edges.
    pub fn reference_total(&self) -> u64 {
        self.edges.values().map(|&c| c as u64).sum()
    }

    pub fn degree(&self, id: u64) -> Option<usize> {
        self.by_id.get(&id).map(|&s| self.slot(s).degree)
    }

    pub fn max_degree(&self) -> usize {
        self.slots.iter().flatten().map(|s| s.degree).max().unwrap_or(0)
    }

    /// Ids in ordering `i`, first to last.
    pub fn list(&self, i: usize) -> Vec<u64> {
        self.lists[i].iter().map(|&s| self.slot(s).rec.id).collect()
    }
}

/// Bichromatic pair reported by [`BcpState::query`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BcpPair {
    pub red: u64,
    pub blue: u64,
    pub dist: f64,
}

/// Closest red-blue pair over the edges of a locality graph.
pub struct BcpState {
    graph: LocalityGraph,
    heap: BTreeSet<(OrderedFloat<f64>, u64, u64)>,
}

/// Accuracy and gap constant of the family behind [`BcpState::new`].
pub fn bcp_params(eps: f64) -> (f64, f64) {
    (eps / 4.0, 0.125)
}

/// Accuracy and gap constant of the family behind a `(1+eps)`-spanner.
pub fn spanner_params(eps: f64) -> (f64, f64) {
    (eps / 32.0, 0.125)
}

impl BcpState {
    /// Graph over the gap family with parameters [`bcp_params`] at the given
    /// resolution.
    pub fn new(eps: f64, d: usize, res: Resolution) -> Result<Self> {
        let (e, g) = bcp_params(eps);
        Ok(Self::with_graph(LocalityGraph::new(build_gap_with(e, g, d, res)?)))
    }

    pub fn with_graph(graph: LocalityGraph) -> Self {
        let mut s = Self {
            graph,
            heap: BTreeSet::new(),
        };
        for e in s.graph.edges() {
            s.track(&e, true);
        }
        s
    }

    pub fn graph(&self) -> &LocalityGraph {
        &self.graph
    }

    fn oriented(&self, e: &Edge) -> Option<(u64, u64)> {
        let ca = self.graph.record(e.a)?.color;
        let cb = self.graph.record(e.b)?.color;
        match (ca, cb) {
            (Color::Red, Color::Blue) => Some((e.a, e.b)),
            (Color::Blue, Color::Red) => Some((e.b, e.a)),
            _ => None,
        }
    }

    fn track(&mut self, e: &Edge, add: bool) {
        if let Some((r, b)) = self.oriented(e) {
            let k = (OrderedFloat(e.len), r, b);
            if add {
                self.heap.insert(k);
            } else {
                self.heap.remove(&k);
            }
        }
    }

    pub fn insert(&mut self, rec: PointRecord) -> Result<EdgeDelta> {
        let delta = self.graph.insert(rec)?;
        for e in &delta.removed {
            self.track(e, false);
        }
        for e in &delta.added {
            self.track(e, true);
        }
        Ok(delta)
    }

    pub fn delete(&mut self, id: u64) -> Result<EdgeDelta> {
        let rec = self.graph.record(id).cloned().ok_or(Error::UnknownId(id))?;
        let delta = self.graph.delete(id)?;
        for e in &delta.removed {
            // the deleted point's color is gone from the graph by now
            let other = if e.a == id { e.b } else { e.a };
            let oriented = if e.a == id || e.b == id {
                match (rec.color, self.graph.record(other).map(|r| r.color)) {
                    (Color::Red, Some(Color::Blue)) => Some((id, other)),
                    (Color::Blue, Some(Color::Red)) => Some((other, id)),
                    _ => None,
                }
            } else {
                self.oriented(e)
            };
            if let Some((r, b)) = oriented {
                self.heap.remove(&(OrderedFloat(e.len), r, b));
            }
        }
        for e in &delta.added {
            self.track(e, true);
        }
        Ok(delta)
    }

    /// Shortest bichromatic edge, or `None` when a color is absent.
    pub fn query(&self) -> Option<BcpPair> {
        self.heap.first().map(|&(d, red, blue)| BcpPair { red, blue, dist: d.0 })
    }

    /// Number of bichromatic edges tracked.
    pub fn heap_len(&self) -> usize {
        self.heap.len()
    }
}

/// Largest ratio of graph distance to Euclidean distance, over all pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StretchReport {
    pub max_stretch: f64,
    /// Pair of point indices achieving it.
    pub witness: Option<(usize, usize)>,
}

/// Exact all-pairs stretch of a weighted graph on `points` (edges given by
/// point index). Disconnected pairs have infinite stretch; coincident
/// points count as stretch 1 when connected.
pub fn stretch_check(edges: &[(usize, usize, f64)], points: &[Vec<f64>]) -> Result<StretchReport> {
    let n = points.len();
    if n > 2000 {
        return Err(Error::TooLarge(format!("stretch check on {n} points")));
    }
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for &(a, b, w) in edges {
        if a >= n || b >= n {
            return Err(Error::Parameter(format!("edge ({a}, {b}) out of range")));
        }
        adj[a].push((b, w));
        adj[b].push((a, w));
    }
    let mut best = StretchReport {
        max_stretch: if n < 2 { 1.0 } else { 0.0 },
        witness: None,
    };
    for src in 0..n {
        let dist = dijkstra(&adj, src);
        for dst in src + 1..n {
            let e = dist_unchecked(&points[src], &points[dst]);
            let ratio = if dist[dst].is_infinite() {
                f64::INFINITY
            } else if e == 0.0 {
                1.0
            } else {
                dist[dst] / e
            };
            if best.witness.is_none() || ratio > best.max_stretch {
                best.max_stretch = ratio;
                best.witness = Some((src, dst));
            }
        }
    }
    Ok(best)
}

fn dijkstra(adj: &[Vec<(usize, f64)>], src: usize) -> Vec<f64> {
    let mut dist = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    dist[src] = 0.0;
    heap.push(Reverse((OrderedFloat(0.0), src)));
    while let Some(Reverse((OrderedFloat(d), u))) = heap.pop() {
        if d > dist[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                heap.push(Reverse((OrderedFloat(nd), v)));
            }
        }
    }
    dist
}

/// Current spanner edges as point-index triples over the live points in
/// ascending id order, together with those points' coordinates.
pub fn spanner_edges(g: &LocalityGraph) -> (Vec<u64>, Vec<Vec<f64>>, Vec<(usize, usize, f64)>) {
    let mut ids: Vec<u64> = g.records().map(|r| r.id).collect();
    ids.sort_unstable();
    let index: HashMap<u64, usize> = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();
    let coords = ids
        .iter()
        .map(|id| g.record(*id).expect("live").point.to_f64())
        .collect();
    let edges = g
        .edges()
        .into_iter()
        .map(|e| (index[&e.a], index[&e.b], e.len))
        .collect();
    (ids, coords, edges)
}
