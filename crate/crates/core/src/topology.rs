//! Edge colourings and their topological invariants.
//!
//! Two independent algorithms run on every colouring:
//!
//! * union-find with per-vertex displacement vectors over the direct and dual
//!   clusters, which yields cluster counts and, from the rank of each
//!   cluster's cycle lattice, which clusters wrap (rank 1) or span both
//!   periodic directions (rank 2);
//! * a walk along the medial lattice that traces every cluster boundary and
//!   accumulates its winding.
//!
//! The Euler relation ties the two together and is checked on every call.

use std::collections::{BTreeMap, HashMap};
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{Direction, TorusLattice};

/// Default limit on the number of edges for exhaustive enumeration.
pub const DEFAULT_EDGE_CAP: usize = 24;

/// Bit `k` set means direct edge `k` is coloured (and its dual edge is not).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeColoring {
    pub mask: u64,
}

impl EdgeColoring {
    pub fn new(mask: u64) -> Self {
        EdgeColoring { mask }
    }

    pub fn empty() -> Self {
        EdgeColoring { mask: 0 }
    }

    pub fn full(lat: &TorusLattice) -> Self {
        EdgeColoring {
            mask: full_mask(lat.num_edges()),
        }
    }

    pub fn from_edges<I: IntoIterator<Item = usize>>(edges: I) -> Self {
        EdgeColoring {
            mask: edges.into_iter().fold(0, |m, e| m | (1u64 << e)),
        }
    }

    pub fn is_coloured(&self, e: usize) -> bool {
        self.mask >> e & 1 == 1
    }

    pub fn num_coloured(&self) -> u32 {
        self.mask.count_ones()
    }
}

fn full_mask(edges: usize) -> u64 {
    if edges >= 64 {
        u64::MAX
    } else {
        (1u64 << edges) - 1
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Degeneracy {
    None,
    Direct,
    Dual,
}

/// One cluster boundary.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoopRecord {
    /// Number of medial steps (corners visited).
    pub length: usize,
    /// Net (horizontal, vertical) winding.
    pub winding: (i32, i32),
}

impl LoopRecord {
    pub fn is_trivial(&self) -> bool {
        self.winding == (0, 0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TopologySummary {
    /// Coloured direct edges.
    pub e: u32,
    /// Direct clusters.
    pub c: u32,
    pub c_dual: u32,
    /// Boundary loops.
    pub l: u32,
    /// Non-trivial loops, i.e. the order of the cycle of non-trivial clusters.
    pub n: u32,
    /// Normalized `(i1, i2)`; `(0, 0)` when `n == 0`.
    pub homotopy: (u32, u32),
    pub degenerate: Degeneracy,
    pub eta: u32,
    /// Direct clusters wrapping exactly one independent cycle.
    pub wrapping_direct: u32,
    pub wrapping_dual: u32,
}

impl TopologySummary {
    pub fn i2(&self) -> u32 {
        self.homotopy.1
    }
}

/// `(NE, NW, SW, SE)` quadrant of a corner.
const NE: usize = 0;
const NW: usize = 1;
const SW: usize = 2;
const SE: usize = 3;

/// Precomputed corner pairings for one lattice.
#[derive(Clone, Debug)]
pub struct TopologyAnalyzer {
    lattice: TorusLattice,
    /// Per edge: corner pairs when the edge is coloured / uncoloured.
    coloured: Vec<[(usize, usize); 2]>,
    uncoloured: Vec<[(usize, usize); 2]>,
    /// Corner centres in quarter lattice units.
    corner_pos: Vec<(i64, i64)>,
}

impl TopologyAnalyzer {
    pub fn new(lattice: &TorusLattice) -> Self {
        let corner = |v: usize, q: usize| 4 * v + q;
        let mut coloured = Vec::with_capacity(lattice.num_edges());
        let mut uncoloured = Vec::with_capacity(lattice.num_edges());
        for edge in lattice.edges() {
            let (a, b) = (edge.tail, edge.head);
            match edge.direction {
                Direction::Horizontal => {
                    coloured.push([
                        (corner(a, NE), corner(b, NW)),
                        (corner(a, SE), corner(b, SW)),
                    ]);
                    uncoloured.push([
                        (corner(a, NE), corner(a, SE)),
                        (corner(b, NW), corner(b, SW)),
                    ]);
                }
                Direction::Vertical => {
                    coloured.push([
                        (corner(a, NE), corner(b, SE)),
                        (corner(a, NW), corner(b, SW)),
                    ]);
                    uncoloured.push([
                        (corner(a, NE), corner(a, NW)),
                        (corner(b, SE), corner(b, SW)),
                    ]);
                }
            }
        }
        let mut corner_pos = Vec::with_capacity(4 * lattice.num_vertices());
        for v in 0..lattice.num_vertices() {
            let (t, i) = lattice.coords(v);
            let (x, y) = (4 * t as i64, 4 * i as i64);
            corner_pos.push((x + 1, y + 1));
            corner_pos.push((x - 1, y + 1));
            corner_pos.push((x - 1, y - 1));
            corner_pos.push((x + 1, y - 1));
        }
        TopologyAnalyzer {
            lattice: lattice.clone(),
            coloured,
            uncoloured,
            corner_pos,
        }
    }

    pub fn lattice(&self) -> &TorusLattice {
        &self.lattice
    }

    pub fn trace_loops(&self, coloring: EdgeColoring) -> Vec<LoopRecord> {
        let lat = &self.lattice;
        let corners = 4 * lat.num_vertices();
        // Pairings at horizontal-edge midpoints join corners through their
        // east/west ends; at vertical-edge midpoints through north/south ends.
        let mut via_h = vec![usize::MAX; corners];
        let mut via_v = vec![usize::MAX; corners];
        for (e, edge) in lat.edges().iter().enumerate() {
            let pairs = if coloring.is_coloured(e) {
                &self.coloured[e]
            } else {
                &self.uncoloured[e]
            };
            let table = match edge.direction {
                Direction::Horizontal => &mut via_h,
                Direction::Vertical => &mut via_v,
            };
            for &(a, b) in pairs {
                table[a] = b;
                table[b] = a;
            }
        }

        let period = (4 * lat.length() as i64, 4 * lat.width() as i64);
        let wrap = |d: i64, p: i64| {
            let d = d.rem_euclid(p);
            if 2 * d > p {
                d - p
            } else {
                d
            }
        };
        let mut visited = vec![false; corners];
        let mut loops = Vec::new();
        for start in 0..corners {
            if visited[start] {
                continue;
            }
            let mut cur = start;
            let mut leave_h = true;
            let mut length = 0usize;
            let (mut dx, mut dy) = (0i64, 0i64);
            loop {
                visited[cur] = true;
                length += 1;
                let next = if leave_h { via_h[cur] } else { via_v[cur] };
                let (p0, p1) = (self.corner_pos[cur], self.corner_pos[next]);
                dx += wrap(p1.0 - p0.0, period.0);
                dy += wrap(p1.1 - p0.1, period.1);
                cur = next;
                leave_h = !leave_h;
                if cur == start {
                    break;
                }
            }
            debug_assert!(leave_h, "loop closed on the wrong end");
            loops.push(LoopRecord {
                length,
                winding: ((dx / period.0) as i32, (dy / period.1) as i32),
            });
        }
        loops
    }

    pub fn analyze(&self, coloring: EdgeColoring) -> Result<TopologySummary> {
        let lat = &self.lattice;
        let (l_units, n_units) = (lat.width() as i64, lat.length() as i64);
        let v = lat.num_vertices();
        let e = coloring.num_coloured();

        let mut direct = OffsetUnionFind::new(v);
        let mut dual = OffsetUnionFind::new(v);
        for (k, edge) in lat.edges().iter().enumerate() {
            if coloring.is_coloured(k) {
                direct.union(edge.tail, edge.head, step(edge.direction));
            } else {
                let d = lat.dual_edge(k);
                dual.union(d.tail, d.head, step(d.direction));
            }
        }
        let direct_clusters = direct.cluster_spans();
        let dual_clusters = dual.cluster_spans();
        let rank_count =
            |spans: &[Span], r: usize| spans.iter().filter(|s| s.rank() == r).count() as u32;

        let degenerate = match (
            rank_count(&direct_clusters, 2),
            rank_count(&dual_clusters, 2),
        ) {
            (0, 0) => Degeneracy::None,
            (1, 0) => Degeneracy::Direct,
            (0, 1) => Degeneracy::Dual,
            (a, b) => {
                return Err(Error::InternalTopologyViolation {
                    mask: coloring.mask,
                    detail: format!("{a} direct and {b} dual clusters span both directions"),
                })
            }
        };

        let loops = self.trace_loops(coloring);
        let l = loops.len() as u32;
        let mut class: Option<(i32, i32)> = None;
        let mut n = 0u32;
        for lp in loops.iter().filter(|lp| !lp.is_trivial()) {
            n += 1;
            let w = orient(lp.winding);
            match class {
                None => class = Some(w),
                Some(c) if c == w => {}
                Some(c) => {
                    return Err(Error::InternalTopologyViolation {
                        mask: coloring.mask,
                        detail: format!("non-trivial loops in classes {c:?} and {w:?}"),
                    })
                }
            }
        }
        let homotopy = class.map_or((0, 0), |(a, b)| (a.unsigned_abs(), b.unsigned_abs()));

        // every wrapping cluster must share the loops' class
        for span in direct_clusters.iter().chain(&dual_clusters) {
            if span.rank() == 1 {
                let (x, y) = span.basis[0].expect("rank one");
                let w = orient(primitive(((x / n_units) as i32, (y / l_units) as i32)));
                if class != Some(w) {
                    return Err(Error::InternalTopologyViolation {
                        mask: coloring.mask,
                        detail: format!("wrapping cluster class {w:?} vs loop class {class:?}"),
                    });
                }
            }
        }

        let c = direct_clusters.len() as u32;
        let c_dual = dual_clusters.len() as u32;
        let eta = u32::from(degenerate == Degeneracy::Direct);
        let lhs = 2 * eta + l + v as u32;
        let rhs = 2 * c + e;
        if lhs != rhs {
            return Err(Error::InternalEulerViolation {
                mask: coloring.mask,
                detail: format!("2*{eta} + l={l} + V={v} != 2c={} + e={e}", 2 * c),
            });
        }
        Ok(TopologySummary {
            e,
            c,
            c_dual,
            l,
            n,
            homotopy,
            degenerate,
            eta,
            wrapping_direct: rank_count(&direct_clusters, 1),
            wrapping_dual: rank_count(&dual_clusters, 1),
        })
    }
}

fn step(d: Direction) -> (i64, i64) {
    match d {
        Direction::Horizontal => (1, 0),
        Direction::Vertical => (0, 1),
    }
}

fn gcd(a: i32, b: i32) -> i32 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn primitive((a, b): (i32, i32)) -> (i32, i32) {
    let g = gcd(a, b).max(1);
    (a / g, b / g)
}

/// Fix the orientation so that `i1 > 0`, or `i1 == 0` and `i2 > 0`.
fn orient((a, b): (i32, i32)) -> (i32, i32) {
    if a < 0 || (a == 0 && b < 0) {
        (-a, -b)
    } else {
        (a, b)
    }
}

/// Up to two independent cycle vectors of a cluster.
#[derive(Clone, Copy, Debug, Default)]
struct Span {
    basis: [Option<(i64, i64)>; 2],
}

impl Span {
    fn add(&mut self, w: (i64, i64)) {
        if w == (0, 0) {
            return;
        }
        match self.basis {
            [None, _] => self.basis[0] = Some(w),
            [Some(b), None] if b.0 * w.1 - b.1 * w.0 != 0 => self.basis[1] = Some(w),
            _ => {}
        }
    }

    fn merge(&mut self, other: &Span) {
        for w in other.basis.iter().flatten() {
            self.add(*w);
        }
    }

    fn rank(&self) -> usize {
        self.basis.iter().flatten().count()
    }
}

/// Union-find over lattice vertices that tracks each vertex's displacement
/// from its root in the universal cover.
struct OffsetUnionFind {
    parent: Vec<usize>,
    offset: Vec<(i64, i64)>,
    span: Vec<Span>,
}

impl OffsetUnionFind {
    fn new(n: usize) -> Self {
        OffsetUnionFind {
            parent: (0..n).collect(),
            offset: vec![(0, 0); n],
            span: vec![Span::default(); n],
        }
    }

    fn find(&mut self, v: usize) -> (usize, (i64, i64)) {
        let p = self.parent[v];
        if p == v {
            return (v, (0, 0));
        }
        let (root, po) = self.find(p);
        let o = self.offset[v];
        let total = (o.0 + po.0, o.1 + po.1);
        self.parent[v] = root;
        self.offset[v] = total;
        (root, total)
    }

    /// Joins `u` and `w` where `pos(w) = pos(u) + d`.
    fn union(&mut self, u: usize, w: usize, d: (i64, i64)) {
        let (ru, ou) = self.find(u);
        let (rw, ow) = self.find(w);
        let rel = (ou.0 + d.0 - ow.0, ou.1 + d.1 - ow.1);
        if ru == rw {
            self.span[ru].add(rel);
        } else {
            self.parent[rw] = ru;
            self.offset[rw] = rel;
            let s = self.span[rw];
            self.span[ru].merge(&s);
        }
    }

    fn cluster_spans(&mut self) -> Vec<Span> {
        let roots: Vec<usize> = (0..self.parent.len())
            .filter(|&v| self.find(v).0 == v)
            .collect();
        roots.into_iter().map(|v| self.span[v]).collect()
    }
}

/// Every colouring of the lattice, in increasing mask order.
pub fn iter_colorings(
    lat: &TorusLattice,
    cap: usize,
) -> Result<impl Iterator<Item = EdgeColoring>> {
    let edges = lat.num_edges();
    if edges > cap || edges >= 64 {
        return Err(Error::EnumerationTooLarge { edges, cap });
    }
    Ok((0..1u64 << edges).map(EdgeColoring::new))
}

pub fn trace_loops(lat: &TorusLattice, coloring: EdgeColoring) -> Vec<LoopRecord> {
    TopologyAnalyzer::new(lat).trace_loops(coloring)
}

pub fn analyze(lat: &TorusLattice, coloring: EdgeColoring) -> Result<TopologySummary> {
    TopologyAnalyzer::new(lat).analyze(coloring)
}

/// Colouring whose direct edges occupy the dual edges coloured in `coloring`.
pub fn shift_configuration(lat: &TorusLattice, coloring: EdgeColoring) -> EdgeColoring {
    let map = lat.shift_map();
    let mask = (0..lat.num_edges())
        .filter(|&e| !coloring.is_coloured(e))
        .fold(0u64, |m, e| m | (1u64 << map[e]));
    EdgeColoring::new(mask)
}

/// Histogram of topology summaries over all `2^E` colourings of a lattice.
#[derive(Clone, Debug)]
pub struct Census {
    width: usize,
    length: usize,
    counts: BTreeMap<TopologySummary, u64>,
}

impl Census {
    /// Enumerates all colourings, in parallel over disjoint mask ranges.
    pub fn build(lat: &TorusLattice, cap: usize) -> Result<Self> {
        let edges = lat.num_edges();
        if edges > cap || edges >= 64 {
            return Err(Error::EnumerationTooLarge { edges, cap });
        }
        let analyzer = TopologyAnalyzer::new(lat);
        let total = 1u64 << edges;
        let chunk = 1u64 << edges.min(12);
        let partials: Vec<HashMap<TopologySummary, u64>> = (0..total / chunk)
            .into_par_iter()
            .map(|k| {
                let mut local = HashMap::new();
                for mask in k * chunk..(k + 1) * chunk {
                    let s = analyzer.analyze(EdgeColoring::new(mask))?;
                    *local.entry(s).or_insert(0) += 1;
                }
                Ok(local)
            })
            .collect::<Result<_>>()?;
        let mut counts = BTreeMap::new();
        for part in partials {
            for (s, c) in part {
                *counts.entry(s).or_insert(0) += c;
            }
        }
        Ok(Census {
            width: lat.width(),
            length: lat.length(),
            counts,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn length(&self) -> usize {
        self.length
    }

    pub fn num_vertices(&self) -> usize {
        self.width * self.length
    }

    pub fn num_edges(&self) -> usize {
        2 * self.num_vertices()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TopologySummary, u64)> {
        self.counts.iter().map(|(s, c)| (s, *c))
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }
}

/// One line of the enumeration fixture format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationRecord {
    pub mask: String,
    pub e: u32,
    pub c: u32,
    pub c_dual: u32,
    pub l: u32,
    pub n: u32,
    pub i1: u32,
    pub i2: u32,
    pub degenerate: Degeneracy,
    pub eta: u32,
}

impl EnumerationRecord {
    pub fn new(coloring: EdgeColoring, s: &TopologySummary) -> Self {
        EnumerationRecord {
            mask: format!("{:x}", coloring.mask),
            e: s.e,
            c: s.c,
            c_dual: s.c_dual,
            l: s.l,
            n: s.n,
            i1: s.homotopy.0,
            i2: s.homotopy.1,
            degenerate: s.degenerate,
            eta: s.eta,
        }
    }
}

/// Writes one JSON record per colouring, in mask order.
pub fn write_enumeration_jsonl<W: Write>(
    lat: &TorusLattice,
    cap: usize,
    mut out: W,
) -> Result<u64> {
    let analyzer = TopologyAnalyzer::new(lat);
    let mut written = 0;
    for coloring in iter_colorings(lat, cap)? {
        let s = analyzer.analyze(coloring)?;
        serde_json::to_writer(&mut out, &EnumerationRecord::new(coloring, &s))?;
        out.write_all(b"\n")?;
        written += 1;
    }
    Ok(written)
}
