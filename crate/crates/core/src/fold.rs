//! Folding the key graph onto two stacked floors, and the crisscross graphs
//! it is compared against.
//!
//! Each core of side `2s + 1` is centred on the origin; the four forward
//! cores stack onto floor 1 and the four backward cores onto floor 2. Every
//! maximal path of the outer graph becomes one edge between the projections
//! of its endpoints, and every cell lying in two cores contributes an edge
//! between its two projections.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::Serialize;

use crate::error::{bug, Error, Result};
use crate::geom::{Cell, Leaper};
use crate::keygraph::{build_key, Cores, KeyGraph};
use crate::verify::gcd;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct FoldVertex {
    pub x: i32,
    pub y: i32,
    pub floor: u8,
}

impl FoldVertex {
    pub const fn new(x: i32, y: i32, floor: u8) -> Self {
        FoldVertex { x, y, floor }
    }

    pub fn toggled(self) -> Self {
        FoldVertex {
            floor: 3 - self.floor,
            ..self
        }
    }
}

impl fmt::Display for FoldVertex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.floor)
    }
}

/// An undirected edge between two-floor vertices, smaller endpoint first.
pub type FoldEdge = (FoldVertex, FoldVertex);

fn fold_edge(u: FoldVertex, v: FoldVertex) -> FoldEdge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A simple graph on the vertices `(x, y, f)` with `|x|, |y| <= radius` and
/// `f` in `{1, 2}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoFloorGraph {
    pub radius: i32,
    pub edges: BTreeSet<FoldEdge>,
}

impl TwoFloorGraph {
    pub fn new(radius: i32) -> Self {
        TwoFloorGraph {
            radius,
            edges: BTreeSet::new(),
        }
    }

    pub fn contains_vertex(&self, v: FoldVertex) -> bool {
        v.x.abs() <= self.radius && v.y.abs() <= self.radius && (v.floor == 1 || v.floor == 2)
    }

    pub fn vertex_count(&self) -> usize {
        let w = (2 * self.radius + 1) as usize;
        2 * w * w
    }

    pub fn vertices(&self) -> impl Iterator<Item = FoldVertex> + '_ {
        let r = self.radius;
        (1..=2u8).flat_map(move |f| {
            (-r..=r).flat_map(move |x| (-r..=r).map(move |y| FoldVertex::new(x, y, f)))
        })
    }

    fn index(&self, v: FoldVertex) -> usize {
        let w = 2 * self.radius + 1;
        (((v.floor as i32 - 1) * w + v.x + self.radius) * w + v.y + self.radius) as usize
    }

    pub fn insert(&mut self, u: FoldVertex, v: FoldVertex) -> bool {
        self.edges.insert(fold_edge(u, v))
    }

    /// The same graph with floors 1 and 2 exchanged.
    pub fn toggle_floors(&self) -> TwoFloorGraph {
        TwoFloorGraph {
            radius: self.radius,
            edges: self
                .edges
                .iter()
                .map(|&(u, v)| fold_edge(u.toggled(), v.toggled()))
                .collect(),
        }
    }
}

/// Breadth-first reachability from the first vertex covers every vertex.
pub fn is_connected(graph: &TwoFloorGraph) -> bool {
    let n = graph.vertex_count();
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &graph.edges {
        let (a, b) = (graph.index(u), graph.index(v));
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    let mut reached = 1;
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                reached += 1;
                queue.push_back(v);
            }
        }
    }
    reached == n
}

/// Projections of a core cell: one per core containing it.
pub fn project(cell: Cell, cores: &Cores) -> Result<Vec<FoldVertex>> {
    let s = (cores.side() - 1) / 2;
    let mut out = Vec::with_capacity(2);
    if let Some((x, y)) = cores.forward_position(cell) {
        out.push(FoldVertex::new(x - s, y - s, 1));
    }
    if let Some((x, y)) = cores.backward_position(cell) {
        out.push(FoldVertex::new(x - s, y - s, 2));
    }
    if out.is_empty() {
        return Err(Error::NotInCore(cell));
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldingGraph {
    pub graph: TwoFloorGraph,
    /// Number of between-floor edges contributed by cells in two cores.
    pub overlap_edges: usize,
}

impl FoldingGraph {
    pub fn s(&self) -> i32 {
        self.graph.radius
    }
}

/// Folds the key graph. Fails if the outer graph has a cycle or a path ends
/// on a cell with two projections.
pub fn build_folding(key: &KeyGraph) -> Result<FoldingGraph> {
    let outer = key.outer_paths();
    if !outer.is_acyclic() {
        return bug(format!(
            "outer graph has {} cells on cycles",
            outer.cycle_cells
        ));
    }
    let cores = key.cores();
    let mut graph = TwoFloorGraph::new((cores.side() - 1) / 2);
    for path in &outer.paths {
        let (a, b) = (path[0], *path.last().expect("nonempty path"));
        let (pa, pb) = (project(a, cores)?, project(b, cores)?);
        if pa.len() != 1 || pb.len() != 1 {
            return bug(format!("outer path {a}..{b} ends in a core overlap"));
        }
        graph.insert(pa[0], pb[0]);
    }
    let mut overlap_edges = 0;
    for c in cores.forward.iter().flat_map(|sb| sb.cells()) {
        if let [u, v] = project(c, cores)?[..] {
            graph.insert(u, v);
            overlap_edges += 1;
        }
    }
    Ok(FoldingGraph {
        graph,
        overlap_edges,
    })
}

/// The crisscross graph `R(m, n)` together with the type of every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrisscrossGraph {
    pub m: i32,
    pub n: i32,
    pub graph: TwoFloorGraph,
    pub types: BTreeMap<FoldEdge, (i32, i32)>,
}

impl CrisscrossGraph {
    pub fn t(&self) -> i32 {
        self.graph.radius
    }
}

/// True when `m, n >= 0` and `m - n`, `m + n` are coprime.
pub fn crisscross_valid(m: i32, n: i32) -> bool {
    m >= 0 && n >= 0 && gcd(m - n, m + n) == 1
}

pub fn build_crisscross(m: i32, n: i32) -> Result<CrisscrossGraph> {
    if m < 0 || n < 0 {
        return Err(Error::InvalidCrisscross {
            m,
            n,
            reason: "parameters must be nonnegative",
        });
    }
    if !crisscross_valid(m, n) {
        return Err(Error::InvalidCrisscross {
            m,
            n,
            reason: "m - n and m + n are not relatively prime",
        });
    }
    let t = (m + n - 1) / 2;
    let same_floor: [(u8, [(i32, i32); 2]); 2] = [(1, [(m, n), (-n, m)]), (2, [(n, m), (-m, n)])];
    let between = [(m, m), (-m, m), (n, n), (-n, n)];

    let mut graph = TwoFloorGraph::new(t);
    let mut types = BTreeMap::new();
    let mut add = |graph: &mut TwoFloorGraph, u: FoldVertex, v: FoldVertex, ty: (i32, i32)| {
        if graph.contains_vertex(v) {
            graph.insert(u, v);
            types.entry(fold_edge(u, v)).or_insert(ty);
        }
    };
    let verts: Vec<FoldVertex> = graph.vertices().collect();
    for u in verts {
        for (floor, vecs) in &same_floor {
            if u.floor != *floor {
                continue;
            }
            for &(dx, dy) in vecs {
                for sign in [1, -1] {
                    let v = FoldVertex::new(u.x + sign * dx, u.y + sign * dy, u.floor);
                    add(&mut graph, u, v, (dx, dy));
                }
            }
        }
        for &(dx, dy) in &between {
            for sign in [1, -1] {
                let v = FoldVertex::new(u.x + sign * dx, u.y + sign * dy, 3 - u.floor);
                add(&mut graph, u, v, (dx, dy));
            }
        }
    }
    Ok(CrisscrossGraph { m, n, graph, types })
}

/// Parameters predicting which crisscross graph a leaper folds onto.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FoldParams {
    /// `q - p`
    pub r: i32,
    /// Common remainder of `p` and `q` modulo `r`.
    pub m: i32,
    /// `r - m`
    pub n: i32,
    /// `floor(p / r)`
    pub h: i32,
}

impl FoldParams {
    /// `(m, n)` when `h` is even, `(n, m)` when odd.
    pub fn expected(&self) -> (i32, i32) {
        if self.h % 2 == 0 {
            (self.m, self.n)
        } else {
            (self.n, self.m)
        }
    }
}

pub fn fold_params(leaper: Leaper) -> FoldParams {
    let (p, q) = (leaper.p(), leaper.q());
    let r = q - p;
    let m = p % r;
    debug_assert_eq!(q % r, m);
    FoldParams {
        r,
        m,
        n: r - m,
        h: p / r,
    }
}

/// Outcome of comparing a leaper's folding graph with its predicted
/// crisscross graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FoldCheck {
    pub params: FoldParams,
    pub expected: (i32, i32),
    pub outer_acyclic: bool,
    /// Edge sets (and vertex ranges) coincide exactly.
    pub matches: bool,
    /// Toggling the floors of the folding graph yields the other crisscross
    /// graph `R(n, m)`.
    pub toggle_matches: bool,
    pub fold_connected: bool,
    pub key_connected: bool,
}

impl FoldCheck {
    pub fn passed(&self) -> bool {
        self.outer_acyclic
            && self.matches
            && self.toggle_matches
            && self.fold_connected
            && self.key_connected
    }
}

impl fmt::Display for FoldCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let FoldParams { r, m, n, h } = self.params;
        let (em, en) = self.expected;
        write!(
            f,
            "r={r} m={m} n={n} h={h} expect R({em},{en}): {}, O {}, F {}",
            if self.matches { "MATCH" } else { "MISMATCH" },
            if self.outer_acyclic {
                "acyclic"
            } else {
                "has cycles"
            },
            if self.fold_connected {
                "connected"
            } else {
                "disconnected"
            },
        )
    }
}

pub fn check_fold(leaper: Leaper) -> Result<FoldCheck> {
    let key = build_key(leaper)?;
    Ok(check_fold_key(&key))
}

pub fn check_fold_key(key: &KeyGraph) -> FoldCheck {
    let params = fold_params(key.leaper());
    let expected = params.expected();
    let outer_acyclic = key.outer_paths().is_acyclic();
    let key_connected = key.is_connected();
    let folded = if outer_acyclic {
        build_folding(key).ok()
    } else {
        None
    };
    let (matches, toggle_matches, fold_connected) = match &folded {
        Some(f) => {
            let want = build_crisscross(expected.0, expected.1).expect("valid for free leapers");
            let other = build_crisscross(expected.1, expected.0).expect("valid for free leapers");
            (
                f.graph == want.graph,
                f.graph.toggle_floors() == other.graph,
                is_connected(&f.graph),
            )
        }
        None => (false, false, false),
    };
    FoldCheck {
        params,
        expected,
        outer_acyclic,
        matches,
        toggle_matches,
        fold_connected,
        key_connected,
    }
}

/// One step of the connectivity induction: for `0 < m < n`, a smaller
/// valid pair `(m', n')` with `m' < n'`.
pub fn crisscross_reduce(m: i32, n: i32) -> Result<(i32, i32)> {
    if m == 0 {
        return Err(Error::InvalidCrisscross {
            m,
            n,
            reason: "m = 0 is the base case",
        });
    }
    if !(0 < m && m < n) {
        return Err(Error::InvalidCrisscross {
            m,
            n,
            reason: "reduction needs 0 < m < n",
        });
    }
    if !crisscross_valid(m, n) {
        return Err(Error::InvalidCrisscross {
            m,
            n,
            reason: "m - n and m + n are not relatively prime",
        });
    }
    Ok(if 3 * m < n {
        (m, n - 2 * m)
    } else if 2 * m <= n {
        (n - 2 * m, m)
    } else {
        (2 * m - n, m)
    })
}

/// The full reduction sequence from `(m, n)` down to `(0, 1)`, starting with
/// `(min, max)` of the input.
pub fn reduction_chain(m: i32, n: i32) -> Result<Vec<(i32, i32)>> {
    if !crisscross_valid(m, n) {
        return Err(Error::InvalidCrisscross {
            m,
            n,
            reason: "m - n and m + n are not relatively prime",
        });
    }
    let mut cur = (m.min(n), m.max(n));
    let mut chain = vec![cur];
    while cur.0 != 0 {
        cur = crisscross_reduce(cur.0, cur.1)?;
        chain.push(cur);
    }
    Ok(chain)
}
