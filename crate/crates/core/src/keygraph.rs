//! Cores, rhombi, the inner and outer graphs, and their union (the key
//! graph). Halving every rhombus of the key graph yields a two-factor.

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{bug, Result};
use crate::geom::{
    expand_pencil, path_edges, Cell, Direction, Edge, Leaper, PencilSpec, Reflection, Subboard,
};
pub use crate::twofactor::TwoFactor;

/// The four forward and four backward cores, each a square of side `q - p`.
///
/// Index `i` of either array holds the core numbered `i + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Cores {
    pub forward: [Subboard; 4],
    pub backward: [Subboard; 4],
}

impl Cores {
    pub fn side(&self) -> i32 {
        self.forward[0].width()
    }

    /// Number of cores containing `c` (0, 1 or 2).
    pub fn membership(&self, c: Cell) -> u8 {
        self.forward
            .iter()
            .chain(self.backward.iter())
            .filter(|sb| sb.contains(c))
            .count() as u8
    }

    /// Position of `c` in the forward core containing it.
    pub fn forward_position(&self, c: Cell) -> Option<(i32, i32)> {
        self.forward.iter().find_map(|sb| sb.position(c))
    }

    /// Position of `c` in the backward core containing it.
    pub fn backward_position(&self, c: Cell) -> Option<(i32, i32)> {
        self.backward.iter().find_map(|sb| sb.position(c))
    }
}

pub fn build_cores(leaper: Leaper) -> Cores {
    let (p, q) = (leaper.p(), leaper.q());
    let sb = |x1, x2, y1, y2| Subboard::new(x1, x2, y1, y2).expect("p < q");
    Cores {
        forward: [
            sb(p, q, p, q),
            sb(p + q, 2 * q, 2 * p, p + q),
            sb(2 * p + q, p + 2 * q, 2 * p + q, p + 2 * q),
            sb(2 * p, p + q, p + q, 2 * q),
        ],
        backward: [
            sb(2 * p, p + q, 2 * p, p + q),
            sb(2 * p + q, p + 2 * q, p, q),
            sb(p + q, 2 * q, p + q, 2 * q),
            sb(p, q, 2 * p + q, p + 2 * q),
        ],
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RhombusKind {
    Forward,
    Backward,
}

/// A 4-cycle `a b c d` of leaper moves through corresponding cells of the
/// four like-kind cores. `a` lies in core 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rhombus {
    pub cells: [Cell; 4],
    pub kind: RhombusKind,
}

impl Rhombus {
    pub fn base(&self) -> Cell {
        self.cells[0]
    }

    /// `ab, bc, cd, da`.
    pub fn edges(&self) -> [Edge; 4] {
        let [a, b, c, d] = self.cells;
        [
            Edge::new(a, b),
            Edge::new(b, c),
            Edge::new(c, d),
            Edge::new(d, a),
        ]
    }

    /// One of the two perfect matchings: `{ab, cd}` for `false`, `{bc, da}`
    /// for `true`.
    pub fn matching(&self, flipped: bool) -> [Edge; 2] {
        let [ab, bc, cd, da] = self.edges();
        if flipped {
            [bc, da]
        } else {
            [ab, cd]
        }
    }
}

fn forward_rhombus_pencil(leaper: Leaper, cores: &Cores) -> PencilSpec {
    let (p, q) = (leaper.p(), leaper.q());
    PencilSpec::new(
        cores.forward[0],
        [
            Direction::new(q, p),
            Direction::new(p, q),
            Direction::new(-q, -p),
            Direction::new(-p, -q),
        ],
    )
}

fn backward_rhombus_pencil(leaper: Leaper, cores: &Cores) -> PencilSpec {
    let (p, q) = (leaper.p(), leaper.q());
    PencilSpec::new(
        cores.backward[0],
        [
            Direction::new(q, -p),
            Direction::new(-p, q),
            Direction::new(-q, p),
            Direction::new(p, -q),
        ],
    )
}

/// All rhombi (forward first, each kind in row-major order of its base
/// cell) and the edge set of their union.
pub fn build_inner(leaper: Leaper) -> Result<(Vec<Rhombus>, BTreeSet<Edge>)> {
    let cores = build_cores(leaper);
    let mut rhombi = Vec::new();
    for (kind, spec) in [
        (RhombusKind::Forward, forward_rhombus_pencil(leaper, &cores)),
        (
            RhombusKind::Backward,
            backward_rhombus_pencil(leaper, &cores),
        ),
    ] {
        for path in expand_pencil(&spec, leaper.side())? {
            if path[0] != path[4] {
                return bug(format!("rhombus at {} does not close", path[0]));
            }
            rhombi.push(Rhombus {
                cells: [path[0], path[1], path[2], path[3]],
                kind,
            });
        }
    }
    let edges: BTreeSet<Edge> = rhombi.iter().flat_map(|r| r.edges()).collect();
    if edges.len() != 4 * rhombi.len() {
        return bug("two rhombi share an edge");
    }
    Ok((rhombi, edges))
}

/// The six generating pencils of the outer graph; the full graph is their
/// union with all reflections.
pub fn outer_pencils(leaper: Leaper) -> [PencilSpec; 6] {
    let (p, q) = (leaper.p(), leaper.q());
    let sb = |x1, x2, y1, y2| Subboard::new(x1, x2, y1, y2).expect("p < q");
    [
        PencilSpec::new(sb(0, p, 0, q), [Direction::new(q, p)]),
        PencilSpec::new(sb(p, p + q, 0, p), [Direction::new(-p, q)]),
        PencilSpec::new(sb(0, p, 0, p), [Direction::new(p, q)]),
        PencilSpec::new(sb(q, p + q, 0, p), [Direction::new(-q, p)]),
        PencilSpec::new(sb(p, q, 0, p), [Direction::new(q, p)]),
        PencilSpec::new(sb(p, 2 * p, p, q), [Direction::new(-p, q)]),
    ]
}

pub fn build_outer(leaper: Leaper) -> Result<BTreeSet<Edge>> {
    let side = leaper.side();
    let mut edges = BTreeSet::new();
    for spec in outer_pencils(leaper) {
        for r in Reflection::ALL {
            for path in expand_pencil(&spec.reflect(r, side), side)? {
                edges.extend(path_edges(&path));
            }
        }
    }
    Ok(edges)
}

/// The paths of the outer graph, oriented from the smaller endpoint, plus
/// the number of cells lying on cycles (zero when the graph is acyclic).
#[derive(Clone, Debug)]
pub struct OuterPaths {
    pub paths: Vec<Vec<Cell>>,
    pub cycle_cells: usize,
}

impl OuterPaths {
    pub fn is_acyclic(&self) -> bool {
        self.cycle_cells == 0
    }
}

#[derive(Clone, Debug)]
pub struct KeyGraph {
    leaper: Leaper,
    cores: Cores,
    rhombi: Vec<Rhombus>,
    inner: BTreeSet<Edge>,
    outer: BTreeSet<Edge>,
    membership: Vec<u8>,
}

/// Builds the key graph and checks its structural invariants: disjoint
/// inner and outer graphs, per-cell degrees `2e` and `2 - e`, edge counts,
/// and legality of every edge.
pub fn build_key(leaper: Leaper) -> Result<KeyGraph> {
    let cores = build_cores(leaper);
    let (rhombi, inner) = build_inner(leaper)?;
    let outer = build_outer(leaper)?;
    let side = leaper.side();
    let membership = (0..side * side)
        .map(|i| cores.membership(Cell::new(i % side, i / side)))
        .collect();
    let key = KeyGraph {
        leaper,
        cores,
        rhombi,
        inner,
        outer,
        membership,
    };
    key.validate()?;
    Ok(key)
}

impl KeyGraph {
    pub fn leaper(&self) -> Leaper {
        self.leaper
    }

    pub fn side(&self) -> i32 {
        self.leaper.side()
    }

    pub fn cores(&self) -> &Cores {
        &self.cores
    }

    pub fn rhombi(&self) -> &[Rhombus] {
        &self.rhombi
    }

    pub fn inner_edges(&self) -> &BTreeSet<Edge> {
        &self.inner
    }

    pub fn outer_edges(&self) -> &BTreeSet<Edge> {
        &self.outer
    }

    fn index(&self, c: Cell) -> usize {
        (c.y * self.side() + c.x) as usize
    }

    fn cell(&self, i: usize) -> Cell {
        let side = self.side();
        Cell::new(i as i32 % side, i as i32 / side)
    }

    pub fn core_membership(&self, c: Cell) -> u8 {
        self.membership[self.index(c)]
    }

    /// Per-cell degree of an edge set, indexed row-major.
    fn degrees<'a>(&self, edges: impl IntoIterator<Item = &'a Edge>) -> Vec<u8> {
        let mut deg = vec![0u8; self.leaper.cell_count()];
        for e in edges {
            deg[self.index(e.a())] += 1;
            deg[self.index(e.b())] += 1;
        }
        deg
    }

    pub fn inner_degrees(&self) -> Vec<u8> {
        self.degrees(&self.inner)
    }

    pub fn outer_degrees(&self) -> Vec<u8> {
        self.degrees(&self.outer)
    }

    fn validate(&self) -> Result<()> {
        let (p, q) = (self.leaper.p(), self.leaper.q());
        let k = ((q - p) * (q - p)) as usize;
        if self.rhombi.len() != 2 * k {
            return bug(format!("{} rhombi, expected {}", self.rhombi.len(), 2 * k));
        }
        if self.inner.len() != 8 * k {
            return bug(format!(
                "{} inner edges, expected {}",
                self.inner.len(),
                8 * k
            ));
        }
        if self.outer.len() != (16 * p * q) as usize {
            return bug(format!(
                "{} outer edges, expected {}",
                self.outer.len(),
                16 * p * q
            ));
        }
        if let Some(e) = self.inner.intersection(&self.outer).next() {
            return bug(format!("edge {e} is both inner and outer"));
        }
        let side = self.side();
        for e in self.inner.iter().chain(&self.outer) {
            let (a, b) = e.ends();
            if !a.on_board(side) || !b.on_board(side) || !self.leaper.is_move(b.x - a.x, b.y - a.y)
            {
                return bug(format!("{e} is not a leaper move on the board"));
            }
        }
        let din = self.inner_degrees();
        let dout = self.outer_degrees();
        for (i, &e) in self.membership.iter().enumerate() {
            if din[i] != 2 * e || dout[i] + e != 2 {
                return bug(format!(
                    "cell {} in {e} cores has inner degree {} and outer degree {}",
                    self.cell(i),
                    din[i],
                    dout[i]
                ));
            }
        }
        Ok(())
    }

    /// Breadth-first connectivity of the union of inner and outer graphs.
    pub fn is_connected(&self) -> bool {
        let n = self.leaper.cell_count();
        let mut adj = vec![Vec::with_capacity(4); n];
        for e in self.inner.iter().chain(&self.outer) {
            let (a, b) = (self.index(e.a()), self.index(e.b()));
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
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

    /// Decomposes the outer graph into maximal paths by walking from every
    /// degree-one cell. Cells of degree two never reached lie on cycles.
    pub fn outer_paths(&self) -> OuterPaths {
        let n = self.leaper.cell_count();
        let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(2); n];
        for e in &self.outer {
            let (a, b) = (self.index(e.a()), self.index(e.b()));
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; n];
        let mut paths = Vec::new();
        for start in 0..n {
            if seen[start] || adj[start].len() != 1 {
                continue;
            }
            let mut path = vec![start];
            seen[start] = true;
            let (mut prev, mut cur) = (start, adj[start][0]);
            loop {
                path.push(cur);
                seen[cur] = true;
                match adj[cur].iter().find(|&&w| w != prev) {
                    Some(&next) if adj[cur].len() == 2 => {
                        prev = cur;
                        cur = next;
                    }
                    _ => break,
                }
            }
            let mut cells: Vec<Cell> = path.into_iter().map(|i| self.cell(i)).collect();
            if cells.last() < cells.first() {
                cells.reverse();
            }
            paths.push(cells);
        }
        paths.sort();
        let cycle_cells = (0..n).filter(|&i| !seen[i] && !adj[i].is_empty()).count();
        OuterPaths { paths, cycle_cells }
    }
}

/// A choice of matching for every rhombus, indexed like
/// [`KeyGraph::rhombi`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Halving {
    bits: Vec<bool>,
}

impl Halving {
    pub fn zeros(n: usize) -> Self {
        Halving {
            bits: vec![false; n],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        Halving { bits }
    }

    /// Uniformly random bits from a ChaCha8 stream seeded with `seed`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Halving {
            bits: (0..n).map(|_| rng.random()).collect(),
        }
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }
}

/// The outer graph together with one matching of every rhombus.
pub fn halve(key: &KeyGraph, halving: &Halving) -> Result<TwoFactor> {
    if halving.len() != key.rhombi.len() {
        return bug(format!(
            "halving has {} bits for {} rhombi",
            halving.len(),
            key.rhombi.len()
        ));
    }
    let chosen = key
        .rhombi
        .iter()
        .zip(halving.bits())
        .flat_map(|(r, &bit)| r.matching(bit));
    let side = key.side();
    TwoFactor::from_edges(side, side, key.outer.iter().copied().chain(chosen))
}
