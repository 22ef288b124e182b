//! Board geometry: leapers, cells, directions, half-open subboards, the
//! four reflections of a square board and pencils of congruent paths.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::verify::gcd;

/// A free `(p, q)`-leaper with `0 < p < q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Leaper {
    p: i32,
    q: i32,
}

impl Leaper {
    /// Rejects `p >= q`, non-positive `p`, and leapers that are not free.
    pub fn new(p: i32, q: i32) -> Result<Self> {
        if p <= 0 || p >= q {
            return Err(Error::InvalidLeaper { p, q });
        }
        let g = gcd(q - p, q + p);
        if g != 1 {
            return Err(Error::NotFree {
                diff: p - q,
                sum: p + q,
                gcd: g,
            });
        }
        Ok(Leaper { p, q })
    }

    pub fn p(&self) -> i32 {
        self.p
    }

    pub fn q(&self) -> i32 {
        self.q
    }

    /// Side of the square board the construction lives on, `2(p + q)`.
    pub fn side(&self) -> i32 {
        2 * (self.p + self.q)
    }

    pub fn cell_count(&self) -> usize {
        (self.side() * self.side()) as usize
    }

    pub fn directions(&self) -> [Direction; 8] {
        let (p, q) = (self.p, self.q);
        [
            Direction::new(p, q),
            Direction::new(p, -q),
            Direction::new(-p, q),
            Direction::new(-p, -q),
            Direction::new(q, p),
            Direction::new(q, -p),
            Direction::new(-q, p),
            Direction::new(-q, -p),
        ]
    }

    /// True when `(dx, dy)` is one of the eight leaper vectors.
    pub fn is_move(&self, dx: i32, dy: i32) -> bool {
        let (ax, ay) = (dx.abs(), dy.abs());
        (ax == self.p && ay == self.q) || (ax == self.q && ay == self.p)
    }
}

impl fmt::Display for Leaper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.p, self.q)
    }
}

/// A cell addressed by the coordinates of its lower left corner.
///
/// The derived ordering is lexicographic on `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Cell {
    pub x: i32,
    pub y: i32,
}

impl Cell {
    pub const fn new(x: i32, y: i32) -> Self {
        Cell { x, y }
    }

    pub fn offset(self, d: Direction) -> Cell {
        Cell::new(self.x + d.dx, self.y + d.dy)
    }

    pub fn on_board(self, side: i32) -> bool {
        self.x >= 0 && self.y >= 0 && self.x < side && self.y < side
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Direction {
    pub dx: i32,
    pub dy: i32,
}

impl Direction {
    pub const fn new(dx: i32, dy: i32) -> Self {
        Direction { dx, dy }
    }
}

impl std::ops::Neg for Direction {
    type Output = Direction;

    fn neg(self) -> Direction {
        Direction::new(-self.dx, -self.dy)
    }
}

/// The subboard `[x1, x2] x [y1, y2]`: all cells with `x1 <= x < x2` and
/// `y1 <= y < y2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subboard {
    pub x1: i32,
    pub x2: i32,
    pub y1: i32,
    pub y2: i32,
}

impl Subboard {
    pub fn new(x1: i32, x2: i32, y1: i32, y2: i32) -> Result<Self> {
        if x1 >= x2 || y1 >= y2 {
            return Err(Error::EmptySubboard { x1, x2, y1, y2 });
        }
        Ok(Subboard { x1, x2, y1, y2 })
    }

    /// Square subboard `[lo, hi] x [lo, hi]`.
    pub fn square(lo: i32, hi: i32) -> Result<Self> {
        Subboard::new(lo, hi, lo, hi)
    }

    pub fn width(&self) -> i32 {
        self.x2 - self.x1
    }

    pub fn height(&self) -> i32 {
        self.y2 - self.y1
    }

    pub fn area(&self) -> usize {
        (self.width() * self.height()) as usize
    }

    pub fn contains(&self, c: Cell) -> bool {
        c.x >= self.x1 && c.x < self.x2 && c.y >= self.y1 && c.y < self.y2
    }

    /// Position of `c` relative to the lower left corner, if inside.
    pub fn position(&self, c: Cell) -> Option<(i32, i32)> {
        self.contains(c).then(|| (c.x - self.x1, c.y - self.y1))
    }

    pub fn at(&self, x: i32, y: i32) -> Cell {
        Cell::new(self.x1 + x, self.y1 + y)
    }

    pub fn translate(&self, d: Direction) -> Subboard {
        Subboard {
            x1: self.x1 + d.dx,
            x2: self.x2 + d.dx,
            y1: self.y1 + d.dy,
            y2: self.y2 + d.dy,
        }
    }

    pub fn intersection(&self, other: &Subboard) -> Option<Subboard> {
        Subboard::new(
            self.x1.max(other.x1),
            self.x2.min(other.x2),
            self.y1.max(other.y1),
            self.y2.min(other.y2),
        )
        .ok()
    }

    /// Cells in row-major order (`y` outer, `x` inner).
    pub fn cells(&self) -> impl Iterator<Item = Cell> + '_ {
        (self.y1..self.y2).flat_map(move |y| (self.x1..self.x2).map(move |x| Cell::new(x, y)))
    }
}

impl fmt::Display for Subboard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}] x [{}, {}]", self.x1, self.x2, self.y1, self.y2)
    }
}

/// An undirected edge, stored with the lexicographically smaller cell first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    a: Cell,
    b: Cell,
}

impl Edge {
    pub fn new(u: Cell, v: Cell) -> Self {
        if u <= v {
            Edge { a: u, b: v }
        } else {
            Edge { a: v, b: u }
        }
    }

    pub fn a(&self) -> Cell {
        self.a
    }

    pub fn b(&self) -> Cell {
        self.b
    }

    pub fn ends(&self) -> (Cell, Cell) {
        (self.a, self.b)
    }

    pub fn touches(&self, c: Cell) -> bool {
        self.a == c || self.b == c
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.a, self.b)
    }
}

/// The symmetries of the square board used by the construction: the
/// identity, reflection in the vertical axis, the half turn about the
/// center, and reflection in the horizontal axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Reflection {
    Identity,
    Vertical,
    Center,
    Horizontal,
}

impl Reflection {
    pub const ALL: [Reflection; 4] = [
        Reflection::Identity,
        Reflection::Vertical,
        Reflection::Center,
        Reflection::Horizontal,
    ];

    pub fn compose(self, other: Reflection) -> Reflection {
        use Reflection::*;
        let bits = |r: Reflection| match r {
            Identity => (false, false),
            Vertical => (true, false),
            Center => (true, true),
            Horizontal => (false, true),
        };
        let (a, b) = (bits(self), bits(other));
        match (a.0 ^ b.0, a.1 ^ b.1) {
            (false, false) => Identity,
            (true, false) => Vertical,
            (true, true) => Center,
            (false, true) => Horizontal,
        }
    }
}

pub trait Reflect: Sized {
    /// Image under `r` on a square board of the given side.
    fn reflect(&self, r: Reflection, side: i32) -> Self;
}

impl Reflect for Cell {
    fn reflect(&self, r: Reflection, side: i32) -> Self {
        let fx = side - 1 - self.x;
        let fy = side - 1 - self.y;
        match r {
            Reflection::Identity => *self,
            Reflection::Vertical => Cell::new(fx, self.y),
            Reflection::Center => Cell::new(fx, fy),
            Reflection::Horizontal => Cell::new(self.x, fy),
        }
    }
}

impl Reflect for Subboard {
    fn reflect(&self, r: Reflection, side: i32) -> Self {
        let (x1, x2) = match r {
            Reflection::Vertical | Reflection::Center => (side - self.x2, side - self.x1),
            _ => (self.x1, self.x2),
        };
        let (y1, y2) = match r {
            Reflection::Horizontal | Reflection::Center => (side - self.y2, side - self.y1),
            _ => (self.y1, self.y2),
        };
        Subboard { x1, x2, y1, y2 }
    }
}

impl Reflect for Edge {
    fn reflect(&self, r: Reflection, side: i32) -> Self {
        Edge::new(self.a.reflect(r, side), self.b.reflect(r, side))
    }
}

impl Reflect for BTreeSet<Edge> {
    fn reflect(&self, r: Reflection, side: i32) -> Self {
        self.iter().map(|e| e.reflect(r, side)).collect()
    }
}

/// The pencil `base -> d1 -> ... -> dk`: one path per cell of `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilSpec {
    pub base: Subboard,
    pub dirs: Vec<Direction>,
}

impl PencilSpec {
    pub fn new(base: Subboard, dirs: impl Into<Vec<Direction>>) -> Self {
        PencilSpec {
            base,
            dirs: dirs.into(),
        }
    }

    pub fn reflect(&self, r: Reflection, side: i32) -> PencilSpec {
        let flip = |d: Direction| match r {
            Reflection::Identity => d,
            Reflection::Vertical => Direction::new(-d.dx, d.dy),
            Reflection::Center => -d,
            Reflection::Horizontal => Direction::new(d.dx, -d.dy),
        };
        PencilSpec {
            base: self.base.reflect(r, side),
            dirs: self.dirs.iter().copied().map(flip).collect(),
        }
    }
}

/// Expands a pencil into its paths, checking every vertex against a square
/// board of side `side`.
pub fn expand_pencil(spec: &PencilSpec, side: i32) -> Result<Vec<Vec<Cell>>> {
    spec.base
        .cells()
        .map(|start| {
            let mut path = Vec::with_capacity(spec.dirs.len() + 1);
            let mut cur = start;
            path.push(cur);
            for &d in &spec.dirs {
                cur = cur.offset(d);
                path.push(cur);
            }
            match path.iter().find(|c| !c.on_board(side)) {
                Some(&bad) => Err(Error::OffBoard(bad)),
                None => Ok(path),
            }
        })
        .collect()
}

/// Edges traversed by a path, in order.
pub fn path_edges(path: &[Cell]) -> impl Iterator<Item = Edge> + '_ {
    path.windows(2).map(|w| Edge::new(w[0], w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knight() -> Leaper {
        Leaper::new(1, 2).unwrap()
    }

    #[test]
    fn knight_directions() {
        let got: BTreeSet<_> = knight().directions().into_iter().collect();
        let want: BTreeSet<_> = [
            (1, 2),
            (1, -2),
            (-1, 2),
            (-1, -2),
            (2, 1),
            (2, -1),
            (-2, 1),
            (-2, -1),
        ]
        .into_iter()
        .map(|(x, y)| Direction::new(x, y))
        .collect();
        assert_eq!(got, want);
    }

    #[test]
    fn eight_distinct_directions_closed_under_negation() {
        for (p, q) in [(1, 2), (2, 3), (1, 4), (3, 4), (2, 5), (4, 9)] {
            let l = Leaper::new(p, q).unwrap();
            let dirs: BTreeSet<_> = l.directions().into_iter().collect();
            assert_eq!(dirs.len(), 8);
            for d in &dirs {
                assert!(dirs.contains(&-*d));
                assert!(l.is_move(d.dx, d.dy));
            }
        }
        let z = Leaper::new(2, 5).unwrap();
        assert!(z.directions().contains(&Direction::new(5, -2)));
    }

    #[test]
    fn rejects_bad_leapers() {
        assert!(matches!(
            Leaper::new(1, 3),
            Err(Error::NotFree { gcd: 2, .. })
        ));
        assert!(matches!(
            Leaper::new(2, 2),
            Err(Error::InvalidLeaper { .. })
        ));
        assert!(matches!(
            Leaper::new(0, 1),
            Err(Error::InvalidLeaper { .. })
        ));
        assert!(matches!(
            Leaper::new(3, 2),
            Err(Error::InvalidLeaper { .. })
        ));
        assert!(matches!(Leaper::new(1, 7), Err(Error::NotFree { .. })));
        let msg = Leaper::new(1, 3).unwrap_err().to_string();
        assert!(msg.contains("not relatively prime"), "{msg}");
    }

    #[test]
    fn reflect_cells_and_cores() {
        let l = Leaper::new(2, 5).unwrap();
        let side = l.side();
        let origin = Cell::new(0, 0);
        assert_eq!(
            origin.reflect(Reflection::Vertical, side),
            Cell::new(side - 1, 0)
        );
        assert_eq!(
            origin.reflect(Reflection::Horizontal, side),
            Cell::new(0, side - 1)
        );
        assert_eq!(
            origin.reflect(Reflection::Center, side),
            Cell::new(side - 1, side - 1)
        );

        let (p, q) = (l.p(), l.q());
        let c1 = Subboard::square(p, q).unwrap();
        let c3 = Subboard::square(2 * p + q, p + 2 * q).unwrap();
        assert_eq!(c1.reflect(Reflection::Center, side), c3);
        assert_eq!(
            c1.reflect(Reflection::Center, side)
                .reflect(Reflection::Center, side),
            c1
        );
    }

    #[test]
    fn reflections_form_klein_group() {
        let side = 14;
        let c = Cell::new(3, 9);
        assert_eq!(
            c.reflect(Reflection::Vertical, side)
                .reflect(Reflection::Horizontal, side),
            c.reflect(Reflection::Center, side)
        );
        for r in Reflection::ALL {
            assert_eq!(r.compose(r), Reflection::Identity);
            for s in Reflection::ALL {
                assert_eq!(
                    c.reflect(r, side).reflect(s, side),
                    c.reflect(r.compose(s), side)
                );
            }
        }
    }

    #[test]
    fn subboard_reflection_matches_cellwise() {
        let side = 10;
        let sb = Subboard::new(1, 4, 0, 3).unwrap();
        for r in Reflection::ALL {
            let img: BTreeSet<_> = sb.cells().map(|c| c.reflect(r, side)).collect();
            let direct: BTreeSet<_> = sb.reflect(r, side).cells().collect();
            assert_eq!(img, direct);
        }
    }

    #[test]
    fn forward_rhombus_pencil_closes() {
        let l = Leaper::new(2, 5).unwrap();
        let (p, q) = (l.p(), l.q());
        let spec = PencilSpec::new(
            Subboard::square(p, q).unwrap(),
            [
                Direction::new(q, p),
                Direction::new(p, q),
                Direction::new(-q, -p),
                Direction::new(-p, -q),
            ],
        );
        let paths = expand_pencil(&spec, l.side()).unwrap();
        assert_eq!(paths.len(), ((q - p) * (q - p)) as usize);
        for path in paths {
            assert_eq!(path.first(), path.last());
            assert_eq!(path.len(), 5);
        }
    }

    #[test]
    fn empty_pencil_and_single_edge_pencil() {
        let sb = Subboard::new(0, 3, 0, 2).unwrap();
        let paths = expand_pencil(&PencilSpec::new(sb, vec![]), 10).unwrap();
        assert_eq!(paths.len(), 6);
        assert!(paths.iter().all(|p| p.len() == 1));

        let l = Leaper::new(2, 5).unwrap();
        let a = PencilSpec::new(
            Subboard::new(0, l.p(), 0, l.q()).unwrap(),
            [Direction::new(l.q(), l.p())],
        );
        let paths = expand_pencil(&a, l.side()).unwrap();
        assert_eq!(paths.len(), (l.p() * l.q()) as usize);
        assert!(paths.iter().all(|p| p.len() == 2));
    }

    #[test]
    fn pencil_off_board_is_rejected() {
        let spec = PencilSpec::new(Subboard::new(4, 6, 0, 1).unwrap(), [Direction::new(2, 1)]);
        match expand_pencil(&spec, 6) {
            Err(Error::OffBoard(c)) => assert_eq!(c, Cell::new(6, 1)),
            other => panic!("expected off-board error, got {other:?}"),
        }
    }

    #[test]
    fn edges_are_canonical() {
        let e = Edge::new(Cell::new(5, 1), Cell::new(2, 3));
        assert_eq!(e.a(), Cell::new(2, 3));
        assert_eq!(e, Edge::new(Cell::new(2, 3), Cell::new(5, 1)));
    }

    #[test]
    fn empty_subboard_rejected() {
        assert!(Subboard::new(2, 2, 0, 1).is_err());
        assert!(Subboard::new(0, 1, 3, 1).is_err());
    }
}
