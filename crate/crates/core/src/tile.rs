//! Tours of boards whose sides are multiples of `2(p + q)`.
//!
//! The board is cut into `k x l` squares of side `2(p + q)`. Each square gets
//! a copy of a base tour, untouched or rotated a quarter turn
//! counterclockwise about its centre, in a checkerboard pattern. Adjacent
//! copies are joined by flipping a switch: an edge `ab` of one copy and an
//! edge `cd` of the other such that `bc` and `da` are moves. Switches are
//! flipped along a spanning tree of the square grid (each row left to
//! right, rows joined through the first column).

use std::collections::{BTreeSet, HashMap, HashSet};

use crate::error::{bug, Error, Result};
use crate::geom::{Cell, Edge, Leaper};
use crate::par::{self, Execution};
use crate::splice::{canonicalize, CycleTracker, Tour};
use crate::twofactor::TwoFactor;
use crate::verify::verify_tour;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Translation,
    Rotated,
}

/// A `k x l` grid of square subboards of side `side`; `k` counts columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TiledLayout {
    pub side: i32,
    pub k: i32,
    pub l: i32,
}

impl TiledLayout {
    pub fn new(side: i32, k: i32, l: i32) -> Result<Self> {
        if k < 1 || l < 1 {
            return Err(Error::InvalidTiling(format!(
                "grid {k}x{l} must be at least 1x1"
            )));
        }
        Ok(TiledLayout { side, k, l })
    }

    pub fn width(&self) -> i32 {
        self.side * self.k
    }

    pub fn height(&self) -> i32 {
        self.side * self.l
    }

    pub fn orientation(&self, i: i32, j: i32) -> Orientation {
        if (i + j) % 2 == 0 {
            Orientation::Translation
        } else {
            Orientation::Rotated
        }
    }

    pub fn origin(&self, i: i32, j: i32) -> Cell {
        Cell::new(i * self.side, j * self.side)
    }

    /// Tree edges as pairs of `(column, row)` grid positions.
    pub fn spanning_tree(&self) -> Vec<((i32, i32), (i32, i32))> {
        let mut out = Vec::new();
        for j in 0..self.l {
            for i in 0..self.k - 1 {
                out.push(((i, j), (i + 1, j)));
            }
        }
        for j in 0..self.l - 1 {
            out.push(((0, j), (0, j + 1)));
        }
        out
    }
}

/// Quarter turn counterclockwise about the centre of a square of side `side`.
pub fn rotate_ccw(c: Cell, side: i32) -> Cell {
    Cell::new(side - 1 - c.y, c.x)
}

/// A copy of the base tour placed on one subboard, in board coordinates.
#[derive(Clone, Debug)]
pub struct PlacedCopy {
    pub origin: Cell,
    pub side: i32,
    pub orientation: Orientation,
    neighbors: HashMap<Cell, [Cell; 2]>,
}

impl PlacedCopy {
    pub fn place(base: &Tour, side: i32, origin: Cell, orientation: Orientation) -> Self {
        let map = |c: Cell| {
            let c = match orientation {
                Orientation::Translation => c,
                Orientation::Rotated => rotate_ccw(c, side),
            };
            Cell::new(c.x + origin.x, c.y + origin.y)
        };
        let cells: Vec<Cell> = base.cells().iter().map(|&c| map(c)).collect();
        let n = cells.len();
        let neighbors = (0..n)
            .map(|i| (cells[i], [cells[(i + n - 1) % n], cells[(i + 1) % n]]))
            .collect();
        PlacedCopy {
            origin,
            side,
            orientation,
            neighbors,
        }
    }

    pub fn contains(&self, c: Cell) -> bool {
        self.neighbors.contains_key(&c)
    }

    pub fn neighbors(&self, c: Cell) -> Option<[Cell; 2]> {
        self.neighbors.get(&c).copied()
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        self.neighbors
            .iter()
            .flat_map(|(&c, ns)| ns.iter().map(move |&n| Edge::new(c, n)))
            .collect()
    }
}

/// Edges `ab` (first copy) and `cd` (second copy) whose replacement by `bc`
/// and `da` splices the two cycles.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Switch {
    pub a: Cell,
    pub b: Cell,
    pub c: Cell,
    pub d: Cell,
}

impl Switch {
    pub fn ab(&self) -> Edge {
        Edge::new(self.a, self.b)
    }

    pub fn cd(&self) -> Edge {
        Edge::new(self.c, self.d)
    }

    pub fn removed(&self) -> [Edge; 2] {
        [self.ab(), self.cd()]
    }

    pub fn added(&self) -> [Edge; 2] {
        [Edge::new(self.b, self.c), Edge::new(self.d, self.a)]
    }

    /// Labels normalised so that equal edge exchanges compare equal.
    fn normalized(self) -> Switch {
        let alt = Switch {
            a: self.b,
            b: self.a,
            c: self.d,
            d: self.c,
        };
        self.min(alt)
    }
}

/// Every switch between two copies, in a canonical order.
pub fn switch_candidates(first: &PlacedCopy, second: &PlacedCopy, leaper: Leaper) -> Vec<Switch> {
    let dirs = leaper.directions();
    let mut found = BTreeSet::new();
    for e in first.edges() {
        for (a, b) in [(e.a(), e.b()), (e.b(), e.a())] {
            for d in dirs {
                let c = b.offset(d);
                let Some(ns) = second.neighbors(c) else {
                    continue;
                };
                for dd in ns {
                    if leaper.is_move(a.x - dd.x, a.y - dd.y) {
                        found.insert(Switch { a, b, c, d: dd }.normalized());
                    }
                }
            }
        }
    }
    found.into_iter().collect()
}

/// First switch in canonical order between two copies.
pub fn find_switch(first: &PlacedCopy, second: &PlacedCopy, leaper: Leaper) -> Result<Switch> {
    switch_candidates(first, second, leaper)
        .into_iter()
        .next()
        .ok_or_else(|| {
            Error::Construction(format!(
                "no switch between copies at {} and {}",
                first.origin, second.origin
            ))
        })
}

#[derive(Clone, Debug)]
pub struct TiledTour {
    pub layout: TiledLayout,
    pub tour: Tour,
    pub switches: Vec<Switch>,
}

pub fn tile(leaper: Leaper, k: i32, l: i32, base: &Tour) -> Result<Tour> {
    Ok(tile_detailed(leaper, k, l, base, Execution::default())?.tour)
}

pub fn tile_detailed(
    leaper: Leaper,
    k: i32,
    l: i32,
    base: &Tour,
    exec: Execution,
) -> Result<TiledTour> {
    let side = leaper.side();
    let layout = TiledLayout::new(side, k, l)?;
    let report = verify_tour(base.cells(), leaper, side, side);
    if !report.is_valid() {
        return Err(Error::InvalidTiling(format!(
            "base is not a tour of the {side}x{side} board: {}",
            report.first_failure.unwrap_or_default()
        )));
    }

    let slots: Vec<(i32, i32)> = (0..l).flat_map(|j| (0..k).map(move |i| (i, j))).collect();
    let copies = par::map(&slots, exec, |&(i, j)| {
        PlacedCopy::place(base, side, layout.origin(i, j), layout.orientation(i, j))
    });
    let copy_at = |i: i32, j: i32| &copies[(j * k + i) as usize];

    let mut tf = TwoFactor::from_edges(
        layout.width(),
        layout.height(),
        copies.iter().flat_map(|c| c.edges()),
    )?;
    let mut tracker = CycleTracker::new(&tf);
    if tracker.cycle_count() != slots.len() {
        return bug("placed copies are not one cycle each");
    }

    let mut used: HashSet<Edge> = HashSet::new();
    let mut switches = Vec::new();
    for ((i1, j1), (i2, j2)) in layout.spanning_tree() {
        let (first, second) = (copy_at(i1, j1), copy_at(i2, j2));
        let chosen = switch_candidates(first, second, leaper)
            .into_iter()
            .find(|s| s.removed().iter().all(|e| !used.contains(e)));
        let Some(s) = chosen else {
            return bug(format!(
                "no edge-disjoint switch between copies at {} and {}",
                first.origin, second.origin
            ));
        };
        used.extend(s.removed());
        tf.exchange(s.removed(), s.added())?;
        if !tracker.merge(s.a, s.c) {
            return bug("switch joined a cycle to itself");
        }
        switches.push(s);
    }
    if tracker.cycle_count() != 1 || tf.cycle_count() != 1 {
        return bug(format!("tiling left {} cycles", tf.cycle_count()));
    }
    let tour = canonicalize(&Tour::from_two_factor(&tf)?);
    let report = verify_tour(tour.cells(), leaper, layout.width(), layout.height());
    if !report.is_valid() {
        return bug(format!(
            "tiled tour failed verification: {}",
            report.first_failure.unwrap_or_default()
        ));
    }
    Ok(TiledTour {
        layout,
        tour,
        switches,
    })
}
