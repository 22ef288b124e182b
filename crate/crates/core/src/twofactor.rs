//! Degree-two spanning subgraphs of a rectangular board, stored as a pair
//! of neighbour slots per cell.

use std::collections::BTreeSet;

use crate::error::{bug, Result};
use crate::geom::{Cell, Edge};

const NONE: u32 = u32::MAX;

/// A two-factor (pseudotour): every cell of a `width x height` board has
/// exactly two neighbours.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoFactor {
    width: i32,
    height: i32,
    adj: Vec<[u32; 2]>,
}

impl TwoFactor {
    /// Builds a two-factor from an edge list, failing unless every cell ends
    /// up with degree exactly two.
    pub fn from_edges<I>(width: i32, height: i32, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Edge>,
    {
        let mut tf = TwoFactor {
            width,
            height,
            adj: vec![[NONE; 2]; (width * height) as usize],
        };
        for e in edges {
            tf.link(e)?;
        }
        if let Some(i) = tf.adj.iter().position(|s| s[1] == NONE) {
            let c = tf.cell(i as u32);
            let deg = tf.adj[i].iter().filter(|&&v| v != NONE).count();
            return bug(format!("cell {c} has degree {deg} in the two-factor"));
        }
        Ok(tf)
    }

    pub fn width(&self) -> i32 {
        self.width
    }

    pub fn height(&self) -> i32 {
        self.height
    }

    pub fn cell_count(&self) -> usize {
        self.adj.len()
    }

    pub fn index(&self, c: Cell) -> Option<u32> {
        (c.x >= 0 && c.y >= 0 && c.x < self.width && c.y < self.height)
            .then(|| (c.y * self.width + c.x) as u32)
    }

    pub fn cell(&self, i: u32) -> Cell {
        let i = i as i32;
        Cell::new(i % self.width, i / self.width)
    }

    pub fn neighbors(&self, c: Cell) -> Option<[Cell; 2]> {
        let i = self.index(c)?;
        let [u, v] = self.adj[i as usize];
        Some([self.cell(u), self.cell(v)])
    }

    pub fn contains(&self, e: Edge) -> bool {
        match (self.index(e.a()), self.index(e.b())) {
            (Some(a), Some(b)) => self.adj[a as usize].contains(&b),
            _ => false,
        }
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        let mut out = BTreeSet::new();
        for (i, slots) in self.adj.iter().enumerate() {
            for &j in slots {
                if (i as u32) < j {
                    out.insert(Edge::new(self.cell(i as u32), self.cell(j)));
                }
            }
        }
        out
    }

    fn link(&mut self, e: Edge) -> Result<()> {
        let (Some(a), Some(b)) = (self.index(e.a()), self.index(e.b())) else {
            return bug(format!("edge {e} leaves the board"));
        };
        if self.adj[a as usize].contains(&b) {
            return bug(format!("edge {e} inserted twice"));
        }
        for (u, v) in [(a, b), (b, a)] {
            let slots = &mut self.adj[u as usize];
            if slots[0] == NONE {
                slots[0] = v;
            } else if slots[1] == NONE {
                slots[1] = v;
            } else {
                return bug(format!("cell {} would exceed degree two", self.cell(u)));
            }
        }
        Ok(())
    }

    fn unlink(&mut self, e: Edge) -> Result<()> {
        let (Some(a), Some(b)) = (self.index(e.a()), self.index(e.b())) else {
            return bug(format!("edge {e} leaves the board"));
        };
        for (u, v) in [(a, b), (b, a)] {
            let slots = &mut self.adj[u as usize];
            match slots.iter().position(|&w| w == v) {
                Some(k) => slots[k] = NONE,
                None => return bug(format!("edge {e} is not in the two-factor")),
            }
        }
        Ok(())
    }

    /// Removes `remove` and inserts `add`; both pairs must cover the same
    /// four cells so that all degrees stay at two.
    pub fn exchange(&mut self, remove: [Edge; 2], add: [Edge; 2]) -> Result<()> {
        for e in remove {
            self.unlink(e)?;
        }
        for e in add {
            self.link(e)?;
        }
        // unlink leaves holes in either slot; keep slot 1 filled only if slot 0 is
        for slots in &mut self.adj {
            if slots[0] == NONE {
                slots.swap(0, 1);
            }
        }
        if self.adj.iter().any(|s| s[1] == NONE) {
            return bug("exchange left a cell with degree below two");
        }
        Ok(())
    }

    /// Cycle id of every cell, plus the number of cycles.
    pub fn cycle_labels(&self) -> (Vec<u32>, usize) {
        let mut label = vec![NONE; self.adj.len()];
        let mut count = 0u32;
        for start in 0..self.adj.len() {
            if label[start] != NONE {
                continue;
            }
            let mut prev = NONE;
            let mut cur = start as u32;
            loop {
                label[cur as usize] = count;
                let [u, v] = self.adj[cur as usize];
                let next = if u != prev { u } else { v };
                prev = cur;
                cur = next;
                if cur as usize == start {
                    break;
                }
            }
            count += 1;
        }
        (label, count as usize)
    }

    pub fn cycle_count(&self) -> usize {
        self.cycle_labels().1
    }

    /// The cycle through `start`, beginning at `start` and heading first to
    /// `towards` (which must be a neighbour).
    pub fn walk(&self, start: Cell, towards: Cell) -> Vec<Cell> {
        let s = self.index(start).expect("start on board");
        let t = self.index(towards).expect("towards on board");
        debug_assert!(self.adj[s as usize].contains(&t));
        let mut out = vec![start];
        let (mut prev, mut cur) = (s, t);
        while cur != s {
            out.push(self.cell(cur));
            let [u, v] = self.adj[cur as usize];
            let next = if u != prev { u } else { v };
            prev = cur;
            cur = next;
        }
        out
    }

    /// All cycles, each starting at its lexicographically smallest cell and
    /// heading towards the smaller of that cell's two neighbours. Cycles are
    /// sorted by starting cell.
    pub fn cycles(&self) -> Vec<Vec<Cell>> {
        let (labels, count) = self.cycle_labels();
        let mut first: Vec<Option<Cell>> = vec![None; count];
        // row-major index order is not lexicographic in (x, y), so compare cells
        for (i, &l) in labels.iter().enumerate() {
            let c = self.cell(i as u32);
            let slot = &mut first[l as usize];
            if slot.is_none_or(|m| c < m) {
                *slot = Some(c);
            }
        }
        let mut starts: Vec<Cell> = first.into_iter().flatten().collect();
        starts.sort();
        starts
            .into_iter()
            .map(|s| {
                let [u, v] = self.neighbors(s).expect("on board");
                self.walk(s, u.min(v))
            })
            .collect()
    }
}
