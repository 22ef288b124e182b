//! Independent checks on finished tours.
//!
//! Nothing here touches the construction code; a tour is just a cyclic
//! list of cells, checked against the raw leaper vectors.

use std::collections::{BTreeSet, HashSet};
use std::fmt;

use serde::Serialize;

use crate::geom::{Cell, Leaper};

pub fn gcd(a: i32, b: i32) -> i32 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// A `(p, q)`-leaper can reach every cell of a large board exactly when
/// `q - p` and `q + p` are coprime.
pub fn is_free(p: i32, q: i32) -> bool {
    p >= 1 && q >= 1 && gcd(q - p, q + p) == 1
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TourReport {
    pub cell_count_ok: bool,
    pub all_moves_legal: bool,
    pub all_cells_once: bool,
    pub closed: bool,
    pub centrally_symmetric: bool,
    pub first_failure: Option<String>,
}

impl TourReport {
    pub fn is_valid(&self) -> bool {
        self.cell_count_ok && self.all_moves_legal && self.all_cells_once && self.closed
    }
}

impl fmt::Display for TourReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flag = |b: bool| if b { "yes" } else { "no" };
        writeln!(f, "cell count ok:       {}", flag(self.cell_count_ok))?;
        writeln!(f, "all moves legal:     {}", flag(self.all_moves_legal))?;
        writeln!(f, "all cells once:      {}", flag(self.all_cells_once))?;
        writeln!(f, "closed:              {}", flag(self.closed))?;
        writeln!(f, "centrally symmetric: {}", flag(self.centrally_symmetric))?;
        match &self.first_failure {
            Some(msg) => write!(f, "first failure: {msg}"),
            None => write!(f, "valid: {}", flag(self.is_valid())),
        }
    }
}

/// Checks that `cells` is a closed leaper tour visiting every cell of the
/// `width x height` board exactly once.
pub fn verify_tour(cells: &[Cell], leaper: Leaper, width: i32, height: i32) -> TourReport {
    let mut report = TourReport {
        cell_count_ok: cells.len() as i64 == width as i64 * height as i64,
        all_moves_legal: true,
        all_cells_once: true,
        closed: false,
        centrally_symmetric: false,
        first_failure: None,
    };
    let fail = |report: &mut TourReport, msg: String| {
        if report.first_failure.is_none() {
            report.first_failure = Some(msg);
        }
    };
    if !report.cell_count_ok {
        let msg = format!("{} cells for a {width}x{height} board", cells.len());
        fail(&mut report, msg);
    }

    let mut seen = HashSet::with_capacity(cells.len());
    for (i, &c) in cells.iter().enumerate() {
        if c.x < 0 || c.y < 0 || c.x >= width || c.y >= height {
            report.all_cells_once = false;
            fail(&mut report, format!("index {i}: cell {c} is off the board"));
        } else if !seen.insert(c) {
            report.all_cells_once = false;
            fail(&mut report, format!("index {i}: cell {c} visited twice"));
        }
    }

    for (i, w) in cells.windows(2).enumerate() {
        let (a, b) = (w[0], w[1]);
        if !leaper.is_move(b.x - a.x, b.y - a.y) {
            report.all_moves_legal = false;
            fail(&mut report, format!("index {i}: {a} -> {b} is not a move"));
        }
    }

    if let (Some(&first), Some(&last)) = (cells.first(), cells.last()) {
        report.closed = cells.len() > 2 && leaper.is_move(first.x - last.x, first.y - last.y);
        if !report.closed {
            fail(
                &mut report,
                format!("tour does not close: {last} -> {first}"),
            );
        }
    } else {
        fail(&mut report, "empty tour".to_string());
    }

    report.centrally_symmetric = verify_central_symmetry(cells, width, height);
    report
}

fn cyclic_edges(cells: &[Cell]) -> BTreeSet<(Cell, Cell)> {
    let n = cells.len();
    (0..n)
        .map(|i| {
            let (a, b) = (cells[i], cells[(i + 1) % n]);
            if a <= b {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect()
}

/// The cyclic edge set is invariant under `(x, y) -> (w - 1 - x, h - 1 - y)`.
pub fn verify_central_symmetry(cells: &[Cell], width: i32, height: i32) -> bool {
    if cells.len() < 2 {
        return false;
    }
    let edges = cyclic_edges(cells);
    let flip = |c: Cell| Cell::new(width - 1 - c.x, height - 1 - c.y);
    edges.iter().all(|&(a, b)| {
        let (u, v) = (flip(a), flip(b));
        edges.contains(&if u <= v { (u, v) } else { (v, u) })
    })
}

/// A leaper with `p + q` odd alternates square colours on every move, so a
/// closed tour needs an even number of cells.
pub fn parity_forbids_closed_tour(leaper: Leaper, width: i32, height: i32) -> bool {
    (leaper.p() + leaper.q()) % 2 == 1 && (width * height) % 2 == 1
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OracleOutcome {
    Found(Vec<Cell>),
    /// The node budget ran out first. Says nothing about existence.
    NotFoundWithinBudget {
        nodes: u64,
    },
}

/// Depth-first search for a closed tour from `(0, 0)`, trying moves in
/// order of fewest onward moves (ties by cell order).
pub fn oracle_tour_search(leaper: Leaper, width: i32, height: i32, budget: u64) -> OracleOutcome {
    let n = (width * height) as usize;
    if n == 0 {
        return OracleOutcome::NotFoundWithinBudget { nodes: 0 };
    }
    let idx = |c: Cell| (c.y * width + c.x) as usize;
    let cell = |i: usize| Cell::new(i as i32 % width, i as i32 / width);
    let dirs = leaper.directions();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let c = cell(i);
            let mut out: Vec<usize> = dirs
                .iter()
                .map(|d| Cell::new(c.x + d.dx, c.y + d.dy))
                .filter(|c| c.x >= 0 && c.y >= 0 && c.x < width && c.y < height)
                .map(idx)
                .collect();
            out.sort_unstable();
            out
        })
        .collect();

    struct Search<'a> {
        adj: &'a [Vec<usize>],
        visited: Vec<bool>,
        path: Vec<usize>,
        nodes: u64,
        budget: u64,
    }

    impl Search<'_> {
        fn free_degree(&self, v: usize) -> usize {
            self.adj[v].iter().filter(|&&w| !self.visited[w]).count()
        }

        fn go(&mut self) -> bool {
            let n = self.adj.len();
            let cur = *self.path.last().expect("nonempty");
            if self.path.len() == n {
                return self.adj[cur].contains(&self.path[0]);
            }
            self.nodes += 1;
            if self.nodes > self.budget {
                return false;
            }
            // the start must keep a free neighbour to close through
            if self.free_degree(self.path[0]) == 0 {
                return false;
            }
            let mut next: Vec<(usize, usize)> = self.adj[cur]
                .iter()
                .filter(|&&w| !self.visited[w])
                .map(|&w| (self.free_degree(w), w))
                .collect();
            next.sort_unstable();
            for (_, w) in next {
                self.visited[w] = true;
                self.path.push(w);
                if self.go() {
                    return true;
                }
                self.path.pop();
                self.visited[w] = false;
                if self.nodes > self.budget {
                    return false;
                }
            }
            false
        }
    }

    let mut search = Search {
        adj: &adj,
        visited: vec![false; n],
        path: vec![0],
        nodes: 0,
        budget,
    };
    search.visited[0] = true;
    if search.go() {
        OracleOutcome::Found(search.path.iter().map(|&i| cell(i)).collect())
    } else {
        OracleOutcome::NotFoundWithinBudget {
            nodes: search.nodes,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn knight() -> Leaper {
        Leaper::new(1, 2).unwrap()
    }

    #[test]
    fn freeness() {
        assert!(is_free(1, 2));
        assert!(!is_free(1, 3));
        assert!(is_free(3, 4));
        assert!(is_free(2, 5));
        assert!(!is_free(2, 4));
        assert!(!is_free(3, 3));
        assert!(!is_free(0, 1));
    }

    #[test]
    fn oracle_finds_knight_tour_on_6x6() {
        match oracle_tour_search(knight(), 6, 6, 1_000_000) {
            OracleOutcome::Found(t) => {
                let r = verify_tour(&t, knight(), 6, 6);
                assert!(r.is_valid(), "{r}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn oracle_never_returns_tour_on_5x5() {
        assert!(parity_forbids_closed_tour(knight(), 5, 5));
        assert!(!parity_forbids_closed_tour(knight(), 6, 6));
        assert!(matches!(
            oracle_tour_search(knight(), 5, 5, 200_000),
            OracleOutcome::NotFoundWithinBudget { .. }
        ));
    }

    fn sample_tour() -> Vec<Cell> {
        match oracle_tour_search(knight(), 6, 6, 1_000_000) {
            OracleOutcome::Found(t) => t,
            _ => unreachable!(),
        }
    }

    #[test]
    fn swapped_cells_break_legality() {
        let mut t = sample_tour();
        t.swap(3, 17);
        let r = verify_tour(&t, knight(), 6, 6);
        assert!(!r.all_moves_legal);
        assert!(r.all_cells_once);
        assert!(!r.is_valid());
    }

    #[test]
    fn repeated_cell_detected() {
        let mut t = sample_tour();
        t[5] = t[9];
        let r = verify_tour(&t, knight(), 6, 6);
        assert!(!r.all_cells_once);
        assert!(r.first_failure.is_some());
    }

    #[test]
    fn truncated_tour_fails_count_and_closure() {
        let t = sample_tour();
        let r = verify_tour(&t[..30], knight(), 6, 6);
        assert!(!r.cell_count_ok);
        assert!(!r.is_valid());
    }

    #[test]
    fn symmetric_four_cycle() {
        // a rectangle of knight moves centred on a 4x4 board
        let cyc = [
            Cell::new(0, 1),
            Cell::new(2, 0),
            Cell::new(3, 2),
            Cell::new(1, 3),
        ];
        assert!(verify_central_symmetry(&cyc, 4, 4));
        let mut rev = cyc.to_vec();
        rev.reverse();
        rev.rotate_left(1);
        assert!(verify_central_symmetry(&rev, 4, 4));
        let lopsided = [
            Cell::new(0, 0),
            Cell::new(1, 2),
            Cell::new(3, 1),
            Cell::new(2, 3),
        ];
        assert!(!verify_central_symmetry(&lopsided, 5, 5));
    }
}
