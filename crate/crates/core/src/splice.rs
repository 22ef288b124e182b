//! Splicing the cycles of a halved key graph into one Hamiltonian tour.
//!
//! Flipping a rhombus whose two chosen edges lie on different cycles joins
//! those cycles; one pass over all rhombi leaves a single cycle whenever
//! the key graph is connected. The symmetric variant flips rhombi in
//! centrally reflected pairs so the tour stays invariant under the half
//! turn.

use std::collections::{BTreeSet, HashMap};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{bug, Error, Result};
use crate::geom::{Cell, Edge, Reflect, Reflection};
use crate::keygraph::{halve, Halving, KeyGraph, Rhombus, RhombusKind, TwoFactor};

/// A closed tour as a cyclic sequence of cells.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tour {
    cells: Vec<Cell>,
}

impl Tour {
    pub fn new(cells: Vec<Cell>) -> Self {
        Tour { cells }
    }

    /// The unique cycle of a connected two-factor.
    pub fn from_two_factor(tf: &TwoFactor) -> Result<Self> {
        let mut cycles = tf.cycles();
        if cycles.len() != 1 {
            return bug(format!("two-factor has {} cycles", cycles.len()));
        }
        Ok(Tour {
            cells: cycles.pop().expect("one cycle"),
        })
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn into_cells(self) -> Vec<Cell> {
        self.cells
    }

    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    /// Cyclic edge set.
    pub fn edges(&self) -> BTreeSet<Edge> {
        let n = self.cells.len();
        (0..n)
            .map(|i| Edge::new(self.cells[i], self.cells[(i + 1) % n]))
            .collect()
    }

    pub fn reversed(&self) -> Tour {
        let mut cells = self.cells.clone();
        cells.reverse();
        Tour { cells }
    }
}

/// Rotates (and if needed reverses) the sequence so it starts at the
/// smallest cell and continues to the smaller of its two neighbours.
pub fn canonicalize(tour: &Tour) -> Tour {
    let cells = &tour.cells;
    let n = cells.len();
    if n < 3 {
        return tour.clone();
    }
    let (start, _) = cells
        .iter()
        .enumerate()
        .min_by_key(|(_, c)| **c)
        .expect("nonempty");
    let next = cells[(start + 1) % n];
    let prev = cells[(start + n - 1) % n];
    let out = if next <= prev {
        (0..n).map(|k| cells[(start + k) % n]).collect()
    } else {
        (0..n).map(|k| cells[(start + n - k) % n]).collect()
    };
    Tour { cells: out }
}

/// Disjoint sets over the cycles of a two-factor, keyed by cell.
#[derive(Clone, Debug)]
pub struct CycleTracker {
    labels: Vec<u32>,
    parent: Vec<u32>,
    size: Vec<u32>,
    cycles: usize,
    width: i32,
}

impl CycleTracker {
    pub fn new(tf: &TwoFactor) -> Self {
        let (labels, count) = tf.cycle_labels();
        CycleTracker {
            labels,
            parent: (0..count as u32).collect(),
            size: vec![1; count],
            cycles: count,
            width: tf.width(),
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn set_of(&mut self, c: Cell) -> u32 {
        let label = self.labels[(c.y * self.width + c.x) as usize];
        self.find(label)
    }

    pub fn same_cycle(&mut self, a: Cell, b: Cell) -> bool {
        self.set_of(a) == self.set_of(b)
    }

    /// Joins the cycles through `a` and `b`; false if already joined.
    pub fn merge(&mut self, a: Cell, b: Cell) -> bool {
        let (mut x, mut y) = (self.set_of(a), self.set_of(b));
        if x == y {
            return false;
        }
        if self.size[x as usize] < self.size[y as usize] {
            std::mem::swap(&mut x, &mut y);
        }
        self.parent[y as usize] = x;
        self.size[x as usize] += self.size[y as usize];
        self.cycles -= 1;
        true
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles
    }
}

/// Replaces the matching of `r` present in `tf` by the other one.
pub fn flip(tf: &mut TwoFactor, r: &Rhombus) -> Result<()> {
    let present = |m: [Edge; 2]| m.iter().filter(|&&e| tf.contains(e)).count();
    let (zero, one) = (r.matching(false), r.matching(true));
    match (present(zero), present(one)) {
        (2, 0) => tf.exchange(zero, one),
        (0, 2) => tf.exchange(one, zero),
        _ => Err(Error::NotHalved(r.base())),
    }
}

/// Order in which [`splice_with`] considers the rhombi.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ScanOrder {
    /// Generation order: forward rhombi, then backward.
    #[default]
    Fixed,
    Shuffled(u64),
}

#[derive(Clone, Debug)]
pub struct SpliceOutcome {
    pub two_factor: TwoFactor,
    pub halving: Halving,
    pub initial_cycles: usize,
    pub flips: usize,
}

pub fn splice(key: &KeyGraph, initial: &Halving) -> Result<Tour> {
    let out = splice_with(key, initial, ScanOrder::Fixed)?;
    Ok(canonicalize(&Tour::from_two_factor(&out.two_factor)?))
}

/// Single pass over the rhombi, flipping each one whose chosen edges lie on
/// different cycles.
pub fn splice_with(key: &KeyGraph, initial: &Halving, order: ScanOrder) -> Result<SpliceOutcome> {
    if !key.is_connected() {
        return bug(format!("key graph of {} is disconnected", key.leaper()));
    }
    let mut tf = halve(key, initial)?;
    let mut bits = initial.bits().to_vec();
    let mut tracker = CycleTracker::new(&tf);
    let initial_cycles = tracker.cycle_count();

    let mut idx: Vec<usize> = (0..key.rhombi().len()).collect();
    if let ScanOrder::Shuffled(seed) = order {
        idx.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    let mut flips = 0;
    for i in idx {
        let r = &key.rhombi()[i];
        let [e1, e2] = r.matching(bits[i]);
        if !tracker.same_cycle(e1.a(), e2.a()) {
            let before = tracker.cycle_count();
            flip(&mut tf, r)?;
            bits[i] = !bits[i];
            tracker.merge(e1.a(), e2.a());
            if tracker.cycle_count() + 1 != before {
                return bug("flip did not merge exactly two cycles");
            }
            flips += 1;
        }
    }
    let cycles = tf.cycle_count();
    if cycles != 1 || tracker.cycle_count() != 1 {
        return bug(format!(
            "splicing left {cycles} cycles (tracker says {})",
            tracker.cycle_count()
        ));
    }
    Ok(SpliceOutcome {
        two_factor: tf,
        halving: Halving::from_bits(bits),
        initial_cycles,
        flips,
    })
}

/// Central partner of every rhombus and whether the reflection maps
/// matching `false` onto the partner's matching `true`.
fn central_partners(key: &KeyGraph) -> Result<Vec<(usize, bool)>> {
    let side = key.side();
    let by_base: HashMap<(RhombusKind, Cell), usize> = key
        .rhombi()
        .iter()
        .enumerate()
        .map(|(i, r)| ((r.kind, r.base()), i))
        .collect();
    key.rhombi()
        .iter()
        .map(|r| {
            let image: BTreeSet<Cell> = r
                .cells
                .iter()
                .map(|c| c.reflect(Reflection::Center, side))
                .collect();
            let j = image
                .iter()
                .filter_map(|&c| by_base.get(&(r.kind, c)))
                .copied()
                .find(|&j| {
                    let other = &key.rhombi()[j];
                    other.kind == r.kind
                        && other.cells.iter().copied().collect::<BTreeSet<_>>() == image
                });
            let Some(j) = j else {
                return bug(format!("rhombus at {} has no central partner", r.base()));
            };
            let mapped: BTreeSet<Edge> = r
                .matching(false)
                .iter()
                .map(|e| e.reflect(Reflection::Center, side))
                .collect();
            let partner = &key.rhombi()[j];
            let as_set = |m: [Edge; 2]| m.into_iter().collect::<BTreeSet<_>>();
            if mapped == as_set(partner.matching(false)) {
                Ok((j, false))
            } else if mapped == as_set(partner.matching(true)) {
                Ok((j, true))
            } else {
                bug(format!(
                    "reflection of rhombus at {} is not a matching",
                    r.base()
                ))
            }
        })
        .collect()
}

/// A halving in which centrally reflected rhombi get reflected matchings.
pub fn symmetric_halving(key: &KeyGraph) -> Result<Halving> {
    let partners = central_partners(key)?;
    let mut bits: Vec<Option<bool>> = vec![None; partners.len()];
    for i in 0..partners.len() {
        if bits[i].is_some() {
            continue;
        }
        let (j, swap) = partners[i];
        if j == i && swap {
            return bug("self-symmetric rhombus has no symmetric matching");
        }
        bits[i] = Some(false);
        bits[j] = Some(swap);
    }
    Ok(Halving::from_bits(
        bits.into_iter().map(|b| b.expect("assigned")).collect(),
    ))
}

fn current(key: &KeyGraph, tf: &TwoFactor, i: usize) -> [Edge; 2] {
    let r = &key.rhombi()[i];
    if tf.contains(r.matching(false)[0]) {
        r.matching(false)
    } else {
        r.matching(true)
    }
}

fn is_centrally_symmetric(tf: &TwoFactor, labels: &[u32], cycle: u32) -> bool {
    let (w, h) = (tf.width(), tf.height());
    labels
        .iter()
        .enumerate()
        .filter(|(_, &l)| l == cycle)
        .all(|(i, _)| {
            let c = tf.cell(i as u32);
            let m = Cell::new(w - 1 - c.x, h - 1 - c.y);
            let [u, v] = tf.neighbors(c).expect("on board");
            let [mu, mv] = tf.neighbors(m).expect("on board");
            let (u, v) = (
                Cell::new(w - 1 - u.x, h - 1 - u.y),
                Cell::new(w - 1 - v.x, h - 1 - v.y),
            );
            (u == mu && v == mv) || (u == mv && v == mu)
        })
}

/// A centrally symmetric Hamiltonian tour.
///
/// Starts from a symmetric halving, makes sure the self-symmetric forward
/// rhombus has both chosen edges on one cycle `C`, then repeatedly takes a
/// rhombus with exactly one chosen edge on `C` together with its reflection.
/// If their other edges lie on different cycles both rhombi are flipped;
/// otherwise both rhombi and the self-symmetric one are flipped. Every
/// step is checked against the expected drop in cycle count.
pub fn symmetric_splice(key: &KeyGraph) -> Result<Tour> {
    let side = key.side();
    let center = |c: Cell| c.reflect(Reflection::Center, side);
    for e in key.inner_edges().iter().chain(key.outer_edges()) {
        if e.reflect(Reflection::Center, side) == *e {
            return bug(format!("edge {e} is its own central reflection"));
        }
    }

    let partners = central_partners(key)?;
    let halving = symmetric_halving(key)?;
    let mut tf = halve(key, &halving)?;

    let selfsym: Vec<usize> = (0..partners.len())
        .filter(|&i| partners[i].0 == i && key.rhombi()[i].kind == RhombusKind::Forward)
        .collect();
    let &[r1] = &selfsym[..] else {
        return bug(format!("{} self-symmetric forward rhombi", selfsym.len()));
    };
    let anchor = key.rhombi()[r1].base();

    let (labels, _) = tf.cycle_labels();
    let [e1, e2] = current(key, &tf, r1);
    if labels[tf.index(e1.a()).unwrap() as usize] != labels[tf.index(e2.a()).unwrap() as usize] {
        flip(&mut tf, &key.rhombi()[r1])?;
    }

    let mut prev_size = 0usize;
    loop {
        let (labels, count) = tf.cycle_labels();
        let label = |c: Cell| labels[tf.index(c).expect("on board") as usize];
        let c_id = label(anchor);
        let size = labels.iter().filter(|&&l| l == c_id).count();
        if size <= prev_size {
            return bug("symmetric cycle failed to grow");
        }
        prev_size = size;
        if label(center(anchor)) != c_id || !is_centrally_symmetric(&tf, &labels, c_id) {
            return bug("growing cycle lost central symmetry");
        }
        if count == 1 {
            break;
        }

        let on_c = |e: &Edge| label(e.a()) == c_id;
        let pick = (0..key.rhombi().len()).find(|&i| {
            let m = current(key, &tf, i);
            m.iter().filter(|e| on_c(e)).count() == 1
        });
        let Some(i) = pick else {
            return bug(format!(
                "no rhombus touches the symmetric cycle once, {count} cycles remain"
            ));
        };
        let j = partners[i].0;
        if j == i {
            return bug("self-symmetric rhombus with one edge on the cycle");
        }
        let outside = |k: usize| {
            *current(key, &tf, k)
                .iter()
                .find(|e| !on_c(e))
                .expect("one edge outside")
        };
        let (out_i, out_j) = (outside(i), outside(j));
        let expected = if label(out_i.a()) != label(out_j.a()) {
            flip(&mut tf, &key.rhombi()[i])?;
            flip(&mut tf, &key.rhombi()[j])?;
            count - 2
        } else {
            flip(&mut tf, &key.rhombi()[r1])?;
            flip(&mut tf, &key.rhombi()[i])?;
            flip(&mut tf, &key.rhombi()[j])?;
            count - 1
        };
        let after = tf.cycle_count();
        if after != expected {
            return bug(format!(
                "paired flip at {} left {after} cycles, expected {expected}",
                key.rhombi()[i].base()
            ));
        }
    }
    Ok(canonicalize(&Tour::from_two_factor(&tf)?))
}
