//! Runs the full set of structural checks and constructions over every free
//! leaper up to a bound on `p + q`.

use std::fmt;
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::fold::{
    build_crisscross, check_fold_key, crisscross_valid, is_connected, reduction_chain, FoldCheck,
};
use crate::geom::Leaper;
use crate::keygraph::{build_key, halve, Halving, KeyGraph};
use crate::par::{self, Execution};
use crate::splice::{splice, symmetric_splice};
use crate::verify::{is_free, verify_central_symmetry, verify_tour};

/// All free leapers with `p + q <= max_sum`, ordered by `(p + q, p)`.
pub fn free_leapers(max_sum: i32) -> Vec<Leaper> {
    (3..=max_sum)
        .flat_map(|sum| (1..(sum + 1) / 2).map(move |p| (p, sum - p)))
        .filter(|&(p, q)| p < q && is_free(p, q))
        .map(|(p, q)| Leaper::new(p, q).expect("free"))
        .collect()
}

/// All `(m, n)` with `m, n >= 0`, `m + n <= max_sum` and `m - n`, `m + n`
/// coprime.
pub fn crisscross_pairs(max_sum: i32) -> Vec<(i32, i32)> {
    (1..=max_sum)
        .flat_map(|sum| (0..=sum).map(move |m| (m, sum - m)))
        .filter(|&(m, n)| crisscross_valid(m, n))
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct CrisscrossReport {
    pub m: i32,
    pub n: i32,
    pub connected: bool,
    /// The reduction chain reaches `(0, 1)` with strictly decreasing sums.
    pub reduces: bool,
}

pub fn check_crisscross(m: i32, n: i32) -> CrisscrossReport {
    let connected = build_crisscross(m, n)
        .map(|r| is_connected(&r.graph))
        .unwrap_or(false);
    let reduces = reduction_chain(m, n)
        .map(|chain| {
            chain.last() == Some(&(0, 1))
                && chain.windows(2).all(|w| w[1].0 + w[1].1 < w[0].0 + w[0].1)
        })
        .unwrap_or(false);
    CrisscrossReport {
        m,
        n,
        connected,
        reduces,
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SweepConfig {
    pub max_sum: i32,
    /// Random halvings checked per leaper.
    pub halvings: u64,
    pub exec: Execution,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            max_sum: 15,
            halvings: 100,
            exec: Execution::Parallel,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InstanceReport {
    pub p: i32,
    pub q: i32,
    /// Exact counts and per-cell degrees of the key graph.
    pub key_ok: bool,
    pub key_connected: bool,
    pub halvings_ok: bool,
    pub fold: Option<FoldCheck>,
    pub crisscross_connected: bool,
    pub tour_ok: bool,
    pub symmetric_ok: bool,
    pub failure: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl InstanceReport {
    pub fn passed(&self) -> bool {
        self.key_ok
            && self.key_connected
            && self.halvings_ok
            && self.fold.as_ref().is_some_and(FoldCheck::passed)
            && self.crisscross_connected
            && self.tour_ok
            && self.symmetric_ok
    }
}

impl fmt::Display for InstanceReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = |b: bool| if b { "ok" } else { "FAIL" };
        write!(
            f,
            "({:>2},{:>2})  key {:<4} halvings {:<4} fold {:<4} crisscross {:<4} tour {:<4} symmetric {:<4} {}",
            self.p,
            self.q,
            mark(self.key_ok && self.key_connected),
            mark(self.halvings_ok),
            mark(self.fold.as_ref().is_some_and(FoldCheck::passed)),
            mark(self.crisscross_connected),
            mark(self.tour_ok),
            mark(self.symmetric_ok),
            if self.passed() { "PASS" } else { "FAIL" },
        )?;
        if let Some(msg) = &self.failure {
            write!(f, "  ({msg})")?;
        }
        Ok(())
    }
}

/// Every seeded random halving `0..count` gives a two-factor.
pub fn random_halvings_ok(key: &KeyGraph, count: u64) -> bool {
    let n = key.rhombi().len();
    (0..count).all(|seed| halve(key, &Halving::random(n, seed)).is_ok())
}

pub fn check_instance(leaper: Leaper, halvings: u64) -> InstanceReport {
    let start = Instant::now();
    let (p, q) = (leaper.p(), leaper.q());
    let mut report = InstanceReport {
        p,
        q,
        key_ok: false,
        key_connected: false,
        halvings_ok: false,
        fold: None,
        crisscross_connected: false,
        tour_ok: false,
        symmetric_ok: false,
        failure: None,
        elapsed: Duration::ZERO,
    };
    let key = match build_key(leaper) {
        Ok(k) => k,
        Err(e) => {
            report.failure = Some(e.to_string());
            report.elapsed = start.elapsed();
            return report;
        }
    };
    report.key_ok = true;
    report.key_connected = key.is_connected();
    report.halvings_ok = random_halvings_ok(&key, halvings);

    let fold = check_fold_key(&key);
    let (m, n) = fold.expected;
    report.crisscross_connected = build_crisscross(m, n).is_ok_and(|r| is_connected(&r.graph));
    report.fold = Some(fold);

    let side = leaper.side();
    match splice(&key, &Halving::zeros(key.rhombi().len())) {
        Ok(t) => report.tour_ok = verify_tour(t.cells(), leaper, side, side).is_valid(),
        Err(e) => report.failure = Some(format!("splice: {e}")),
    }
    match symmetric_splice(&key) {
        Ok(t) => {
            report.symmetric_ok = verify_tour(t.cells(), leaper, side, side).is_valid()
                && verify_central_symmetry(t.cells(), side, side)
        }
        Err(e) => report.failure = Some(format!("symmetric splice: {e}")),
    }
    report.elapsed = start.elapsed();
    report
}

/// Reports in `(p + q, p)` order regardless of completion order.
pub fn run_sweep(config: &SweepConfig) -> Vec<InstanceReport> {
    let leapers = free_leapers(config.max_sum);
    par::map(&leapers, config.exec, |&l| {
        check_instance(l, config.halvings)
    })
}
