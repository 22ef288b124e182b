use thiserror::Error;

use crate::geom::Cell;

#[derive(Debug, Error)]
pub enum Error {
    #[error("p must satisfy 0 < p < q (got p = {p}, q = {q})")]
    InvalidLeaper { p: i32, q: i32 },

    #[error("p \u{2212} q and p + q are not relatively prime: gcd({diff}, {sum}) = {gcd}")]
    NotFree { diff: i32, sum: i32, gcd: i32 },

    #[error("empty subboard [{x1}, {x2}] x [{y1}, {y2}]")]
    EmptySubboard { x1: i32, x2: i32, y1: i32, y2: i32 },

    #[error("cell ({}, {}) lies outside the board", .0.x, .0.y)]
    OffBoard(Cell),

    #[error("cell ({}, {}) lies in no core", .0.x, .0.y)]
    NotInCore(Cell),

    #[error("invalid crisscross parameters ({m}, {n}): {reason}")]
    InvalidCrisscross {
        m: i32,
        n: i32,
        reason: &'static str,
    },

    #[error("rhombus at {} is not halved in the current two-factor", .0)]
    NotHalved(Cell),

    #[error("invalid tiling: {0}")]
    InvalidTiling(String),

    #[error("construction invariant violated: {0}")]
    Construction(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Shorthand for a failed internal invariant.
pub(crate) fn bug<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Construction(msg.into()))
}
