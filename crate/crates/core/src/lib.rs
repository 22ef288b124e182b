//! Hamiltonian tours of free `(p, q)`-leapers.
//!
//! On the square board of side `2(p + q)` a two-factor is assembled from a
//! fixed family of outer paths and one matching of every "rhombus" (a
//! 4-cycle of moves through eight small core squares). Rhombus matchings are
//! then flipped to splice the cycles into a single tour, optionally keeping
//! the whole construction centrally symmetric. Copies of a tour tile any
//! board whose sides are multiples of `2(p + q)`.
//!
//! Modules:
//! - [`geom`]: cells, directions, subboards, reflections and pencils.
//! - [`keygraph`]: cores, rhombi, the inner/outer/key graphs and halving.
//! - [`fold`]: the two-floor folding graph and crisscross graphs.
//! - [`splice`]: cycle splicing into plain and centrally symmetric tours.
//! - [`tile`]: tours of tiled boards joined through switches.
//! - [`verify`]: independent checks and a backtracking oracle.
//! - [`format`]: tour file formats and rendering.
//! - [`sweep`]: whole-instance checks over parameter ranges.
//! - [`cli`]: the `leaper-tour` command-line interface.

pub mod cli;
pub mod error;
pub mod fold;
pub mod format;
pub mod geom;
pub mod keygraph;
pub mod par;
pub mod splice;
pub mod sweep;
pub mod tile;
mod twofactor;
pub mod verify;

pub use error::{Error, Result};
pub use geom::{Cell, Direction, Edge, Leaper, Reflection, Subboard};
pub use keygraph::{build_key, Halving, KeyGraph, Rhombus, TwoFactor};

pub use splice::{canonicalize, splice, symmetric_splice, Tour};
