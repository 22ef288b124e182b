//! Command-line front end: `generate`, `verify`, `fold` and `sweep`.
//!
//! Exit status is 0 on success, 1 when a check or verification fails, and
//! 2 for usage errors (bad arguments, non-free leapers).

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::fold::{build_crisscross, build_folding, check_fold_key, FoldEdge};
use crate::format::{parse_grid, parse_json, parse_text, render, TourFile, TourFormat};
use crate::geom::Leaper;
use crate::keygraph::{build_key, Halving};
use crate::par::Execution;
use crate::splice::{splice, symmetric_splice, Tour};
use crate::sweep::{run_sweep, SweepConfig};
use crate::tile::tile;
use crate::verify::{verify_central_symmetry, verify_tour};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "leaper-tour",
    version,
    about = "Hamiltonian tours of free (p, q)-leapers"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a tour on the 2(p+q) board (or a tiling of it) and write it out.
    Generate(GenerateArgs),
    /// Check a tour file.
    Verify(VerifyArgs),
    /// Compare the folding graph with its predicted crisscross graph.
    Fold(FoldArgs),
    /// Run every check for all free leapers with p + q <= max-sum.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub p: i32,
    #[arg(long)]
    pub q: i32,
    /// Produce a centrally symmetric tour.
    #[arg(long, conflicts_with = "seed")]
    pub symmetric: bool,
    /// Seed for a random initial halving (default: all rhombi unflipped).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Number of board copies horizontally.
    #[arg(long)]
    pub tile_k: Option<i32>,
    /// Number of board copies vertically.
    #[arg(long)]
    pub tile_l: Option<i32>,
    #[arg(long, value_enum, default_value_t = TourFormat::Text)]
    pub format: TourFormat,
    /// Output file (default: standard output).
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Auto,
    Text,
    Json,
    Grid,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    pub path: PathBuf,
    /// Overrides the value recorded in the file.
    #[arg(long)]
    pub p: Option<i32>,
    /// Overrides the value recorded in the file.
    #[arg(long)]
    pub q: Option<i32>,
    #[arg(long)]
    pub width: Option<i32>,
    #[arg(long)]
    pub height: Option<i32>,
    /// Also fail unless the tour is centrally symmetric.
    #[arg(long)]
    pub require_symmetry: bool,
    #[arg(long, value_enum, default_value_t = InputFormat::Auto)]
    pub format: InputFormat,
}

#[derive(Debug, Args)]
pub struct FoldArgs {
    #[arg(long)]
    pub p: i32,
    #[arg(long)]
    pub q: i32,
    /// Write both edge lists as JSON to this path (`-` for standard output).
    #[arg(long)]
    pub dump: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, default_value_t = 15)]
    pub max_sum: i32,
    /// Random halvings to check per leaper.
    #[arg(long, default_value_t = 100)]
    pub halvings: u64,
    /// Run instances one at a time on the calling thread.
    #[arg(long)]
    pub sequential: bool,
}

/// Validated options for `generate`.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub leaper: Leaper,
    pub symmetric: bool,
    pub tile: Option<(i32, i32)>,
    pub seed: Option<u64>,
    pub format: TourFormat,
    pub output: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_args(args: &GenerateArgs) -> Result<Self, Error> {
        let leaper = Leaper::new(args.p, args.q)?;
        let tile = match (args.tile_k, args.tile_l) {
            (None, None) => None,
            (k, l) => {
                let (k, l) = (k.unwrap_or(1), l.unwrap_or(1));
                if k < 1 || l < 1 {
                    return Err(Error::InvalidTiling(format!(
                        "tile dimensions must be >= 1, got {k}x{l}"
                    )));
                }
                Some((k, l))
            }
        };
        Ok(RunConfig {
            leaper,
            symmetric: args.symmetric,
            tile,
            seed: args.seed,
            format: args.format,
            output: args.output.clone(),
        })
    }

    pub fn dimensions(&self) -> (i32, i32) {
        let side = self.leaper.side();
        let (k, l) = self.tile.unwrap_or((1, 1));
        (side * k, side * l)
    }
}

/// Builds the requested tour and self-verifies it.
pub fn generate_tour(config: &RunConfig) -> Result<Tour, Error> {
    let key = build_key(config.leaper)?;
    let base = if config.symmetric {
        symmetric_splice(&key)?
    } else {
        let n = key.rhombi().len();
        let halving = config
            .seed
            .map_or_else(|| Halving::zeros(n), |s| Halving::random(n, s));
        splice(&key, &halving)?
    };
    let tour = match config.tile {
        Some((k, l)) => tile(config.leaper, k, l, &base)?,
        None => base,
    };
    let (w, h) = config.dimensions();
    let report = verify_tour(tour.cells(), config.leaper, w, h);
    if !report.is_valid() {
        return Err(Error::Construction(format!(
            "generated tour failed verification: {}",
            report.first_failure.unwrap_or_default()
        )));
    }
    if config.symmetric && config.tile.is_none() && !report.centrally_symmetric {
        return Err(Error::Construction(
            "generated tour is not centrally symmetric".into(),
        ));
    }
    Ok(tour)
}

fn usage(err: &mut dyn Write, e: impl std::fmt::Display) -> i32 {
    let _ = writeln!(err, "error: {e}");
    EXIT_USAGE
}

fn failure(err: &mut dyn Write, e: impl std::fmt::Display) -> i32 {
    let _ = writeln!(err, "error: {e}");
    EXIT_FAILURE
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Generate(args) => cmd_generate(&args, out, err),
        Command::Verify(args) => cmd_verify(&args, out, err),
        Command::Fold(args) => cmd_fold(&args, out, err),
        Command::Sweep(args) => cmd_sweep(&args, out, err),
    }
}

pub fn cmd_generate(args: &GenerateArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let config = match RunConfig::from_args(args) {
        Ok(c) => c,
        Err(e) => return usage(err, e),
    };
    let tour = match generate_tour(&config) {
        Ok(t) => t,
        Err(e) => return failure(err, e),
    };
    let (w, h) = config.dimensions();
    let file = TourFile::new(config.leaper.p(), config.leaper.q(), w, h, tour.cells());
    let body = render(&file, config.format);
    let written = match &config.output {
        Some(path) => fs::write(path, body),
        None => out.write_all(body.as_bytes()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => failure(err, e),
    }
}

pub fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let input = match fs::read_to_string(&args.path) {
        Ok(s) => s,
        Err(e) => return usage(err, format!("{}: {e}", args.path.display())),
    };
    let format = match args.format {
        InputFormat::Auto => detect_format(&input),
        f => f,
    };
    let parsed = match format {
        InputFormat::Json => {
            parse_json(&input).map(|f| (Some((f.p, f.q)), f.width, f.height, f.tour_cells()))
        }
        InputFormat::Grid => parse_grid(&input).map(|(w, h, cells)| (None, w, h, cells)),
        _ => parse_text(&input).map(|f| (Some((f.p, f.q)), f.width, f.height, f.tour_cells())),
    };
    let (pq, width, height, cells) = match parsed {
        Ok(v) => v,
        Err(e) => return failure(err, e),
    };
    let (p, q) = match (args.p.or(pq.map(|x| x.0)), args.q.or(pq.map(|x| x.1))) {
        (Some(p), Some(q)) => (p, q),
        _ => return usage(err, "--p and --q are required for grid input"),
    };
    let leaper = match Leaper::new(p, q) {
        Ok(l) => l,
        Err(e) => return usage(err, e),
    };
    let (width, height) = (args.width.unwrap_or(width), args.height.unwrap_or(height));
    let report = verify_tour(&cells, leaper, width, height);
    let _ = writeln!(out, "{report}");
    let ok = report.is_valid()
        && (!args.require_symmetry || verify_central_symmetry(&cells, width, height));
    if ok {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

fn detect_format(input: &str) -> InputFormat {
    let trimmed = input.trim_start();
    if trimmed.starts_with('{') {
        return InputFormat::Json;
    }
    let mut lines = trimmed.lines();
    let first = lines.next().map_or(0, |l| l.split_whitespace().count());
    let second = lines.next().map_or(0, |l| l.split_whitespace().count());
    if first == 4 && second <= 2 {
        InputFormat::Text
    } else {
        InputFormat::Grid
    }
}

#[derive(Serialize)]
struct FoldDump {
    p: i32,
    q: i32,
    folding: Vec<FoldEdge>,
    crisscross_m: i32,
    crisscross_n: i32,
    crisscross: Vec<FoldEdge>,
}

pub fn cmd_fold(args: &FoldArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let leaper = match Leaper::new(args.p, args.q) {
        Ok(l) => l,
        Err(e) => return usage(err, e),
    };
    let key = match build_key(leaper) {
        Ok(k) => k,
        Err(e) => return failure(err, e),
    };
    let check = check_fold_key(&key);
    let _ = writeln!(out, "{check}");
    if let Some(path) = &args.dump {
        let (m, n) = check.expected;
        let dump = FoldDump {
            p: leaper.p(),
            q: leaper.q(),
            folding: build_folding(&key)
                .map(|f| f.graph.edges.into_iter().collect())
                .unwrap_or_default(),
            crisscross_m: m,
            crisscross_n: n,
            crisscross: build_crisscross(m, n)
                .map(|r| r.graph.edges.into_iter().collect())
                .unwrap_or_default(),
        };
        let body = serde_json::to_string_pretty(&dump).expect("plain data serializes") + "\n";
        let res = if path.as_os_str() == "-" {
            out.write_all(body.as_bytes())
        } else {
            fs::write(path, body)
        };
        if let Err(e) = res {
            return failure(err, e);
        }
    }
    if check.passed() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}

pub fn cmd_sweep(args: &SweepArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if args.max_sum < 3 {
        return usage(err, "--max-sum must be at least 3");
    }
    let config = SweepConfig {
        max_sum: args.max_sum,
        halvings: args.halvings,
        exec: if args.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
    };
    let reports = run_sweep(&config);
    let passed = reports.iter().filter(|r| r.passed()).count();
    for r in &reports {
        let _ = writeln!(out, "{r}");
    }
    let _ = writeln!(out, "{passed}/{} instances passed", reports.len());
    if passed == reports.len() {
        EXIT_OK
    } else {
        EXIT_FAILURE
    }
}
