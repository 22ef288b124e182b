//! Tour files and renderings.
//!
//! The plain text format is a header line `p q width height` followed by one
//! `x y` line per cell in tour order. Every line ends in `\n`; there is no
//! trailing blank line. The grid format numbers each cell by its position
//! along the tour (1-based), highest row first. JSON carries the same data
//! as the text format. SVG is render-only.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::Cell;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum TourFormat {
    Text,
    Grid,
    Json,
    Svg,
}

/// A tour together with the board and leaper it belongs to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TourFile {
    pub p: i32,
    pub q: i32,
    pub width: i32,
    pub height: i32,
    pub cells: Vec<(i32, i32)>,
}

impl TourFile {
    pub fn new(p: i32, q: i32, width: i32, height: i32, cells: &[Cell]) -> Self {
        TourFile {
            p,
            q,
            width,
            height,
            cells: cells.iter().map(|c| (c.x, c.y)).collect(),
        }
    }

    pub fn tour_cells(&self) -> Vec<Cell> {
        self.cells.iter().map(|&(x, y)| Cell::new(x, y)).collect()
    }
}

pub fn render(file: &TourFile, format: TourFormat) -> String {
    match format {
        TourFormat::Text => to_text(file),
        TourFormat::Grid => to_grid(&file.tour_cells(), file.width, file.height),
        TourFormat::Json => {
            let mut s = serde_json::to_string(file).expect("plain data serializes");
            s.push('\n');
            s
        }
        TourFormat::Svg => to_svg(&file.tour_cells(), file.width, file.height, true),
    }
}

pub fn to_text(file: &TourFile) -> String {
    let mut out = format!("{} {} {} {}\n", file.p, file.q, file.width, file.height);
    for (x, y) in &file.cells {
        writeln!(out, "{x} {y}").expect("write to string");
    }
    out
}

fn parse_ints(line: &str, lineno: usize) -> Result<Vec<i32>> {
    line.split_whitespace()
        .map(|t| {
            t.parse::<i32>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("not an integer: {t:?}"),
            })
        })
        .collect()
}

pub fn parse_text(input: &str) -> Result<TourFile> {
    let mut lines = input.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return Err(Error::Parse {
            line: 1,
            msg: "empty input".into(),
        });
    };
    let h = parse_ints(header, 1)?;
    let &[p, q, width, height] = &h[..] else {
        return Err(Error::Parse {
            line: 1,
            msg: "header must be `p q width height`".into(),
        });
    };
    if width <= 0 || height <= 0 {
        return Err(Error::Parse {
            line: 1,
            msg: "board dimensions must be positive".into(),
        });
    }
    let mut cells = Vec::new();
    for (i, line) in lines {
        let v = parse_ints(line, i + 1)?;
        let &[x, y] = &v[..] else {
            return Err(Error::Parse {
                line: i + 1,
                msg: format!("expected `x y`, found {} fields", v.len()),
            });
        };
        cells.push((x, y));
    }
    let want = width as usize * height as usize;
    if cells.len() != want {
        return Err(Error::Parse {
            line: cells.len() + 1,
            msg: format!("expected {want} cells, found {}", cells.len()),
        });
    }
    Ok(TourFile {
        p,
        q,
        width,
        height,
        cells,
    })
}

pub fn parse_json(input: &str) -> Result<TourFile> {
    serde_json::from_str(input).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })
}

pub fn to_grid(cells: &[Cell], width: i32, height: i32) -> String {
    let mut number = vec![0usize; (width * height) as usize];
    for (k, c) in cells.iter().enumerate() {
        if c.x >= 0 && c.y >= 0 && c.x < width && c.y < height {
            number[(c.y * width + c.x) as usize] = k + 1;
        }
    }
    let w = (width as usize * height as usize).to_string().len();
    let mut out = String::new();
    for y in (0..height).rev() {
        let row: Vec<String> = (0..width)
            .map(|x| format!("{:>w$}", number[(y * width + x) as usize]))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Reads a numbered grid back into a tour; returns `(width, height, cells)`.
pub fn parse_grid(input: &str) -> Result<(i32, i32, Vec<Cell>)> {
    let rows: Vec<Vec<i32>> = input
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| parse_ints(l, i + 1))
        .collect::<Result<_>>()?;
    let height = rows.len() as i32;
    let width = rows.first().map_or(0, |r| r.len()) as i32;
    if height == 0 || width == 0 {
        return Err(Error::Parse {
            line: 1,
            msg: "empty grid".into(),
        });
    }
    let n = (width * height) as usize;
    let mut cells = vec![None; n];
    for (r, row) in rows.iter().enumerate() {
        if row.len() as i32 != width {
            return Err(Error::Parse {
                line: r + 1,
                msg: format!("row has {} entries, expected {width}", row.len()),
            });
        }
        let y = height - 1 - r as i32;
        for (x, &k) in row.iter().enumerate() {
            if k < 1 || k as usize > n {
                return Err(Error::Parse {
                    line: r + 1,
                    msg: format!("number {k} outside 1..={n}"),
                });
            }
            let slot = &mut cells[k as usize - 1];
            if slot.is_some() {
                return Err(Error::Parse {
                    line: r + 1,
                    msg: format!("number {k} appears twice"),
                });
            }
            *slot = Some(Cell::new(x as i32, y));
        }
    }
    Ok((
        width,
        height,
        cells.into_iter().map(|c| c.expect("filled")).collect(),
    ))
}

/// A closed polyline through cell centres at unit spacing, over a light
/// grid. The y axis is flipped so row 0 is at the bottom.
pub fn to_svg(cells: &[Cell], width: i32, height: i32, grid: bool) -> String {
    let scale = 20;
    let (w, h) = (width * scale, height * scale);
    let mut out = String::new();
    writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {width} {height}">"#
    )
    .unwrap();
    writeln!(
        out,
        r#"<rect width="{width}" height="{height}" fill="white"/>"#
    )
    .unwrap();
    if grid {
        out.push_str(r##"<g stroke="#ddd" stroke-width="0.03">"##);
        out.push('\n');
        for x in 0..=width {
            writeln!(out, r#"<line x1="{x}" y1="0" x2="{x}" y2="{height}"/>"#).unwrap();
        }
        for y in 0..=height {
            writeln!(out, r#"<line x1="0" y1="{y}" x2="{width}" y2="{y}"/>"#).unwrap();
        }
        out.push_str("</g>\n");
    }
    let points: Vec<String> = cells
        .iter()
        .map(|c| format!("{}.5,{}.5", c.x, height - 1 - c.y))
        .collect();
    writeln!(
        out,
        r#"<polygon points="{}" fill="none" stroke="black" stroke-width="0.06" stroke-linejoin="round"/>"#,
        points.join(" ")
    )
    .unwrap();
    out.push_str("</svg>\n");
    out
}
