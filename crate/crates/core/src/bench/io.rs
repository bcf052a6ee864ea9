//! Plain-text formats for solutions, reference grids and cross-sections.
//!
//! Solution CSV: header `x1,...,xd,u`, one node per line.
//! Reference grid: first line `nx,ny,xmin,xmax,ymin,ymax`, then `nx * ny`
//! values one per line, row-major with `x` fastest.
//! Cross-section CSV: header `s,u`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::grid::GridField;
use crate::error::{Error, Result};

/// Node coordinates (flat) and values read from a solution CSV.
#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub dim: usize,
    pub coords: Vec<f64>,
    pub values: Vec<f64>,
}

impl Solution {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

pub(crate) fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    fs::write(path, text).map_err(|e| Error::io(path, e))
}

fn parse_err(path: &Path, line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { path: path.display().to_string(), line, msg: msg.into() }
}

fn parse_f64(path: &Path, line: usize, s: &str) -> Result<f64> {
    let v: f64 = s.trim().parse().map_err(|_| parse_err(path, line, format!("not a number: `{}`", s.trim())))?;
    if !v.is_finite() {
        return Err(parse_err(path, line, format!("non-finite value `{}`", s.trim())));
    }
    Ok(v)
}

/// Formats a solution as CSV text.
pub fn solution_csv(dim: usize, coords: &[f64], values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 64);
    for k in 1..=dim {
        let _ = write!(out, "x{k},");
    }
    out.push_str("u\n");
    for (i, u) in values.iter().enumerate() {
        for x in &coords[i * dim..(i + 1) * dim] {
            let _ = write!(out, "{x:e},");
        }
        let _ = writeln!(out, "{u:e}");
    }
    out
}

pub fn write_solution(path: &Path, dim: usize, coords: &[f64], values: &[f64]) -> Result<()> {
    write(path, &solution_csv(dim, coords, values))
}

pub fn parse_solution(path: &Path, text: &str) -> Result<Solution> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let dim = cols.len().saturating_sub(1);
    let expected: Vec<String> = (1..=dim).map(|k| format!("x{k}")).chain(["u".to_string()]).collect();
    if dim == 0 || cols != expected {
        return Err(parse_err(path, 1, format!("expected header `{}`", expected.join(","))));
    }
    let mut coords = Vec::new();
    let mut values = Vec::new();
    for (ln, line) in lines {
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != dim + 1 {
            return Err(parse_err(path, ln + 1, format!("expected {} fields, got {}", dim + 1, fields.len())));
        }
        for f in &fields[..dim] {
            coords.push(parse_f64(path, ln + 1, f)?);
        }
        values.push(parse_f64(path, ln + 1, fields[dim])?);
    }
    Ok(Solution { dim, coords, values })
}

pub fn load_solution(path: &Path) -> Result<Solution> {
    parse_solution(path, &read(path)?)
}

pub fn grid_text(g: &GridField) -> String {
    let mut out = String::with_capacity(g.values.len() * 24 + 64);
    let _ = writeln!(out, "{},{},{:e},{:e},{:e},{:e}", g.nx, g.ny, g.xmin, g.xmax, g.ymin, g.ymax);
    for v in &g.values {
        let _ = writeln!(out, "{v:e}");
    }
    out
}

pub fn write_grid(path: &Path, g: &GridField) -> Result<()> {
    write(path, &grid_text(g))
}

pub fn parse_grid(path: &Path, text: &str) -> Result<GridField> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    let h: Vec<&str> = header.split(',').collect();
    if h.len() != 6 {
        return Err(parse_err(path, 1, "expected header `nx,ny,xmin,xmax,ymin,ymax`"));
    }
    let size = |s: &str| -> Result<usize> {
        s.trim().parse().map_err(|_| parse_err(path, 1, format!("bad grid size `{}`", s.trim())))
    };
    let (nx, ny) = (size(h[0])?, size(h[1])?);
    let mut b = [0.0; 4];
    for (k, s) in h[2..].iter().enumerate() {
        b[k] = parse_f64(path, 1, s)?;
    }
    let mut values = Vec::with_capacity(nx.saturating_mul(ny).min(1 << 24));
    let mut last = 1;
    for (ln, line) in lines {
        values.push(parse_f64(path, ln + 1, line)?);
        last = ln + 1;
    }
    if values.len() != nx * ny {
        return Err(parse_err(path, last, format!("expected {} values, found {}", nx * ny, values.len())));
    }
    GridField::new(nx, ny, b, values)
}

pub fn load_reference_grid(path: &Path) -> Result<GridField> {
    parse_grid(path, &read(path)?)
}

pub fn write_cross_section(path: &Path, s: &[f64], u: &[f64]) -> Result<()> {
    let mut out = String::from("s,u\n");
    for (a, b) in s.iter().zip(u) {
        let _ = writeln!(out, "{a:e},{b:e}");
    }
    write(path, &out)
}
