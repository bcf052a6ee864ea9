//! Values on a uniform Cartesian grid and their piecewise linear
//! interpolation on the triangulation that splits each cell along its
//! lower-left to upper-right diagonal.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    pub nx: usize,
    pub ny: usize,
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    /// Row-major, `x` fastest: `values[iy * nx + ix]`.
    pub values: Vec<f64>,
}

impl GridField {
    pub fn new(nx: usize, ny: usize, bounds: [f64; 4], values: Vec<f64>) -> Result<Self> {
        let [xmin, xmax, ymin, ymax] = bounds;
        if nx < 2 || ny < 2 {
            return Err(Error::DimensionMismatch(format!("grid needs at least 2x2 points, got {nx}x{ny}")));
        }
        if !(xmin < xmax && ymin < ymax) {
            return Err(Error::DimensionMismatch(format!("empty grid bounds {bounds:?}")));
        }
        if values.len() != nx * ny {
            return Err(Error::DimensionMismatch(format!("{nx}x{ny} grid needs {} values, got {}", nx * ny, values.len())));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::DimensionMismatch(format!("non-finite grid value at index {k}")));
        }
        Ok(GridField { nx, ny, xmin, xmax, ymin, ymax, values })
    }

    /// Samples `f` at the grid points.
    pub fn from_fn(nx: usize, ny: usize, bounds: [f64; 4], f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        let mut values = Vec::with_capacity(nx * ny);
        for iy in 0..ny {
            for ix in 0..nx {
                let (x, y) = grid_point(nx, ny, bounds, ix, iy);
                values.push(f(x, y));
            }
        }
        GridField::new(nx, ny, bounds, values)
    }

    pub fn bounds(&self) -> [f64; 4] {
        [self.xmin, self.xmax, self.ymin, self.ymax]
    }

    pub fn point(&self, ix: usize, iy: usize) -> (f64, f64) {
        grid_point(self.nx, self.ny, self.bounds(), ix, iy)
    }

    pub fn points(&self) -> Vec<[f64; 2]> {
        let mut out = Vec::with_capacity(self.nx * self.ny);
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                let (x, y) = self.point(ix, iy);
                out.push([x, y]);
            }
        }
        out
    }

    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.nx + ix]
    }

    /// Piecewise linear interpolant at `p`.
    pub fn interp(&self, p: &[f64]) -> Result<f64> {
        let (fx, ix) = locate(p[0], self.xmin, self.xmax, self.nx).ok_or_else(|| Error::OutOfBounds(p.to_vec()))?;
        let (fy, iy) = locate(p[1], self.ymin, self.ymax, self.ny).ok_or_else(|| Error::OutOfBounds(p.to_vec()))?;
        let f00 = self.at(ix, iy);
        let f10 = self.at(ix + 1, iy);
        let f01 = self.at(ix, iy + 1);
        let f11 = self.at(ix + 1, iy + 1);
        Ok(if fy <= fx {
            f00 + fx * (f10 - f00) + fy * (f11 - f10)
        } else {
            f00 + fy * (f01 - f00) + fx * (f11 - f01)
        })
    }
}

fn grid_point(nx: usize, ny: usize, b: [f64; 4], ix: usize, iy: usize) -> (f64, f64) {
    let x = if ix + 1 == nx { b[1] } else { b[0] + (b[1] - b[0]) * ix as f64 / (nx - 1) as f64 };
    let y = if iy + 1 == ny { b[3] } else { b[2] + (b[3] - b[2]) * iy as f64 / (ny - 1) as f64 };
    (x, y)
}

/// Cell index and local coordinate in `[0, 1]`; a relative `1e-12` slack
/// is allowed outside the bounds.
fn locate(x: f64, lo: f64, hi: f64, n: usize) -> Option<(f64, usize)> {
    let slack = 1e-12 * (hi - lo);
    if !(x >= lo - slack && x <= hi + slack) {
        return None;
    }
    let s = ((x - lo) / (hi - lo) * (n - 1) as f64).clamp(0.0, (n - 1) as f64);
    let i = (s.floor() as usize).min(n - 2);
    Some((s - i as f64, i))
}
