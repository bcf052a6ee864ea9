//! Error measures and evaluation of scattered solutions at arbitrary points.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::NodeCloud;
use crate::par;

/// Mean absolute error `E1` and root-mean-square error `E2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorReport {
    pub e1: f64,
    pub e2: f64,
    pub n: usize,
}

pub fn errors(values: &[f64], reference: &[f64]) -> Result<ErrorReport> {
    if values.len() != reference.len() {
        return Err(Error::LengthMismatch { expected: reference.len(), got: values.len() });
    }
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = values.len() as f64;
    let (mut s1, mut s2) = (0.0, 0.0);
    for (u, r) in values.iter().zip(reference) {
        let d = (u - r).abs();
        s1 += d;
        s2 += d * d;
    }
    let e1 = s1 / n;
    // the power-mean inequality holds exactly; guard against the last-ulp
    // rounding of the two sums
    let e2 = (s2 / n).sqrt().max(e1);
    Ok(ErrorReport { e1, e2, n: values.len() })
}

/// Values of a scattered solution at `points`: a linear polynomial fitted by
/// weighted least squares to the `k` nearest nodes, weights
/// `(1 + d_j / h)^-2`. A degenerate neighbourhood returns the value of the
/// nearest node.
pub fn eval_at(points: &[Vec<f64>], values: &[f64], cloud: &NodeCloud, k: usize) -> Result<Vec<f64>> {
    if values.len() != cloud.len() {
        return Err(Error::LengthMismatch { expected: cloud.len(), got: values.len() });
    }
    let d = cloud.nodes.dim();
    let k = k.min(cloud.len());
    if k < d + 1 {
        return Err(Error::KTooLarge { k: d + 1, n: k });
    }
    let h = cloud.nodes.h();
    par::map_indices(points.len(), |q| -> Result<f64> {
        let x = &points[q];
        let near = cloud.index.knn_point(x, k)?;
        let mut a = DMatrix::zeros(k, d + 1);
        let mut b = DVector::zeros(k);
        let mut disp = vec![0.0; d];
        for (r, &(j, dist)) in near.iter().enumerate() {
            let sw = 1.0 / (1.0 + dist / h);
            cloud.nodes.domain().displacement_into(x, cloud.nodes.point(j), &mut disp);
            a[(r, 0)] = sw;
            for c in 0..d {
                a[(r, c + 1)] = sw * disp[c] / h;
            }
            b[r] = sw * values[j];
        }
        let svd = a.svd(true, true);
        let smax = svd.singular_values.max();
        if svd.singular_values.min() <= 1e-8 * smax {
            return Ok(values[near[0].0]);
        }
        Ok(svd.solve(&b, 0.0).map(|c| c[0]).unwrap_or(values[near[0].0]))
    })
    .into_iter()
    .collect()
}

/// `samples` equispaced points on the segment from `a` to `b` (inclusive),
/// with their arc-length parameter.
pub fn segment(a: &[f64], b: &[f64], samples: usize) -> (Vec<f64>, Vec<Vec<f64>>) {
    let len = a.iter().zip(b).map(|(x, y)| (y - x) * (y - x)).sum::<f64>().sqrt();
    let mut s = Vec::with_capacity(samples);
    let mut pts = Vec::with_capacity(samples);
    for k in 0..samples {
        let t = if samples == 1 { 0.0 } else { k as f64 / (samples - 1) as f64 };
        s.push(t * len);
        pts.push(a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect());
    }
    (s, pts)
}
