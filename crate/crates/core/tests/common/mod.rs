//! Shared helpers for the integration tests.
#![allow(dead_code)]

use meshless_claw::qp::{Bound, WeightProblem};
use nalgebra::{DMatrix, DVector};
use rand::Rng;

/// Optimum of a bounded least-norm problem found by trying every subset of
/// bounds as the active set. `None` when no subset gives a feasible point.
pub fn brute_force(p: &WeightProblem) -> Option<(f64, Vec<f64>)> {
    let n = p.n();
    let bounded: Vec<usize> = (0..n).filter(|&j| p.bounds[j].is_some()).collect();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 0u32..(1 << bounded.len()) {
        let mut fixed = vec![None; n];
        for (b, &j) in bounded.iter().enumerate() {
            if mask & (1 << b) != 0 {
                fixed[j] = Some(p.bounds[j].unwrap().value());
            }
        }
        let Some(w) = restricted_minimiser(p, &fixed) else { continue };
        let scale = 1.0 + w.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        if p.bound_violation(&w) > 1e-9 * scale {
            continue;
        }
        let obj = p.objective(&w);
        if best.as_ref().is_none_or(|(o, _)| obj < *o) {
            best = Some((obj, w));
        }
    }
    best
}

/// Minimiser of the objective with the equalities and the given variables
/// fixed, from the full KKT system. `None` when the restricted equalities
/// are inconsistent.
fn restricted_minimiser(p: &WeightProblem, fixed: &[Option<f64>]) -> Option<Vec<f64>> {
    let (n, m) = (p.n(), p.m());
    let free: Vec<usize> = (0..n).filter(|&j| fixed[j].is_none()).collect();
    let nf = free.len();
    let mut rhs = DVector::zeros(nf + m);
    for r in 0..m {
        let shift: f64 = (0..n).filter_map(|j| fixed[j].map(|c| p.eq(r, j) * c)).sum();
        rhs[nf + r] = p.eq_rhs[r] - shift;
    }
    let mut k = DMatrix::zeros(nf + m, nf + m);
    for (a, &j) in free.iter().enumerate() {
        k[(a, a)] = 2.0 * p.obj_diag[j];
        for r in 0..m {
            k[(a, nf + r)] = p.eq(r, j);
            k[(nf + r, a)] = p.eq(r, j);
        }
    }
    let x = k.clone().svd(true, true).solve(&rhs, 1e-12).ok()?;
    let resid = (&k * &x - &rhs).amax();
    if resid > 1e-9 * (1.0 + rhs.amax()) {
        return None;
    }
    let mut w = vec![0.0; n];
    for j in 0..n {
        if let Some(c) = fixed[j] {
            w[j] = c;
        }
    }
    for (a, &j) in free.iter().enumerate() {
        w[j] = x[a];
    }
    Some(w)
}

/// Random problem shaped like a stencil problem: variable 0 has zero
/// objective weight, the first equality row is all ones (exactness on
/// constants), every variable carries an optional bound of either sign.
pub fn random_problem(rng: &mut impl Rng, n: usize, m: usize) -> WeightProblem {
    let mut obj = vec![0.0; n];
    for d in obj.iter_mut().skip(1) {
        *d = rng.gen_range(0.1..10.0);
    }
    let mut e = vec![0.0; m * n];
    for r in 0..m {
        for j in 0..n {
            e[r * n + j] = if r == 0 { 1.0 } else { rng.gen_range(-1.0..1.0) };
        }
    }
    let mut b: Vec<f64> = (0..m).map(|_| rng.gen_range(-1.0..1.0)).collect();
    b[0] = 0.0;
    let bounds = (0..n)
        .map(|_| match rng.gen_range(0..3) {
            0 => None,
            1 => Some(Bound::Upper(rng.gen_range(-0.5..0.5))),
            _ => Some(Bound::Lower(rng.gen_range(-0.5..0.5))),
        })
        .collect();
    WeightProblem::new(obj, e, b).with_bounds(bounds)
}
