//! Small dense weighted least-norm problems
//!
//! ```text
//!     minimize    sum_j d_j w_j^2
//!     subject to  E w = b
//!                 w_j <= c_j  or  w_j >= c_j   (optional, one per variable)
//! ```
//!
//! with `d_j > 0` except for a single "center" variable whose weight is zero.
//! The center is never eliminated explicitly; instead every linear solve
//! works on the free variables through an `(m+1) x (m+1)` bordered Schur
//! complement, which stays nonsingular as long as `E` has full row rank on
//! the free columns and the center appears in some row.
//!
//! Bounds are handled by the dual active-set method of Goldfarb and Idnani,
//! specialised to one-sided variable bounds: start from the equality-only
//! minimiser, repeatedly pick the most violated bound, and move along primal
//! and dual directions, releasing bounds whose multiplier would turn
//! negative. A violated bound that cannot be reached certifies infeasibility.

use std::borrow::Cow;

use nalgebra::DMatrix;

/// One-sided bound on a single variable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    Upper(f64),
    Lower(f64),
}

impl Bound {
    pub fn value(self) -> f64 {
        match self {
            Bound::Upper(c) | Bound::Lower(c) => c,
        }
    }

    /// Slack of `x` (negative when violated).
    pub fn slack(self, x: f64) -> f64 {
        match self {
            Bound::Upper(c) => c - x,
            Bound::Lower(c) => x - c,
        }
    }

    /// Sign of the constraint normal in `n^T w >= b` form.
    fn sign(self) -> f64 {
        match self {
            Bound::Upper(_) => -1.0,
            Bound::Lower(_) => 1.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightProblem {
    /// Objective coefficients `d_j >= 0`.
    pub obj_diag: Vec<f64>,
    /// `m x n`, row-major.
    pub eq_matrix: Vec<f64>,
    pub eq_rhs: Vec<f64>,
    pub bounds: Vec<Option<Bound>>,
}

impl WeightProblem {
    pub fn new(obj_diag: Vec<f64>, eq_matrix: Vec<f64>, eq_rhs: Vec<f64>) -> Self {
        let n = obj_diag.len();
        assert_eq!(eq_matrix.len(), eq_rhs.len() * n, "equality matrix must be m x n");
        WeightProblem { obj_diag, eq_matrix, eq_rhs, bounds: vec![None; n] }
    }

    pub fn with_bounds(mut self, bounds: Vec<Option<Bound>>) -> Self {
        assert_eq!(bounds.len(), self.n());
        self.bounds = bounds;
        self
    }

    pub fn n(&self) -> usize {
        self.obj_diag.len()
    }

    pub fn m(&self) -> usize {
        self.eq_rhs.len()
    }

    pub fn eq(&self, row: usize, col: usize) -> f64 {
        self.eq_matrix[row * self.n() + col]
    }

    pub fn objective(&self, w: &[f64]) -> f64 {
        self.obj_diag.iter().zip(w).map(|(d, x)| d * x * x).sum()
    }

    /// Max-norm residual of `E w - b`.
    pub fn eq_residual(&self, w: &[f64]) -> f64 {
        (0..self.m())
            .map(|r| {
                let lhs: f64 = (0..self.n()).map(|j| self.eq(r, j) * w[j]).sum();
                (lhs - self.eq_rhs[r]).abs()
            })
            .fold(0.0, f64::max)
    }

    /// Largest bound violation (zero when feasible).
    pub fn bound_violation(&self, w: &[f64]) -> f64 {
        self.bounds
            .iter()
            .zip(w)
            .filter_map(|(b, &x)| b.map(|b| (-b.slack(x)).max(0.0)))
            .fold(0.0, f64::max)
    }

    fn zero_weight_vars(&self) -> Vec<usize> {
        (0..self.n()).filter(|&j| self.obj_diag[j] == 0.0).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Optimal,
    Infeasible,
    RankDeficient,
}

#[derive(Clone, Debug)]
pub struct WeightSolution {
    pub w: Vec<f64>,
    pub status: Status,
    /// Variables held at their bound, in the order they were activated.
    pub active_set: Vec<usize>,
    pub objective_value: f64,
    pub iterations: usize,
}

impl WeightSolution {
    fn failed(n: usize, status: Status, iterations: usize) -> Self {
        WeightSolution {
            w: vec![0.0; n],
            status,
            active_set: Vec::new(),
            objective_value: f64::NAN,
            iterations,
        }
    }

    pub fn is_optimal(&self) -> bool {
        self.status == Status::Optimal
    }
}

/// Relative singular-value cutoff for the rank test.
pub const RANK_TOL: f64 = 1e-10;

/// Minimises the objective subject to the equalities only (bounds ignored).
pub fn solve_equality(problem: &WeightProblem) -> WeightSolution {
    let n = problem.n();
    let Some(problem) = independent_rows(problem) else {
        return WeightSolution::failed(n, Status::RankDeficient, 0);
    };
    let problem = problem.as_ref();
    let Some(ws) = Workspace::new(problem) else {
        return WeightSolution::failed(n, Status::RankDeficient, 0);
    };
    let free = vec![true; n];
    match ws.solve_free(&free, &vec![0.0; n], &problem.eq_rhs) {
        Some((w, _)) => WeightSolution {
            objective_value: problem.objective(&w),
            w,
            status: Status::Optimal,
            active_set: Vec::new(),
            iterations: 0,
        },
        None => WeightSolution::failed(n, Status::RankDeficient, 0),
    }
}

/// Minimises the objective subject to equalities and the one-sided bounds.
pub fn solve_bounded(problem: &WeightProblem) -> WeightSolution {
    let n = problem.n();
    let Some(problem) = independent_rows(problem) else {
        return WeightSolution::failed(n, Status::RankDeficient, 0);
    };
    let problem = problem.as_ref();
    let Some(ws) = Workspace::new(problem) else {
        return WeightSolution::failed(n, Status::RankDeficient, 0);
    };
    ws.dual_active_set()
}

/// Replaces a rank-deficient but consistent equality system by an
/// equivalent one with independent rows (e.g. the `xy` row of the 5-point
/// cross, which vanishes identically). `None` when the system is
/// inconsistent.
fn independent_rows(p: &WeightProblem) -> Option<Cow<'_, WeightProblem>> {
    let (m, n) = (p.m(), p.n());
    if m == 0 {
        return Some(Cow::Borrowed(p));
    }
    let e = DMatrix::from_row_slice(m, n, &p.eq_matrix);
    let svd = e.svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&k| svd.singular_values[k] > RANK_TOL * smax)
        .collect();
    if keep.len() == m {
        return Some(Cow::Borrowed(p));
    }
    let u = svd.u.as_ref().expect("u requested");
    let v_t = svd.v_t.as_ref().expect("v_t requested");
    let b = nalgebra::DVector::from_column_slice(&p.eq_rhs);
    let mut resid = b.clone();
    let mut rows = Vec::with_capacity(keep.len() * n);
    let mut rhs = Vec::with_capacity(keep.len());
    for &k in &keep {
        let c = u.column(k).dot(&b);
        resid.axpy(-c, &u.column(k), 1.0);
        rows.extend(v_t.row(k).iter());
        rhs.push(c / svd.singular_values[k]);
    }
    if resid.amax() > 1e-9 * b.amax() {
        return None;
    }
    let mut reduced = WeightProblem::new(p.obj_diag.clone(), rows, rhs);
    reduced.bounds = p.bounds.clone();
    Some(Cow::Owned(reduced))
}

struct Workspace<'a> {
    p: &'a WeightProblem,
    n: usize,
    m: usize,
    /// Hessian diagonal, `2 d_j`.
    g: Vec<f64>,
    center: Option<usize>,
    /// Column scale used in zero tests for primal directions.
    zscale: f64,
}

impl<'a> Workspace<'a> {
    /// Validates the problem shape and rank. `None` means rank-deficient.
    fn new(p: &'a WeightProblem) -> Option<Self> {
        let n = p.n();
        let m = p.m();
        let zeros = p.zero_weight_vars();
        if zeros.len() > 1 || p.obj_diag.iter().any(|&d| !(d >= 0.0) || !d.is_finite()) {
            return None;
        }
        let center = zeros.first().copied();
        let g: Vec<f64> = p.obj_diag.iter().map(|d| 2.0 * d).collect();
        let zscale = g.iter().filter(|&&x| x > 0.0).map(|x| 1.0 / x).fold(0.0, f64::max);
        let ws = Workspace { p, n, m, g, center, zscale };
        if !ws.full_rank() {
            return None;
        }
        Some(ws)
    }

    /// Rank test of the equality system after eliminating the center, with
    /// columns scaled by `d_j^{-1/2}`.
    fn full_rank(&self) -> bool {
        let (m, n, p) = (self.m, self.n, self.p);
        if m == 0 {
            return self.center.is_none();
        }
        let cols: Vec<usize> = (0..n).filter(|&j| Some(j) != self.center).collect();
        let reduced = match self.center {
            None => DMatrix::from_fn(m, cols.len(), |r, c| {
                p.eq(r, cols[c]) / p.obj_diag[cols[c]].sqrt()
            }),
            Some(c) => {
                let pivot = (0..m).max_by(|&a, &b| p.eq(a, c).abs().total_cmp(&p.eq(b, c).abs())).unwrap();
                let pv = p.eq(pivot, c);
                if pv == 0.0 {
                    return false;
                }
                let rows: Vec<usize> = (0..m).filter(|&r| r != pivot).collect();
                if rows.is_empty() {
                    return true;
                }
                DMatrix::from_fn(rows.len(), cols.len(), |r, k| {
                    let (row, col) = (rows[r], cols[k]);
                    let v = p.eq(row, col) - p.eq(row, c) / pv * p.eq(pivot, col);
                    v / p.obj_diag[col].sqrt()
                })
            }
        };
        if reduced.nrows() > reduced.ncols() {
            return false;
        }
        let sv = reduced.singular_values();
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        smax > 0.0 && sv.iter().all(|&s| s > RANK_TOL * smax)
    }

    /// Solves, with variables outside `free` held at zero change,
    ///
    /// ```text
    ///     G_F z_F + E_F^T r = q_F,    E_F z_F = t
    /// ```
    ///
    /// returning `(z, r)`. For the primal problem use `q = 0, t = b - E_A w_A`
    /// (the returned `z` is then the free part of `w`); for a step direction
    /// use `q = n_p, t = 0`.
    fn solve_free(&self, free: &[bool], q: &[f64], t: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        let (m, n, p) = (self.m, self.n, self.p);
        let center_free = self.center.filter(|&c| free[c]);
        let dim = m + usize::from(center_free.is_some());
        let mut k = vec![0.0; dim * dim];
        let mut rhs = vec![0.0; dim];
        for r in 0..m {
            rhs[r] = -t[r];
        }
        for j in 0..n {
            if !free[j] || Some(j) == center_free {
                continue;
            }
            let inv = 1.0 / self.g[j];
            for a in 0..m {
                let ea = p.eq(a, j) * inv;
                if ea == 0.0 {
                    continue;
                }
                rhs[a] += ea * q[j];
                for b in 0..m {
                    k[a * dim + b] += ea * p.eq(b, j);
                }
            }
        }
        if let Some(c) = center_free {
            for a in 0..m {
                k[a * dim + m] = -p.eq(a, c);
                k[m * dim + a] = p.eq(a, c);
            }
            rhs[m] = q[c];
        }
        let sol = solve_dense(&mut k, &mut rhs, dim)?;
        let r = sol[..m].to_vec();
        let mut z = vec![0.0; n];
        for j in 0..n {
            if !free[j] {
                continue;
            }
            if Some(j) == center_free {
                z[j] = sol[m];
            } else {
                let etr: f64 = (0..m).map(|a| p.eq(a, j) * r[a]).sum();
                z[j] = (q[j] - etr) / self.g[j];
            }
        }
        Some((z, r))
    }

    /// Equality-constrained minimiser with the variables in `active` fixed at
    /// their bounds.
    fn primal(&self, free: &[bool]) -> Option<Vec<f64>> {
        let (m, n, p) = (self.m, self.n, self.p);
        let mut fixed = vec![0.0; n];
        for j in 0..n {
            if !free[j] {
                fixed[j] = p.bounds[j].expect("fixed variable has a bound").value();
            }
        }
        let t: Vec<f64> = (0..m)
            .map(|r| p.eq_rhs[r] - (0..n).map(|j| p.eq(r, j) * fixed[j]).sum::<f64>())
            .collect();
        let (mut w, _) = self.solve_free(free, &vec![0.0; n], &t)?;
        for j in 0..n {
            if !free[j] {
                w[j] = fixed[j];
            }
        }
        Some(w)
    }

    fn dual_active_set(&self) -> WeightSolution {
        let (n, m, p) = (self.n, self.m, self.p);
        let mut free = vec![true; n];
        let Some(mut w) = self.primal(&free) else {
            return WeightSolution::failed(n, Status::RankDeficient, 0);
        };
        let wscale = w.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        let viol_tol = 2e-15 * wscale;
        let max_iter = 50 * n.max(1);

        let mut active: Vec<usize> = Vec::new();
        let mut u: Vec<f64> = Vec::new();
        let mut iterations = 0;

        loop {
            // most violated inactive bound
            let mut pick: Option<(usize, f64)> = None;
            for j in 0..n {
                if !free[j] {
                    continue;
                }
                if let Some(b) = p.bounds[j] {
                    let s = b.slack(w[j]);
                    if s < -viol_tol && pick.is_none_or(|(_, best)| s < best) {
                        pick = Some((j, s));
                    }
                }
            }
            let Some((np, _)) = pick else {
                // polish: re-solve exactly on the final active set
                match self.primal(&free) {
                    Some(polished) if p.bound_violation(&polished) <= viol_tol => {
                        return WeightSolution {
                            objective_value: p.objective(&polished),
                            w: polished,
                            status: Status::Optimal,
                            active_set: active,
                            iterations,
                        };
                    }
                    Some(polished) if iterations < max_iter => {
                        w = polished;
                        continue;
                    }
                    _ => return WeightSolution::failed(n, Status::Infeasible, iterations),
                }
            };
            let bp = p.bounds[np].unwrap();
            let sign_p = bp.sign();
            let mut u_p = 0.0;

            loop {
                iterations += 1;
                if iterations > max_iter {
                    return WeightSolution::failed(n, Status::Infeasible, iterations);
                }
                let mut q = vec![0.0; n];
                q[np] = sign_p;
                let Some((z, r_eq)) = self.solve_free(&free, &q, &vec![0.0; m]) else {
                    return WeightSolution::failed(n, Status::Infeasible, iterations);
                };
                // dual direction for the active bounds
                let r: Vec<f64> = active
                    .iter()
                    .map(|&j| {
                        let etr: f64 = (0..m).map(|a| p.eq(a, j) * r_eq[a]).sum();
                        -p.bounds[j].unwrap().sign() * etr
                    })
                    .collect();
                let rmax = r.iter().fold(0.0f64, |a, x| a.max(x.abs()));
                let zn = sign_p * z[np];

                let mut t1 = f64::INFINITY;
                let mut drop = None;
                for (k, &rk) in r.iter().enumerate() {
                    if rk > 1e-12 * rmax {
                        let ratio = u[k] / rk;
                        if ratio < t1 {
                            t1 = ratio;
                            drop = Some(k);
                        }
                    }
                }
                let s_p = bp.slack(w[np]);
                let t2 = if zn > 1e-13 * self.zscale { -s_p / zn } else { f64::INFINITY };
                let t = t1.min(t2);
                if !t.is_finite() {
                    return WeightSolution::failed(n, Status::Infeasible, iterations);
                }
                if t2.is_finite() {
                    for j in 0..n {
                        w[j] += t * z[j];
                    }
                }
                for (uk, rk) in u.iter_mut().zip(&r) {
                    *uk -= t * rk;
                }
                u_p += t;

                if t2 <= t1 {
                    w[np] = bp.value();
                    free[np] = false;
                    active.push(np);
                    u.push(u_p);
                    break;
                }
                let k = drop.expect("finite partial step has a blocking bound");
                let j = active.remove(k);
                u.remove(k);
                free[j] = true;
            }
        }
    }
}

/// Gaussian elimination with partial pivoting on a small dense system.
/// Returns `None` for a (numerically) singular matrix.
fn solve_dense(a: &mut [f64], b: &mut [f64], n: usize) -> Option<Vec<f64>> {
    let amax = a.iter().fold(0.0f64, |s, x| s.max(x.abs()));
    if amax == 0.0 {
        return if n == 0 { Some(Vec::new()) } else { None };
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&x, &y| a[x * n + col].abs().total_cmp(&a[y * n + col].abs()))?;
        if a[piv * n + col].abs() <= 1e-14 * amax {
            return None;
        }
        if piv != col {
            for k in 0..n {
                a.swap(piv * n + k, col * n + k);
            }
            b.swap(piv, col);
        }
        let d = a[col * n + col];
        for row in col + 1..n {
            let f = a[row * n + col] / d;
            if f == 0.0 {
                continue;
            }
            for k in col..n {
                a[row * n + k] -= f * a[col * n + k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let s: f64 = (row + 1..n).map(|k| a[row * n + k] * x[k]).sum();
        x[row] = (b[row] - s) / a[row * n + row];
    }
    Some(x)
}

/// Residuals of the optimality conditions at a claimed solution.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KktReport {
    pub eq_residual: f64,
    pub bound_violation: f64,
    /// Gradient mismatch on free variables plus any wrong-signed bound
    /// multiplier, relative to `1 + |grad|_inf`.
    pub stationarity: f64,
    /// `max |multiplier * slack|` over bounded variables, same scaling.
    pub complementarity: f64,
}

/// Checks a solution against the KKT conditions. Variables within
/// `1e-9 (1 + |w|_inf)` of their bound are treated as active; equality
/// multipliers are fitted by least squares on the remaining variables.
pub fn kkt_verify(problem: &WeightProblem, solution: &WeightSolution) -> KktReport {
    let (n, m) = (problem.n(), problem.m());
    let w = &solution.w;
    let wmax = w.iter().fold(0.0f64, |a, x| a.max(x.abs()));
    let act_tol = 1e-9 * (1.0 + wmax);
    let grad: Vec<f64> = (0..n).map(|j| 2.0 * problem.obj_diag[j] * w[j]).collect();
    let gscale = 1.0 + grad.iter().fold(0.0f64, |a, x| a.max(x.abs()));

    let is_active: Vec<bool> = (0..n)
        .map(|j| problem.bounds[j].is_some_and(|b| b.slack(w[j]).abs() <= act_tol))
        .collect();
    let free: Vec<usize> = (0..n).filter(|&j| !is_active[j]).collect();

    let lambda = if m == 0 || free.is_empty() {
        vec![0.0; m]
    } else {
        let a = DMatrix::from_fn(free.len(), m, |i, r| problem.eq(r, free[i]));
        let g = DMatrix::from_fn(free.len(), 1, |i, _| grad[free[i]]);
        let svd = a.svd(true, true);
        match svd.solve(&g, 1e-13) {
            Ok(x) => x.iter().copied().collect(),
            Err(_) => vec![0.0; m],
        }
    };
    let etl = |j: usize| -> f64 { (0..m).map(|r| problem.eq(r, j) * lambda[r]).sum() };

    let mut stationarity = 0.0f64;
    let mut complementarity = 0.0f64;
    for j in 0..n {
        let resid = grad[j] - etl(j);
        match problem.bounds[j] {
            Some(b) if is_active[j] => {
                // grad - E^T lambda = nu * n_j with nu >= 0
                let nu = resid * b.sign();
                stationarity = stationarity.max((-nu).max(0.0));
                complementarity = complementarity.max((nu * b.slack(w[j])).abs());
            }
            _ => stationarity = stationarity.max(resid.abs()),
        }
    }
    KktReport {
        eq_residual: problem.eq_residual(w) / (1.0 + problem.eq_rhs.iter().fold(0.0f64, |a, x| a.max(x.abs()))),
        bound_violation: problem.bound_violation(w),
        stationarity: stationarity / gscale,
        complementarity: complementarity / gscale,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 5-point cross (C, E, W, N, S) with spacing h, exactness rows in
    /// physical coordinates relative to the center.
    fn cross(h: f64, laplacian: bool, eta: [f64; 2]) -> WeightProblem {
        let pts = [(0.0, 0.0), (h, 0.0), (-h, 0.0), (0.0, h), (0.0, -h)];
        let s = if laplacian { 3 } else { 2 };
        let d: Vec<f64> = pts.iter().map(|&(x, y)| (x * x + y * y).powi(s)).collect();
        let mut rows: Vec<Vec<f64>> = vec![
            pts.iter().map(|_| 1.0).collect(),
            pts.iter().map(|p| p.0).collect(),
            pts.iter().map(|p| p.1).collect(),
        ];
        let mut rhs = vec![0.0, eta[0], eta[1]];
        if laplacian {
            rows.push(pts.iter().map(|p| p.0 * p.0).collect());
            rows.push(pts.iter().map(|p| p.0 * p.1).collect());
            rows.push(pts.iter().map(|p| p.1 * p.1).collect());
            rhs = vec![0.0, 0.0, 0.0, 2.0, 0.0, 2.0];
        }
        WeightProblem::new(d, rows.concat(), rhs)
    }

    fn assert_close(a: &[f64], b: &[f64], tol: f64) {
        for (x, y) in a.iter().zip(b) {
            assert!((x - y).abs() <= tol, "{a:?} vs {b:?}");
        }
    }

    #[test]
    fn central_difference_on_cross() {
        let h = 0.1;
        let sol = solve_equality(&cross(h, false, [1.0, 0.0]));
        assert!(sol.is_optimal());
        assert_close(&sol.w, &[0.0, 0.5 / h, -0.5 / h, 0.0, 0.0], 1e-12);
    }

    #[test]
    fn five_point_laplacian() {
        let h = 0.1;
        let p = cross(h, true, [0.0, 0.0]);
        let expect: Vec<f64> = [-4.0, 1.0, 1.0, 1.0, 1.0].iter().map(|x| x / (h * h)).collect();
        let eq = solve_equality(&p);
        assert_close(&eq.w, &expect, 1e-9);
        let mut bounds = vec![Some(Bound::Lower(0.0)); 5];
        bounds[0] = None;
        let bd = solve_bounded(&p.with_bounds(bounds));
        assert!(bd.is_optimal());
        assert!(bd.active_set.is_empty());
        assert_close(&bd.w, &expect, 1e-9);
    }

    #[test]
    fn upwind_from_sign_constraints() {
        let h = 0.1;
        let mut bounds = vec![Some(Bound::Upper(0.0)); 5];
        bounds[0] = Some(Bound::Upper(f64::INFINITY));
        let p = cross(h, false, [1.0, 0.0]).with_bounds(bounds);
        let sol = solve_bounded(&p);
        assert!(sol.is_optimal());
        assert_close(&sol.w, &[1.0 / h, 0.0, -1.0 / h, 0.0, 0.0], 1e-12);
        let rep = kkt_verify(&p, &sol);
        assert!(rep.eq_residual <= 1e-12 && rep.bound_violation <= 1e-12, "{rep:?}");
        assert!(rep.stationarity <= 1e-12 && rep.complementarity <= 1e-12, "{rep:?}");

        let mut bad = sol.clone();
        bad.w[1] += 1e-3;
        let rep = kkt_verify(&p, &bad);
        assert!(rep.eq_residual.max(rep.bound_violation).max(rep.stationarity) >= 1e-4, "{rep:?}");
    }

    #[test]
    fn transverse_derivative_on_a_line_is_rejected() {
        // three collinear nodes along x, derivative in y requested
        let d = vec![0.0, 1.0, 1.0];
        let e = vec![1.0, 1.0, 1.0, 0.0, 1.0, -1.0, 0.0, 0.0, 0.0];
        let p = WeightProblem::new(d, e, vec![0.0, 0.0, 1.0]);
        assert_eq!(solve_equality(&p).status, Status::RankDeficient);
        assert_ne!(solve_bounded(&p).status, Status::Optimal);
    }

    #[test]
    fn infeasible_bounds_detected() {
        // w0 + w1 + w2 = 0, w1 - w2 = 1, but w1 <= 0 and w2 >= 0
        let d = vec![0.0, 1.0, 1.0];
        let e = vec![1.0, 1.0, 1.0, 0.0, 1.0, -1.0];
        let p = WeightProblem::new(d, e, vec![0.0, 1.0])
            .with_bounds(vec![None, Some(Bound::Upper(0.0)), Some(Bound::Lower(0.0))]);
        assert_eq!(solve_bounded(&p).status, Status::Infeasible);
    }

    #[test]
    fn center_bound_can_activate() {
        // cross, d/dx, B = 5 forces the center below its unconstrained 1/h = 10
        let h = 0.1;
        let mut bounds = vec![Some(Bound::Upper(0.0)); 5];
        bounds[0] = Some(Bound::Upper(5.0));
        let sol = solve_bounded(&cross(h, false, [1.0, 0.0]).with_bounds(bounds));
        // with only W upstream, w_W = -1/h and the constant row forces w_C = 1/h > B
        assert_eq!(sol.status, Status::Infeasible);

        let pts: [(f64, f64); 6] = [(0.0, 0.0), (0.1, 0.0), (-0.1, 0.0), (-0.1, 0.05), (-0.1, -0.05), (-0.2, 0.0)];
        let d: Vec<f64> = pts.iter().map(|&(x, y)| (x * x + y * y).powi(2)).collect();
        let e = [
            pts.iter().map(|_| 1.0).collect::<Vec<_>>(),
            pts.iter().map(|p| p.0).collect(),
            pts.iter().map(|p| p.1).collect(),
        ]
        .concat();
        let mut bounds = vec![Some(Bound::Upper(0.0)); 6];
        bounds[0] = Some(Bound::Upper(6.0));
        let p = WeightProblem::new(d, e, vec![0.0, 1.0, 0.0]).with_bounds(bounds);
        let sol = solve_bounded(&p);
        assert!(sol.is_optimal());
        assert!((sol.w[0] - 6.0).abs() < 1e-12);
        assert!(sol.active_set.contains(&0));
        let rep = kkt_verify(&p, &sol);
        assert!(rep.stationarity < 1e-9 && rep.eq_residual < 1e-12, "{rep:?}");
    }
}
