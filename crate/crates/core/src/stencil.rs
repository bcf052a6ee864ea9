//! Numerical differentiation formulas on irregular influence sets.
//!
//! Two formulas are built per node. The viscosity formula `v` approximates
//! the Laplacian, is exact on quadratics and has nonnegative off-center
//! weights. The divergence formula `w` approximates the directional
//! derivative `D_eta`, is exact on linear polynomials, has nonpositive
//! off-center weights and a center weight bounded by `B`. Both minimise a
//! distance-weighted l2 seminorm of the weight vector. Influence sets are
//! nearest-neighbour prefixes that grow by a factor 1.2 until the
//! sign-constrained problem becomes feasible.

use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::geometry::{NodeCloud, NodeSet};
use crate::qp::{self, Bound, Status, WeightProblem};

#[derive(Clone, Debug, PartialEq)]
pub enum Operator {
    /// Directional derivative along a (not necessarily unit) vector.
    Directional(Vec<f64>),
    Laplacian,
}

/// Operator plus exactness order `q`, seminorm exponent `s` and operator order `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct NdfSpec {
    pub operator: Operator,
    pub q: usize,
    pub s: i32,
    pub k: i32,
}

impl NdfSpec {
    /// Exact on linear polynomials, seminorm exponent 2.
    pub fn directional(eta: Vec<f64>) -> Self {
        NdfSpec { operator: Operator::Directional(eta), q: 2, s: 2, k: 1 }
    }

    /// Exact on quadratic polynomials, seminorm exponent 3.
    pub fn laplacian() -> Self {
        NdfSpec { operator: Operator::Laplacian, q: 3, s: 3, k: 2 }
    }
}

/// Exponents of the monomials of total degree `< q` in `dim` variables,
/// graded: the constant first, then the linear ones, then the quadratics.
pub fn monomial_exponents(dim: usize, q: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    for degree in 0..q as u32 {
        let mut alpha = vec![0u32; dim];
        push_degree(&mut out, &mut alpha, 0, degree);
    }
    out
}

fn push_degree(out: &mut Vec<Vec<u32>>, alpha: &mut Vec<u32>, axis: usize, left: u32) {
    if axis + 1 == alpha.len() {
        alpha[axis] = left;
        out.push(alpha.clone());
        return;
    }
    for a in (0..=left).rev() {
        alpha[axis] = a;
        push_degree(out, alpha, axis + 1, left - a);
    }
    alpha[axis] = 0;
}

/// Dimension of the space of polynomials of order `q` (degree `< q`).
pub fn poly_dim(dim: usize, q: usize) -> usize {
    monomial_exponents(dim, q).len()
}

/// Polynomial exactness conditions on one influence set.
#[derive(Clone, Debug)]
pub struct ExactnessSystem {
    /// `m x n` row-major; row `r` is monomial `r` evaluated at every node of
    /// the set in the shifted, scaled variable `y = (x - x_center) / h_loc`.
    pub matrix: Vec<f64>,
    /// The operator applied to each monomial at the center, in physical units.
    pub rhs: Vec<f64>,
    pub h_loc: f64,
    /// Physical (periodic) distance of every node to the center.
    pub dist: Vec<f64>,
}

impl ExactnessSystem {
    pub fn rows(&self) -> usize {
        self.rhs.len()
    }

    /// Least-norm problem with objective coefficients `(dist / h_loc)^(2s)`.
    pub fn weight_problem(&self, s: i32) -> WeightProblem {
        let obj = self.dist.iter().map(|d| (d / self.h_loc).powi(2 * s)).collect();
        WeightProblem::new(obj, self.matrix.clone(), self.rhs.clone())
    }

    /// Max residual `|sum_j w_j p_r(x_j) - D p_r(x_center)|` over the basis.
    pub fn residual(&self, w: &[f64]) -> f64 {
        let n = self.dist.len();
        (0..self.rows())
            .map(|r| {
                let lhs: f64 = (0..n).map(|j| self.matrix[r * n + j] * w[j]).sum();
                (lhs - self.rhs[r]).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Builds the exactness system of `spec` on the nodes `neighbors`, whose
/// first entry must be the center.
pub fn exactness_system(center: usize, neighbors: &[usize], spec: &NdfSpec, nodes: &NodeSet) -> ExactnessSystem {
    debug_assert_eq!(neighbors.first(), Some(&center));
    let d = nodes.dim();
    let n = neighbors.len();
    let xc = nodes.point(center);
    let mut disp = vec![0.0; n * d];
    let mut dist = vec![0.0; n];
    for (j, &id) in neighbors.iter().enumerate() {
        let out = &mut disp[j * d..(j + 1) * d];
        nodes.domain().displacement_into(xc, nodes.point(id), out);
        dist[j] = out.iter().map(|x| x * x).sum::<f64>().sqrt();
    }
    let h_loc = dist.iter().cloned().fold(0.0, f64::max);
    let scale = if h_loc > 0.0 { 1.0 / h_loc } else { 1.0 };
    for x in disp.iter_mut() {
        *x *= scale;
    }

    let basis = monomial_exponents(d, spec.q);
    let mut matrix = Vec::with_capacity(basis.len() * n);
    let mut rhs = Vec::with_capacity(basis.len());
    for alpha in &basis {
        for j in 0..n {
            let y = &disp[j * d..(j + 1) * d];
            matrix.push(y.iter().zip(alpha).map(|(v, &a)| v.powi(a as i32)).product::<f64>());
        }
        let degree: u32 = alpha.iter().sum();
        let value = match &spec.operator {
            Operator::Directional(eta) if degree == 1 => {
                let axis = alpha.iter().position(|&a| a == 1).unwrap();
                eta[axis] * scale
            }
            Operator::Laplacian if degree == 2 && alpha.contains(&2) => 2.0 * scale * scale,
            _ => 0.0,
        };
        rhs.push(value);
    }
    ExactnessSystem { matrix, rhs, h_loc, dist }
}

/// Next influence-set size, `ceil(1.2 n)`.
pub fn grow(n: usize) -> usize {
    (6 * n).div_ceil(5)
}

/// Positive Laplacian formula for one node.
#[derive(Clone, Debug, PartialEq)]
pub enum Viscosity {
    /// Weights on the first `v.len()` nearest neighbours.
    Enabled { v: Vec<f64> },
    /// Boundary node, or no feasible formula within `n_max` neighbours.
    Disabled,
}

impl Viscosity {
    pub fn count(&self) -> usize {
        match self {
            Viscosity::Enabled { v } => v.len(),
            Viscosity::Disabled => 0,
        }
    }
}

/// Laplacian weights with `v_j >= 0` off the center, on the smallest
/// nearest-neighbour prefix of size `n_start, ceil(1.2 n_start), ...` not
/// exceeding `n_max` on which the problem is feasible.
pub fn viscosity_weights(cloud: &NodeCloud, center: usize, n_start: usize, n_max: usize) -> Result<Viscosity> {
    if cloud.nodes.is_boundary(center) {
        return Ok(Viscosity::Disabled);
    }
    let spec = NdfSpec::laplacian();
    let n_cap = n_max.min(cloud.len());
    let mut size = n_start;
    while size <= n_cap {
        let ids = cloud.neighbors(center, size)?;
        let sys = exactness_system(center, &ids, &spec, &cloud.nodes);
        let mut bounds = vec![Some(Bound::Lower(0.0)); size];
        bounds[0] = None;
        let sol = qp::solve_bounded(&sys.weight_problem(spec.s).with_bounds(bounds));
        if sol.status == Status::Optimal {
            return Ok(Viscosity::Enabled { v: sol.w });
        }
        size = grow(size);
    }
    Ok(Viscosity::Disabled)
}

/// Divergence weights on a nearest-neighbour prefix.
#[derive(Clone, Debug, PartialEq)]
pub struct Divergence {
    pub ids: Vec<usize>,
    pub w: Vec<f64>,
    /// The sign constraints could not be met within `n_max` neighbours and
    /// the plain least-norm formula was used instead.
    pub constraints_dropped: bool,
    pub center_bound_active: bool,
}

/// Directional-derivative weights with `w_j <= 0` off the center and
/// `w_center <= b`, starting from the first `start_size` neighbours.
pub fn divergence_weights(
    cloud: &NodeCloud,
    center: usize,
    eta: &[f64],
    start_size: usize,
    b: f64,
    n_max: usize,
) -> Result<Divergence> {
    let spec = NdfSpec::directional(eta.to_vec());
    let start = start_size.min(cloud.len());
    if eta.iter().all(|&e| e == 0.0) {
        let ids = cloud.neighbors(center, start)?.into_owned();
        let n = ids.len();
        return Ok(Divergence { ids, w: vec![0.0; n], constraints_dropped: false, center_bound_active: false });
    }
    let n_cap = n_max.min(cloud.len());

    let mut size = start;
    while size <= n_cap {
        let ids = cloud.neighbors(center, size)?;
        let sys = exactness_system(center, &ids, &spec, &cloud.nodes);
        let mut bounds = vec![Some(Bound::Upper(0.0)); size];
        bounds[0] = Some(Bound::Upper(b));
        let sol = qp::solve_bounded(&sys.weight_problem(spec.s).with_bounds(bounds));
        if sol.status == Status::Optimal {
            let center_bound_active = sol.active_set.contains(&0);
            return Ok(Divergence { ids: ids.into_owned(), w: sol.w, constraints_dropped: false, center_bound_active });
        }
        size = grow(size);
    }

    let mut size = start;
    while size <= n_cap {
        let ids = cloud.neighbors(center, size)?;
        let sys = exactness_system(center, &ids, &spec, &cloud.nodes);
        let sol = qp::solve_equality(&sys.weight_problem(spec.s));
        if sol.status == Status::Optimal {
            return Ok(Divergence { ids: ids.into_owned(), w: sol.w, constraints_dropped: true, center_bound_active: false });
        }
        size = grow(size);
    }
    Err(Error::MalformedGeometry { node: center, n_max })
}

/// Lazily computed viscosity formulas, one per node. They depend on the
/// geometry only, so they are shared by all time steps.
#[derive(Debug)]
pub struct ViscosityCache {
    slots: Vec<OnceLock<Viscosity>>,
}

impl ViscosityCache {
    pub fn new(n: usize) -> Self {
        ViscosityCache { slots: (0..n).map(|_| OnceLock::new()).collect() }
    }

    pub fn get(&self, cloud: &NodeCloud, i: usize, n_min: usize, n_max: usize) -> Result<&Viscosity> {
        if let Some(v) = self.slots[i].get() {
            return Ok(v);
        }
        let v = viscosity_weights(cloud, i, n_min, n_max)?;
        Ok(self.slots[i].get_or_init(|| v))
    }

    /// Number of nodes whose formula has been computed so far.
    pub fn computed(&self) -> usize {
        self.slots.iter().filter(|s| s.get().is_some()).count()
    }

    /// Interior nodes computed so far for which no formula exists.
    pub fn disabled(&self) -> usize {
        self.slots.iter().filter(|s| matches!(s.get(), Some(Viscosity::Disabled))).count()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StencilParams {
    pub dt: f64,
    pub n_min: usize,
    pub n_max: usize,
}

/// Everything one node needs for the update
/// `U_i <- U_i - dt sum_j (w_j - mu v_j) U_j`.
#[derive(Clone, Debug, PartialEq)]
pub struct StencilPair {
    pub node: usize,
    /// Center first.
    pub influence: Vec<usize>,
    pub w: Vec<f64>,
    /// Zero beyond the first `visc_count` entries.
    pub v: Vec<f64>,
    pub mu: f64,
    pub visc_count: usize,
    pub viscosity_disabled: bool,
    pub constraints_dropped: bool,
    pub center_bound_active: bool,
}

impl StencilPair {
    /// Combined weights `w_j - mu v_j`.
    pub fn combined(&self) -> impl Iterator<Item = f64> + '_ {
        self.w.iter().zip(&self.v).map(move |(w, v)| w - self.mu * v)
    }

    /// Largest off-center combined weight and the scaled center weight
    /// `dt (w_c - mu v_c)`; positivity means `<= 0` and `<= 1`.
    pub fn positivity(&self, dt: f64) -> (f64, f64) {
        let mut comb = self.combined();
        let center = dt * comb.next().unwrap_or(0.0);
        let off = comb.fold(f64::NEG_INFINITY, f64::max);
        (off, center)
    }
}

/// Builds the divergence and viscosity formulas of one node.
///
/// Viscosity weights come first (interior nodes with `mu_requested > 0`),
/// then the center bound `B = max(1/(2 dt), 1/dt - mu |v_c|)` (just
/// `1/(2 dt)` without viscosity), the divergence weights starting from the
/// viscosity set, and finally the correction `mu <- min(mu, 1/(2 dt |v_c|))`.
pub fn build_stencil(
    cloud: &NodeCloud,
    center: usize,
    eta: &[f64],
    mu_requested: f64,
    params: &StencilParams,
    cache: &ViscosityCache,
) -> Result<StencilPair> {
    let dt = params.dt;
    let mut viscosity_disabled = false;
    let visc = if mu_requested > 0.0 {
        match cache.get(cloud, center, params.n_min, params.n_max)? {
            Viscosity::Enabled { v } => Some(v.as_slice()),
            Viscosity::Disabled => {
                viscosity_disabled = true;
                None
            }
        }
    } else {
        None
    };

    let (b, start) = match visc {
        Some(v) => (f64::max(0.5 / dt, 1.0 / dt - mu_requested * v[0].abs()), v.len()),
        None => (0.5 / dt, params.n_min),
    };
    let div = divergence_weights(cloud, center, eta, start, b, params.n_max)?;
    if div.constraints_dropped {
        log::debug!("node {center}: sign constraints dropped ({} neighbours)", div.ids.len());
    }

    let n = div.ids.len();
    let mut v = vec![0.0; n];
    let (mu, visc_count) = match visc {
        Some(vv) => {
            v[..vv.len()].copy_from_slice(vv);
            (mu_requested.min(0.5 / (dt * vv[0].abs())), vv.len())
        }
        None => (0.0, 0),
    };
    Ok(StencilPair {
        node: center,
        influence: div.ids,
        w: div.w,
        v,
        mu,
        visc_count,
        viscosity_disabled,
        constraints_dropped: div.constraints_dropped,
        center_bound_active: div.center_bound_active,
    })
}

/// Quality factor `h_loc^(k - s) sum_j |w_j| |x_j - x_c|^s` of a formula of
/// operator order `k`; invariant under uniform scaling of the geometry.
pub fn sigma_quality(center: usize, ids: &[usize], weights: &[f64], s: i32, k: i32, nodes: &NodeSet) -> f64 {
    let xc = nodes.point(center);
    let dist: Vec<f64> = ids.iter().map(|&j| nodes.domain().distance(xc, nodes.point(j))).collect();
    let h_loc = dist.iter().cloned().fold(0.0, f64::max);
    if h_loc == 0.0 {
        return 0.0;
    }
    let sum: f64 = weights.iter().zip(&dist).map(|(w, d)| w.abs() * d.powi(s)).sum();
    h_loc.powi(k - s) * sum
}

/// Plain least-norm Laplacian weights (no sign constraints) on the first
/// `n_start` neighbours, growing on rank deficiency up to `n_max`.
pub fn laplacian_weights(cloud: &NodeCloud, center: usize, n_start: usize, n_max: usize) -> Result<Option<(Vec<usize>, Vec<f64>)>> {
    let spec = NdfSpec::laplacian();
    let n_cap = n_max.min(cloud.len());
    let mut size = n_start;
    while size <= n_cap {
        let ids = cloud.neighbors(center, size)?;
        let sys = exactness_system(center, &ids, &spec, &cloud.nodes);
        let sol = qp::solve_equality(&sys.weight_problem(spec.s));
        if sol.status == Status::Optimal {
            return Ok(Some((ids.into_owned(), sol.w)));
        }
        size = grow(size);
    }
    Ok(None)
}
