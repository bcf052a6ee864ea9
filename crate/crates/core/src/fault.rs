//! Fault detection on scattered data and the adaptive viscosity field.
//!
//! The indicator at a node is the magnitude of a least-norm discrete
//! Laplacian of the data, normalised by `sum_j |w_j| |x_j - x_i|^2`. It is
//! bounded by the Lipschitz constant of the gradient for smooth data and
//! grows like `h^-2` across a jump. Nodes are classified by two median
//! thresholds, and the viscosity factor decays linearly with the distance
//! to the nearest fault node.

use crate::error::{Error, Result};
use crate::geometry::{NodeCloud, SpatialIndex};
use crate::par;
use crate::stencil;

/// Laplacian weights used by the indicator at one node, together with the
/// normalising denominator. Depends on the geometry only.
#[derive(Clone, Debug, PartialEq)]
pub struct IndicatorStencil {
    pub ids: Vec<usize>,
    pub w: Vec<f64>,
    /// `sum_j |w_j| |x_j - x_i|^2`.
    pub denom: f64,
}

impl IndicatorStencil {
    /// `|sum_j w_j f_j| / denom`, evaluated as `sum_{j != i} w_j (f_j - f_i)`
    /// so that locally constant data gives exactly zero.
    pub fn apply(&self, values: &[f64]) -> f64 {
        if self.denom == 0.0 {
            return 0.0;
        }
        let fi = values[self.ids[0]];
        let lap: f64 = self.ids.iter().zip(&self.w).skip(1).map(|(&j, w)| w * (values[j] - fi)).sum();
        lap.abs() / self.denom
    }
}

/// Indicator weights at node `i` on its `n_f` nearest neighbours, growing by
/// 1.2 on rank deficiency up to `n_max`. `None` on persistent failure.
pub fn indicator_stencil(cloud: &NodeCloud, i: usize, n_f: usize, n_max: usize) -> Result<Option<IndicatorStencil>> {
    let Some((ids, w)) = stencil::laplacian_weights(cloud, i, n_f, n_max)? else {
        log::warn!("fault indicator at node {i}: no full-rank neighbourhood up to {n_max} nodes");
        return Ok(None);
    };
    let xi = cloud.nodes.point(i);
    let denom = ids
        .iter()
        .zip(&w)
        .map(|(&j, wj)| {
            let d = cloud.nodes.domain().distance(xi, cloud.nodes.point(j));
            wj.abs() * d * d
        })
        .sum();
    Ok(Some(IndicatorStencil { ids, w, denom }))
}

/// Indicator stencils for every node, computed once per geometry.
#[derive(Clone, Debug)]
pub struct IndicatorCache {
    stencils: Vec<Option<IndicatorStencil>>,
}

impl IndicatorCache {
    pub fn new(cloud: &NodeCloud, n_f: usize, n_max: usize) -> Result<Self> {
        let stencils = par::map_indices(cloud.len(), |i| indicator_stencil(cloud, i, n_f, n_max))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        Ok(IndicatorCache { stencils })
    }

    pub fn len(&self) -> usize {
        self.stencils.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stencils.is_empty()
    }

    pub fn stencil(&self, i: usize) -> Option<&IndicatorStencil> {
        self.stencils[i].as_ref()
    }

    /// Indicator values at all nodes; zero where no stencil exists.
    pub fn indicators(&self, values: &[f64]) -> Vec<f64> {
        par::map_indices(self.stencils.len(), |i| self.stencils[i].as_ref().map_or(0.0, |s| s.apply(values)))
    }
}

/// Fault indicator at a single node.
pub fn fault_indicator(i: usize, values: &[f64], cloud: &NodeCloud, n_f: usize, n_max: usize) -> Result<f64> {
    Ok(indicator_stencil(cloud, i, n_f, n_max)?.map_or(0.0, |s| s.apply(values)))
}

/// Median; the mean of the two middle values for even lengths.
pub fn median(values: &[f64]) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Ok(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct FaultSet {
    /// Ascending node ids.
    pub ids: Vec<usize>,
    pub alpha1: f64,
    /// `NaN` when the first step selected nothing.
    pub alpha2: f64,
    pub indicator: Vec<f64>,
}

impl FaultSet {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }
}

/// Two-step median classification of precomputed indicator values:
/// `S1 = {I > C1 median(I)}`, then `{i in S1 : I_i > C2 median(I on S1)}`.
pub fn classify(indicator: Vec<f64>, c1: f64, c2: f64) -> Result<FaultSet> {
    let alpha1 = c1 * median(&indicator)?;
    let s1: Vec<usize> = (0..indicator.len()).filter(|&i| indicator[i] > alpha1).collect();
    if s1.is_empty() {
        return Ok(FaultSet { ids: s1, alpha1, alpha2: f64::NAN, indicator });
    }
    let on_s1: Vec<f64> = s1.iter().map(|&i| indicator[i]).collect();
    let alpha2 = c2 * median(&on_s1)?;
    let ids = s1.into_iter().filter(|&i| indicator[i] > alpha2).collect();
    Ok(FaultSet { ids, alpha1, alpha2, indicator })
}

/// Indicator evaluation followed by [`classify`].
pub fn detect_faults(values: &[f64], cache: &IndicatorCache, c1: f64, c2: f64) -> Result<FaultSet> {
    if values.len() != cache.len() {
        return Err(Error::LengthMismatch { expected: cache.len(), got: values.len() });
    }
    classify(cache.indicators(values), c1, c2)
}

/// `mu_i = max(0, 1 - rho_i / (C3 h)) mu` with `rho_i` the periodic
/// distance from node `i` to the nearest fault node; zero on the boundary.
pub fn viscosity_field(cloud: &NodeCloud, faults: &[usize], mu: f64, c3: f64, h: f64) -> Vec<f64> {
    let n = cloud.len();
    if faults.is_empty() || mu == 0.0 {
        return vec![0.0; n];
    }
    let nodes = &cloud.nodes;
    let coords: Vec<f64> = faults.iter().flat_map(|&j| nodes.point(j).iter().copied()).collect();
    let radius = c3 * h;
    let index = SpatialIndex::from_points(coords, nodes.domain(), radius);
    par::map_indices(n, |i| {
        if nodes.is_boundary(i) {
            return 0.0;
        }
        let rho = index.nearest_distance(nodes.point(i));
        (1.0 - rho / radius).max(0.0) * mu
    })
}
