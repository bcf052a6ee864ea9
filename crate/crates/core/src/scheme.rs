//! Flux models and the explicit time-stepping drivers.
//!
//! Every step evaluates the characteristic velocity `eta_i = F'(U_i)` at
//! each node, builds the divergence and (optionally) viscosity formulas for
//! that direction and applies
//!
//! ```text
//!     U_i <- U_i - dt sum_j (w_ij - mu_i v_ij) U_j
//! ```
//!
//! in the equivalent difference form `U_i - dt sum_{j != i} c_ij (U_j - U_i)`,
//! which makes constants exact fixed points and keeps the new value inside
//! the range of the old ones to rounding.

use std::borrow::Borrow;

#[cfg(not(target_arch = "wasm32"))]
use std::time::Instant;

/// The system clock is unavailable in the browser; wall times read zero.
#[cfg(target_arch = "wasm32")]
struct Instant;

#[cfg(target_arch = "wasm32")]
impl Instant {
    fn now() -> Self {
        Instant
    }

    fn elapsed(&self) -> std::time::Duration {
        std::time::Duration::ZERO
    }
}

use crate::error::{Error, Result};
use crate::fault::{self, FaultSet, IndicatorCache};
use crate::geometry::{NodeCloud, NodeSet};
use crate::par;
use crate::stencil::{build_stencil, StencilPair, StencilParams, ViscosityCache};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FluxKind {
    /// `F(u) = u v`.
    LinearTransport,
    /// `F(u) = u^2 v / 2`.
    Burgers,
    /// `F(u) = (sin u, cos u)`, two-dimensional only.
    RotatingWave,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FluxModel {
    pub kind: FluxKind,
    /// Transport direction; ignored by the rotating wave.
    pub v: Vec<f64>,
    /// Multiplies the whole flux (used for rescaling experiments).
    pub scale: f64,
}

impl FluxModel {
    pub fn linear_transport(v: Vec<f64>) -> Self {
        FluxModel { kind: FluxKind::LinearTransport, v, scale: 1.0 }
    }

    pub fn burgers(v: Vec<f64>) -> Self {
        FluxModel { kind: FluxKind::Burgers, v, scale: 1.0 }
    }

    pub fn rotating_wave() -> Self {
        FluxModel { kind: FluxKind::RotatingWave, v: vec![0.0, 0.0], scale: 1.0 }
    }

    pub fn scaled(mut self, gamma: f64) -> Self {
        self.scale *= gamma;
        self
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    /// Whether `F'` is independent of `u`.
    pub fn is_linear(&self) -> bool {
        self.kind == FluxKind::LinearTransport
    }

    /// `F'(u)`.
    pub fn velocity(&self, u: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.velocity_into(u, &mut out);
        out
    }

    pub fn velocity_into(&self, u: f64, out: &mut [f64]) {
        match self.kind {
            FluxKind::LinearTransport => {
                for (o, v) in out.iter_mut().zip(&self.v) {
                    *o = self.scale * v;
                }
            }
            FluxKind::Burgers => {
                for (o, v) in out.iter_mut().zip(&self.v) {
                    *o = self.scale * u * v;
                }
            }
            FluxKind::RotatingWave => {
                out[0] = self.scale * u.cos();
                out[1] = -self.scale * u.sin();
            }
        }
    }
}

/// `max_i |F'(u0_i)|_inf`.
pub fn compute_v0(flux: &FluxModel, u0: &[f64]) -> f64 {
    u0.iter()
        .map(|&u| flux.velocity(u).iter().fold(0.0f64, |a, x| a.max(x.abs())))
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    NoViscosity,
    ConstantViscosity,
    AdaptiveViscosity,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::NoViscosity => "none",
            Algorithm::ConstantViscosity => "constant",
            Algorithm::AdaptiveViscosity => "adaptive",
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Algorithm::NoViscosity => 1,
            Algorithm::ConstantViscosity => 2,
            Algorithm::AdaptiveViscosity => 3,
        }
    }
}

impl std::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "none" | "no_viscosity" | "1" => Ok(Algorithm::NoViscosity),
            "constant" | "constant_viscosity" | "2" => Ok(Algorithm::ConstantViscosity),
            "adaptive" | "adaptive_viscosity" | "3" => Ok(Algorithm::AdaptiveViscosity),
            _ => Err(Error::BadValue { key: "algorithm".into(), msg: format!("unknown algorithm `{s}`") }),
        }
    }
}

/// Resolved parameters of a run.
#[derive(Clone, Debug, PartialEq)]
pub struct SchemeConfig {
    pub algorithm: Algorithm,
    pub dt: f64,
    pub steps: usize,
    /// Viscosity factor (maximum factor for the adaptive algorithm).
    pub mu: f64,
    pub n_min: usize,
    pub n_max: usize,
    pub n_f: usize,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

impl SchemeConfig {
    /// Default parameters for spacing `h` and characteristic speed `v0`:
    /// `dt = 0.2 h / v0`, `mu = 0.5 h v0`, `n_min = n_F = 10`, `n_max = 100`,
    /// `C1 = 1`, `C2 = 2`, `C3 = 5`.
    pub fn defaults(algorithm: Algorithm, h: f64, v0: f64, t_final: f64) -> Result<Self> {
        if !(v0 > 0.0) || !v0.is_finite() {
            return Err(Error::InvalidConfig(format!("characteristic speed v0 = {v0} must be positive")));
        }
        let dt = 0.2 * h / v0;
        Ok(SchemeConfig {
            algorithm,
            dt,
            steps: steps_for(t_final, dt)?,
            mu: 0.5 * h * v0,
            n_min: 10,
            n_max: 100,
            n_f: 10,
            c1: 1.0,
            c2: 2.0,
            c3: 5.0,
        })
    }

    pub fn t_final(&self) -> f64 {
        self.steps as f64 * self.dt
    }
}

/// `T / dt` when it is an integer (to a relative `1e-9`).
pub fn steps_for(t_final: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0) || !(t_final >= 0.0) {
        return Err(Error::InvalidConfig(format!("need dt > 0 and T >= 0 (dt = {dt}, T = {t_final})")));
    }
    let k = (t_final / dt).round();
    if (k * dt - t_final).abs() > 1e-9 * t_final.max(dt) {
        return Err(Error::InvalidConfig(format!("T = {t_final} is not an integer multiple of dt = {dt}")));
    }
    Ok(k as usize)
}

/// Boundary values imposed at inflow nodes of a non-periodic domain.
pub type BoundaryFn<'a> = &'a (dyn Fn(f64, &[f64]) -> f64 + Sync);

/// Boundary nodes where `eta_i . n_f < 0` on every face containing the node.
pub fn inflow_nodes(flux: &FluxModel, values: &[f64], nodes: &NodeSet) -> Vec<usize> {
    let mut eta = vec![0.0; nodes.dim()];
    let mut out = Vec::new();
    for i in nodes.boundary_ids() {
        let faces = nodes.faces_of(i);
        if faces.is_empty() {
            continue;
        }
        flux.velocity_into(values[i], &mut eta);
        if faces.iter().all(|f| eta[f.axis] * f.outward_sign() < 0.0) {
            out.push(i);
        }
    }
    out
}

/// `U_new_i = U_i - dt sum_{j != i} c_j (U_j - U_i)` with `c = w - mu v`.
pub fn node_update(st: &StencilPair, values: &[f64], dt: f64) -> f64 {
    let ui = values[st.node];
    let mut acc = 0.0;
    for ((&j, w), v) in st.influence.iter().zip(&st.w).zip(&st.v).skip(1) {
        acc += (w - st.mu * v) * (values[j] - ui);
    }
    ui - dt * acc
}

/// One explicit Euler step; `None` entries keep their old value.
pub fn euler_step(values: &[f64], stencils: &[Option<StencilPair>], dt: f64, step: usize) -> Result<Vec<f64>> {
    let mut out = values.to_vec();
    for (i, st) in stencils.iter().enumerate() {
        if let Some(st) = st {
            let u = node_update(st, values, dt);
            if !u.is_finite() {
                return Err(Error::NonFiniteValue { node: i, step });
            }
            out[i] = u;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StepDiagnostics {
    /// 1-based index of the completed step.
    pub step: usize,
    pub t: f64,
    pub min: f64,
    pub max: f64,
    pub fault_count: usize,
    pub dropped_count: usize,
    pub max_influence: usize,
    pub center_bound_active: usize,
    pub wall_ms: f64,
}

/// What an observer sees after each step.
pub struct StepView<'a> {
    pub diagnostics: &'a StepDiagnostics,
    pub old: &'a [f64],
    pub new: &'a [f64],
    /// `None` at nodes whose value was imposed.
    pub stencils: &'a [Option<StencilPair>],
    pub overridden: &'a [usize],
    pub mu: &'a [f64],
    pub faults: Option<&'a FaultSet>,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    pub values: Vec<f64>,
    pub t: f64,
    pub diagnostics: Vec<StepDiagnostics>,
    /// Distinct nodes that needed unconstrained divergence weights at least once.
    pub dropped_nodes: Vec<usize>,
    /// Viscosity formulas computed (interior nodes touched by viscosity).
    pub viscosity_built: usize,
    /// Of those, how many had no feasible formula within `n_max`.
    pub viscosity_disabled: usize,
}

/// Holds the geometry-only caches of a run. `C` is the node cloud, owned or
/// borrowed.
pub struct Solver<C> {
    pub cloud: C,
    pub flux: FluxModel,
    pub config: SchemeConfig,
    viscosity: ViscosityCache,
    indicator: Option<IndicatorCache>,
    frozen: Option<Vec<Option<StencilPair>>>,
}

impl<C: Borrow<NodeCloud>> Solver<C> {
    pub fn new(cloud: C, flux: FluxModel, config: SchemeConfig) -> Result<Self> {
        let c = cloud.borrow();
        if flux.dim() != c.nodes.dim() {
            return Err(Error::DimensionMismatch(format!(
                "flux is {}-dimensional, nodes are {}-dimensional",
                flux.dim(),
                c.nodes.dim()
            )));
        }
        let indicator = match config.algorithm {
            Algorithm::AdaptiveViscosity => Some(IndicatorCache::new(c, config.n_f, config.n_max)?),
            _ => None,
        };
        let viscosity = ViscosityCache::new(c.len());
        Ok(Solver { cloud, flux, viscosity, indicator, frozen: None, config })
    }

    fn params(&self) -> StencilParams {
        StencilParams { dt: self.config.dt, n_min: self.config.n_min, n_max: self.config.n_max }
    }

    /// Requested viscosity factor per node, and the fault set when adaptive.
    pub fn viscosity_request(&self, values: &[f64]) -> Result<(Vec<f64>, Option<FaultSet>)> {
        let cloud = self.cloud.borrow();
        let n = cloud.len();
        let nodes = &cloud.nodes;
        let c = &self.config;
        Ok(match c.algorithm {
            Algorithm::NoViscosity => (vec![0.0; n], None),
            Algorithm::ConstantViscosity => {
                ((0..n).map(|i| if nodes.is_boundary(i) { 0.0 } else { c.mu }).collect(), None)
            }
            Algorithm::AdaptiveViscosity => {
                let cache = self.indicator.as_ref().expect("indicator cache exists for the adaptive algorithm");
                let faults = fault::detect_faults(values, cache, c.c1, c.c2)?;
                let mu = fault::viscosity_field(cloud, &faults.ids, c.mu, c.c3, nodes.h());
                (mu, Some(faults))
            }
        })
    }

    /// Stencils for the current field; `skip` nodes get `None`.
    pub fn stencils(&mut self, values: &[f64], mu: &[f64], skip: &[bool]) -> Result<Vec<Option<StencilPair>>> {
        let freeze = self.flux.is_linear() && self.config.algorithm != Algorithm::AdaptiveViscosity;
        if freeze {
            if let Some(f) = &self.frozen {
                return Ok(f.iter().zip(skip).map(|(s, &k)| if k { None } else { s.clone() }).collect());
            }
        }
        let params = self.params();
        let (cloud, flux, cache) = (self.cloud.borrow(), &self.flux, &self.viscosity);
        let built = par::map_indices(cloud.len(), |i| -> Result<Option<StencilPair>> {
            if skip[i] && !freeze {
                return Ok(None);
            }
            let eta = flux.velocity(values[i]);
            build_stencil(cloud, i, &eta, mu[i], &params, cache).map(Some)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
        if freeze {
            let out = built.iter().zip(skip).map(|(s, &k)| if k { None } else { s.clone() }).collect();
            self.frozen = Some(built);
            return Ok(out);
        }
        Ok(built)
    }

    /// Advances `u0` by `config.steps` steps.
    pub fn run(&mut self, u0: &[f64], boundary: Option<BoundaryFn<'_>>) -> Result<RunResult> {
        self.run_with(u0, boundary, |_| {})
    }

    /// As [`Solver::run`], calling `observe` after every step.
    pub fn run_with<F>(&mut self, u0: &[f64], boundary: Option<BoundaryFn<'_>>, mut observe: F) -> Result<RunResult>
    where
        F: FnMut(&StepView<'_>),
    {
        let n = self.cloud.borrow().len();
        if u0.len() != n {
            return Err(Error::LengthMismatch { expected: n, got: u0.len() });
        }
        if let Some(i) = u0.iter().position(|u| !u.is_finite()) {
            return Err(Error::NonFiniteValue { node: i, step: 0 });
        }
        let mut u = u0.to_vec();
        let mut diagnostics = Vec::with_capacity(self.config.steps);
        let mut dropped = vec![false; n];

        for step in 1..=self.config.steps {
            let (next, diag) = self.step_with(&u, step, boundary, |view| {
                for st in view.stencils.iter().flatten() {
                    if st.constraints_dropped && !dropped[st.node] {
                        log::info!("step {step}: node {} uses unconstrained divergence weights", st.node);
                        dropped[st.node] = true;
                    }
                }
                observe(view);
            })?;
            diagnostics.push(diag);
            u = next;
        }

        let viscosity_built = self.viscosity.computed();
        let viscosity_disabled = self.viscosity.disabled();
        Ok(RunResult {
            values: u,
            t: self.config.t_final(),
            diagnostics,
            dropped_nodes: (0..n).filter(|&i| dropped[i]).collect(),
            viscosity_built,
            viscosity_disabled,
        })
    }

    /// Step number `step` (counted from 1) applied to `u`, which is taken to
    /// hold the solution at `(step - 1) dt`.
    pub fn step_with<F>(
        &mut self,
        u: &[f64],
        step: usize,
        boundary: Option<BoundaryFn<'_>>,
        observe: F,
    ) -> Result<(Vec<f64>, StepDiagnostics)>
    where
        F: FnOnce(&StepView<'_>),
    {
        let clock = Instant::now();
        let dt = self.config.dt;
        let n = self.cloud.borrow().len();
        let (mu, faults) = self.viscosity_request(u)?;
        let overridden = match boundary {
            Some(_) => inflow_nodes(&self.flux, u, &self.cloud.borrow().nodes),
            None => Vec::new(),
        };
        let mut skip = vec![false; n];
        for &i in &overridden {
            skip[i] = true;
        }
        let stencils = self.stencils(u, &mu, &skip)?;
        let mut next = euler_step(u, &stencils, dt, step)?;
        if let Some(g) = boundary {
            let t_next = step as f64 * dt;
            for &i in &overridden {
                next[i] = g(t_next, self.cloud.borrow().nodes.point(i));
            }
        }

        let mut diag = StepDiagnostics {
            step,
            t: step as f64 * dt,
            min: next.iter().cloned().fold(f64::INFINITY, f64::min),
            max: next.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
            fault_count: faults.as_ref().map_or(0, |f| f.len()),
            dropped_count: 0,
            max_influence: 0,
            center_bound_active: 0,
            wall_ms: 0.0,
        };
        for st in stencils.iter().flatten() {
            diag.dropped_count += usize::from(st.constraints_dropped);
            diag.center_bound_active += usize::from(st.center_bound_active);
            diag.max_influence = diag.max_influence.max(st.influence.len());
        }
        diag.wall_ms = clock.elapsed().as_secs_f64() * 1e3;
        observe(&StepView {
            diagnostics: &diag,
            old: u,
            new: &next,
            stencils: &stencils,
            overridden: &overridden,
            mu: &mu,
            faults: faults.as_ref(),
        });
        log::debug!("step {step}: min {:.6e} max {:.6e} faults {}", diag.min, diag.max, diag.fault_count);
        Ok((next, diag))
    }
}

/// Convenience wrapper around [`Solver`].
pub fn run(
    cloud: &NodeCloud,
    flux: FluxModel,
    config: SchemeConfig,
    u0: &[f64],
    boundary: Option<BoundaryFn<'_>>,
) -> Result<RunResult> {
    Solver::new(cloud, flux, config)?.run(u0, boundary)
}
