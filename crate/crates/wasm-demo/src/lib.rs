//! Browser bindings for the meshless solver: node clouds and their
//! stencils, fault detection, and a step-by-step simulation.

use meshless_claw::bench::{Problem, ProblemId};
use meshless_claw::fault::{detect_faults, viscosity_field, IndicatorCache};
use meshless_claw::geometry::{NodeCloud, NodeKind};
use meshless_claw::scheme::{Algorithm, BoundaryFn, SchemeConfig, Solver};
use meshless_claw::stencil::{build_stencil, StencilParams, ViscosityCache};
use wasm_bindgen::prelude::*;

const TABLE_WIDTH: usize = 48;

fn js(e: meshless_claw::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn exact_inflow(t: f64, x: &[f64]) -> f64 {
    meshless_claw::bench::exact_burgers_corner(t, x)
}

/// Formulas of one node for the direction of its current value.
#[wasm_bindgen]
pub struct Stencil {
    ids: Vec<u32>,
    w: Vec<f64>,
    v: Vec<f64>,
    mu: f64,
    dropped: bool,
}

#[wasm_bindgen]
impl Stencil {
    /// Influence set, center first.
    pub fn ids(&self) -> Vec<u32> {
        self.ids.clone()
    }

    /// Divergence weights.
    pub fn w(&self) -> Vec<f64> {
        self.w.clone()
    }

    /// Viscosity weights, zero-padded.
    pub fn v(&self) -> Vec<f64> {
        self.v.clone()
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Whether the sign constraints had to be given up.
    pub fn dropped(&self) -> bool {
        self.dropped
    }
}

/// A benchmark problem on a node cloud together with its current solution.
#[wasm_bindgen]
pub struct Demo {
    problem: Problem,
    solver: Solver<NodeCloud>,
    indicator: IndicatorCache,
    u: Vec<f64>,
    step: usize,
    last_faults: usize,
}

#[wasm_bindgen]
impl Demo {
    /// `problem` is `burgers_corner`, `burgers_smooth` or `rotating_wave`;
    /// `algorithm` is `none`, `constant` or `adaptive`; `node_kind` is
    /// `halton`, `grid` or `random`.
    #[wasm_bindgen(constructor)]
    pub fn new(problem: &str, algorithm: &str, node_kind: &str, h: f64, seed: u32) -> Result<Demo, JsError> {
        let id: ProblemId = problem.parse().map_err(js)?;
        let algorithm: Algorithm = algorithm.parse().map_err(js)?;
        let kind = match node_kind {
            "halton" => NodeKind::Halton,
            "grid" => NodeKind::Grid,
            "random" => NodeKind::Random,
            other => return Err(JsError::new(&format!("unknown node kind `{other}`"))),
        };
        let problem = Problem::new(id);
        let nodes = problem.nodes(kind, h, Some(u64::from(seed))).map_err(js)?;
        let width = TABLE_WIDTH.min(nodes.len().saturating_sub(1));
        let cloud = NodeCloud::new(nodes, width).map_err(js)?;
        // one step of the default size; the demo advances step by step
        let dt = 0.2 * h / problem.v0();
        let config = SchemeConfig::defaults(algorithm, h, problem.v0(), dt).map_err(js)?;
        let indicator = IndicatorCache::new(&cloud, config.n_f, config.n_max).map_err(js)?;
        let u = problem.initial_values(&cloud.nodes);
        let solver = Solver::new(cloud, problem.flux.clone(), config).map_err(js)?;
        Ok(Demo { problem, solver, indicator, u, step: 0, last_faults: 0 })
    }

    pub fn len(&self) -> usize {
        self.u.len()
    }

    pub fn is_empty(&self) -> bool {
        self.u.is_empty()
    }

    /// Interleaved node coordinates `x0, y0, x1, y1, ...`.
    pub fn coords(&self) -> Vec<f64> {
        self.solver.cloud.nodes.coords().to_vec()
    }

    /// 1 for boundary nodes.
    pub fn boundary(&self) -> Vec<u8> {
        self.solver.cloud.nodes.boundary_flags().iter().map(|&b| u8::from(b)).collect()
    }

    /// `[xmin, xmax, ymin, ymax]`.
    pub fn bounds(&self) -> Vec<f64> {
        let d = &self.problem.domain;
        vec![d.lower()[0], d.upper()[0], d.lower()[1], d.upper()[1]]
    }

    pub fn values(&self) -> Vec<f64> {
        self.u.clone()
    }

    pub fn time(&self) -> f64 {
        self.step as f64 * self.solver.config.dt
    }

    pub fn dt(&self) -> f64 {
        self.solver.config.dt
    }

    /// Fault count of the last step (adaptive algorithm only).
    pub fn last_fault_count(&self) -> usize {
        self.last_faults
    }

    pub fn reset(&mut self) {
        self.u = self.problem.initial_values(&self.solver.cloud.nodes);
        self.step = 0;
        self.last_faults = 0;
    }

    /// Advances the solution by `steps` time steps.
    pub fn advance(&mut self, steps: usize) -> Result<(), JsError> {
        let inflow: BoundaryFn<'_> = &exact_inflow;
        let boundary = self.problem.has_exact().then_some(inflow);
        for _ in 0..steps {
            let (next, diag) = self.solver.step_with(&self.u, self.step + 1, boundary, |_| {}).map_err(js)?;
            self.u = next;
            self.step += 1;
            self.last_faults = diag.fault_count;
        }
        Ok(())
    }

    /// Index of the node closest to `(x, y)`.
    pub fn nearest(&self, x: f64, y: f64) -> Result<usize, JsError> {
        let near = self.solver.cloud.index.knn_point(&[x, y], 1).map_err(js)?;
        Ok(near[0].0)
    }

    /// Divergence and viscosity formulas at `node` for the current solution,
    /// with the viscosity factor `mu` requested.
    pub fn stencil(&self, node: usize, mu: f64) -> Result<Stencil, JsError> {
        if node >= self.u.len() {
            return Err(JsError::new(&format!("node {node} out of range")));
        }
        let cloud = &self.solver.cloud;
        let c = &self.solver.config;
        let params = StencilParams { dt: c.dt, n_min: c.n_min, n_max: c.n_max };
        let eta = self.problem.flux.velocity(self.u[node]);
        let st = build_stencil(cloud, node, &eta, mu, &params, &ViscosityCache::new(cloud.len())).map_err(js)?;
        Ok(Stencil {
            ids: st.influence.iter().map(|&i| i as u32).collect(),
            w: st.w,
            v: st.v,
            mu: st.mu,
            dropped: st.constraints_dropped,
        })
    }

    /// Fault indicator of the current solution at every node.
    pub fn indicator(&self) -> Vec<f64> {
        self.indicator.indicators(&self.u)
    }

    /// Ids of the fault nodes of the current solution.
    pub fn faults(&self, c1: f64, c2: f64) -> Result<Vec<u32>, JsError> {
        let f = detect_faults(&self.u, &self.indicator, c1, c2).map_err(js)?;
        Ok(f.ids.iter().map(|&i| i as u32).collect())
    }

    /// Viscosity factor per node that the adaptive algorithm would request
    /// for the current solution, relative to its maximum.
    pub fn viscosity_ramp(&self, c1: f64, c2: f64, c3: f64) -> Result<Vec<f64>, JsError> {
        let f = detect_faults(&self.u, &self.indicator, c1, c2).map_err(js)?;
        let cloud = &self.solver.cloud;
        Ok(viscosity_field(cloud, &f.ids, 1.0, c3, cloud.nodes.h()))
    }
}
