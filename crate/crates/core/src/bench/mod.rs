//! Benchmark problems, the exact solution of the Burgers Riemann problem,
//! reference grids and error measures.

mod exact;
mod grid;
pub mod io;
mod sample;

use std::f64::consts::PI;

pub use exact::exact_burgers_corner;
pub use grid::GridField;
pub use io::{load_reference_grid, load_solution, Solution};
pub use sample::{errors, eval_at, segment, ErrorReport};

use crate::error::{Error, Result};
use crate::geometry::{generate_nodes, Domain, Face, NodeKind, NodeSet};
use crate::scheme::FluxModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ProblemId {
    /// Burgers with a four-state Riemann initial condition on `[0,1]^2`,
    /// exact inflow data.
    BurgersCorner,
    /// Periodic Burgers with `u0 = sin(8 pi (x1 + x2 / 2))` on `[0,0.5]^2`.
    BurgersSmooth,
    /// Periodic non-convex flux `(sin u, cos u)` on `[-2,2] x [-2.5,1.5]`.
    RotatingWave,
}

impl ProblemId {
    pub const ALL: [ProblemId; 3] = [ProblemId::BurgersCorner, ProblemId::BurgersSmooth, ProblemId::RotatingWave];

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::BurgersCorner => "burgers_corner",
            ProblemId::BurgersSmooth => "burgers_smooth",
            ProblemId::RotatingWave => "rotating_wave",
        }
    }
}

impl std::str::FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProblemId::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| Error::BadValue { key: "problem".into(), msg: format!("unknown problem `{s}`") })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    /// Inflow nodes receive the exact solution after every step.
    InflowExact,
    Periodic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Problem {
    pub id: ProblemId,
    pub domain: Domain,
    pub flux: FluxModel,
    pub boundary: BoundaryKind,
    /// Faces onto which near-boundary scattered nodes are projected.
    pub decorated: Vec<Face>,
    pub default_h: f64,
    pub default_t: f64,
}

impl Problem {
    pub fn new(id: ProblemId) -> Self {
        let box2 = |lo: [f64; 2], hi: [f64; 2], periodic: bool| {
            Domain::new(lo.to_vec(), hi.to_vec(), vec![periodic; 2]).expect("benchmark domains are valid")
        };
        let lower_left = vec![Face::lower(0), Face::lower(1)];
        match id {
            ProblemId::BurgersCorner => Problem {
                id,
                domain: box2([0.0, 0.0], [1.0, 1.0], false),
                flux: FluxModel::burgers(vec![1.0, 1.0]),
                boundary: BoundaryKind::InflowExact,
                decorated: vec![Face::lower(0), Face::upper(0), Face::lower(1), Face::upper(1)],
                default_h: 0.01,
                default_t: 0.5,
            },
            ProblemId::BurgersSmooth => Problem {
                id,
                domain: box2([0.0, 0.0], [0.5, 0.5], true),
                flux: FluxModel::burgers(vec![1.0, 1.0]),
                boundary: BoundaryKind::Periodic,
                decorated: lower_left,
                default_h: 0.0025,
                default_t: 0.1,
            },
            ProblemId::RotatingWave => Problem {
                id,
                domain: box2([-2.0, -2.5], [2.0, 1.5], true),
                flux: FluxModel::rotating_wave(),
                boundary: BoundaryKind::Periodic,
                decorated: lower_left,
                default_h: 0.01,
                default_t: 1.0,
            },
        }
    }

    pub fn u0(&self, x: &[f64]) -> f64 {
        match self.id {
            ProblemId::BurgersCorner => exact_burgers_corner(0.0, x),
            ProblemId::BurgersSmooth => (8.0 * PI * (x[0] + 0.5 * x[1])).sin(),
            ProblemId::RotatingWave => {
                if x[0] * x[0] + x[1] * x[1] < 1.0 {
                    3.5 * PI
                } else {
                    0.25 * PI
                }
            }
        }
    }

    pub fn initial_values(&self, nodes: &NodeSet) -> Vec<f64> {
        nodes.points().map(|p| self.u0(p)).collect()
    }

    /// The exact solution, where one is known.
    pub fn exact(&self, t: f64, x: &[f64]) -> Option<f64> {
        match self.id {
            ProblemId::BurgersCorner => Some(exact_burgers_corner(t, x)),
            _ => None,
        }
    }

    /// `max |F'(u0)|_inf` over the closed domain. Evaluating it on the nodes
    /// instead would miss the peak of the smooth initial condition by a few
    /// ulps and break the integer `T / dt` requirement.
    pub fn v0(&self) -> f64 {
        match self.id {
            // max |u0| = 1, v = (1, 1)
            ProblemId::BurgersCorner | ProblemId::BurgersSmooth => 1.0,
            // |F'(3.5 pi)|_inf = |(0, 1)|_inf
            ProblemId::RotatingWave => 1.0,
        }
    }

    pub fn has_exact(&self) -> bool {
        self.id == ProblemId::BurgersCorner
    }

    pub fn nodes(&self, kind: NodeKind, h: f64, seed: Option<u64>) -> Result<NodeSet> {
        generate_nodes(kind, h, &self.domain, seed, &self.decorated)
    }
}
