//! Positive meshless finite difference schemes for multivariate scalar
//! conservation laws `u_t + div F(u) = 0` on irregular nodes.
//!
//! The update at every node is a convex combination of old values on its
//! influence set. The divergence term is discretised by a sign-constrained
//! least-norm differentiation formula, and an artificial viscosity term
//! (a sign-constrained discrete Laplacian) is switched on only near
//! discontinuities located by a scattered-data fault indicator.
//!
//! Module map:
//! - [`geometry`]: node generation, periodic k-nearest-neighbour index.
//! - [`qp`]: small dense weighted least-norm problems with sign bounds.
//! - [`stencil`]: divergence and viscosity weights per node.
//! - [`fault`]: fault indicator, two-step detection, adaptive viscosity field.
//! - [`scheme`]: flux models and the three time-stepping drivers.
//! - [`bench`]: benchmark problems, exact solution, reference grids, errors.
//! - [`cli`]: configuration files and the file formats used by `mclaw`.

pub mod bench;
pub mod cli;
pub mod error;
pub mod fault;
pub mod geometry;
mod par;
pub mod qp;
pub mod scheme;
pub mod stencil;

pub use error::{Error, Result};
