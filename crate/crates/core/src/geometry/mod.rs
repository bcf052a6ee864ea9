//! Node sets on hyperrectangles, with optional per-axis periodicity.

mod halton;
mod index;

pub use halton::{halton_points, radical_inverse, MAX_DIM};
pub use index::{build_index, knn, NeighborTable, SpatialIndex};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Axis-aligned box `[lower, upper]`. Periodic axes are half-open: the upper
/// face is identified with the lower one.
#[derive(Clone, Debug, PartialEq)]
pub struct Domain {
    lower: Vec<f64>,
    upper: Vec<f64>,
    periodic: Vec<bool>,
}

impl Domain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>, periodic: Vec<bool>) -> Result<Self> {
        let d = lower.len();
        if d == 0 || d > MAX_DIM || upper.len() != d || periodic.len() != d {
            return Err(Error::InvalidDomain(format!(
                "need 1..={MAX_DIM} axes with matching lower/upper/periodic lengths"
            )));
        }
        for k in 0..d {
            if !(lower[k] < upper[k]) || !lower[k].is_finite() || !upper[k].is_finite() {
                return Err(Error::InvalidDomain(format!(
                    "axis {k}: lower {} must be below upper {}",
                    lower[k], upper[k]
                )));
            }
        }
        Ok(Domain { lower, upper, periodic })
    }

    /// Non-periodic box.
    pub fn boxed(lower: Vec<f64>, upper: Vec<f64>) -> Result<Self> {
        let d = lower.len();
        Self::new(lower, upper, vec![false; d])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    pub fn is_periodic(&self, axis: usize) -> bool {
        self.periodic[axis]
    }

    pub fn side(&self, axis: usize) -> f64 {
        self.upper[axis] - self.lower[axis]
    }

    pub fn min_side(&self) -> f64 {
        (0..self.dim()).map(|k| self.side(k)).fold(f64::INFINITY, f64::min)
    }

    pub fn volume(&self) -> f64 {
        (0..self.dim()).map(|k| self.side(k)).product()
    }

    pub fn faces(&self) -> Vec<Face> {
        (0..self.dim())
            .flat_map(|axis| [Face { axis, upper: false }, Face { axis, upper: true }])
            .collect()
    }

    /// Coordinate of the hyperplane containing `face`.
    pub fn face_coord(&self, face: Face) -> f64 {
        if face.upper {
            self.upper[face.axis]
        } else {
            self.lower[face.axis]
        }
    }

    /// Displacement `to - from`, wrapped to the nearest periodic image.
    pub fn displacement_into(&self, from: &[f64], to: &[f64], out: &mut [f64]) {
        for k in 0..self.dim() {
            let mut dx = to[k] - from[k];
            if self.periodic[k] {
                let len = self.side(k);
                dx -= len * (dx / len).round();
            }
            out[k] = dx;
        }
    }

    /// Euclidean distance in the periodic metric.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        let mut sq = 0.0;
        for k in 0..self.dim() {
            let mut dx = b[k] - a[k];
            if self.periodic[k] {
                let len = self.side(k);
                dx -= len * (dx / len).round();
            }
            sq += dx * dx;
        }
        sq.sqrt()
    }
}

/// One face of the domain box: the hyperplane `x[axis] = lower` or `= upper`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Face {
    pub axis: usize,
    pub upper: bool,
}

impl Face {
    pub const fn lower(axis: usize) -> Self {
        Face { axis, upper: false }
    }

    pub const fn upper(axis: usize) -> Self {
        Face { axis, upper: true }
    }

    /// Outward unit normal component along `self.axis`.
    pub fn outward_sign(self) -> f64 {
        if self.upper {
            1.0
        } else {
            -1.0
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NodeKind {
    Grid,
    Halton,
    Random,
}

impl NodeKind {
    pub fn name(self) -> &'static str {
        match self {
            NodeKind::Grid => "grid",
            NodeKind::Halton => "halton",
            NodeKind::Random => "random",
        }
    }
}

impl std::str::FromStr for NodeKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "grid" => Ok(NodeKind::Grid),
            "halton" => Ok(NodeKind::Halton),
            "random" => Ok(NodeKind::Random),
            _ => Err(format!("unknown node kind `{s}` (expected grid, halton or random)")),
        }
    }
}

/// Discretisation nodes. Coordinates are stored flat, `dim` per node.
#[derive(Clone, Debug)]
pub struct NodeSet {
    coords: Vec<f64>,
    boundary: Vec<bool>,
    h: f64,
    domain: Domain,
    kind: NodeKind,
}

impl NodeSet {
    /// Wraps explicit coordinates. Boundary flags are derived from the
    /// domain: a node is a boundary node iff it lies exactly on a
    /// non-periodic face.
    pub fn from_coords(coords: Vec<f64>, h: f64, domain: Domain, kind: NodeKind) -> Result<Self> {
        let d = domain.dim();
        if !coords.len().is_multiple_of(d) {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates are not a multiple of dimension {d}",
                coords.len()
            )));
        }
        let boundary = coords
            .chunks_exact(d)
            .map(|p| {
                (0..d).any(|k| {
                    !domain.periodic[k] && (p[k] == domain.lower[k] || p[k] == domain.upper[k])
                })
            })
            .collect();
        Ok(NodeSet { coords, boundary, h, domain, kind })
    }

    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    pub fn point(&self, i: usize) -> &[f64] {
        let d = self.dim();
        &self.coords[i * d..(i + 1) * d]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn points(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim())
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn domain(&self) -> &Domain {
        &self.domain
    }

    pub fn kind(&self) -> NodeKind {
        self.kind
    }

    pub fn is_boundary(&self, i: usize) -> bool {
        self.boundary[i]
    }

    pub fn boundary_flags(&self) -> &[bool] {
        &self.boundary
    }

    pub fn boundary_ids(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.boundary[i]).collect()
    }

    /// Non-periodic faces on which node `i` lies.
    pub fn faces_of(&self, i: usize) -> Vec<Face> {
        let p = self.point(i);
        let dom = &self.domain;
        let mut faces = Vec::new();
        for k in 0..self.dim() {
            if dom.periodic[k] {
                continue;
            }
            if p[k] == dom.lower[k] {
                faces.push(Face::lower(k));
            }
            if p[k] == dom.upper[k] {
                faces.push(Face::upper(k));
            }
        }
        faces
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.domain.distance(self.point(i), self.point(j))
    }
}

/// Generates a node set of spacing `h` on `domain`.
///
/// `Grid` gives a lattice including the non-periodic faces. `Halton` and
/// `Random` draw `round(volume / h^d)` candidates, drop every candidate within
/// `0.25 h` of any face of the box, and then add, for each face in
/// `decorated`, the projection onto that face of every surviving candidate
/// closer than `h` to it.
pub fn generate_nodes(
    kind: NodeKind,
    h: f64,
    domain: &Domain,
    seed: Option<u64>,
    decorated: &[Face],
) -> Result<NodeSet> {
    let min_side = domain.min_side();
    if !(h > 0.0) || h >= min_side {
        return Err(Error::InvalidSpacing { h, min_side });
    }
    let d = domain.dim();
    for f in decorated {
        if f.axis >= d {
            return Err(Error::InvalidDomain(format!("face axis {} out of range", f.axis)));
        }
        if f.upper && domain.is_periodic(f.axis) {
            return Err(Error::InvalidDomain(format!(
                "upper face of periodic axis {} cannot carry nodes",
                f.axis
            )));
        }
    }

    let coords = match kind {
        NodeKind::Grid => lattice(h, domain),
        NodeKind::Halton | NodeKind::Random => {
            let count = (domain.volume() / h.powi(d as i32)).round() as usize;
            let unit: Vec<Vec<f64>> = match kind {
                NodeKind::Halton => halton_points(count, d),
                _ => {
                    let seed = seed.ok_or_else(|| {
                        Error::InvalidConfig("random nodes need a seed".to_string())
                    })?;
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    (0..count).map(|_| (0..d).map(|_| rng.gen::<f64>()).collect()).collect()
                }
            };
            scatter(&unit, h, domain, decorated)
        }
    };
    NodeSet::from_coords(coords, h, domain.clone(), kind)
}

fn lattice(h: f64, domain: &Domain) -> Vec<f64> {
    let d = domain.dim();
    // per axis: (number of points, step); the step divides the side exactly
    let axes: Vec<(usize, f64)> = (0..d)
        .map(|k| {
            let cells = (domain.side(k) / h).round().max(1.0) as usize;
            let step = domain.side(k) / cells as f64;
            let count = if domain.is_periodic(k) { cells } else { cells + 1 };
            (count, step)
        })
        .collect();
    let total: usize = axes.iter().map(|a| a.0).product();
    let mut coords = Vec::with_capacity(total * d);
    let mut idx = vec![0usize; d];
    for _ in 0..total {
        for k in 0..d {
            let (count, step) = axes[k];
            let x = if !domain.is_periodic(k) && idx[k] == count - 1 {
                domain.upper[k]
            } else {
                domain.lower[k] + idx[k] as f64 * step
            };
            coords.push(x);
        }
        // x fastest
        for k in 0..d {
            idx[k] += 1;
            if idx[k] < axes[k].0 {
                break;
            }
            idx[k] = 0;
        }
    }
    coords
}

fn scatter(unit: &[Vec<f64>], h: f64, domain: &Domain, decorated: &[Face]) -> Vec<f64> {
    let d = domain.dim();
    let margin = 0.25 * h;
    let mut kept: Vec<f64> = Vec::with_capacity(unit.len() * d);
    for u in unit {
        let p: Vec<f64> = (0..d).map(|k| domain.lower[k] + u[k] * domain.side(k)).collect();
        let near_face = (0..d)
            .any(|k| p[k] - domain.lower[k] <= margin || domain.upper[k] - p[k] <= margin);
        if !near_face {
            kept.extend_from_slice(&p);
        }
    }

    let mut projected: Vec<Vec<f64>> = Vec::new();
    for &face in decorated {
        let c = domain.face_coord(face);
        for p in kept.chunks_exact(d) {
            if (p[face.axis] - c).abs() < h {
                let mut q = p.to_vec();
                q[face.axis] = c;
                projected.push(q);
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    for q in projected {
        let key: Vec<u64> = q.iter().map(|x| x.to_bits()).collect();
        if seen.insert(key) {
            kept.extend_from_slice(&q);
        }
    }
    kept
}

/// Ghost width used for periodic extension, in units of `h`.
pub const GHOST_WIDTH_FACTOR: f64 = 10.0;

/// A node set together with its search index and cached neighbour lists.
#[derive(Clone, Debug)]
pub struct NodeCloud {
    pub nodes: NodeSet,
    pub index: SpatialIndex,
    pub table: NeighborTable,
}

impl NodeCloud {
    /// Builds the index with ghost width `10 h` and caches `table_width`
    /// neighbours per node.
    pub fn new(nodes: NodeSet, table_width: usize) -> Result<Self> {
        let index = build_index(&nodes, GHOST_WIDTH_FACTOR * nodes.h());
        let table = NeighborTable::new(&index, table_width)?;
        Ok(NodeCloud { nodes, index, table })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// First `k` nearest neighbours of node `i`, `i` itself first.
    pub fn neighbors(&self, i: usize, k: usize) -> Result<std::borrow::Cow<'_, [usize]>> {
        self.table.neighbors(&self.index, i, k)
    }
}

/// Minimum periodic distance from `x` to the listed nodes; `+inf` when
/// `targets` is empty.
pub fn distance_to_set(x: &[f64], targets: &[usize], nodes: &NodeSet) -> f64 {
    targets
        .iter()
        .map(|&j| nodes.domain().distance(x, nodes.point(j)))
        .fold(f64::INFINITY, f64::min)
}
