//! k-nearest-neighbour search in the periodic metric.
//!
//! Nodes near a periodic seam are copied across it ("ghosts") and a plain
//! kd-tree is built over originals plus ghosts. Hits on ghosts are reported
//! under the id of the node they copy. Queries are exact as long as the
//! search radius stays below the ghost width.

use std::borrow::Cow;

use super::{Domain, NodeSet};
use crate::error::{Error, Result};

const LEAF_SIZE: usize = 8;
const NONE: u32 = u32::MAX;

#[derive(Clone, Debug)]
struct KdNode {
    start: u32,
    end: u32,
    axis: u32,
    split: f64,
    left: u32,
    right: u32,
}

#[derive(Clone, Debug)]
pub struct SpatialIndex {
    dim: usize,
    /// Extended point coordinates (originals first, then ghosts).
    points: Vec<f64>,
    /// Original id of every extended point; identity on the first `n_original`.
    owner: Vec<usize>,
    n_original: usize,
    perm: Vec<u32>,
    tree: Vec<KdNode>,
    ghost_width: f64,
}

/// Builds the periodic search structure over a node set.
pub fn build_index(nodes: &NodeSet, ghost_width: f64) -> SpatialIndex {
    SpatialIndex::from_points(nodes.coords().to_vec(), nodes.domain(), ghost_width)
}

/// `k` nearest nodes to node `center`, center first, then by ascending
/// distance with ties broken by id.
pub fn knn(index: &SpatialIndex, center: usize, k: usize) -> Result<Vec<usize>> {
    index.knn(center, k)
}

impl SpatialIndex {
    /// Index over arbitrary points inside `domain` (flat coordinates).
    /// `ghost_width` is clamped to half the side of each periodic axis.
    pub fn from_points(coords: Vec<f64>, domain: &Domain, ghost_width: f64) -> SpatialIndex {
        let dim = domain.dim();
        let n_original = coords.len() / dim;
        let mut points = coords;
        let mut owner: Vec<usize> = (0..n_original).collect();

        let periodic_axes: Vec<usize> = (0..dim).filter(|&k| domain.is_periodic(k)).collect();
        let width: Vec<f64> = (0..dim).map(|k| ghost_width.min(0.5 * domain.side(k))).collect();
        if !periodic_axes.is_empty() && ghost_width > 0.0 {
            // every shift pattern in {-1, 0, 1}^p except all-zero
            let patterns = 3usize.pow(periodic_axes.len() as u32);
            let mut ghost = vec![0.0; dim];
            for i in 0..n_original {
                let p = &points[i * dim..(i + 1) * dim];
                let p = p.to_vec();
                for pat in 1..patterns {
                    let mut code = pat;
                    let mut ok = true;
                    ghost.copy_from_slice(&p);
                    for &k in &periodic_axes {
                        let shift = code % 3;
                        code /= 3;
                        let len = domain.side(k);
                        match shift {
                            0 => {}
                            // copy of a node near the lower face, placed above the upper face
                            1 if p[k] - domain.lower()[k] < width[k] => ghost[k] += len,
                            2 if domain.upper()[k] - p[k] <= width[k] => ghost[k] -= len,
                            _ => {
                                ok = false;
                                break;
                            }
                        }
                    }
                    if ok {
                        points.extend_from_slice(&ghost);
                        owner.push(i);
                    }
                }
            }
        }

        let total = owner.len();
        let mut index = SpatialIndex {
            dim,
            points,
            owner,
            n_original,
            perm: (0..total as u32).collect(),
            tree: Vec::new(),
            ghost_width,
        };
        if total > 0 {
            index.build(0, total);
        }
        index
    }

    pub fn len(&self) -> usize {
        self.n_original
    }

    pub fn is_empty(&self) -> bool {
        self.n_original == 0
    }

    pub fn ghost_count(&self) -> usize {
        self.owner.len() - self.n_original
    }

    pub fn ghost_width(&self) -> f64 {
        self.ghost_width
    }

    /// Coordinates of extended point `e` (original or ghost).
    pub fn extended_point(&self, e: usize) -> &[f64] {
        &self.points[e * self.dim..(e + 1) * self.dim]
    }

    /// Original node copied by extended point `e`.
    pub fn ghost_owner(&self, e: usize) -> usize {
        self.owner[e]
    }

    fn build(&mut self, start: usize, end: usize) -> u32 {
        let id = self.tree.len() as u32;
        self.tree.push(KdNode { start: start as u32, end: end as u32, axis: 0, split: 0.0, left: NONE, right: NONE });
        if end - start <= LEAF_SIZE {
            return id;
        }
        let dim = self.dim;
        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for &e in &self.perm[start..end] {
            let p = &self.points[e as usize * dim..(e as usize + 1) * dim];
            for k in 0..dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let axis = (0..dim)
            .max_by(|&a, &b| (hi[a] - lo[a]).total_cmp(&(hi[b] - lo[b])))
            .unwrap();
        let mid = (start + end) / 2;
        let points = &self.points;
        self.perm[start..end].select_nth_unstable_by(mid - start, |&a, &b| {
            points[a as usize * dim + axis].total_cmp(&points[b as usize * dim + axis])
        });
        let split = self.points[self.perm[mid] as usize * dim + axis];
        let left = self.build(start, mid);
        let right = self.build(mid, end);
        let node = &mut self.tree[id as usize];
        node.axis = axis as u32;
        node.split = split;
        node.left = left;
        node.right = right;
        id
    }

    /// The `k` nearest original nodes to point `x` as `(id, distance)`,
    /// ascending by distance, ties by id.
    pub fn knn_point(&self, x: &[f64], k: usize) -> Result<Vec<(usize, f64)>> {
        if k > self.n_original {
            return Err(Error::KTooLarge { k, n: self.n_original });
        }
        let mut best = Candidates::new(k);
        if k > 0 {
            self.search(0, x, &mut best);
        }
        Ok(best.items.into_iter().map(|(d2, id)| (id, d2.sqrt())).collect())
    }

    /// `k` nearest nodes to node `center` (an original id), center first.
    pub fn knn(&self, center: usize, k: usize) -> Result<Vec<usize>> {
        let x = self.extended_point(center).to_vec();
        let mut ids: Vec<usize> = self.knn_point(&x, k)?.into_iter().map(|(id, _)| id).collect();
        if let Some(pos) = ids.iter().position(|&i| i == center) {
            ids[..=pos].rotate_right(1);
        }
        Ok(ids)
    }

    /// Distance from `x` to the nearest indexed point, `+inf` when empty.
    pub fn nearest_distance(&self, x: &[f64]) -> f64 {
        if self.n_original == 0 {
            return f64::INFINITY;
        }
        self.knn_point(x, 1).map(|v| v[0].1).unwrap_or(f64::INFINITY)
    }

    fn search(&self, node: u32, x: &[f64], best: &mut Candidates) {
        let n = &self.tree[node as usize];
        if n.left == NONE {
            for &e in &self.perm[n.start as usize..n.end as usize] {
                let p = self.extended_point(e as usize);
                let d2: f64 = p.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
                best.offer(d2, self.owner[e as usize]);
            }
            return;
        }
        let diff = x[n.axis as usize] - n.split;
        let (near, far) = if diff < 0.0 { (n.left, n.right) } else { (n.right, n.left) };
        self.search(near, x, best);
        if diff * diff <= best.worst() {
            self.search(far, x, best);
        }
    }
}

/// Sorted bounded list of `(squared distance, id)`, unique by id.
struct Candidates {
    cap: usize,
    items: Vec<(f64, usize)>,
}

impl Candidates {
    fn new(cap: usize) -> Self {
        Candidates { cap, items: Vec::with_capacity(cap + 1) }
    }

    fn worst(&self) -> f64 {
        if self.items.len() < self.cap {
            f64::INFINITY
        } else {
            self.items[self.cap - 1].0
        }
    }

    fn offer(&mut self, d2: f64, id: usize) {
        let key = (d2, id);
        let less = |a: &(f64, usize), b: &(f64, usize)| a.0 < b.0 || (a.0 == b.0 && a.1 < b.1);
        if self.items.len() == self.cap && !less(&key, &self.items[self.cap - 1]) {
            return;
        }
        if let Some(pos) = self.items.iter().position(|c| c.1 == id) {
            if !less(&key, &self.items[pos]) {
                return;
            }
            self.items.remove(pos);
        }
        let at = self.items.partition_point(|c| less(c, &key));
        self.items.insert(at, key);
        self.items.truncate(self.cap);
    }
}

/// Nearest-neighbour lists precomputed up to a fixed width; longer lists are
/// queried on demand.
#[derive(Clone, Debug)]
pub struct NeighborTable {
    width: usize,
    ids: Vec<usize>,
}

impl NeighborTable {
    pub fn new(index: &SpatialIndex, width: usize) -> Result<Self> {
        let width = width.min(index.len());
        let lists = crate::par::map_indices(index.len(), |i| index.knn(i, width));
        let mut ids = Vec::with_capacity(width * index.len());
        for list in lists {
            ids.extend(list?);
        }
        Ok(NeighborTable { width, ids })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// First `k` neighbours of node `i` (center first).
    pub fn neighbors<'a>(&'a self, index: &SpatialIndex, i: usize, k: usize) -> Result<Cow<'a, [usize]>> {
        if k <= self.width {
            Ok(Cow::Borrowed(&self.ids[i * self.width..i * self.width + k]))
        } else {
            Ok(Cow::Owned(index.knn(i, k)?))
        }
    }
}
