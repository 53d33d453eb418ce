//! Weighted complete graph over primitives, pruning rules, and Kruskal MST.

use thiserror::Error;

use crate::geometry::endpoint_distance;
use crate::params::ParserParams;
use crate::primitive::{primitive_distance, PrimId, PrimKind, Primitive};

#[derive(Debug, Error, PartialEq)]
pub enum MstError {
    #[error("cannot build a weight matrix over zero primitives")]
    Empty,
}

/// Symmetric matrix of pairwise distances; infinity encodes a pruned pair
/// and the diagonal.
#[derive(Debug, Clone)]
pub struct WeightedAdjacency {
    n: usize,
    weights: Vec<f64>,
}

impl WeightedAdjacency {
    pub fn new(n: usize) -> Self {
        WeightedAdjacency {
            n,
            weights: vec![f64::INFINITY; n * n],
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.weights[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, w: f64) {
        self.weights[i * self.n + j] = w;
        self.weights[j * self.n + i] = w;
    }
}

/// How two primitives measure their separation: line pairs use endpoints to
/// capture connection distances (and to keep overlapping lines apart),
/// everything else uses closest points.
pub fn pair_distance(a: &Primitive, b: &Primitive) -> f64 {
    match (a.as_segment(), b.as_segment()) {
        (Some(sa), Some(sb)) if a.kind() == PrimKind::Line && b.kind() == PrimKind::Line => {
            endpoint_distance(sa, sb)
        }
        _ => primitive_distance(a, b),
    }
}

/// Builds the pruned weight matrix.
///
/// Character pairs whose centroid-to-centroid direction has |cos| strictly
/// inside (`ABS_COS_CHAR_PRUNE`, 1 − `ABS_COS_CHAR_PRUNE`) are pruned, which
/// blocks diagonal superscript/subscript connections. Character-line pairs
/// farther than `CHAR_LINE_Z_TOLERANCE` standard deviations above the mean
/// char-line distance are pruned; with fewer than two char-line pairs the
/// z prune is skipped.
pub fn build_weights(
    prims: &[Primitive],
    params: &ParserParams,
) -> Result<WeightedAdjacency, MstError> {
    if prims.is_empty() {
        return Err(MstError::Empty);
    }
    let n = prims.len();
    let mut w = WeightedAdjacency::new(n);
    for i in 0..n {
        for j in (i + 1)..n {
            w.set(i, j, pair_distance(&prims[i], &prims[j]));
        }
    }

    // char-char prune by |cos| of the centroid direction
    let lo = params.abs_cos_char_prune;
    let hi = 1.0 - params.abs_cos_char_prune;
    for i in 0..n {
        if prims[i].kind() != PrimKind::Char {
            continue;
        }
        for j in (i + 1)..n {
            if prims[j].kind() != PrimKind::Char {
                continue;
            }
            let ci = prims[i].centroid();
            let cj = prims[j].centroid();
            let angle = (cj.y - ci.y).atan2(cj.x - ci.x);
            let abs_cos = angle.cos().abs();
            if abs_cos > lo && abs_cos < hi {
                w.set(i, j, f64::INFINITY);
            }
        }
    }

    // char-line prune by z-score over all char-line distances in the diagram
    if params.char_line_z_tolerance.is_finite() {
        let mut pairs: Vec<(usize, usize, f64)> = Vec::new();
        for i in 0..n {
            for j in (i + 1)..n {
                let kinds = (prims[i].kind(), prims[j].kind());
                if matches!(
                    kinds,
                    (PrimKind::Char, PrimKind::Line) | (PrimKind::Line, PrimKind::Char)
                ) {
                    let d = w.get(i, j);
                    if d.is_finite() {
                        pairs.push((i, j, d));
                    }
                }
            }
        }
        if pairs.len() >= 2 {
            let mean = pairs.iter().map(|p| p.2).sum::<f64>() / pairs.len() as f64;
            let var =
                pairs.iter().map(|p| (p.2 - mean).powi(2)).sum::<f64>() / pairs.len() as f64;
            let std = var.sqrt();
            if std > 0.0 {
                let cutoff = mean + params.char_line_z_tolerance * std;
                for (i, j, d) in pairs {
                    if d > cutoff {
                        w.set(i, j, f64::INFINITY);
                    }
                }
            }
        }
    }

    Ok(w)
}

/// An undirected weighted edge between primitive ids.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MstEdge {
    pub a: PrimId,
    pub b: PrimId,
    pub weight: f64,
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub fn union(&mut self, x: usize, y: usize) -> bool {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx == ry {
            return false;
        }
        match self.rank[rx].cmp(&self.rank[ry]) {
            std::cmp::Ordering::Less => self.parent[rx] = ry,
            std::cmp::Ordering::Greater => self.parent[ry] = rx,
            std::cmp::Ordering::Equal => {
                self.parent[ry] = rx;
                self.rank[rx] += 1;
            }
        }
        true
    }
}

/// Kruskal's algorithm over the finite entries of the weight matrix.
/// Ties are broken by the lexicographically lower id pair, which makes the
/// result deterministic. A disconnected pruned graph yields a spanning
/// forest.
pub fn kruskal_mst(w: &WeightedAdjacency) -> Vec<MstEdge> {
    let n = w.len();
    let mut candidates: Vec<MstEdge> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let weight = w.get(i, j);
            if weight.is_finite() {
                candidates.push(MstEdge {
                    a: i,
                    b: j,
                    weight,
                });
            }
        }
    }
    candidates.sort_by(|x, y| {
        x.weight
            .partial_cmp(&y.weight)
            .unwrap()
            .then(x.a.cmp(&y.a))
            .then(x.b.cmp(&y.b))
    });
    let mut uf = UnionFind::new(n);
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    for e in candidates {
        if uf.union(e.a, e.b) {
            edges.push(e);
            if edges.len() + 1 == n {
                break;
            }
        }
    }
    edges
}
