//! Stage 3: transforming the primitive MST into a tokenized visual graph.

mod charges;
mod reconnect;
mod restructure;
mod tokenize;

pub use charges::detect_negative_charges;
pub use reconnect::reconnect_floating_parallels;
pub use restructure::restructure_edges;
pub use tokenize::{label_bonds, tokenize, BondKind, TokenGraph, TokenNode};

use std::collections::BTreeMap;

use crate::mst::{build_weights, kruskal_mst, MstError};
use crate::params::ParserParams;
use crate::primitive::{PrimId, Primitive};

/// Where a graph edge came from. Restructuring statistics are computed over
/// skeleton edges only, so that re-running the transform cannot shift its
/// own thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeOrigin {
    /// MST edge, possibly rewired by the floating-parallel correction.
    Skeleton,
    /// Edge added by restructuring.
    Added,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphEdge {
    pub a: PrimId,
    pub b: PrimId,
    pub weight: f64,
    pub origin: EdgeOrigin,
    /// Dead edges are kept as statistical evidence but carry no connection.
    pub alive: bool,
}

/// Weighted undirected graph over primitives. Starts life as the MST and is
/// rewritten in place into the visual structure graph.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimitiveGraph {
    pub nodes: Vec<Primitive>,
    pub edges: Vec<GraphEdge>,
}

impl PrimitiveGraph {
    /// Builds the MST over the given primitives.
    pub fn mst(nodes: Vec<Primitive>, params: &ParserParams) -> Result<Self, MstError> {
        let w = build_weights(&nodes, params)?;
        let edges = kruskal_mst(&w)
            .into_iter()
            .map(|e| GraphEdge {
                a: e.a,
                b: e.b,
                weight: e.weight,
                origin: EdgeOrigin::Skeleton,
                alive: true,
            })
            .collect();
        Ok(PrimitiveGraph { nodes, edges })
    }

    pub fn alive_edges(&self) -> impl Iterator<Item = &GraphEdge> {
        self.edges.iter().filter(|e| e.alive)
    }

    /// Degree over alive edges.
    pub fn degree(&self, id: PrimId) -> usize {
        self.alive_edges()
            .filter(|e| e.a == id || e.b == id)
            .count()
    }

    /// Alive neighbors of a node.
    pub fn neighbors(&self, id: PrimId) -> Vec<PrimId> {
        let mut out: Vec<PrimId> = self
            .alive_edges()
            .filter_map(|e| {
                if e.a == id {
                    Some(e.b)
                } else if e.b == id {
                    Some(e.a)
                } else {
                    None
                }
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn has_alive_edge(&self, a: PrimId, b: PrimId) -> bool {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.alive_edges().any(|e| (e.a, e.b) == (a, b))
    }

    /// Adds an edge (or revives a dead one) unless already alive.
    pub fn add_edge(&mut self, a: PrimId, b: PrimId, weight: f64, origin: EdgeOrigin) {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if let Some(e) = self.edges.iter_mut().find(|e| (e.a, e.b) == (a, b)) {
            e.alive = true;
            return;
        }
        self.edges.push(GraphEdge {
            a,
            b,
            weight,
            origin,
            alive: true,
        });
    }

    pub fn remove_edge(&mut self, a: PrimId, b: PrimId) {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        self.edges.retain(|e| (e.a, e.b) != (a, b));
    }

    /// Marks an edge dead, keeping it for statistics.
    pub fn kill_edge(&mut self, a: PrimId, b: PrimId) {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        if let Some(e) = self.edges.iter_mut().find(|e| (e.a, e.b) == (a, b)) {
            e.alive = false;
        }
    }

    /// Canonical edge ordering for deterministic downstream passes.
    pub fn sort_edges(&mut self) {
        self.edges.sort_by(|x, y| (x.a, x.b).cmp(&(y.a, y.b)));
    }

    /// Connected components over alive edges, each sorted by id.
    pub fn components(&self) -> Vec<Vec<PrimId>> {
        let n = self.nodes.len();
        let mut uf = crate::mst::UnionFind::new(n);
        for e in self.alive_edges() {
            uf.union(e.a, e.b);
        }
        let mut groups: BTreeMap<usize, Vec<PrimId>> = BTreeMap::new();
        for id in 0..n {
            groups.entry(uf.find(id)).or_default().push(id);
        }
        groups.into_values().collect()
    }
}

/// Runs the complete stage-3 rewrite: charge detection, floating-parallel
/// reconnection, edge restructuring, tokenization, bond labeling.
pub fn visual_pipeline(mst: PrimitiveGraph, params: &ParserParams) -> (TokenGraph, PrimitiveGraph) {
    let g = detect_negative_charges(mst, params);
    let g = reconnect_floating_parallels(g, params);
    let g = restructure_edges(g, params);
    let tokens = label_bonds(tokenize(&g, params));
    (tokens, g)
}
