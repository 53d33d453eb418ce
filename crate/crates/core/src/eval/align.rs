//! Spatial node alignment between a ground-truth molecule graph and a
//! parser output graph.

use std::collections::BTreeMap;

use crate::geometry::{Point, Rect};
use crate::molecule::{MolNode, MoleculeGraph};

/// Partial injection from output node indices to ground-truth node indices.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Alignment {
    pub map: BTreeMap<usize, usize>,
    pub unmatched_out: Vec<usize>,
    pub unmatched_truth: Vec<usize>,
}

/// Extent of a node: its drawn bounding box, or a square of half-width
/// one tenth of the graph's mean bond length around point-like nodes.
fn extent(node: &MolNode, mean_bond: f64) -> Rect {
    match node.bbox() {
        Some(b) => b,
        None => {
            let r = (0.1 * mean_bond).max(1e-3);
            Rect::new(
                Point::new(node.pos().x - r, node.pos().y - r),
                Point::new(node.pos().x + r, node.pos().y + r),
            )
        }
    }
}

/// Greedy maximum-overlap matching: candidate pairs ordered by descending
/// extent intersection area (ties by center distance, then ids), followed
/// by a nearest-center fallback for pairs whose extents do not intersect,
/// within half the ground truth's mean bond length. Unmatched nodes on
/// either side are recorded.
pub fn align_nodes(truth: &MoleculeGraph, out: &MoleculeGraph) -> Alignment {
    let truth_mean = truth.mean_bond_length();
    let out_mean = out.mean_bond_length();
    let mut pairs: Vec<(f64, f64, usize, usize)> = Vec::new();
    for (t, tn) in truth.nodes.iter().enumerate() {
        let te = extent(tn, truth_mean);
        for (o, on) in out.nodes.iter().enumerate() {
            let oe = extent(on, out_mean);
            let overlap = te.intersection_area(&oe);
            if overlap > 0.0 {
                let d = tn.pos().distance(&on.pos());
                pairs.push((overlap, d, t, o));
            }
        }
    }
    pairs.sort_by(|x, y| {
        y.0.partial_cmp(&x.0)
            .unwrap()
            .then(x.1.partial_cmp(&y.1).unwrap())
            .then(x.2.cmp(&y.2))
            .then(x.3.cmp(&y.3))
    });

    let mut truth_taken = vec![false; truth.nodes.len()];
    let mut out_taken = vec![false; out.nodes.len()];
    let mut map = BTreeMap::new();
    for (_, _, t, o) in pairs {
        if truth_taken[t] || out_taken[o] {
            continue;
        }
        truth_taken[t] = true;
        out_taken[o] = true;
        map.insert(o, t);
    }

    // fallback: nearest centers under half the mean bond length
    let threshold = 0.5 * truth_mean;
    let mut fallback: Vec<(f64, usize, usize)> = Vec::new();
    for (t, tn) in truth.nodes.iter().enumerate() {
        if truth_taken[t] {
            continue;
        }
        for (o, on) in out.nodes.iter().enumerate() {
            if out_taken[o] {
                continue;
            }
            let d = tn.pos().distance(&on.pos());
            if d <= threshold {
                fallback.push((d, t, o));
            }
        }
    }
    fallback.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    for (_, t, o) in fallback {
        if truth_taken[t] || out_taken[o] {
            continue;
        }
        truth_taken[t] = true;
        out_taken[o] = true;
        map.insert(o, t);
    }

    Alignment {
        map,
        unmatched_out: (0..out.nodes.len()).filter(|&o| !out_taken[o]).collect(),
        unmatched_truth: (0..truth.nodes.len()).filter(|&t| !truth_taken[t]).collect(),
    }
}
