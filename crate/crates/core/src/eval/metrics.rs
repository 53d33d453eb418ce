//! Adjacency-matrix comparison of aligned labeled graphs: node/edge F1,
//! molecule-level structure rates, and per-cell disagreements.

use serde::{Deserialize, Serialize};

use crate::molecule::MoleculeGraph;

use super::align::Alignment;

pub const ABSENT: &str = "ABSENT";

/// A disagreeing adjacency cell: node label (diagonal) or edge label
/// (off-diagonal), with `ABSENT` standing for a missing node or edge.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CellError {
    pub truth: String,
    pub out: String,
    pub is_node: bool,
}

/// Per-molecule comparison result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoleculeScores {
    pub node_recall_hits: usize,
    pub node_truth_total: usize,
    pub node_precision_hits: usize,
    pub node_out_total: usize,
    pub edge_recall_hits: usize,
    pub edge_truth_total: usize,
    pub edge_precision_hits: usize,
    pub edge_out_total: usize,
    pub structure_correct: bool,
    pub structure_class_correct: bool,
    pub disagreements: Vec<CellError>,
}

pub fn f1(recall: f64, precision: f64) -> f64 {
    if recall + precision == 0.0 {
        0.0
    } else {
        2.0 * recall * precision / (recall + precision)
    }
}

fn edge_lookup(
    g: &MoleculeGraph,
) -> std::collections::BTreeMap<(usize, usize), (String, bool, usize, usize)> {
    // key: unordered pair; value: (label, directed, start, end)
    g.edges
        .iter()
        .map(|e| {
            let key = (e.a.min(e.b), e.a.max(e.b));
            (key, (e.kind.label().to_string(), e.directed(), e.a, e.b))
        })
        .collect()
}

/// Compares a parser output graph against ground truth under a node
/// alignment. An output edge is correct when its aligned end nodes and its
/// label (including wedge direction) match ground truth; a molecule has
/// correct structure when the aligned adjacency matches ignoring labels
/// and no node on either side is unmatched.
pub fn graph_metrics(
    truth: &MoleculeGraph,
    out: &MoleculeGraph,
    align: &Alignment,
) -> MoleculeScores {
    let mut disagreements = Vec::new();

    // node labels over the diagonal
    let mut node_recall_hits = 0usize;
    let mut node_precision_hits = 0usize;
    for (&o, &t) in &align.map {
        let tl = truth.nodes[t].label();
        let ol = out.nodes[o].label();
        if tl == ol {
            node_recall_hits += 1;
            node_precision_hits += 1;
        } else {
            disagreements.push(CellError {
                truth: tl,
                out: ol,
                is_node: true,
            });
        }
    }
    for &t in &align.unmatched_truth {
        disagreements.push(CellError {
            truth: truth.nodes[t].label(),
            out: ABSENT.to_string(),
            is_node: true,
        });
    }
    for &o in &align.unmatched_out {
        disagreements.push(CellError {
            truth: ABSENT.to_string(),
            out: out.nodes[o].label(),
            is_node: true,
        });
    }

    // edges through the alignment
    let truth_edges = edge_lookup(truth);
    let out_edges = edge_lookup(out);
    let to_truth = |o: usize| align.map.get(&o).copied();

    let mut edge_recall_hits = 0usize;
    let mut edge_precision_hits = 0usize;
    let mut structure = true;
    let mut seen_truth_keys: std::collections::BTreeSet<(usize, usize)> =
        std::collections::BTreeSet::new();

    for (okey, (olabel, odirected, oa, ob)) in &out_edges {
        let mapped = (to_truth(okey.0), to_truth(okey.1));
        let (Some(ta), Some(tb)) = mapped else {
            structure = false;
            disagreements.push(CellError {
                truth: ABSENT.to_string(),
                out: olabel.clone(),
                is_node: false,
            });
            continue;
        };
        let tkey = (ta.min(tb), ta.max(tb));
        match truth_edges.get(&tkey) {
            Some((tlabel, tdirected, tstart, _tend)) => {
                seen_truth_keys.insert(tkey);
                // direction check: for directed kinds the mapped start must
                // coincide with the truth start
                let mut label_match = tlabel == olabel;
                if label_match && (*tdirected || *odirected) {
                    let out_start_in_truth = to_truth(*oa);
                    let out_end_in_truth = to_truth(*ob);
                    let dir_ok = out_start_in_truth == Some(*tstart)
                        && out_end_in_truth.is_some();
                    if !dir_ok {
                        label_match = false;
                    }
                }
                if label_match {
                    edge_recall_hits += 1;
                    edge_precision_hits += 1;
                } else {
                    disagreements.push(CellError {
                        truth: tlabel.clone(),
                        out: olabel.clone(),
                        is_node: false,
                    });
                }
            }
            None => {
                structure = false;
                disagreements.push(CellError {
                    truth: ABSENT.to_string(),
                    out: olabel.clone(),
                    is_node: false,
                });
            }
        }
    }
    for (tkey, (tlabel, _, _, _)) in &truth_edges {
        if !seen_truth_keys.contains(tkey) {
            // missing edge entirely, or endpoints unmatched
            let covered = out_edges.iter().any(|(okey, _)| {
                (to_truth(okey.0), to_truth(okey.1)) == (Some(tkey.0), Some(tkey.1))
                    || (to_truth(okey.0), to_truth(okey.1)) == (Some(tkey.1), Some(tkey.0))
            });
            if !covered {
                structure = false;
                disagreements.push(CellError {
                    truth: tlabel.clone(),
                    out: ABSENT.to_string(),
                    is_node: false,
                });
            }
        }
    }

    if !align.unmatched_truth.is_empty() || !align.unmatched_out.is_empty() {
        structure = false;
    }

    let structure_class_correct = structure && disagreements.is_empty();

    MoleculeScores {
        node_recall_hits,
        node_truth_total: truth.nodes.len(),
        node_precision_hits,
        node_out_total: out.nodes.len(),
        edge_recall_hits,
        edge_truth_total: truth.edges.len(),
        edge_precision_hits,
        edge_out_total: out.edges.len(),
        structure_correct: structure,
        structure_class_correct,
        disagreements,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::align::align_nodes;
    use crate::geometry::Point;
    use crate::molecule::{MolEdge, MolNode};
    use crate::visual::BondKind;

    fn ring(n: usize, kinds: &[BondKind]) -> MoleculeGraph {
        let mut g = MoleculeGraph::default();
        for i in 0..n {
            let a = (i as f64) * std::f64::consts::TAU / n as f64;
            g.nodes.push(MolNode::HiddenCarbon {
                pos: Point::new(100.0 * a.cos(), 100.0 * a.sin()),
            });
        }
        for i in 0..n {
            g.edges.push(MolEdge {
                a: i,
                b: (i + 1) % n,
                kind: kinds[i % kinds.len()],
            });
        }
        g
    }

    #[test]
    fn identical_graphs_score_perfectly() {
        let g = ring(6, &[BondKind::Single, BondKind::Double]);
        let a = align_nodes(&g, &g);
        let s = graph_metrics(&g, &g, &a);
        assert_eq!(s.node_recall_hits, 6);
        assert_eq!(s.edge_recall_hits, 6);
        assert!(s.structure_correct);
        assert!(s.structure_class_correct);
        assert!(s.disagreements.is_empty());
        let nf1 = f1(
            s.node_recall_hits as f64 / s.node_truth_total as f64,
            s.node_precision_hits as f64 / s.node_out_total as f64,
        );
        assert_eq!(nf1, 1.0);
    }

    #[test]
    fn one_mislabeled_edge_out_of_ten_gives_point_nine_f1() {
        let truth = ring(10, &[BondKind::Single, BondKind::Double]);
        let mut out = truth.clone();
        out.edges[3].kind = match out.edges[3].kind {
            BondKind::Double => BondKind::Single,
            _ => BondKind::Double,
        };
        let a = align_nodes(&truth, &out);
        let s = graph_metrics(&truth, &out, &a);
        let recall = s.edge_recall_hits as f64 / s.edge_truth_total as f64;
        let precision = s.edge_precision_hits as f64 / s.edge_out_total as f64;
        assert!((recall - 0.9).abs() < 1e-12);
        assert!((precision - 0.9).abs() < 1e-12);
        assert!((f1(recall, precision) - 0.9).abs() < 1e-12);
        assert!(s.structure_correct, "topology unchanged");
        assert!(!s.structure_class_correct, "label wrong");
        assert_eq!(s.disagreements.len(), 1);
    }

    #[test]
    fn f1_formula_matches_harmonic_mean() {
        assert!((f1(1.0, 0.5) - 2.0 / 3.0).abs() < 1e-12);
        assert_eq!(f1(0.0, 0.0), 0.0);
    }

    #[test]
    fn wedge_type_flip_keeps_structure_but_fails_class() {
        let mut truth = ring(6, &[BondKind::Single]);
        truth.edges[0].kind = BondKind::HashedWedge;
        let mut out = truth.clone();
        out.edges[0].kind = BondKind::SolidWedge;
        let a = align_nodes(&truth, &out);
        let s = graph_metrics(&truth, &out, &a);
        assert!(s.structure_correct);
        assert!(!s.structure_class_correct);
        assert_eq!(
            s.disagreements,
            vec![CellError {
                truth: "HashedWedge".to_string(),
                out: "SolidWedge".to_string(),
                is_node: false,
            }]
        );
    }

    #[test]
    fn wedge_direction_flip_fails_class() {
        let mut truth = ring(6, &[BondKind::Single]);
        truth.edges[0].kind = BondKind::SolidWedge;
        let mut out = truth.clone();
        let e = out.edges[0];
        out.edges[0] = MolEdge {
            a: e.b,
            b: e.a,
            kind: e.kind,
        };
        let a = align_nodes(&truth, &out);
        let s = graph_metrics(&truth, &out, &a);
        assert!(s.structure_correct);
        assert!(!s.structure_class_correct);
    }

    #[test]
    fn missing_bond_fails_structure() {
        let truth = ring(6, &[BondKind::Single]);
        let mut out = truth.clone();
        out.edges.pop();
        let a = align_nodes(&truth, &out);
        let s = graph_metrics(&truth, &out, &a);
        assert!(!s.structure_correct);
        assert!(s
            .disagreements
            .contains(&CellError {
                truth: "Single".to_string(),
                out: ABSENT.to_string(),
                is_node: false
            }));
    }

    #[test]
    fn extra_node_fails_structure() {
        let truth = ring(6, &[BondKind::Single]);
        let mut out = truth.clone();
        out.nodes.push(MolNode::HiddenCarbon {
            pos: Point::new(500.0, 500.0),
        });
        let a = align_nodes(&truth, &out);
        let s = graph_metrics(&truth, &out, &a);
        assert!(!s.structure_correct);
    }
}
