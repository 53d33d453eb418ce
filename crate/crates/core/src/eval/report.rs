//! Corpus-level evaluation report: string metrics, labeled-graph metrics,
//! and the error histogram, emitted as JSON and static HTML.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::chem_io::canonicalize_smiles;
use crate::molecule::MoleculeGraph;

use super::align::align_nodes;
use super::levenshtein::normalized_levenshtein;
use super::metrics::{f1, graph_metrics, CellError, MoleculeScores};

/// One molecule to evaluate: ground truth plus the parser's output.
/// A missing output counts as a full mismatch.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub id: String,
    pub truth_smiles: String,
    pub truth: MoleculeGraph,
    pub out_smiles: Option<String>,
    pub out: Option<MoleculeGraph>,
    /// Optional hyperlink target for HTML reports.
    pub link: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistEntry {
    pub truth: String,
    pub out: String,
    pub kind: String,
    pub count: usize,
    pub molecules: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoleculeReport {
    pub id: String,
    pub exact_match: bool,
    pub truth_smiles: String,
    pub out_smiles: String,
    pub structure_correct: bool,
    pub structure_class_correct: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub molecule_count: usize,
    pub exact_match_rate: f64,
    pub inverse_avg_nld: f64,
    pub node_f1: f64,
    pub edge_f1: f64,
    pub structure_rate: f64,
    pub structure_class_rate: f64,
    pub histogram: Vec<HistEntry>,
    pub molecules: Vec<MoleculeReport>,
}

/// Evaluates a corpus. SMILES on both sides pass through the same
/// canonicalizer so atom order never affects string comparison; graphs are
/// aligned spatially and compared cell by cell.
pub fn evaluate_corpus(entries: &[CorpusEntry]) -> EvalReport {
    let mut nld_sum = 0.0;
    let mut exact = 0usize;
    let mut node_r = (0usize, 0usize);
    let mut node_p = (0usize, 0usize);
    let mut edge_r = (0usize, 0usize);
    let mut edge_p = (0usize, 0usize);
    let mut structure = 0usize;
    let mut structure_class = 0usize;
    let mut hist: BTreeMap<CellError, Vec<String>> = BTreeMap::new();
    let mut molecules = Vec::new();

    for entry in entries {
        let truth_canon =
            canonicalize_smiles(&entry.truth_smiles).unwrap_or_else(|_| entry.truth_smiles.clone());
        let out_canon = entry
            .out_smiles
            .as_deref()
            .map(|s| canonicalize_smiles(s).unwrap_or_else(|_| s.to_string()))
            .unwrap_or_default();
        let is_exact = !out_canon.is_empty() && truth_canon == out_canon;
        if is_exact {
            exact += 1;
        }
        nld_sum += normalized_levenshtein(&truth_canon, &out_canon);

        let scores: MoleculeScores = match &entry.out {
            Some(out) => {
                let alignment = align_nodes(&entry.truth, out);
                graph_metrics(&entry.truth, out, &alignment)
            }
            None => MoleculeScores {
                node_recall_hits: 0,
                node_truth_total: entry.truth.nodes.len(),
                node_precision_hits: 0,
                node_out_total: 0,
                edge_recall_hits: 0,
                edge_truth_total: entry.truth.edges.len(),
                edge_precision_hits: 0,
                edge_out_total: 0,
                structure_correct: false,
                structure_class_correct: false,
                disagreements: entry
                    .truth
                    .nodes
                    .iter()
                    .map(|n| CellError {
                        truth: n.label(),
                        out: super::metrics::ABSENT.to_string(),
                        is_node: true,
                    })
                    .chain(entry.truth.edges.iter().map(|e| CellError {
                        truth: e.kind.label().to_string(),
                        out: super::metrics::ABSENT.to_string(),
                        is_node: false,
                    }))
                    .collect(),
            },
        };

        node_r.0 += scores.node_recall_hits;
        node_r.1 += scores.node_truth_total;
        node_p.0 += scores.node_precision_hits;
        node_p.1 += scores.node_out_total;
        edge_r.0 += scores.edge_recall_hits;
        edge_r.1 += scores.edge_truth_total;
        edge_p.0 += scores.edge_precision_hits;
        edge_p.1 += scores.edge_out_total;
        structure += usize::from(scores.structure_correct);
        structure_class += usize::from(scores.structure_class_correct);
        for d in scores.disagreements {
            hist.entry(d).or_default().push(entry.id.clone());
        }
        molecules.push(MoleculeReport {
            id: entry.id.clone(),
            exact_match: is_exact,
            truth_smiles: truth_canon,
            out_smiles: out_canon,
            structure_correct: scores.structure_correct,
            structure_class_correct: scores.structure_class_correct,
        });
    }

    let n = entries.len().max(1);
    let ratio = |hits: usize, total: usize| {
        if total == 0 {
            1.0
        } else {
            hits as f64 / total as f64
        }
    };
    let mut histogram: Vec<HistEntry> = hist
        .into_iter()
        .map(|(cell, molecules)| HistEntry {
            truth: cell.truth,
            out: cell.out,
            kind: if cell.is_node { "node" } else { "edge" }.to_string(),
            count: molecules.len(),
            molecules,
        })
        .collect();
    histogram.sort_by(|a, b| {
        b.count
            .cmp(&a.count)
            .then(a.truth.cmp(&b.truth))
            .then(a.out.cmp(&b.out))
            .then(a.kind.cmp(&b.kind))
    });

    EvalReport {
        molecule_count: entries.len(),
        exact_match_rate: exact as f64 / n as f64,
        inverse_avg_nld: 1.0 - nld_sum / n as f64,
        node_f1: f1(ratio(node_r.0, node_r.1), ratio(node_p.0, node_p.1)),
        edge_f1: f1(ratio(edge_r.0, edge_r.1), ratio(edge_p.0, edge_p.1)),
        structure_rate: structure as f64 / n as f64,
        structure_class_rate: structure_class as f64 / n as f64,
        histogram,
        molecules,
    }
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }

    /// Static HTML rendering: summary table plus the ranked error
    /// histogram, each entry listing the molecules it occurred in.
    pub fn to_html(&self, links: &BTreeMap<String, String>) -> String {
        let mut html = String::from(
            "<!DOCTYPE html>\n<html><head><meta charset=\"utf-8\">\
             <title>Evaluation report</title>\
             <style>body{font-family:sans-serif}table{border-collapse:collapse}\
             td,th{border:1px solid #999;padding:4px 8px}</style>\
             </head><body>\n<h1>Evaluation report</h1>\n",
        );
        html.push_str(&format!(
            "<table><tr><th>Molecules</th><th>Exact match</th><th>Inv. avg NLD</th>\
             <th>Node F1</th><th>Edge F1</th><th>Struct.</th><th>+Class</th></tr>\
             <tr><td>{}</td><td>{:.4}</td><td>{:.4}</td><td>{:.4}</td><td>{:.4}</td>\
             <td>{:.4}</td><td>{:.4}</td></tr></table>\n",
            self.molecule_count,
            self.exact_match_rate,
            self.inverse_avg_nld,
            self.node_f1,
            self.edge_f1,
            self.structure_rate,
            self.structure_class_rate
        ));
        html.push_str("<h2>Error histogram</h2>\n");
        if self.histogram.is_empty() {
            html.push_str("<p>No disagreements.</p>\n");
        } else {
            html.push_str(
                "<table><tr><th>#</th><th>Kind</th><th>Ground truth</th>\
                 <th>Output</th><th>Molecules</th></tr>\n",
            );
            for h in &self.histogram {
                let mols: Vec<String> = h
                    .molecules
                    .iter()
                    .map(|m| match links.get(m) {
                        Some(href) => format!("<a href=\"{href}\">{m}</a>"),
                        None => m.clone(),
                    })
                    .collect();
                html.push_str(&format!(
                    "<tr><td>{}</td><td>{}</td><td>{}</td><td>{}</td><td>{}</td></tr>\n",
                    h.count,
                    h.kind,
                    h.truth,
                    h.out,
                    mols.join(", ")
                ));
            }
            html.push_str("</table>\n");
        }
        html.push_str("</body></html>\n");
        html
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;
    use crate::molecule::{MolEdge, MolNode};
    use crate::visual::BondKind;

    fn chain(n: usize) -> MoleculeGraph {
        let mut g = MoleculeGraph::default();
        for i in 0..n {
            g.nodes.push(MolNode::HiddenCarbon {
                pos: Point::new(i as f64 * 30.0, (i % 2) as f64 * 15.0),
            });
        }
        for i in 1..n {
            g.edges.push(MolEdge {
                a: i - 1,
                b: i,
                kind: BondKind::Single,
            });
        }
        g
    }

    fn entry(id: &str, truth: MoleculeGraph, out: Option<MoleculeGraph>) -> CorpusEntry {
        let smiles = crate::chem_io::write_smiles(&truth).unwrap();
        let out_smiles = out.as_ref().map(|g| crate::chem_io::write_smiles(g).unwrap());
        CorpusEntry {
            id: id.to_string(),
            truth_smiles: smiles,
            truth,
            out_smiles,
            out,
            link: None,
        }
    }

    #[test]
    fn perfect_corpus_scores_ones_and_empty_histogram() {
        let entries: Vec<CorpusEntry> = (0..5)
            .map(|i| entry(&format!("m{i}"), chain(4), Some(chain(4))))
            .collect();
        let r = evaluate_corpus(&entries);
        assert_eq!(r.exact_match_rate, 1.0);
        assert_eq!(r.inverse_avg_nld, 1.0);
        assert_eq!(r.node_f1, 1.0);
        assert_eq!(r.edge_f1, 1.0);
        assert_eq!(r.structure_rate, 1.0);
        assert_eq!(r.structure_class_rate, 1.0);
        assert!(r.histogram.is_empty());
    }

    #[test]
    fn dropped_bond_in_one_of_ten_gives_point_nine_structure_rate() {
        let mut entries: Vec<CorpusEntry> = (0..9)
            .map(|i| entry(&format!("m{i}"), chain(4), Some(chain(4))))
            .collect();
        let mut bad = chain(4);
        bad.edges.pop();
        entries.push(entry("m9", chain(4), Some(bad)));
        let r = evaluate_corpus(&entries);
        assert!((r.structure_rate - 0.9).abs() < 1e-12);
        assert!((r.exact_match_rate - 0.9).abs() < 1e-12);
        assert_eq!(r.histogram.len(), 1);
        assert_eq!(r.histogram[0].truth, "Single");
        assert_eq!(r.histogram[0].out, "ABSENT");
        assert_eq!(r.histogram[0].molecules, vec!["m9"]);
    }

    #[test]
    fn repeated_missing_single_bonds_group_into_one_entry() {
        let entries: Vec<CorpusEntry> = (0..3)
            .map(|i| {
                let mut bad = chain(4);
                bad.edges.pop();
                entry(&format!("m{i}"), chain(4), Some(bad))
            })
            .collect();
        let r = evaluate_corpus(&entries);
        assert_eq!(r.histogram.len(), 1);
        assert_eq!(r.histogram[0].count, 3);
    }

    #[test]
    fn histogram_total_matches_disagreeing_cells() {
        let mut entries = Vec::new();
        for i in 0..4 {
            let mut bad = chain(5);
            if i % 2 == 0 {
                bad.edges[0].kind = BondKind::Double;
            } else {
                bad.edges.pop();
            }
            entries.push(entry(&format!("m{i}"), chain(5), Some(bad)));
        }
        let r = evaluate_corpus(&entries);
        let total: usize = r.histogram.iter().map(|h| h.count).sum();
        assert_eq!(total, 4, "one disagreeing cell per molecule");
    }

    #[test]
    fn missing_prediction_counts_as_mismatch() {
        let entries = vec![entry("gone", chain(3), None)];
        let r = evaluate_corpus(&entries);
        assert_eq!(r.exact_match_rate, 0.0);
        assert_eq!(r.structure_rate, 0.0);
        assert!(r.inverse_avg_nld < 1.0);
    }

    #[test]
    fn html_report_renders_links() {
        let entries = vec![entry("mol-1", chain(3), Some(chain(4)))];
        let r = evaluate_corpus(&entries);
        let mut links = BTreeMap::new();
        links.insert("mol-1".to_string(), "out/mol-1.lg".to_string());
        let html = r.to_html(&links);
        assert!(html.contains("<a href=\"out/mol-1.lg\">mol-1</a>"));
    }
}
