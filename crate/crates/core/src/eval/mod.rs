//! Evaluation protocol: SMILES string metrics, aligned labeled-graph
//! metrics with error histograms, and the staged grid-search tuner.

pub mod align;
pub mod grid;
pub mod levenshtein;
pub mod metrics;
pub mod report;

pub use align::{align_nodes, Alignment};
pub use grid::{grid_search, parse_grid_file, GridError, GridRun, GridStage, STANDARD_GRID};
pub use levenshtein::{inverse_avg_nld, levenshtein, normalized_levenshtein};
pub use metrics::{f1, graph_metrics, CellError, MoleculeScores, ABSENT};
pub use report::{evaluate_corpus, CorpusEntry, EvalReport, HistEntry, MoleculeReport};
