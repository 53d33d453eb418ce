//! moldiag parses born-digital molecular diagrams from vector-graphics
//! primitives into molecular structure graphs, serializes them as CDXML,
//! label-graph (Lg) files, and canonical SMILES, and evaluates parses
//! against ground truth with both string and labeled-graph metrics.
//!
//! The pipeline has four stages:
//! 1. ingest graphics from an instruction stream or SymbolScraper-style
//!    JSON and normalize them into typed primitives ([`ingest`]);
//! 2. connect neighboring primitives with a minimum spanning tree
//!    ([`mst`]);
//! 3. rewrite the MST into a tokenized visual structure graph: charges,
//!    corrected connections, merged names and bonds ([`visual`]);
//! 4. convert visual syntax into chemical structure with hidden carbons
//!    and expanded abbreviations ([`molecule`]).

pub mod chem_io;
pub mod eval;
pub mod fixtures;
pub mod geometry;
pub mod ingest;
pub mod molecule;
pub mod mst;
pub mod params;
pub mod pipeline;
pub mod primitive;
pub mod visual;

pub use params::ParserParams;
pub use pipeline::{parse_diagram, parse_instruction_text, parse_json_text, ParseOutput};
