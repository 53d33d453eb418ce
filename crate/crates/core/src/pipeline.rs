//! End-to-end parse: raw graphics in, molecule graph and serializations out.

use thiserror::Error;

use crate::chem_io::SmilesError;
use crate::ingest::RawGraphic;
use crate::molecule::{
    expand_abbreviations, molecule_from_tokens, AbbreviationDict, MoleculeGraph, StructureError,
};
use crate::mst::MstError;
use crate::params::ParserParams;
use crate::primitive::Primitive;
use crate::visual::{visual_pipeline, PrimitiveGraph, TokenGraph};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("no primitives in input")]
    NoPrimitives,
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    Smiles(#[from] SmilesError),
}

impl From<MstError> for PipelineError {
    fn from(_: MstError) -> Self {
        PipelineError::NoPrimitives
    }
}

/// Everything produced while parsing one diagram.
#[derive(Debug)]
pub struct ParseOutput {
    pub primitives: Vec<Primitive>,
    pub mst: PrimitiveGraph,
    pub visual: PrimitiveGraph,
    pub tokens: TokenGraph,
    pub molecule: MoleculeGraph,
    pub warnings: Vec<String>,
}

/// Runs the full pipeline: normalization, MST, visual-structure rewriting,
/// tokenization, molecular structure, abbreviation expansion.
pub fn parse_diagram(
    raws: &[RawGraphic],
    params: &ParserParams,
    dict: &AbbreviationDict,
) -> Result<ParseOutput, PipelineError> {
    let primitives = crate::ingest::normalize::normalize_primitives(raws, params);
    if primitives.is_empty() {
        return Err(PipelineError::NoPrimitives);
    }
    let mst = PrimitiveGraph::mst(primitives.clone(), params)?;
    let (tokens, visual) = visual_pipeline(mst.clone(), params);
    let (molecule, mut warnings) = molecule_from_tokens(&tokens)?;
    let (molecule, expansion_warnings) = expand_abbreviations(molecule, dict);
    warnings.extend(expansion_warnings);
    warnings.extend(tokens.warnings.iter().cloned());
    warnings.sort();
    warnings.dedup();
    Ok(ParseOutput {
        primitives,
        mst,
        visual,
        tokens,
        molecule,
        warnings,
    })
}

/// Parses instruction-stream text end to end.
pub fn parse_instruction_text(
    text: &str,
    params: &ParserParams,
    dict: &AbbreviationDict,
) -> Result<ParseOutput, ParseTextError> {
    let raws = crate::ingest::instructions::parse_instruction_stream(text)
        .map_err(ParseTextError::Instructions)?;
    parse_diagram(&raws, params, dict).map_err(ParseTextError::Pipeline)
}

/// Parses SymbolScraper JSON text end to end.
pub fn parse_json_text(
    text: &str,
    params: &ParserParams,
    dict: &AbbreviationDict,
) -> Result<(ParseOutput, Vec<String>), ParseTextError> {
    let ingest =
        crate::ingest::sscraper::parse_symbolscraper_json(text).map_err(ParseTextError::Json)?;
    let out = parse_diagram(&ingest.raws, params, dict).map_err(ParseTextError::Pipeline)?;
    Ok((out, ingest.warnings))
}

#[derive(Debug, Error)]
pub enum ParseTextError {
    #[error(transparent)]
    Instructions(crate::ingest::instructions::InstrError),
    #[error(transparent)]
    Json(crate::ingest::sscraper::JsonIngestError),
    #[error(transparent)]
    Pipeline(PipelineError),
}
