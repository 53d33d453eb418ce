//! Serialization of molecule graphs: CDXML, label graph (Lg) files,
//! canonical SMILES, and DOT debug dumps.

pub mod cdxml;
pub mod dot;
pub mod lg;
pub mod smiles;

pub use cdxml::{read_cdxml, write_cdxml, CdxmlError};
pub use lg::{lg_to_molecule, molecule_to_lg, read_lg, token_graph_to_lg, write_lg, LgError, LgFile};
pub use smiles::{canonicalize_smiles, read_smiles, write_smiles, SmilesError};
