//! Abbreviation dictionary mapping superatom names to molecule fragments.
//!
//! The file format is one entry per line: `NAME<TAB>fragment` where the
//! fragment is SMILES with exactly one `*` marking the attachment site.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::chem_io::smiles::{read_smiles, SmilesError};
use crate::molecule::{Fragment, MolNode, MoleculeGraph};

#[derive(Debug, Error)]
pub enum AbbrevError {
    #[error("line {0}: expected NAME<TAB>FRAGMENT")]
    Malformed(usize),
    #[error("line {0} ({1}): fragment must contain exactly one '*' attachment, found {2}")]
    AttachmentCount(usize, String, usize),
    #[error("line {0} ({1}): the '*' must have exactly one neighbor")]
    AttachmentDegree(usize, String),
    #[error("line {0} ({1}): {2}")]
    BadFragment(usize, String, SmilesError),
}

/// Immutable map from abbreviation text to its expansion fragment.
#[derive(Debug, Clone, Default)]
pub struct AbbreviationDict {
    entries: BTreeMap<String, Fragment>,
}

const DEFAULT_DICT: &str = include_str!("../../data/abbreviations.txt");

impl AbbreviationDict {
    /// The dictionary shipped with the library.
    pub fn shipped() -> Self {
        Self::from_text(DEFAULT_DICT).expect("shipped dictionary is well-formed")
    }

    pub fn from_text(text: &str) -> Result<Self, AbbrevError> {
        let mut entries = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim_end();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (name, smiles) = line.split_once('\t').ok_or(AbbrevError::Malformed(i + 1))?;
            let fragment = parse_fragment(smiles.trim())
                .map_err(|e| rewrap(e, i + 1, name))?;
            entries.insert(name.trim().to_string(), fragment);
        }
        Ok(AbbreviationDict { entries })
    }

    pub fn get(&self, name: &str) -> Option<&Fragment> {
        self.entries.get(name)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }
}

enum FragmentErr {
    Count(usize),
    Degree,
    Smiles(SmilesError),
}

fn rewrap(e: FragmentErr, line: usize, name: &str) -> AbbrevError {
    match e {
        FragmentErr::Count(n) => AbbrevError::AttachmentCount(line, name.to_string(), n),
        FragmentErr::Degree => AbbrevError::AttachmentDegree(line, name.to_string()),
        FragmentErr::Smiles(s) => AbbrevError::BadFragment(line, name.to_string(), s),
    }
}

/// Parses `*`-marked fragment SMILES: the wildcard atom is removed and its
/// single neighbor becomes the attachment site.
fn parse_fragment(smiles: &str) -> Result<Fragment, FragmentErr> {
    let g = read_smiles(smiles).map_err(FragmentErr::Smiles)?;
    let stars: Vec<usize> = g
        .nodes
        .iter()
        .enumerate()
        .filter(|(_, n)| matches!(n, MolNode::Atom { element, .. } if element == "*"))
        .map(|(i, _)| i)
        .collect();
    if stars.len() != 1 {
        return Err(FragmentErr::Count(stars.len()));
    }
    let star = stars[0];
    let star_edges: Vec<usize> = g
        .edges
        .iter()
        .enumerate()
        .filter(|(_, e)| e.a == star || e.b == star)
        .map(|(i, _)| i)
        .collect();
    if star_edges.len() != 1 {
        return Err(FragmentErr::Degree);
    }
    let e = g.edges[star_edges[0]];
    let attach_old = if e.a == star { e.b } else { e.a };

    // drop the star and reindex
    let mut graph = MoleculeGraph::default();
    let mut map = vec![usize::MAX; g.nodes.len()];
    for (i, node) in g.nodes.iter().enumerate() {
        if i == star {
            continue;
        }
        map[i] = graph.nodes.len();
        graph.nodes.push(node.clone());
    }
    for edge in &g.edges {
        if edge.a == star || edge.b == star {
            continue;
        }
        graph.edges.push(crate::molecule::MolEdge {
            a: map[edge.a],
            b: map[edge.b],
            kind: edge.kind,
        });
    }
    Ok(Fragment {
        graph,
        attach: map[attach_old],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chem_io::smiles::write_smiles;
    use crate::molecule::expand_abbreviations;
    use crate::visual::BondKind;

    #[test]
    fn shipped_dictionary_loads() {
        let dict = AbbreviationDict::shipped();
        assert!(dict.len() >= 60, "shipped {} entries", dict.len());
        for name in ["NO2", "CH3", "OMe", "Et", "Ph", "COOH", "OH", "NH2", "CN"] {
            assert!(dict.get(name).is_some(), "missing {name}");
        }
    }

    #[test]
    fn nitro_group_expands_to_one_single_one_double_oxygen() {
        let dict = AbbreviationDict::shipped();
        let frag = dict.get("NO2").unwrap();
        assert_eq!(frag.graph.node_count(), 3);
        assert_eq!(frag.graph.edge_count(), 2);
        // attachment at the nitrogen
        assert!(matches!(
            &frag.graph.nodes[frag.attach],
            MolNode::Atom { element, .. } if element == "N"
        ));
        let mut kinds: Vec<BondKind> = frag.graph.edges.iter().map(|e| e.kind).collect();
        kinds.sort();
        assert_eq!(kinds, vec![BondKind::Single, BondKind::Double]);
    }

    #[test]
    fn methyl_expands_to_single_carbon() {
        let dict = AbbreviationDict::shipped();
        let frag = dict.get("CH3").unwrap();
        assert_eq!(frag.graph.node_count(), 1);
        assert!(matches!(
            &frag.graph.nodes[frag.attach],
            MolNode::Atom { element, .. } if element == "C"
        ));
    }

    #[test]
    fn unknown_name_stays_opaque_with_warning() {
        let dict = AbbreviationDict::shipped();
        let mut g = MoleculeGraph::default();
        g.nodes.push(MolNode::Superatom {
            name: "XYZ".to_string(),
            charge: 0,
            pos: crate::geometry::Point::new(0.0, 0.0),
            bbox: None,
            expansion: None,
        });
        let (g, warnings) = expand_abbreviations(g, &dict);
        assert!(matches!(
            &g.nodes[0],
            MolNode::Superatom { expansion: None, .. }
        ));
        assert_eq!(warnings.len(), 1);
        assert!(warnings[0].contains("XYZ"));
    }

    #[test]
    fn every_shipped_fragment_round_trips_through_smiles() {
        let dict = AbbreviationDict::shipped();
        for name in dict.names() {
            let frag = dict.get(name).unwrap();
            let s = write_smiles(&frag.graph).unwrap();
            assert!(!s.is_empty(), "{name} emits empty SMILES");
        }
    }

    #[test]
    fn two_stars_rejected() {
        let err = AbbreviationDict::from_text("BAD\t*C*").unwrap_err();
        assert!(matches!(err, AbbrevError::AttachmentCount(1, _, 2)));
    }
}
