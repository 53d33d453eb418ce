//! Stage 4: semantic analysis converting a tokenized visual graph into a
//! molecular structure graph. Deterministic, with no tunable parameters.

pub mod abbrev;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{closest_distance, Point, Rect, Shape};
use crate::visual::{BondKind, TokenGraph, TokenNode};

pub use abbrev::AbbreviationDict;

#[derive(Debug, Error, PartialEq)]
pub enum StructureError {
    #[error("bond token {token} has {neighbors} non-bond neighbors, expected 2")]
    BondNeighborCount { token: usize, neighbors: usize },
}

/// Elements recognized as plain atoms; anything else becomes a superatom.
pub const ELEMENT_SYMBOLS: [&str; 28] = [
    "H", "He", "B", "C", "N", "O", "F", "Ne", "Na", "Mg", "Al", "Si", "P", "S", "Cl", "Ar", "K",
    "Ca", "Se", "Br", "Kr", "Rb", "Sr", "I", "Xe", "Li", "Be", "Sn",
];

pub fn is_element_symbol(s: &str) -> bool {
    ELEMENT_SYMBOLS.contains(&s)
}

/// A node of the molecular structure graph.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MolNode {
    Atom {
        element: String,
        charge: i32,
        pos: Point,
        /// Drawn extent, when the atom came from characters.
        bbox: Option<Rect>,
    },
    Superatom {
        name: String,
        charge: i32,
        pos: Point,
        bbox: Option<Rect>,
        /// Expansion fragment once the abbreviation dictionary has run.
        expansion: Option<Fragment>,
    },
    HiddenCarbon { pos: Point },
}

impl MolNode {
    pub fn pos(&self) -> Point {
        match self {
            MolNode::Atom { pos, .. }
            | MolNode::Superatom { pos, .. }
            | MolNode::HiddenCarbon { pos } => *pos,
        }
    }

    pub fn bbox(&self) -> Option<Rect> {
        match self {
            MolNode::Atom { bbox, .. } | MolNode::Superatom { bbox, .. } => *bbox,
            MolNode::HiddenCarbon { .. } => None,
        }
    }

    /// Evaluation and file label: element or name with a charge suffix.
    pub fn label(&self) -> String {
        match self {
            MolNode::Atom {
                element, charge, ..
            } => format_charged(element, *charge),
            MolNode::Superatom { name, charge, .. } => format_charged(name, *charge),
            MolNode::HiddenCarbon { .. } => "C".to_string(),
        }
    }
}

pub fn format_charged(base: &str, charge: i32) -> String {
    match charge {
        0 => base.to_string(),
        1 => format!("{base}+"),
        -1 => format!("{base}-"),
        c if c > 0 => format!("{base}+{c}"),
        c => format!("{base}-{}", -c),
    }
}

/// Splits a label like "O-" or "N+2" back into base and charge.
pub fn parse_charged(label: &str) -> (String, i32) {
    if let Some(base) = label.strip_suffix('+') {
        return (base.to_string(), 1);
    }
    if let Some(base) = label.strip_suffix('-') {
        return (base.to_string(), -1);
    }
    for (i, c) in label.char_indices() {
        if (c == '+' || c == '-') && i > 0 {
            if let Ok(mag) = label[i + 1..].parse::<i32>() {
                let base = label[..i].to_string();
                return (base, if c == '+' { mag } else { -mag });
            }
        }
    }
    (label.to_string(), 0)
}

/// A bond edge; `a` is the start for directed (wedge) bonds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MolEdge {
    pub a: usize,
    pub b: usize,
    pub kind: BondKind,
}

impl MolEdge {
    pub fn directed(&self) -> bool {
        self.kind.is_directed()
    }
}

/// Molecular structure graph: atoms, superatoms, and hidden carbons joined
/// by bond-labeled edges.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MoleculeGraph {
    pub nodes: Vec<MolNode>,
    pub edges: Vec<MolEdge>,
}

/// An abbreviation expansion: a molecule fragment with one attachment node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fragment {
    pub graph: MoleculeGraph,
    /// Index of the attachment atom inside `graph`.
    pub attach: usize,
}

impl MoleculeGraph {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Mean bond length over edge endpoint positions; used for the extent
    /// of point-like nodes during evaluation.
    pub fn mean_bond_length(&self) -> f64 {
        if self.edges.is_empty() {
            return 10.0;
        }
        let total: f64 = self
            .edges
            .iter()
            .map(|e| self.nodes[e.a].pos().distance(&self.nodes[e.b].pos()))
            .sum();
        total / self.edges.len() as f64
    }

    /// Connected components as sorted node-index lists.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut uf = crate::mst::UnionFind::new(self.nodes.len());
        for e in &self.edges {
            uf.union(e.a, e.b);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..self.nodes.len() {
            groups.entry(uf.find(i)).or_default().push(i);
        }
        groups.into_values().collect()
    }
}

/// Intermediate assembly state between carbon insertion and edge building.
#[derive(Debug)]
pub struct CarbonAssignment {
    /// For each bond token id, the molecule-node target of each endpoint.
    pub bond_targets: BTreeMap<usize, [usize; 2]>,
    pub graph: MoleculeGraph,
    /// Molecule node index for each name token id.
    pub name_nodes: BTreeMap<usize, usize>,
    pub warnings: Vec<String>,
}

/// Inserts hidden carbon atoms at bond line intersections and free line
/// endpoints. Every maximal cluster of mutually connected bond endpoints
/// becomes one carbon at the mean of the member endpoints; bonds ending at
/// a name connect to that name token instead.
pub fn intersections_to_carbons(tg: &TokenGraph) -> Result<CarbonAssignment, StructureError> {
    let mut graph = MoleculeGraph::default();
    let mut warnings = Vec::new();

    // name tokens become atom or superatom nodes up front
    let mut name_nodes: BTreeMap<usize, usize> = BTreeMap::new();
    for (tid, node) in tg.nodes.iter().enumerate() {
        if let TokenNode::Name {
            text, bbox, attach, ..
        } = node
        {
            let idx = graph.nodes.len();
            let node = if is_element_symbol(text) {
                MolNode::Atom {
                    element: text.clone(),
                    charge: 0,
                    pos: *attach,
                    bbox: Some(*bbox),
                }
            } else {
                MolNode::Superatom {
                    name: text.clone(),
                    charge: 0,
                    pos: *attach,
                    bbox: Some(*bbox),
                    expansion: None,
                }
            };
            graph.nodes.push(node);
            name_nodes.insert(tid, idx);
        }
    }

    // fold charges into their bound name's node
    for node in tg.nodes.iter() {
        if let TokenNode::Charge {
            sign, bound_name, ..
        } = node
        {
            match bound_name.and_then(|b| name_nodes.get(&b)) {
                Some(&idx) => match &mut graph.nodes[idx] {
                    MolNode::Atom { charge, .. } | MolNode::Superatom { charge, .. } => {
                        *charge += *sign as i32;
                    }
                    MolNode::HiddenCarbon { .. } => unreachable!(),
                },
                None => warnings.push("charge token with no adjacent name".to_string()),
            }
        }
    }

    let bond_ids: Vec<usize> = tg
        .nodes
        .iter()
        .enumerate()
        .filter(|(_, n)| n.is_bond())
        .map(|(i, _)| i)
        .collect();
    let endpoint_pos = |tid: usize, end: usize| -> Point {
        match &tg.nodes[tid] {
            TokenNode::Bond { start, end: e, .. } => {
                if end == 0 {
                    *start
                } else {
                    *e
                }
            }
            _ => unreachable!("endpoint of a non-bond"),
        }
    };

    // endpoint instance index: bond tid -> [instance; 2]
    let mut instance_of: BTreeMap<usize, [usize; 2]> = BTreeMap::new();
    let mut instances: Vec<(usize, usize)> = Vec::new();
    for &tid in &bond_ids {
        let i0 = instances.len();
        instances.push((tid, 0));
        instances.push((tid, 1));
        instance_of.insert(tid, [i0, i0 + 1]);
    }

    // assign endpoints to adjacent names: the endpoint nearest the name
    let mut name_of_instance: BTreeMap<usize, usize> = BTreeMap::new();
    for &tid in &bond_ids {
        let adjacent_names: Vec<usize> = tg
            .neighbors(tid)
            .into_iter()
            .filter(|&j| tg.nodes[j].is_name())
            .collect();
        for name_tid in adjacent_names {
            let name_idx = name_nodes[&name_tid];
            let name_shape = match &tg.nodes[name_tid] {
                TokenNode::Name { bbox, .. } => Shape::Rect(*bbox),
                _ => unreachable!(),
            };
            let d0 = closest_distance(&Shape::Point(endpoint_pos(tid, 0)), &name_shape);
            let d1 = closest_distance(&Shape::Point(endpoint_pos(tid, 1)), &name_shape);
            let prefer = if d0 <= d1 { [0, 1] } else { [1, 0] };
            let mut placed = false;
            for end in prefer {
                let inst = instance_of[&tid][end];
                if let std::collections::btree_map::Entry::Vacant(e) =
                    name_of_instance.entry(inst)
                {
                    e.insert(name_idx);
                    placed = true;
                    break;
                }
            }
            if !placed {
                // both endpoints already claimed by other names
                return Err(StructureError::BondNeighborCount {
                    token: tid,
                    neighbors: tg
                        .neighbors(tid)
                        .iter()
                        .filter(|&&j| !tg.nodes[j].is_bond())
                        .count(),
                });
            }
        }
    }

    // cluster remaining endpoints over connected bond pairs
    let mut uf = crate::mst::UnionFind::new(instances.len());
    for &(a, b) in tg.edges.iter() {
        if !(tg.nodes[a].is_bond() && tg.nodes[b].is_bond()) {
            continue;
        }
        // nearest endpoint pair between the two bonds, skipping endpoints
        // already assigned to a name
        let mut best: Option<(usize, usize, f64)> = None;
        for ea in 0..2 {
            for eb in 0..2 {
                let ia = instance_of[&a][ea];
                let ib = instance_of[&b][eb];
                if name_of_instance.contains_key(&ia) || name_of_instance.contains_key(&ib) {
                    continue;
                }
                let d = endpoint_pos(a, ea).distance(&endpoint_pos(b, eb));
                if best.map_or(true, |(_, _, bd)| d < bd) {
                    best = Some((ia, ib, d));
                }
            }
        }
        if let Some((ia, ib, _)) = best {
            uf.union(ia, ib);
        }
    }

    // build hidden carbons per cluster
    let mut cluster_nodes: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cluster_members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for inst in 0..instances.len() {
        if name_of_instance.contains_key(&inst) {
            continue;
        }
        cluster_members.entry(uf.find(inst)).or_default().push(inst);
    }
    for (root, members) in &cluster_members {
        let mean = Point::new(
            members
                .iter()
                .map(|&i| endpoint_pos(instances[i].0, instances[i].1).x)
                .sum::<f64>()
                / members.len() as f64,
            members
                .iter()
                .map(|&i| endpoint_pos(instances[i].0, instances[i].1).y)
                .sum::<f64>()
                / members.len() as f64,
        );
        let idx = graph.nodes.len();
        graph.nodes.push(MolNode::HiddenCarbon { pos: mean });
        cluster_nodes.insert(*root, idx);
    }

    // resolve each bond endpoint to its molecule node
    let mut bond_targets: BTreeMap<usize, [usize; 2]> = BTreeMap::new();
    for &tid in &bond_ids {
        let mut targets = [usize::MAX; 2];
        for end in 0..2 {
            let inst = instance_of[&tid][end];
            targets[end] = match name_of_instance.get(&inst) {
                Some(&name_idx) => name_idx,
                None => cluster_nodes[&uf.find(inst)],
            };
        }
        bond_targets.insert(tid, targets);
    }

    Ok(CarbonAssignment {
        bond_targets,
        graph,
        name_nodes,
        warnings,
    })
}

/// Replaces bond tokens by labeled edges. Wedge direction is preserved from
/// the token's (start, end) orientation. A bond whose two endpoints resolve
/// to the same node, or with a connected non-bond token that is not one of
/// its endpoint targets, is a structural error.
pub fn bonds_to_edges(
    tg: &TokenGraph,
    assignment: CarbonAssignment,
) -> Result<(MoleculeGraph, Vec<String>), StructureError> {
    let CarbonAssignment {
        bond_targets,
        mut graph,
        name_nodes,
        mut warnings,
    } = assignment;

    for (&tid, &[ta, tb]) in &bond_targets {
        let kind = match &tg.nodes[tid] {
            TokenNode::Bond { kind, .. } => kind.expect("bond labeled before conversion"),
            _ => unreachable!(),
        };
        if ta == tb {
            return Err(StructureError::BondNeighborCount {
                token: tid,
                neighbors: 1,
            });
        }
        // every connected name must be one of the endpoint targets
        let mut extra = 0usize;
        for j in tg.neighbors(tid) {
            if let Some(&idx) = name_nodes.get(&j) {
                if idx != ta && idx != tb {
                    extra += 1;
                }
            }
        }
        if extra > 0 {
            return Err(StructureError::BondNeighborCount {
                token: tid,
                neighbors: 2 + extra,
            });
        }
        graph.edges.push(MolEdge {
            a: ta,
            b: tb,
            kind,
        });
    }

    // detached names (no bonds at all) are fine: single-atom components;
    // opaque tokens were already warned about during tokenization
    warnings.extend(tg.warnings.iter().cloned());

    graph.edges.sort_by_key(|e| (e.a, e.b, e.kind));
    Ok((graph, warnings))
}

/// Expands superatom names through the abbreviation dictionary. Unknown
/// names are kept opaque with a recorded warning.
pub fn expand_abbreviations(
    mut g: MoleculeGraph,
    dict: &AbbreviationDict,
) -> (MoleculeGraph, Vec<String>) {
    let mut warnings = Vec::new();
    for node in &mut g.nodes {
        if let MolNode::Superatom {
            name,
            expansion,
            pos,
            ..
        } = node
        {
            match dict.get(name) {
                Some(fragment) => {
                    let mut frag = fragment.clone();
                    // fragment atoms inherit the superatom's drawn position
                    for fnode in &mut frag.graph.nodes {
                        if let MolNode::Atom { pos: fpos, .. } = fnode {
                            *fpos = *pos;
                        }
                    }
                    *expansion = Some(frag);
                }
                None => warnings.push(format!("unknown abbreviation {name:?} kept opaque")),
            }
        }
    }
    (g, warnings)
}

/// Full stage-4 conversion.
pub fn molecule_from_tokens(
    tg: &TokenGraph,
) -> Result<(MoleculeGraph, Vec<String>), StructureError> {
    let assignment = intersections_to_carbons(tg)?;
    bonds_to_edges(tg, assignment)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Segment;
    use std::collections::BTreeSet;

    fn bond(start: (f64, f64), end: (f64, f64), kind: BondKind) -> TokenNode {
        let s = Point::new(start.0, start.1);
        let e = Point::new(end.0, end.1);
        TokenNode::Bond {
            kind: Some(kind),
            line_count: 1,
            members: vec![],
            lines: vec![Segment::new(s, e).unwrap()],
            start: s,
            end: e,
        }
    }

    fn name(text: &str, x: f64, y: f64) -> TokenNode {
        TokenNode::Name {
            text: text.to_string(),
            bbox: Rect::new(Point::new(x, y), Point::new(x + 7.0, y + 10.0)),
            chars: vec![],
            attach: Point::new(x + 3.5, y + 5.0),
        }
    }

    fn graph(nodes: Vec<TokenNode>, edges: &[(usize, usize)]) -> TokenGraph {
        TokenGraph {
            nodes,
            edges: edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect::<BTreeSet<_>>(),
            warnings: vec![],
        }
    }

    #[test]
    fn shared_corner_becomes_one_hidden_carbon() {
        // propane apex: two single bonds meeting at (30, 20)
        let tg = graph(
            vec![
                bond((0.0, 0.0), (30.0, 20.0), BondKind::Single),
                bond((30.0, 20.0), (60.0, 0.0), BondKind::Single),
            ],
            &[(0, 1)],
        );
        let (g, _) = molecule_from_tokens(&tg).unwrap();
        // 3 hidden carbons: the shared apex and the two free ends
        assert_eq!(g.node_count(), 3);
        assert_eq!(g.edge_count(), 2);
        let apex = g
            .nodes
            .iter()
            .find(|n| (n.pos().x - 30.0).abs() < 1e-9 && (n.pos().y - 20.0).abs() < 1e-9);
        assert!(apex.is_some(), "carbon at the shared corner midpoint");
        assert!(g
            .nodes
            .iter()
            .all(|n| matches!(n, MolNode::HiddenCarbon { .. })));
    }

    #[test]
    fn bond_ending_at_name_gets_no_carbon() {
        let tg = graph(
            vec![
                bond((0.0, 0.0), (30.0, 0.0), BondKind::Single),
                name("NO2", 33.0, -5.0),
            ],
            &[(0, 1)],
        );
        let (g, _) = molecule_from_tokens(&tg).unwrap();
        // one superatom + one hidden carbon at the free end
        assert_eq!(g.node_count(), 2);
        assert!(matches!(&g.nodes[0], MolNode::Superatom { name, .. } if name == "NO2"));
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn bond_with_three_names_is_a_structural_error() {
        let tg = graph(
            vec![
                bond((0.0, 0.0), (30.0, 0.0), BondKind::Single),
                name("A", -10.0, -5.0),
                name("B", 33.0, -5.0),
                name("C", 15.0, -20.0),
            ],
            &[(0, 1), (0, 2), (0, 3)],
        );
        let err = molecule_from_tokens(&tg).unwrap_err();
        assert!(matches!(err, StructureError::BondNeighborCount { token: 0, .. }));
    }

    #[test]
    fn element_labels_become_atoms_not_superatoms() {
        let tg = graph(
            vec![
                bond((0.0, 0.0), (30.0, 0.0), BondKind::Single),
                name("O", 33.0, -5.0),
            ],
            &[(0, 1)],
        );
        let (g, _) = molecule_from_tokens(&tg).unwrap();
        assert!(matches!(&g.nodes[0], MolNode::Atom { element, .. } if element == "O"));
    }

    #[test]
    fn wedge_direction_is_preserved() {
        let tg = graph(
            vec![bond((0.0, 0.0), (30.0, 0.0), BondKind::SolidWedge)],
            &[],
        );
        let (g, _) = molecule_from_tokens(&tg).unwrap();
        assert_eq!(g.edge_count(), 1);
        let e = g.edges[0];
        assert_eq!(e.kind, BondKind::SolidWedge);
        // node a must sit at the narrow start (0, 0)
        assert!((g.nodes[e.a].pos().x - 0.0).abs() < 1e-9);
        assert!((g.nodes[e.b].pos().x - 30.0).abs() < 1e-9);
    }

    #[test]
    fn charged_label_formats_round_trip() {
        for (label, base, charge) in [
            ("O-", "O", -1),
            ("N+", "N", 1),
            ("Ca+2", "Ca", 2),
            ("C", "C", 0),
        ] {
            assert_eq!(format_charged(base, charge), label);
            assert_eq!(parse_charged(label), (base.to_string(), charge));
        }
    }

    #[test]
    fn stage_four_is_deterministic() {
        let tg = graph(
            vec![
                bond((0.0, 0.0), (30.0, 20.0), BondKind::Single),
                bond((30.0, 20.0), (60.0, 0.0), BondKind::Double),
                name("O", 63.0, -5.0),
            ],
            &[(0, 1), (1, 2)],
        );
        let (first, _) = molecule_from_tokens(&tg).unwrap();
        for _ in 0..10 {
            let (again, _) = molecule_from_tokens(&tg).unwrap();
            assert_eq!(first, again);
        }
    }
}
