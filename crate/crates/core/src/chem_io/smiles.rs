//! SMILES emission with canonical atom ordering, plus a small reader used
//! for abbreviation fragments and for canonicalizing ground-truth strings.
//!
//! The dialect is kekulized and stereo-free: organic-subset atoms, bracket
//! atoms with charges, `=`/`#` bond symbols, ring closures (with `%nn`
//! digits), branches, and `.` separators. Wedge bonds emit as plain single
//! bonds. Canonical ordering uses iterative neighborhood refinement with
//! exhaustive tie individualization, so isomorphic graphs produce the same
//! string regardless of input node order.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::geometry::Point;
use crate::molecule::{Fragment, MolNode, MoleculeGraph};
use crate::visual::BondKind;

#[derive(Debug, Error, PartialEq)]
pub enum SmilesError {
    #[error("ring-closure digits exhausted: more than 99 rings open at once")]
    RingDigitExhaustion,
    #[error("canonicalization search exceeded its budget")]
    SearchBudget,
    #[error("position {0}: unexpected character {1:?}")]
    UnexpectedChar(usize, char),
    #[error("position {0}: unclosed bracket atom")]
    UnclosedBracket(usize),
    #[error("position {0}: bond or branch with no preceding atom")]
    NoCurrentAtom(usize),
    #[error("unmatched branch parenthesis")]
    UnmatchedParen,
    #[error("ring bond {0} opened but never closed")]
    UnclosedRing(usize),
    #[error("empty SMILES input")]
    Empty,
}

const ORGANIC_SUBSET: [&str; 10] = ["B", "C", "N", "O", "P", "S", "F", "Cl", "Br", "I"];

/// Atom-level view used for canonicalization.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct FlatAtom {
    element: String,
    charge: i32,
}

#[derive(Debug, Clone)]
struct FlatGraph {
    atoms: Vec<FlatAtom>,
    /// adjacency: neighbor index and bond order
    adj: Vec<Vec<(usize, u8)>>,
}

impl FlatGraph {
    fn new() -> Self {
        FlatGraph {
            atoms: Vec::new(),
            adj: Vec::new(),
        }
    }

    fn add_atom(&mut self, element: &str, charge: i32) -> usize {
        self.atoms.push(FlatAtom {
            element: element.to_string(),
            charge,
        });
        self.adj.push(Vec::new());
        self.atoms.len() - 1
    }

    fn add_bond(&mut self, a: usize, b: usize, order: u8) {
        self.adj[a].push((b, order));
        self.adj[b].push((a, order));
    }

    fn components(&self) -> Vec<Vec<usize>> {
        let n = self.atoms.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut queue = vec![start];
            while let Some(u) = queue.pop() {
                for &(v, _) in &self.adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        queue.push(v);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }
}

/// Expands superatoms into their fragments and drops positions, producing
/// the atom graph that SMILES describes. Unexpanded superatoms become `*`
/// wildcard atoms.
fn flatten(g: &MoleculeGraph) -> FlatGraph {
    let mut flat = FlatGraph::new();
    let mut node_atom: Vec<usize> = Vec::with_capacity(g.nodes.len());
    for node in &g.nodes {
        let idx = match node {
            MolNode::Atom {
                element, charge, ..
            } => flat.add_atom(element, *charge),
            MolNode::HiddenCarbon { .. } => flat.add_atom("C", 0),
            MolNode::Superatom {
                charge, expansion, ..
            } => match expansion {
                Some(frag) => splice_fragment(&mut flat, frag, *charge),
                None => flat.add_atom("*", *charge),
            },
        };
        node_atom.push(idx);
    }
    for e in &g.edges {
        flat.add_bond(node_atom[e.a], node_atom[e.b], e.kind.order());
    }
    flat
}

/// Copies a fragment into the flat graph, returning the attachment atom.
fn splice_fragment(flat: &mut FlatGraph, frag: &Fragment, extra_charge: i32) -> usize {
    let mut map: Vec<usize> = Vec::with_capacity(frag.graph.nodes.len());
    for (i, node) in frag.graph.nodes.iter().enumerate() {
        let idx = match node {
            MolNode::Atom {
                element, charge, ..
            } => {
                let charge = if i == frag.attach {
                    *charge + extra_charge
                } else {
                    *charge
                };
                flat.add_atom(element, charge)
            }
            MolNode::HiddenCarbon { .. } => flat.add_atom("C", 0),
            MolNode::Superatom { name, charge, .. } => flat.add_atom(name, *charge),
        };
        map.push(idx);
    }
    for e in &frag.graph.edges {
        flat.add_bond(map[e.a], map[e.b], e.kind.order());
    }
    map[frag.attach]
}

fn dense_ranks<K: Ord + Clone>(keys: &[K]) -> Vec<usize> {
    let mut sorted: Vec<K> = keys.to_vec();
    sorted.sort();
    sorted.dedup();
    keys.iter()
        .map(|k| sorted.binary_search(k).unwrap())
        .collect()
}

/// Iterative neighborhood refinement to a stable partition.
fn refine(flat: &FlatGraph, comp: &[usize], initial: Vec<usize>) -> Vec<usize> {
    let mut ranks = initial;
    loop {
        let pos: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &a)| (a, i)).collect();
        let keys: Vec<(usize, Vec<(u8, usize)>)> = comp
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let mut nbrs: Vec<(u8, usize)> = flat.adj[a]
                    .iter()
                    .filter_map(|&(b, o)| pos.get(&b).map(|&j| (o, ranks[j])))
                    .collect();
                nbrs.sort_unstable();
                (ranks[i], nbrs)
            })
            .collect();
        let new_ranks = dense_ranks(&keys);
        if new_ranks == ranks {
            return ranks;
        }
        ranks = new_ranks;
    }
}

fn class_count(ranks: &[usize]) -> usize {
    ranks.iter().collect::<BTreeSet<_>>().len()
}

struct CanonSearch<'a> {
    flat: &'a FlatGraph,
    comp: &'a [usize],
    budget: usize,
    best: Option<String>,
}

impl<'a> CanonSearch<'a> {
    fn run(&mut self, ranks: Vec<usize>) -> Result<(), SmilesError> {
        let ranks = refine(self.flat, self.comp, ranks);
        if class_count(&ranks) == self.comp.len() {
            if self.budget == 0 {
                return Err(SmilesError::SearchBudget);
            }
            self.budget -= 1;
            let s = emit_component(self.flat, self.comp, &ranks)?;
            if self.best.as_ref().map_or(true, |b| s < *b) {
                self.best = Some(s);
            }
            return Ok(());
        }
        // individualize each member of the first tied class
        let tied_rank = (0..self.comp.len())
            .map(|i| ranks[i])
            .fold(BTreeMap::<usize, usize>::new(), |mut m, r| {
                *m.entry(r).or_default() += 1;
                m
            })
            .into_iter()
            .find(|(_, c)| *c > 1)
            .map(|(r, _)| r)
            .expect("non-discrete partition has a tied class");
        for i in 0..self.comp.len() {
            if ranks[i] != tied_rank {
                continue;
            }
            let keys: Vec<(usize, usize)> = (0..self.comp.len())
                .map(|j| (ranks[j], if j == i { 0 } else { 1 }))
                .collect();
            self.run(dense_ranks(&keys))?;
        }
        Ok(())
    }
}

/// Canonical SMILES for one connected component.
fn canonical_component(flat: &FlatGraph, comp: &[usize]) -> Result<String, SmilesError> {
    let initial: Vec<(String, i32, usize, Vec<u8>)> = comp
        .iter()
        .map(|&a| {
            let atom = &flat.atoms[a];
            let mut orders: Vec<u8> = flat.adj[a].iter().map(|&(_, o)| o).collect();
            orders.sort_unstable();
            (atom.element.clone(), atom.charge, flat.adj[a].len(), orders)
        })
        .collect();
    let mut search = CanonSearch {
        flat,
        comp,
        budget: 100_000,
        best: None,
    };
    search.run(dense_ranks(&initial))?;
    Ok(search.best.expect("at least one emission"))
}

fn atom_token(atom: &FlatAtom) -> String {
    if atom.charge == 0 && (atom.element == "*" || ORGANIC_SUBSET.contains(&atom.element.as_str()))
    {
        atom.element.clone()
    } else {
        let charge = match atom.charge {
            0 => String::new(),
            1 => "+".to_string(),
            -1 => "-".to_string(),
            c if c > 0 => format!("+{c}"),
            c => format!("-{}", -c),
        };
        format!("[{}{}]", atom.element, charge)
    }
}

fn bond_token(order: u8) -> &'static str {
    match order {
        2 => "=",
        3 => "#",
        _ => "",
    }
}

struct RingClosure {
    opener: usize,
    closer: usize,
    order: u8,
    digit: usize,
}

/// Emits a component as SMILES following the given discrete ranking: the
/// traversal roots at rank 0 and visits neighbors in rank order.
fn emit_component(flat: &FlatGraph, comp: &[usize], ranks: &[usize]) -> Result<String, SmilesError> {
    let pos: BTreeMap<usize, usize> = comp.iter().enumerate().map(|(i, &a)| (a, i)).collect();
    let root = *comp
        .iter()
        .find(|&&a| ranks[pos[&a]] == 0)
        .expect("rank 0 exists");

    // phase one: spanning tree plus ring-closure back edges, neighbors in
    // rank order (undirected DFS yields only tree and back edges)
    let mut walk = Walk {
        flat,
        rank_of: &|atom: usize| ranks[pos[&atom]],
        visited: BTreeSet::new(),
        preorder: BTreeMap::new(),
        children: BTreeMap::new(),
        closures: Vec::new(),
        used_edges: BTreeSet::new(),
    };
    walk.build(root);
    let Walk {
        preorder,
        children,
        mut closures,
        ..
    } = walk;

    // phase two: textual emission with digit allocation in text order
    let mut free_digits: BTreeSet<usize> = (1..=99).collect();
    let mut open_digit: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut out = String::new();
    emit_atom(
        flat,
        root,
        None,
        &children,
        &mut closures,
        &preorder,
        &mut free_digits,
        &mut open_digit,
        &mut out,
    )?;
    Ok(out)
}

struct Walk<'a> {
    flat: &'a FlatGraph,
    rank_of: &'a dyn Fn(usize) -> usize,
    visited: BTreeSet<usize>,
    preorder: BTreeMap<usize, usize>,
    children: BTreeMap<usize, Vec<(usize, u8)>>,
    closures: Vec<RingClosure>,
    used_edges: BTreeSet<(usize, usize)>,
}

impl Walk<'_> {
    fn build(&mut self, atom: usize) {
        self.visited.insert(atom);
        self.preorder.insert(atom, self.preorder.len());
        let mut nbrs: Vec<(usize, u8)> = self.flat.adj[atom].clone();
        nbrs.sort_by_key(|&(b, _)| (self.rank_of)(b));
        for (b, order) in nbrs {
            if self.used_edges.contains(&edge_key(atom, b)) {
                continue;
            }
            self.used_edges.insert(edge_key(atom, b));
            if self.visited.contains(&b) {
                // back edge to an ancestor: a ring closure opening there
                self.closures.push(RingClosure {
                    opener: b,
                    closer: atom,
                    order,
                    digit: 0,
                });
            } else {
                self.children.entry(atom).or_default().push((b, order));
                self.build(b);
            }
        }
    }
}

fn edge_key(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

#[allow(clippy::too_many_arguments)]
fn emit_atom(
    flat: &FlatGraph,
    atom: usize,
    incoming: Option<u8>,
    children: &BTreeMap<usize, Vec<(usize, u8)>>,
    closures: &mut Vec<RingClosure>,
    preorder: &BTreeMap<usize, usize>,
    free_digits: &mut BTreeSet<usize>,
    open_digit: &mut BTreeMap<(usize, usize), usize>,
    out: &mut String,
) -> Result<(), SmilesError> {
    if let Some(order) = incoming {
        out.push_str(bond_token(order));
    }
    out.push_str(&atom_token(&flat.atoms[atom]));

    // open ring digits where this atom is the opener, ordered by the
    // closer's traversal position
    let mut opening: Vec<usize> = (0..closures.len())
        .filter(|&c| closures[c].opener == atom)
        .collect();
    opening.sort_by_key(|&c| preorder[&closures[c].closer]);
    for c in opening {
        let digit = *free_digits.iter().next().ok_or(SmilesError::RingDigitExhaustion)?;
        free_digits.remove(&digit);
        closures[c].digit = digit;
        open_digit.insert(edge_key(closures[c].opener, closures[c].closer), digit);
        out.push_str(bond_token(closures[c].order));
        push_digit(out, digit);
    }
    // close ring digits where this atom is the closer
    let mut closing: Vec<usize> = (0..closures.len())
        .filter(|&c| closures[c].closer == atom)
        .collect();
    closing.sort_by_key(|&c| closures[c].digit);
    for c in closing {
        let key = edge_key(closures[c].opener, closures[c].closer);
        let digit = open_digit[&key];
        out.push_str(bond_token(closures[c].order));
        push_digit(out, digit);
        free_digits.insert(digit);
    }

    let kids = children.get(&atom).cloned().unwrap_or_default();
    for (i, (child, order)) in kids.iter().enumerate() {
        let last = i + 1 == kids.len();
        if !last {
            out.push('(');
        }
        emit_atom(
            flat,
            *child,
            Some(*order),
            children,
            closures,
            preorder,
            free_digits,
            open_digit,
            out,
        )?;
        if !last {
            out.push(')');
        }
    }
    Ok(())
}

fn push_digit(out: &mut String, digit: usize) {
    if digit < 10 {
        out.push_str(&digit.to_string());
    } else {
        out.push_str(&format!("%{digit:02}"));
    }
}

/// Canonical SMILES of a molecule graph. Multi-component graphs emit
/// dot-separated parts ordered lexicographically.
pub fn write_smiles(g: &MoleculeGraph) -> Result<String, SmilesError> {
    let flat = flatten(g);
    if flat.atoms.is_empty() {
        return Ok(String::new());
    }
    let mut parts: Vec<String> = flat
        .components()
        .iter()
        .map(|comp| canonical_component(&flat, comp))
        .collect::<Result<_, _>>()?;
    parts.sort();
    Ok(parts.join("."))
}

/// Re-canonicalizes a SMILES string through the same writer used for parser
/// output, making string comparisons order-insensitive.
pub fn canonicalize_smiles(s: &str) -> Result<String, SmilesError> {
    write_smiles(&read_smiles(s)?)
}

/// Reads the supported SMILES subset into a molecule graph with zeroed
/// positions. `*` becomes a wildcard atom used by abbreviation fragments.
pub fn read_smiles(text: &str) -> Result<MoleculeGraph, SmilesError> {
    let s: Vec<char> = text.trim().chars().collect();
    if s.is_empty() {
        return Err(SmilesError::Empty);
    }
    let mut g = MoleculeGraph::default();
    let mut prev: Option<usize> = None;
    let mut stack: Vec<usize> = Vec::new();
    let mut pending: Option<u8> = None;
    let mut rings: BTreeMap<usize, (usize, Option<u8>)> = BTreeMap::new();
    let mut i = 0usize;

    let add_atom = |g: &mut MoleculeGraph, element: &str, charge: i32| -> usize {
        g.nodes.push(MolNode::Atom {
            element: element.to_string(),
            charge,
            pos: Point::new(0.0, 0.0),
            bbox: None,
        });
        g.nodes.len() - 1
    };
    let add_bond = |g: &mut MoleculeGraph, a: usize, b: usize, order: u8| {
        let kind = match order {
            2 => BondKind::Double,
            3 => BondKind::Triple,
            _ => BondKind::Single,
        };
        g.edges.push(crate::molecule::MolEdge { a, b, kind });
    };

    while i < s.len() {
        let c = s[i];
        match c {
            '-' | '=' | '#' => {
                if prev.is_none() {
                    return Err(SmilesError::NoCurrentAtom(i));
                }
                pending = Some(match c {
                    '=' => 2,
                    '#' => 3,
                    _ => 1,
                });
                i += 1;
            }
            '(' => {
                let cur = prev.ok_or(SmilesError::NoCurrentAtom(i))?;
                stack.push(cur);
                i += 1;
            }
            ')' => {
                prev = Some(stack.pop().ok_or(SmilesError::UnmatchedParen)?);
                i += 1;
            }
            '.' => {
                prev = None;
                pending = None;
                i += 1;
            }
            '%' => {
                if i + 2 >= s.len() || !s[i + 1].is_ascii_digit() || !s[i + 2].is_ascii_digit() {
                    return Err(SmilesError::UnexpectedChar(i, '%'));
                }
                let d = (s[i + 1] as usize - '0' as usize) * 10 + (s[i + 2] as usize - '0' as usize);
                ring_bond(&mut g, &mut rings, &mut pending, prev, d, i, add_bond)?;
                i += 3;
            }
            '0'..='9' => {
                let d = c as usize - '0' as usize;
                ring_bond(&mut g, &mut rings, &mut pending, prev, d, i, add_bond)?;
                i += 1;
            }
            '[' => {
                let close = s[i..]
                    .iter()
                    .position(|&c| c == ']')
                    .ok_or(SmilesError::UnclosedBracket(i))?
                    + i;
                let inner: String = s[i + 1..close].iter().collect();
                let (element, charge) = parse_bracket(&inner, i)?;
                let idx = add_atom(&mut g, &element, charge);
                if let Some(p) = prev {
                    add_bond(&mut g, p, idx, pending.take().unwrap_or(1));
                }
                prev = Some(idx);
                i = close + 1;
            }
            '*' => {
                let idx = add_atom(&mut g, "*", 0);
                if let Some(p) = prev {
                    add_bond(&mut g, p, idx, pending.take().unwrap_or(1));
                }
                prev = Some(idx);
                i += 1;
            }
            c if c.is_ascii_uppercase() => {
                let two: String = s[i..(i + 2).min(s.len())].iter().collect();
                let symbol = if two.len() == 2 && ORGANIC_SUBSET.contains(&two.as_str()) {
                    i += 2;
                    two
                } else {
                    let one: String = c.to_string();
                    if !ORGANIC_SUBSET.contains(&one.as_str()) {
                        return Err(SmilesError::UnexpectedChar(i, c));
                    }
                    i += 1;
                    one
                };
                let idx = add_atom(&mut g, &symbol, 0);
                if let Some(p) = prev {
                    add_bond(&mut g, p, idx, pending.take().unwrap_or(1));
                }
                prev = Some(idx);
            }
            c if c.is_whitespace() => {
                i += 1;
            }
            other => return Err(SmilesError::UnexpectedChar(i, other)),
        }
    }
    if let Some((digit, _)) = rings.iter().next() {
        return Err(SmilesError::UnclosedRing(*digit));
    }
    if !stack.is_empty() {
        return Err(SmilesError::UnmatchedParen);
    }
    Ok(g)
}

#[allow(clippy::too_many_arguments)]
fn ring_bond(
    g: &mut MoleculeGraph,
    rings: &mut BTreeMap<usize, (usize, Option<u8>)>,
    pending: &mut Option<u8>,
    prev: Option<usize>,
    digit: usize,
    at: usize,
    add_bond: impl Fn(&mut MoleculeGraph, usize, usize, u8),
) -> Result<(), SmilesError> {
    let cur = prev.ok_or(SmilesError::NoCurrentAtom(at))?;
    match rings.remove(&digit) {
        Some((other, open_order)) => {
            let order = pending.take().or(open_order).unwrap_or(1);
            add_bond(g, other, cur, order);
        }
        None => {
            rings.insert(digit, (cur, pending.take()));
        }
    }
    Ok(())
}

fn parse_bracket(inner: &str, at: usize) -> Result<(String, i32), SmilesError> {
    let chars: Vec<char> = inner.chars().collect();
    if chars.is_empty() {
        return Err(SmilesError::UnclosedBracket(at));
    }
    let mut i = 0usize;
    let element = if chars[0] == '*' {
        i = 1;
        "*".to_string()
    } else if chars[0].is_ascii_uppercase() {
        let mut sym = chars[0].to_string();
        i = 1;
        if i < chars.len() && chars[i].is_ascii_lowercase() {
            sym.push(chars[i]);
            i += 1;
        }
        sym
    } else {
        return Err(SmilesError::UnexpectedChar(at, chars[0]));
    };
    // optional hydrogen count: recorded implicitly, not modeled
    if i < chars.len() && chars[i] == 'H' {
        i += 1;
        while i < chars.len() && chars[i].is_ascii_digit() {
            i += 1;
        }
    }
    let mut charge = 0i32;
    while i < chars.len() {
        let sign = match chars[i] {
            '+' => 1,
            '-' => -1,
            other => return Err(SmilesError::UnexpectedChar(at, other)),
        };
        i += 1;
        let mut digits = String::new();
        while i < chars.len() && chars[i].is_ascii_digit() {
            digits.push(chars[i]);
            i += 1;
        }
        charge += sign * digits.parse::<i32>().unwrap_or(1);
    }
    Ok((element, charge))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molecule::MolEdge;

    fn carbon_chain(n: usize) -> MoleculeGraph {
        let mut g = MoleculeGraph::default();
        for i in 0..n {
            g.nodes.push(MolNode::HiddenCarbon {
                pos: Point::new(i as f64 * 30.0, 0.0),
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

    fn carbon_ring(n: usize) -> MoleculeGraph {
        let mut g = carbon_chain(n);
        g.edges.push(MolEdge {
            a: n - 1,
            b: 0,
            kind: BondKind::Single,
        });
        g
    }

    #[test]
    fn propane_is_ccc() {
        assert_eq!(write_smiles(&carbon_chain(3)).unwrap(), "CCC");
    }

    #[test]
    fn cyclohexane_is_a_six_ring() {
        assert_eq!(write_smiles(&carbon_ring(6)).unwrap(), "C1CCCCC1");
    }

    #[test]
    fn disconnected_methanes_join_with_dot() {
        let mut g = MoleculeGraph::default();
        g.nodes.push(MolNode::HiddenCarbon {
            pos: Point::new(0.0, 0.0),
        });
        g.nodes.push(MolNode::HiddenCarbon {
            pos: Point::new(100.0, 0.0),
        });
        assert_eq!(write_smiles(&g).unwrap(), "C.C");
    }

    #[test]
    fn empty_graph_gives_empty_string() {
        assert_eq!(write_smiles(&MoleculeGraph::default()).unwrap(), "");
    }

    #[test]
    fn double_and_triple_bonds_use_symbols() {
        let mut g = carbon_chain(3);
        g.edges[0].kind = BondKind::Double;
        let s = write_smiles(&g).unwrap();
        assert!(s.contains('='), "got {s}");
        let mut g = carbon_chain(3);
        g.edges[1].kind = BondKind::Triple;
        let s = write_smiles(&g).unwrap();
        assert!(s.contains('#'), "got {s}");
    }

    #[test]
    fn wedges_emit_as_single_bonds() {
        let mut g = carbon_chain(3);
        g.edges[0].kind = BondKind::SolidWedge;
        g.edges[1].kind = BondKind::HashedWedge;
        assert_eq!(write_smiles(&g).unwrap(), "CCC");
    }

    #[test]
    fn charges_use_bracket_atoms() {
        let mut g = MoleculeGraph::default();
        g.nodes.push(MolNode::Atom {
            element: "Cl".to_string(),
            charge: -1,
            pos: Point::new(0.0, 0.0),
            bbox: None,
        });
        assert_eq!(write_smiles(&g).unwrap(), "[Cl-]");
    }

    #[test]
    fn read_write_round_trip_is_stable() {
        for s in [
            "CCC",
            "C1CCCCC1",
            "CC(C)C",
            "C1=CC=CC=C1",
            "[Na+].[Cl-]",
            "CC#CC",
            "C1CC2CCC1CC2",
            "ON(=O)C1=CC=CC=C1",
        ] {
            let canon = canonicalize_smiles(s).unwrap();
            let again = canonicalize_smiles(&canon).unwrap();
            assert_eq!(canon, again, "idempotent canonicalization of {s}");
        }
    }

    #[test]
    fn permutation_of_node_ids_gives_identical_string() {
        // relabel cyclohexane nodes under several rotations
        let base = write_smiles(&carbon_ring(6)).unwrap();
        for shift in 1..6 {
            let mut g = MoleculeGraph::default();
            for i in 0..6 {
                g.nodes.push(MolNode::HiddenCarbon {
                    pos: Point::new(((i + shift) % 6) as f64, 0.0),
                });
            }
            for i in 0..6 {
                g.edges.push(MolEdge {
                    a: (i + shift) % 6,
                    b: (i + shift + 1) % 6,
                    kind: BondKind::Single,
                });
            }
            assert_eq!(write_smiles(&g).unwrap(), base);
        }
    }

    #[test]
    fn branch_parse_matches_emission() {
        let g = read_smiles("CC(C)(C)C").unwrap();
        assert_eq!(g.node_count(), 5);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(write_smiles(&g).unwrap(), "CC(C)(C)C");
    }

    #[test]
    fn reader_rejects_garbage() {
        assert!(matches!(
            read_smiles("C$C"),
            Err(SmilesError::UnexpectedChar(1, '$'))
        ));
        assert!(matches!(read_smiles(""), Err(SmilesError::Empty)));
        assert!(matches!(
            read_smiles("C1CC"),
            Err(SmilesError::UnclosedRing(1))
        ));
    }
}
