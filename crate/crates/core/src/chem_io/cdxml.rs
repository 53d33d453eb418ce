//! CDXML serialization: chemical structure together with 2D page positions.
//!
//! The emitted vocabulary is the subset needed to round-trip molecule
//! graphs: `CDXML/page/fragment` containers, `n` nodes with `p` positions,
//! `Element`/`Charge` attributes, nested fragments with an
//! `ExternalConnectionPoint` node for superatom expansions, `t/s` labels,
//! and `b` bonds with `Order` and wedge `Display` attributes.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::{Point, Rect};
use crate::molecule::{Fragment, MolEdge, MolNode, MoleculeGraph};
use crate::visual::BondKind;

#[derive(Debug, Error, PartialEq)]
pub enum CdxmlError {
    #[error("offset {0}: {1}")]
    Syntax(usize, String),
    #[error("offset {0}: unexpected closing tag {1:?}")]
    UnexpectedClose(usize, String),
    #[error("bond references missing node id {0}")]
    DanglingBond(u32),
    #[error("node {0}: {1}")]
    BadNode(u32, String),
    #[error("document contains no fragment")]
    NoFragment,
}

const ELEMENTS: [(&str, u32); 30] = [
    ("H", 1),
    ("He", 2),
    ("Li", 3),
    ("Be", 4),
    ("B", 5),
    ("C", 6),
    ("N", 7),
    ("O", 8),
    ("F", 9),
    ("Ne", 10),
    ("Na", 11),
    ("Mg", 12),
    ("Al", 13),
    ("Si", 14),
    ("P", 15),
    ("S", 16),
    ("Cl", 17),
    ("Ar", 18),
    ("K", 19),
    ("Ca", 20),
    ("Se", 34),
    ("Br", 35),
    ("Kr", 36),
    ("Rb", 37),
    ("Sr", 38),
    ("Sn", 50),
    ("I", 53),
    ("Xe", 54),
    ("Fe", 26),
    ("Zn", 30),
];

fn atomic_number(symbol: &str) -> Option<u32> {
    ELEMENTS.iter().find(|(s, _)| *s == symbol).map(|(_, z)| *z)
}

fn symbol_of(z: u32) -> Option<&'static str> {
    ELEMENTS.iter().find(|(_, n)| *n == z).map(|(s, _)| *s)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
}

fn unescape(s: &str) -> String {
    s.replace("&quot;", "\"")
        .replace("&gt;", ">")
        .replace("&lt;", "<")
        .replace("&amp;", "&")
}

fn fmt_pos(p: Point) -> String {
    format!("{:?} {:?}", p.x, p.y)
}

struct IdGen(u32);

impl IdGen {
    fn next(&mut self) -> u32 {
        self.0 += 1;
        self.0
    }
}

fn wedge_display(kind: BondKind) -> Option<&'static str> {
    match kind {
        BondKind::SolidWedge => Some("WedgeBegin"),
        BondKind::HashedWedge => Some("WedgedHashBegin"),
        BondKind::Wavy => Some("Wavy"),
        _ => None,
    }
}

fn display_wedge(s: &str) -> Option<BondKind> {
    match s {
        "WedgeBegin" => Some(BondKind::SolidWedge),
        "WedgedHashBegin" => Some(BondKind::HashedWedge),
        "Wavy" => Some(BondKind::Wavy),
        _ => None,
    }
}

fn write_node(out: &mut String, node: &MolNode, id: u32, ids: &mut IdGen, indent: &str) {
    match node {
        MolNode::HiddenCarbon { pos } => {
            out.push_str(&format!("{indent}<n id=\"{id}\" p=\"{}\"/>\n", fmt_pos(*pos)));
        }
        MolNode::Atom {
            element,
            charge,
            pos,
            bbox,
        } => {
            out.push_str(&format!("{indent}<n id=\"{id}\" p=\"{}\"", fmt_pos(*pos)));
            match atomic_number(element) {
                Some(z) => out.push_str(&format!(" Element=\"{z}\"")),
                None => out.push_str(&format!(" Label=\"{}\"", escape(element))),
            }
            if *charge != 0 {
                out.push_str(&format!(" Charge=\"{charge}\""));
            }
            if let Some(b) = bbox {
                out.push_str(&format!(
                    " BoundingBox=\"{:?} {:?} {:?} {:?}\"",
                    b.min.x, b.min.y, b.max.x, b.max.y
                ));
            }
            out.push_str("/>\n");
        }
        MolNode::Superatom {
            name,
            charge,
            pos,
            bbox,
            expansion,
        } => {
            out.push_str(&format!(
                "{indent}<n id=\"{id}\" p=\"{}\" NodeType=\"Fragment\"",
                fmt_pos(*pos)
            ));
            if *charge != 0 {
                out.push_str(&format!(" Charge=\"{charge}\""));
            }
            if let Some(b) = bbox {
                out.push_str(&format!(
                    " BoundingBox=\"{:?} {:?} {:?} {:?}\"",
                    b.min.x, b.min.y, b.max.x, b.max.y
                ));
            }
            out.push_str(">\n");
            if let Some(frag) = expansion {
                write_fragment_graph(out, frag, ids, &format!("{indent} "));
            }
            out.push_str(&format!("{indent} <t><s>{}</s></t>\n", escape(name)));
            out.push_str(&format!("{indent}</n>\n"));
        }
    }
}

fn write_fragment_graph(out: &mut String, frag: &Fragment, ids: &mut IdGen, indent: &str) {
    let fid = ids.next();
    out.push_str(&format!("{indent}<fragment id=\"{fid}\">\n"));
    let node_ids: Vec<u32> = frag.graph.nodes.iter().map(|_| ids.next()).collect();
    for (i, node) in frag.graph.nodes.iter().enumerate() {
        write_node(out, node, node_ids[i], ids, &format!("{indent} "));
    }
    // the external connection point marks the attachment atom
    let ecp = ids.next();
    out.push_str(&format!(
        "{indent} <n id=\"{ecp}\" NodeType=\"ExternalConnectionPoint\"/>\n"
    ));
    out.push_str(&format!(
        "{indent} <b B=\"{ecp}\" E=\"{}\" Order=\"1\"/>\n",
        node_ids[frag.attach]
    ));
    for e in &frag.graph.edges {
        write_bond(out, e, &node_ids, &format!("{indent} "));
    }
    out.push_str(&format!("{indent}</fragment>\n"));
}

fn write_bond(out: &mut String, e: &MolEdge, node_ids: &[u32], indent: &str) {
    out.push_str(&format!(
        "{indent}<b B=\"{}\" E=\"{}\" Order=\"{}\"",
        node_ids[e.a],
        node_ids[e.b],
        e.kind.order()
    ));
    if let Some(display) = wedge_display(e.kind) {
        out.push_str(&format!(" Display=\"{display}\""));
    }
    out.push_str("/>\n");
}

/// Serializes a molecule graph as CDXML, preserving page positions so the
/// recognized molecule can be placed back where it was drawn.
pub fn write_cdxml(g: &MoleculeGraph) -> String {
    let bounds = if g.nodes.is_empty() {
        Rect::new(Point::new(0.0, 0.0), Point::new(0.0, 0.0))
    } else {
        let pts: Vec<Point> = g.nodes.iter().map(|n| n.pos()).collect();
        Rect::hull(pts.iter()).expand(10.0)
    };
    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" ?>\n");
    out.push_str(&format!(
        "<CDXML BoundingBox=\"{:?} {:?} {:?} {:?}\">\n",
        bounds.min.x, bounds.min.y, bounds.max.x, bounds.max.y
    ));
    let mut ids = IdGen(0);
    let page = ids.next();
    out.push_str(&format!(" <page id=\"{page}\">\n"));
    let fid = ids.next();
    out.push_str(&format!("  <fragment id=\"{fid}\">\n"));
    let node_ids: Vec<u32> = g.nodes.iter().map(|_| ids.next()).collect();
    for (i, node) in g.nodes.iter().enumerate() {
        write_node(&mut out, node, node_ids[i], &mut ids, "   ");
    }
    for e in &g.edges {
        write_bond(&mut out, e, &node_ids, "   ");
    }
    out.push_str("  </fragment>\n </page>\n</CDXML>\n");
    out
}

// ---------------------------------------------------------------------------
// minimal XML pull parser for the subset emitted above

#[derive(Debug, Clone, PartialEq)]
enum XmlEvent {
    Open {
        offset: usize,
        name: String,
        attrs: Vec<(String, String)>,
        self_closing: bool,
    },
    Close {
        offset: usize,
        name: String,
    },
    Text(String),
}

fn lex_xml(text: &str) -> Result<Vec<XmlEvent>, CdxmlError> {
    let bytes = text.as_bytes();
    let mut events = Vec::new();
    let mut i = 0usize;
    while i < bytes.len() {
        if bytes[i] == b'<' {
            let close = text[i..]
                .find('>')
                .map(|k| i + k)
                .ok_or_else(|| CdxmlError::Syntax(i, "unterminated tag".to_string()))?;
            let inner = &text[i + 1..close];
            if inner.starts_with('?') || inner.starts_with('!') {
                i = close + 1;
                continue; // declaration, doctype, comment
            }
            if let Some(name) = inner.strip_prefix('/') {
                events.push(XmlEvent::Close {
                    offset: i,
                    name: name.trim().to_string(),
                });
            } else {
                let self_closing = inner.ends_with('/');
                let body = inner.trim_end_matches('/');
                let mut parts = body.splitn(2, char::is_whitespace);
                let name = parts
                    .next()
                    .filter(|n| !n.is_empty())
                    .ok_or_else(|| CdxmlError::Syntax(i, "empty tag name".to_string()))?
                    .to_string();
                let attrs = match parts.next() {
                    Some(rest) => parse_attrs(rest, i)?,
                    None => Vec::new(),
                };
                events.push(XmlEvent::Open {
                    offset: i,
                    name,
                    attrs,
                    self_closing,
                });
            }
            i = close + 1;
        } else {
            let next = text[i..].find('<').map(|k| i + k).unwrap_or(bytes.len());
            let chunk = text[i..next].trim();
            if !chunk.is_empty() {
                events.push(XmlEvent::Text(unescape(chunk)));
            }
            i = next;
        }
    }
    Ok(events)
}

fn parse_attrs(s: &str, offset: usize) -> Result<Vec<(String, String)>, CdxmlError> {
    let mut attrs = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0usize;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < chars.len() && chars[i] != '=' && !chars[i].is_whitespace() {
            i += 1;
        }
        let name: String = chars[start..i].iter().collect();
        while i < chars.len() && chars[i].is_whitespace() {
            i += 1;
        }
        if i >= chars.len() || chars[i] != '=' {
            return Err(CdxmlError::Syntax(offset, format!("attribute {name} has no value")));
        }
        i += 1;
        while i < chars.len() && chars[i].is_whitespace() {
            i += 1;
        }
        if i >= chars.len() || chars[i] != '"' {
            return Err(CdxmlError::Syntax(offset, format!("attribute {name} is unquoted")));
        }
        i += 1;
        let vstart = i;
        while i < chars.len() && chars[i] != '"' {
            i += 1;
        }
        if i >= chars.len() {
            return Err(CdxmlError::Syntax(offset, format!("attribute {name} is unterminated")));
        }
        let value: String = chars[vstart..i].iter().collect();
        attrs.push((name, unescape(&value)));
        i += 1;
    }
    Ok(attrs)
}

#[derive(Debug, Default)]
struct RawFragment {
    nodes: Vec<RawNode>,
    bonds: Vec<RawBond>,
}

#[derive(Debug)]
struct RawNode {
    id: u32,
    pos: Point,
    element: Option<u32>,
    label: Option<String>,
    charge: i32,
    bbox: Option<Rect>,
    node_type: Option<String>,
    text: Option<String>,
    inner: Option<RawFragment>,
}

#[derive(Debug)]
struct RawBond {
    begin: u32,
    end: u32,
    order: u8,
    display: Option<String>,
}

struct Parser {
    events: Vec<XmlEvent>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&XmlEvent> {
        self.events.get(self.pos)
    }

    fn next(&mut self) -> Option<XmlEvent> {
        let e = self.events.get(self.pos).cloned();
        self.pos += 1;
        e
    }

    fn parse_fragment(&mut self) -> Result<RawFragment, CdxmlError> {
        let mut frag = RawFragment::default();
        loop {
            match self.next() {
                Some(XmlEvent::Open {
                    offset,
                    name,
                    attrs,
                    self_closing,
                }) => match name.as_str() {
                    "n" => frag.nodes.push(self.parse_node(offset, attrs, self_closing)?),
                    "b" => frag.bonds.push(parse_bond(offset, &attrs)?),
                    _ => {
                        if !self_closing {
                            self.skip_element(&name)?;
                        }
                    }
                },
                Some(XmlEvent::Close { name, .. }) if name == "fragment" => return Ok(frag),
                Some(XmlEvent::Close { offset, name }) => {
                    return Err(CdxmlError::UnexpectedClose(offset, name))
                }
                Some(XmlEvent::Text(_)) => {}
                None => {
                    return Err(CdxmlError::Syntax(0, "unterminated fragment".to_string()))
                }
            }
        }
    }

    fn parse_node(
        &mut self,
        offset: usize,
        attrs: Vec<(String, String)>,
        self_closing: bool,
    ) -> Result<RawNode, CdxmlError> {
        let get = |key: &str| attrs.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone());
        let id: u32 = get("id")
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| CdxmlError::Syntax(offset, "node without id".to_string()))?;
        let pos = match get("p") {
            Some(p) => parse_point(&p, offset)?,
            None => Point::new(0.0, 0.0),
        };
        let mut node = RawNode {
            id,
            pos,
            element: get("Element").and_then(|v| v.parse().ok()),
            label: get("Label"),
            charge: get("Charge").and_then(|v| v.parse().ok()).unwrap_or(0),
            bbox: match get("BoundingBox") {
                Some(b) => Some(parse_rect(&b, offset)?),
                None => None,
            },
            node_type: get("NodeType"),
            text: None,
            inner: None,
        };
        if self_closing {
            return Ok(node);
        }
        loop {
            match self.next() {
                Some(XmlEvent::Open {
                    name, self_closing, ..
                }) => match name.as_str() {
                    "fragment" => node.inner = Some(self.parse_fragment()?),
                    "t" => node.text = Some(self.parse_label_text()?),
                    _ => {
                        if !self_closing {
                            self.skip_element(&name)?;
                        }
                    }
                },
                Some(XmlEvent::Close { name, .. }) if name == "n" => return Ok(node),
                Some(XmlEvent::Close { offset, name }) => {
                    return Err(CdxmlError::UnexpectedClose(offset, name))
                }
                Some(XmlEvent::Text(_)) => {}
                None => return Err(CdxmlError::Syntax(offset, "unterminated node".to_string())),
            }
        }
    }

    fn parse_label_text(&mut self) -> Result<String, CdxmlError> {
        let mut text = String::new();
        loop {
            match self.next() {
                Some(XmlEvent::Text(t)) => text.push_str(&t),
                Some(XmlEvent::Close { name, .. }) if name == "t" => return Ok(text),
                Some(XmlEvent::Open { name, self_closing, .. }) => {
                    if name != "s" && !self_closing {
                        self.skip_element(&name)?;
                    }
                }
                Some(XmlEvent::Close { .. }) => {}
                None => return Err(CdxmlError::Syntax(0, "unterminated label".to_string())),
            }
        }
    }

    fn skip_element(&mut self, name: &str) -> Result<(), CdxmlError> {
        let mut depth = 1;
        while depth > 0 {
            match self.next() {
                Some(XmlEvent::Open {
                    name: n,
                    self_closing,
                    ..
                }) => {
                    if !self_closing && n == name {
                        depth += 1;
                    }
                }
                Some(XmlEvent::Close { name: n, .. }) if n == name => depth -= 1,
                Some(_) => {}
                None => {
                    return Err(CdxmlError::Syntax(0, format!("unterminated {name} element")))
                }
            }
        }
        Ok(())
    }
}

fn parse_bond(offset: usize, attrs: &[(String, String)]) -> Result<RawBond, CdxmlError> {
    let get = |key: &str| attrs.iter().find(|(k, _)| k == key).map(|(_, v)| v.clone());
    let begin: u32 = get("B")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| CdxmlError::Syntax(offset, "bond without B".to_string()))?;
    let end: u32 = get("E")
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| CdxmlError::Syntax(offset, "bond without E".to_string()))?;
    let order: u8 = get("Order").and_then(|v| v.parse().ok()).unwrap_or(1);
    Ok(RawBond {
        begin,
        end,
        order,
        display: get("Display"),
    })
}

fn parse_point(s: &str, offset: usize) -> Result<Point, CdxmlError> {
    let mut it = s.split_whitespace();
    let (Some(x), Some(y)) = (it.next(), it.next()) else {
        return Err(CdxmlError::Syntax(offset, format!("bad point {s:?}")));
    };
    match (x.parse::<f64>(), y.parse::<f64>()) {
        (Ok(x), Ok(y)) => Ok(Point::new(x, y)),
        _ => Err(CdxmlError::Syntax(offset, format!("bad point {s:?}"))),
    }
}

fn parse_rect(s: &str, offset: usize) -> Result<Rect, CdxmlError> {
    let vals: Vec<f64> = s
        .split_whitespace()
        .map(|v| v.parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CdxmlError::Syntax(offset, format!("bad bounding box {s:?}")))?;
    if vals.len() != 4 {
        return Err(CdxmlError::Syntax(offset, format!("bad bounding box {s:?}")));
    }
    Ok(Rect::new(
        Point::new(vals[0], vals[1]),
        Point::new(vals[2], vals[3]),
    ))
}

fn raw_to_graph(frag: &RawFragment) -> Result<MoleculeGraph, CdxmlError> {
    let mut g = MoleculeGraph::default();
    let mut index_of: BTreeMap<u32, usize> = BTreeMap::new();
    let mut ecp_ids: Vec<u32> = Vec::new();
    for raw in &frag.nodes {
        if raw.node_type.as_deref() == Some("ExternalConnectionPoint") {
            ecp_ids.push(raw.id);
            continue;
        }
        let node = if raw.node_type.as_deref() == Some("Fragment") {
            let name = raw
                .text
                .clone()
                .ok_or_else(|| CdxmlError::BadNode(raw.id, "fragment node without label".into()))?;
            let expansion = match &raw.inner {
                Some(inner) => Some(raw_fragment_to_expansion(inner)?),
                None => None,
            };
            MolNode::Superatom {
                name,
                charge: raw.charge,
                pos: raw.pos,
                bbox: raw.bbox,
                expansion,
            }
        } else if let Some(label) = &raw.label {
            MolNode::Atom {
                element: label.clone(),
                charge: raw.charge,
                pos: raw.pos,
                bbox: raw.bbox,
            }
        } else if let Some(z) = raw.element {
            let symbol = symbol_of(z)
                .ok_or_else(|| CdxmlError::BadNode(raw.id, format!("unknown element {z}")))?;
            MolNode::Atom {
                element: symbol.to_string(),
                charge: raw.charge,
                pos: raw.pos,
                bbox: raw.bbox,
            }
        } else {
            MolNode::HiddenCarbon { pos: raw.pos }
        };
        index_of.insert(raw.id, g.nodes.len());
        g.nodes.push(node);
    }
    for bond in &frag.bonds {
        if ecp_ids.contains(&bond.begin) || ecp_ids.contains(&bond.end) {
            continue; // attachment marker bonds are structural metadata
        }
        let a = *index_of
            .get(&bond.begin)
            .ok_or(CdxmlError::DanglingBond(bond.begin))?;
        let b = *index_of
            .get(&bond.end)
            .ok_or(CdxmlError::DanglingBond(bond.end))?;
        let kind = match bond.display.as_deref().and_then(display_wedge) {
            Some(k) => k,
            None => match bond.order {
                2 => BondKind::Double,
                3 => BondKind::Triple,
                _ => BondKind::Single,
            },
        };
        g.edges.push(MolEdge { a, b, kind });
    }
    Ok(g)
}

fn raw_fragment_to_expansion(frag: &RawFragment) -> Result<Fragment, CdxmlError> {
    let graph = raw_to_graph(frag)?;
    // the attachment atom is the one bonded to the external connection point
    let ecp: Vec<u32> = frag
        .nodes
        .iter()
        .filter(|n| n.node_type.as_deref() == Some("ExternalConnectionPoint"))
        .map(|n| n.id)
        .collect();
    let mut attach = 0usize;
    if let Some(ecp_id) = ecp.first() {
        let non_ecp_ids: Vec<u32> = frag
            .nodes
            .iter()
            .filter(|n| n.node_type.as_deref() != Some("ExternalConnectionPoint"))
            .map(|n| n.id)
            .collect();
        for bond in &frag.bonds {
            let other = if bond.begin == *ecp_id {
                Some(bond.end)
            } else if bond.end == *ecp_id {
                Some(bond.begin)
            } else {
                None
            };
            if let Some(other) = other {
                if let Some(idx) = non_ecp_ids.iter().position(|&id| id == other) {
                    attach = idx;
                    break;
                }
            }
        }
    }
    Ok(Fragment { graph, attach })
}

/// Reads a document produced by [`write_cdxml`] (or structurally
/// equivalent) back into a molecule graph.
pub fn read_cdxml(text: &str) -> Result<MoleculeGraph, CdxmlError> {
    let events = lex_xml(text)?;
    let mut parser = Parser { events, pos: 0 };
    // descend to the first top-level fragment
    while let Some(event) = parser.peek() {
        match event {
            XmlEvent::Open { name, .. } if name == "fragment" => {
                parser.next();
                let frag = parser.parse_fragment()?;
                return raw_to_graph(&frag);
            }
            _ => {
                parser.next();
            }
        }
    }
    Err(CdxmlError::NoFragment)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn propane() -> MoleculeGraph {
        let mut g = MoleculeGraph::default();
        for i in 0..3 {
            g.nodes.push(MolNode::HiddenCarbon {
                pos: Point::new(i as f64 * 30.0, (i % 2) as f64 * 20.0),
            });
        }
        g.edges.push(MolEdge {
            a: 0,
            b: 1,
            kind: BondKind::Single,
        });
        g.edges.push(MolEdge {
            a: 1,
            b: 2,
            kind: BondKind::Single,
        });
        g
    }

    #[test]
    fn propane_has_three_nodes_two_order_one_bonds() {
        let xml = write_cdxml(&propane());
        assert_eq!(xml.matches("<n ").count(), 3);
        assert_eq!(xml.matches("Order=\"1\"").count(), 2);
        let back = read_cdxml(&xml).unwrap();
        assert_eq!(back.node_count(), 3);
        assert_eq!(back.edge_count(), 2);
        for (a, b) in back.nodes.iter().zip(propane().nodes.iter()) {
            assert!(a.pos().distance(&b.pos()) < 1e-6);
        }
    }

    #[test]
    fn empty_graph_yields_empty_fragment_document() {
        let xml = write_cdxml(&MoleculeGraph::default());
        assert!(xml.contains("<fragment"));
        let back = read_cdxml(&xml).unwrap();
        assert_eq!(back.node_count(), 0);
    }

    #[test]
    fn dangling_bond_id_is_an_error() {
        let xml = "<CDXML><page><fragment id=\"1\">\n<n id=\"2\" p=\"0.0 0.0\"/>\n<b B=\"2\" E=\"9\" Order=\"1\"/>\n</fragment></page></CDXML>";
        assert_eq!(read_cdxml(xml).unwrap_err(), CdxmlError::DanglingBond(9));
    }

    #[test]
    fn wedge_display_round_trips_direction() {
        let mut g = propane();
        g.edges[0].kind = BondKind::SolidWedge;
        g.edges[1].kind = BondKind::HashedWedge;
        let xml = write_cdxml(&g);
        assert!(xml.contains("Display=\"WedgeBegin\""));
        assert!(xml.contains("Display=\"WedgedHashBegin\""));
        let back = read_cdxml(&xml).unwrap();
        assert_eq!(back.edges[0].kind, BondKind::SolidWedge);
        assert_eq!(back.edges[0].a, 0);
        assert_eq!(back.edges[0].b, 1);
    }

    #[test]
    fn charged_atom_round_trips() {
        let mut g = MoleculeGraph::default();
        g.nodes.push(MolNode::Atom {
            element: "Cl".into(),
            charge: -1,
            pos: Point::new(5.5, 6.25),
            bbox: Some(Rect::new(Point::new(2.0, 2.0), Point::new(9.0, 10.5))),
        });
        let back = read_cdxml(&write_cdxml(&g)).unwrap();
        assert_eq!(back.nodes, g.nodes);
    }

    #[test]
    fn nested_superatom_fragment_round_trips() {
        let dict = crate::molecule::AbbreviationDict::shipped();
        let mut g = MoleculeGraph::default();
        g.nodes.push(MolNode::HiddenCarbon {
            pos: Point::new(0.0, 0.0),
        });
        g.nodes.push(MolNode::Superatom {
            name: "NO2".into(),
            charge: 0,
            pos: Point::new(30.0, 0.0),
            bbox: Some(Rect::new(Point::new(27.0, -5.0), Point::new(48.0, 5.0))),
            expansion: None,
        });
        g.edges.push(MolEdge {
            a: 0,
            b: 1,
            kind: BondKind::Single,
        });
        let (g, _) = crate::molecule::expand_abbreviations(g, &dict);
        let xml = write_cdxml(&g);
        assert!(xml.contains("NodeType=\"Fragment\""));
        assert!(xml.contains("<s>NO2</s>"));
        assert!(xml.contains("ExternalConnectionPoint"));
        let back = read_cdxml(&xml).unwrap();
        assert_eq!(back.node_count(), 2);
        match &back.nodes[1] {
            MolNode::Superatom {
                name, expansion, ..
            } => {
                assert_eq!(name, "NO2");
                let frag = expansion.as_ref().expect("expansion preserved");
                assert_eq!(frag.graph.node_count(), 3);
                assert_eq!(frag.graph.edge_count(), 2);
                assert!(matches!(
                    &frag.graph.nodes[frag.attach],
                    MolNode::Atom { element, .. } if element == "N"
                ));
            }
            other => panic!("expected superatom, got {other:?}"),
        }
    }
}
