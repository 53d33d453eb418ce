//! Label graph (Lg) files: objects, relationships, and optional primitive
//! contours.
//!
//! Line grammar:
//! ```text
//! O, <object id>, <label>, <confidence>, <primitive id>...
//! R, <object id>, <object id>, <label>, <confidence>
//! #contours
//! # <primitive id>, <x> <y>, <x> <y>, ...
//! ```
//! Lines starting with `#` are comments, except that everything after a
//! literal `#contours` line is the contour block. MERGE relationships are
//! implicit between all primitive pairs within one object.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geometry::{Point, Rect};
use crate::molecule::{parse_charged, is_element_symbol, MolEdge, MolNode, MoleculeGraph};
use crate::visual::{BondKind, TokenGraph, TokenNode};

#[derive(Debug, Error, PartialEq)]
pub enum LgError {
    #[error("line {0}: expected at least {1} comma-separated fields")]
    FieldCount(usize, usize),
    #[error("line {0}: bad number {1:?}")]
    BadNumber(usize, String),
    #[error("line {0}: unknown record type {1:?}")]
    UnknownRecord(usize, String),
    #[error("relation references undeclared object {0:?}")]
    DanglingRelation(String),
    #[error("primitive {0:?} appears in more than one object")]
    PrimitiveReused(String),
    #[error("unknown bond label {0:?}")]
    UnknownBondLabel(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct LgObject {
    pub id: String,
    pub label: String,
    pub confidence: f64,
    pub prims: Vec<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LgRelation {
    pub a: String,
    pub b: String,
    pub label: String,
    pub confidence: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct LgFile {
    pub objects: Vec<LgObject>,
    pub relations: Vec<LgRelation>,
    /// Primitive id to contour points.
    pub contours: Vec<(String, Vec<Point>)>,
}

pub fn write_lg(lg: &LgFile) -> String {
    let mut out = String::from("# Label graph\n");
    for o in &lg.objects {
        out.push_str(&format!(
            "O, {}, {}, {:?}, {}\n",
            o.id,
            o.label,
            o.confidence,
            o.prims.join(", ")
        ));
    }
    for r in &lg.relations {
        out.push_str(&format!(
            "R, {}, {}, {}, {:?}\n",
            r.a, r.b, r.label, r.confidence
        ));
    }
    if !lg.contours.is_empty() {
        out.push_str("#contours\n");
        for (prim, points) in &lg.contours {
            let pts: Vec<String> = points.iter().map(|p| format!("{:?} {:?}", p.x, p.y)).collect();
            out.push_str(&format!("# {}, {}\n", prim, pts.join(", ")));
        }
    }
    out
}

pub fn read_lg(text: &str) -> Result<LgFile, LgError> {
    let mut lg = LgFile::default();
    let mut in_contours = false;
    let mut seen_prims: BTreeMap<String, String> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if line == "#contours" {
            in_contours = true;
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if in_contours {
                let fields: Vec<&str> = rest.split(',').map(str::trim).collect();
                if fields.len() < 2 {
                    return Err(LgError::FieldCount(lineno, 2));
                }
                let prim = fields[0].to_string();
                let mut points = Vec::new();
                for f in &fields[1..] {
                    let mut it = f.split_whitespace();
                    let (Some(xs), Some(ys)) = (it.next(), it.next()) else {
                        return Err(LgError::BadNumber(lineno, f.to_string()));
                    };
                    let x: f64 = xs
                        .parse()
                        .map_err(|_| LgError::BadNumber(lineno, xs.to_string()))?;
                    let y: f64 = ys
                        .parse()
                        .map_err(|_| LgError::BadNumber(lineno, ys.to_string()))?;
                    points.push(Point::new(x, y));
                }
                lg.contours.push((prim, points));
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        match fields[0] {
            "O" => {
                if fields.len() < 4 {
                    return Err(LgError::FieldCount(lineno, 4));
                }
                let confidence: f64 = fields[3]
                    .parse()
                    .map_err(|_| LgError::BadNumber(lineno, fields[3].to_string()))?;
                let prims: Vec<String> = fields[4..].iter().map(|s| s.to_string()).collect();
                for p in &prims {
                    if let Some(owner) = seen_prims.insert(p.clone(), fields[1].to_string()) {
                        if owner != fields[1] {
                            return Err(LgError::PrimitiveReused(p.clone()));
                        }
                    }
                }
                lg.objects.push(LgObject {
                    id: fields[1].to_string(),
                    label: fields[2].to_string(),
                    confidence,
                    prims,
                });
            }
            "R" => {
                if fields.len() < 5 {
                    return Err(LgError::FieldCount(lineno, 5));
                }
                let confidence: f64 = fields[4]
                    .parse()
                    .map_err(|_| LgError::BadNumber(lineno, fields[4].to_string()))?;
                lg.relations.push(LgRelation {
                    a: fields[1].to_string(),
                    b: fields[2].to_string(),
                    label: fields[3].to_string(),
                    confidence,
                });
            }
            other => return Err(LgError::UnknownRecord(lineno, other.to_string())),
        }
    }
    for r in &lg.relations {
        for id in [&r.a, &r.b] {
            if !lg.objects.iter().any(|o| &o.id == id) {
                return Err(LgError::DanglingRelation(id.clone()));
            }
        }
    }
    Ok(lg)
}

/// Serializes a molecular structure graph: one object per node labeled with
/// its element/name (charge suffixed), one relation per bond, contours
/// carrying each node's drawn extent for spatial alignment.
pub fn molecule_to_lg(g: &MoleculeGraph) -> LgFile {
    let mut lg = LgFile::default();
    for (i, node) in g.nodes.iter().enumerate() {
        lg.objects.push(LgObject {
            id: format!("Obj{i}"),
            label: node.label(),
            confidence: 1.0,
            prims: vec![i.to_string()],
        });
        let contour = match node.bbox() {
            Some(b) => b.corners().to_vec(),
            None => vec![node.pos()],
        };
        lg.contours.push((i.to_string(), contour));
    }
    for e in &g.edges {
        // undirected bonds normalize to (low, high); wedges keep direction
        let (a, b) = if e.directed() || e.a < e.b {
            (e.a, e.b)
        } else {
            (e.b, e.a)
        };
        lg.relations.push(LgRelation {
            a: format!("Obj{a}"),
            b: format!("Obj{b}"),
            label: e.kind.label().to_string(),
            confidence: 1.0,
        });
    }
    lg
}

/// Reconstructs a molecular structure graph from an Lg file: object labels
/// become atoms or superatoms, relations become bonds, contours provide
/// positions and extents.
pub fn lg_to_molecule(lg: &LgFile) -> Result<MoleculeGraph, LgError> {
    let contour_of: BTreeMap<&str, &Vec<Point>> = lg
        .contours
        .iter()
        .map(|(id, pts)| (id.as_str(), pts))
        .collect();
    let mut g = MoleculeGraph::default();
    let mut index_of: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, o) in lg.objects.iter().enumerate() {
        let points: Vec<Point> = o
            .prims
            .iter()
            .filter_map(|p| contour_of.get(p.as_str()))
            .flat_map(|pts| pts.iter().copied())
            .collect();
        let (pos, bbox) = if points.is_empty() {
            (Point::new(0.0, 0.0), None)
        } else if points.len() == 1 {
            (points[0], None)
        } else {
            let hull = Rect::hull(points.iter());
            (hull.center(), Some(hull))
        };
        let (base, charge) = parse_charged(&o.label);
        let node = if is_element_symbol(&base) {
            MolNode::Atom {
                element: base,
                charge,
                pos,
                bbox,
            }
        } else {
            MolNode::Superatom {
                name: base,
                charge,
                pos,
                bbox,
                expansion: None,
            }
        };
        g.nodes.push(node);
        index_of.insert(&o.id, i);
    }
    for r in &lg.relations {
        let a = *index_of
            .get(r.a.as_str())
            .ok_or_else(|| LgError::DanglingRelation(r.a.clone()))?;
        let b = *index_of
            .get(r.b.as_str())
            .ok_or_else(|| LgError::DanglingRelation(r.b.clone()))?;
        let kind =
            BondKind::from_label(&r.label).ok_or_else(|| LgError::UnknownBondLabel(r.label.clone()))?;
        g.edges.push(MolEdge { a, b, kind });
    }
    Ok(g)
}

/// Serializes a tokenized visual graph: objects carry their member
/// primitives, every edge is a CONNECTED relation, contours carry the
/// primitive geometry.
pub fn token_graph_to_lg(tg: &TokenGraph, prims: &[crate::primitive::Primitive]) -> LgFile {
    let mut lg = LgFile::default();
    for (i, node) in tg.nodes.iter().enumerate() {
        let (label, members): (String, Vec<usize>) = match node {
            TokenNode::Name { text, chars, .. } => (text.clone(), chars.clone()),
            TokenNode::Bond {
                kind,
                line_count,
                members,
                ..
            } => {
                let label = kind
                    .map(|k| k.label().to_string())
                    .unwrap_or_else(|| format!("Lines{line_count}"));
                (label, members.clone())
            }
            TokenNode::Charge { sign, member, .. } => {
                ((if *sign < 0 { "-" } else { "+" }).to_string(), vec![*member])
            }
            TokenNode::Opaque { member } => ("Polygon".to_string(), vec![*member]),
        };
        lg.objects.push(LgObject {
            id: format!("Obj{i}"),
            label,
            confidence: 1.0,
            prims: members.iter().map(|m| m.to_string()).collect(),
        });
    }
    for &(a, b) in &tg.edges {
        lg.relations.push(LgRelation {
            a: format!("Obj{a}"),
            b: format!("Obj{b}"),
            label: "CONNECTED".to_string(),
            confidence: 1.0,
        });
    }
    for p in prims {
        let points: Vec<Point> = match &p.shape {
            crate::primitive::PrimShape::Line(s) => vec![s.a, s.b],
            crate::primitive::PrimShape::Polyline(pl) => pl.vertices().to_vec(),
            crate::primitive::PrimShape::Polygon(poly) => poly.ring().to_vec(),
            crate::primitive::PrimShape::Char { bbox, .. } => bbox.corners().to_vec(),
            crate::primitive::PrimShape::SolidWedge { outline, .. } => outline.ring().to_vec(),
            crate::primitive::PrimShape::PlusCharge { first, second, .. } => {
                vec![first.a, first.b, second.a, second.b]
            }
            crate::primitive::PrimShape::NegativeCharge { seg, .. } => vec![seg.a, seg.b],
        };
        lg.contours.push((p.id.to_string(), points));
    }
    lg
}
