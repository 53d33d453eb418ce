//! Grouping primitives into name, bond, and charge tokens, then labeling
//! bond tokens by their line structure.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::geometry::{closest_distance, is_parallel, Point, Rect, Segment, Shape};
use crate::params::ParserParams;
use crate::primitive::{PrimId, PrimKind, PrimShape};

use super::PrimitiveGraph;

/// Bond classification used from tokenization onward. `Wavy` is part of the
/// evaluation label vocabulary but never produced by this parser.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BondKind {
    Single,
    Double,
    Triple,
    SolidWedge,
    HashedWedge,
    Wavy,
}

impl BondKind {
    pub fn label(&self) -> &'static str {
        match self {
            BondKind::Single => "Single",
            BondKind::Double => "Double",
            BondKind::Triple => "Triple",
            BondKind::SolidWedge => "SolidWedge",
            BondKind::HashedWedge => "HashedWedge",
            BondKind::Wavy => "Wavy",
        }
    }

    pub fn from_label(s: &str) -> Option<BondKind> {
        Some(match s {
            "Single" => BondKind::Single,
            "Double" => BondKind::Double,
            "Triple" => BondKind::Triple,
            "SolidWedge" => BondKind::SolidWedge,
            "HashedWedge" => BondKind::HashedWedge,
            "Wavy" => BondKind::Wavy,
            _ => return None,
        })
    }

    /// Wedge bonds are directed from their narrow start to their wide end.
    pub fn is_directed(&self) -> bool {
        matches!(self, BondKind::SolidWedge | BondKind::HashedWedge)
    }

    pub fn order(&self) -> u8 {
        match self {
            BondKind::Double => 2,
            BondKind::Triple => 3,
            _ => 1,
        }
    }
}

/// A node of the tokenized visual graph.
#[derive(Debug, Clone, PartialEq)]
pub enum TokenNode {
    Name {
        /// Reading-order text of the merged character group.
        text: String,
        bbox: Rect,
        /// Member characters in reading order.
        chars: Vec<PrimId>,
        /// Connection point: the member character nearest to an incident bond.
        attach: Point,
    },
    Bond {
        /// None until `label_bonds` runs.
        kind: Option<BondKind>,
        line_count: usize,
        members: Vec<PrimId>,
        /// Member line geometry, for bond labeling.
        lines: Vec<Segment>,
        /// Canonical endpoints; ordered (start, end) for wedges.
        start: Point,
        end: Point,
    },
    Charge {
        sign: i8,
        center: Point,
        member: PrimId,
        /// Name token this charge decorates.
        bound_name: Option<usize>,
    },
    /// A primitive that plays no structural role (stray polygons).
    Opaque { member: PrimId },
}

impl TokenNode {
    pub fn is_bond(&self) -> bool {
        matches!(self, TokenNode::Bond { .. })
    }

    pub fn is_name(&self) -> bool {
        matches!(self, TokenNode::Name { .. })
    }
}

/// Tokenized visual structure graph.
#[derive(Debug, Clone, PartialEq)]
pub struct TokenGraph {
    pub nodes: Vec<TokenNode>,
    pub edges: BTreeSet<(usize, usize)>,
    pub warnings: Vec<String>,
}

impl TokenGraph {
    pub fn neighbors(&self, id: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == id {
                    Some(b)
                } else if b == id {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn add_edge(&mut self, a: usize, b: usize) {
        if a != b {
            self.edges.insert((a.min(b), a.max(b)));
        }
    }
}

struct Grouper {
    group_of: Vec<Option<usize>>,
    groups: Vec<Vec<PrimId>>,
}

impl Grouper {
    fn new(n: usize) -> Self {
        Grouper {
            group_of: vec![None; n],
            groups: Vec::new(),
        }
    }

    /// Grows connected components over `eligible` nodes joined by `join`.
    fn group(
        &mut self,
        g: &PrimitiveGraph,
        eligible: impl Fn(PrimId) -> bool,
        join: impl Fn(PrimId, PrimId) -> bool,
    ) {
        let n = g.nodes.len();
        for seed in 0..n {
            if !eligible(seed) || self.group_of[seed].is_some() {
                continue;
            }
            let gid = self.groups.len();
            let mut members = vec![seed];
            self.group_of[seed] = Some(gid);
            let mut queue = vec![seed];
            while let Some(u) = queue.pop() {
                for v in g.neighbors(u) {
                    if eligible(v) && self.group_of[v].is_none() && join(u, v) {
                        self.group_of[v] = Some(gid);
                        members.push(v);
                        queue.push(v);
                    }
                }
            }
            members.sort_unstable();
            self.groups.push(members);
        }
    }
}

/// Merges connected characters into name tokens, connected parallel line
/// groups into annotated bond tokens, and attaches charges; external edges
/// are re-mapped onto the tokens.
pub fn tokenize(g: &PrimitiveGraph, params: &ParserParams) -> TokenGraph {
    let n = g.nodes.len();
    let mut grouper = Grouper::new(n);
    let mut warnings = Vec::new();

    // character groups merge over char-char edges
    grouper.group(g, |id| g.nodes[id].kind() == PrimKind::Char, |_, _| true);
    let char_groups = grouper.groups.len();

    // parallel line groups merge over edges joining laterally overlapping
    // parallel lines; collinear end-to-end lines (straight-chain bonds)
    // must stay separate
    grouper.group(
        g,
        |id| g.nodes[id].kind() == PrimKind::Line,
        |u, v| {
            let su = g.nodes[u].as_segment().unwrap();
            let sv = g.nodes[v].as_segment().unwrap();
            is_parallel(su, sv, params.angle_tolerance_degrees)
                && crate::geometry::segments_overlap_along_axis(su, sv)
        },
    );

    // everything else is its own group
    grouper.group(g, |_| true, |_, _| false);

    let mut nodes: Vec<TokenNode> = Vec::with_capacity(grouper.groups.len());
    for (gid, members) in grouper.groups.iter().enumerate() {
        let first = members[0];
        let node = if gid < char_groups {
            // reading order: x-center, ties broken by y-center top-down
            let mut ordered = members.clone();
            ordered.sort_by(|&a, &b| {
                let ca = g.nodes[a].centroid();
                let cb = g.nodes[b].centroid();
                ca.x.partial_cmp(&cb.x)
                    .unwrap()
                    .then(cb.y.partial_cmp(&ca.y).unwrap())
            });
            let text: String = ordered
                .iter()
                .map(|&id| g.nodes[id].glyph().unwrap_or_default())
                .collect();
            let bbox = ordered
                .iter()
                .map(|&id| g.nodes[id].bbox())
                .reduce(|a, b| a.union(&b))
                .unwrap();
            TokenNode::Name {
                text,
                bbox,
                chars: ordered,
                attach: bbox.center(), // refined below once edges exist
            }
        } else {
            match &g.nodes[first].shape {
                PrimShape::Line(_) => {
                    let lines: Vec<Segment> = members
                        .iter()
                        .map(|&m| *g.nodes[m].as_segment().unwrap())
                        .collect();
                    let longest = *lines
                        .iter()
                        .max_by(|a, b| a.length().partial_cmp(&b.length()).unwrap())
                        .unwrap();
                    TokenNode::Bond {
                        kind: None,
                        line_count: members.len(),
                        members: members.clone(),
                        lines,
                        start: longest.a,
                        end: longest.b,
                    }
                }
                PrimShape::SolidWedge { short, long, .. } => TokenNode::Bond {
                    kind: Some(BondKind::SolidWedge),
                    line_count: members.len(),
                    members: members.clone(),
                    lines: vec![*short, *long],
                    start: short.midpoint(),
                    end: long.midpoint(),
                },
                PrimShape::NegativeCharge { seg, .. } => TokenNode::Charge {
                    sign: -1,
                    center: seg.midpoint(),
                    member: first,
                    bound_name: None,
                },
                PrimShape::PlusCharge { center, .. } => TokenNode::Charge {
                    sign: 1,
                    center: *center,
                    member: first,
                    bound_name: None,
                },
                PrimShape::Polyline(pl) => {
                    // stray curve: treated as a single bond between its ends
                    TokenNode::Bond {
                        kind: Some(BondKind::Single),
                        line_count: 1,
                        members: members.clone(),
                        lines: Vec::new(),
                        start: pl.first(),
                        end: pl.last(),
                    }
                }
                PrimShape::Polygon(_) => {
                    warnings.push(format!(
                        "primitive {first}: polygon plays no structural role"
                    ));
                    TokenNode::Opaque { member: first }
                }
                PrimShape::Char { .. } => unreachable!("chars grouped earlier"),
            }
        };
        nodes.push(node);
    }

    // re-map primitive edges onto tokens
    let mut tg = TokenGraph {
        nodes,
        edges: BTreeSet::new(),
        warnings,
    };
    for e in g.alive_edges() {
        let (ta, tb) = (
            grouper.group_of[e.a].unwrap(),
            grouper.group_of[e.b].unwrap(),
        );
        tg.add_edge(ta, tb);
    }

    // bind charges: negative charges to their recorded character's token,
    // plus charges to the nearest name token
    let name_boxes: Vec<(usize, Rect)> = tg
        .nodes
        .iter()
        .enumerate()
        .filter_map(|(i, t)| match t {
            TokenNode::Name { bbox, .. } => Some((i, *bbox)),
            _ => None,
        })
        .collect();
    for i in 0..tg.nodes.len() {
        let binding = match &tg.nodes[i] {
            TokenNode::Charge { member, .. } => match &g.nodes[*member].shape {
                PrimShape::NegativeCharge { bound_char, .. } => grouper.group_of[*bound_char],
                PrimShape::PlusCharge { center, .. } => name_boxes
                    .iter()
                    .map(|(tid, bbox)| {
                        let d = closest_distance(&Shape::Point(*center), &Shape::Rect(*bbox));
                        (*tid, d)
                    })
                    .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                    .map(|(tid, _)| tid),
                _ => None,
            },
            _ => None,
        };
        if let Some(bound) = binding {
            if let TokenNode::Charge { bound_name, .. } = &mut tg.nodes[i] {
                *bound_name = Some(bound);
            }
            tg.add_edge(i, bound);
        }
    }

    // refine name attach points: the member character nearest to a
    // connected bond is the group's connection point
    for i in 0..tg.nodes.len() {
        let bond_shapes: Vec<Shape> = tg
            .neighbors(i)
            .into_iter()
            .filter_map(|j| match &tg.nodes[j] {
                TokenNode::Bond { start, end, .. } => Some(
                    Segment::new(*start, *end)
                        .map(Shape::Segment)
                        .unwrap_or(Shape::Point(*start)),
                ),
                _ => None,
            })
            .collect();
        if bond_shapes.is_empty() {
            continue;
        }
        if let TokenNode::Name { chars, attach, .. } = &tg.nodes[i] {
            let mut best = (*attach, f64::INFINITY);
            for &c in chars {
                let cb = g.nodes[c].centroid();
                for s in &bond_shapes {
                    let d = closest_distance(&Shape::Point(cb), s);
                    if d < best.1 {
                        best = (cb, d);
                    }
                }
            }
            let new_attach = best.0;
            if let TokenNode::Name { attach, .. } = &mut tg.nodes[i] {
                *attach = new_attach;
            }
        }
    }

    tg
}

/// Top-down, left-to-right ordering of line segments by bounding box.
fn topological_order(lines: &[Segment]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&i, &j| {
        let bi = lines[i].bbox();
        let bj = lines[j].bbox();
        // top-down: larger max-y first (y axis points up)
        bj.max
            .y
            .partial_cmp(&bi.max.y)
            .unwrap()
            .then(bi.min.x.partial_cmp(&bj.min.x).unwrap())
    });
    order
}

/// Strictly monotone with 5% relative slack, in either direction.
fn lengths_monotone(lengths: &[f64]) -> bool {
    let increasing = lengths.windows(2).all(|w| w[1] > w[0] * 1.05);
    let decreasing = lengths.windows(2).all(|w| w[1] < w[0] / 1.05);
    increasing || decreasing
}

/// Assigns bond kinds from line counts: 1 is single, 2 double, more than 3
/// hashed wedge. Three lines are a triple bond unless their lengths grow or
/// shrink monotonically in top-down, left-to-right order, which makes them
/// a hashed wedge. Wedge endpoints run from the shortest line's center to
/// the longest line's center.
pub fn label_bonds(mut g: TokenGraph) -> TokenGraph {
    for node in &mut g.nodes {
        let TokenNode::Bond {
            kind,
            line_count,
            lines,
            start,
            end,
            ..
        } = node
        else {
            continue;
        };
        if kind.is_some() {
            continue; // solid wedges and stray polylines are already labeled
        }
        let new_kind = match *line_count {
            1 => BondKind::Single,
            2 => BondKind::Double,
            3 => {
                let order = topological_order(lines);
                let lengths: Vec<f64> = order.iter().map(|&i| lines[i].length()).collect();
                if lengths_monotone(&lengths) {
                    let (s, e) = wedge_extremes(lines);
                    *start = s;
                    *end = e;
                    BondKind::HashedWedge
                } else {
                    BondKind::Triple
                }
            }
            _ => {
                let (s, e) = wedge_extremes(lines);
                *start = s;
                *end = e;
                BondKind::HashedWedge
            }
        };
        *kind = Some(new_kind);
    }
    g
}

fn wedge_extremes(lines: &[Segment]) -> (Point, Point) {
    let shortest = lines
        .iter()
        .min_by(|a, b| a.length().partial_cmp(&b.length()).unwrap())
        .unwrap();
    let longest = lines
        .iter()
        .max_by(|a, b| a.length().partial_cmp(&b.length()).unwrap())
        .unwrap();
    (shortest.midpoint(), longest.midpoint())
}
