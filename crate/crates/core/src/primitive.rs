//! Typed input tokens produced by ingestion and normalization.

use serde::{Deserialize, Serialize};

use crate::geometry::{closest_distance, Point, Polygon, Polyline, Rect, Segment, Shape};

pub type PrimId = usize;

/// Where a primitive came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    Json,
    Instructions,
}

/// Coarse classification of a primitive, used for pruning and tokenization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PrimKind {
    Line,
    Polyline,
    Polygon,
    Char,
    SolidWedge,
    PlusCharge,
    /// A line re-typed by charge detection; never produced by ingestion.
    NegativeCharge,
}

/// Geometry and payload of a primitive.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PrimShape {
    Line(Segment),
    Polyline(Polyline),
    Polygon(Polygon),
    Char { bbox: Rect, glyph: String },
    SolidWedge {
        outline: Polygon,
        /// Short parallel side; the bond starts here.
        short: Segment,
        /// Long parallel side; the bond ends here.
        long: Segment,
    },
    PlusCharge {
        first: Segment,
        second: Segment,
        center: Point,
    },
    NegativeCharge {
        seg: Segment,
        /// The character this charge decorates.
        bound_char: PrimId,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Primitive {
    pub id: PrimId,
    pub shape: PrimShape,
    pub line_width: f64,
    pub source: Source,
}

impl Primitive {
    pub fn kind(&self) -> PrimKind {
        match &self.shape {
            PrimShape::Line(_) => PrimKind::Line,
            PrimShape::Polyline(_) => PrimKind::Polyline,
            PrimShape::Polygon(_) => PrimKind::Polygon,
            PrimShape::Char { .. } => PrimKind::Char,
            PrimShape::SolidWedge { .. } => PrimKind::SolidWedge,
            PrimShape::PlusCharge { .. } => PrimKind::PlusCharge,
            PrimShape::NegativeCharge { .. } => PrimKind::NegativeCharge,
        }
    }

    pub fn glyph(&self) -> Option<&str> {
        match &self.shape {
            PrimShape::Char { glyph, .. } => Some(glyph),
            _ => None,
        }
    }

    pub fn as_segment(&self) -> Option<&Segment> {
        match &self.shape {
            PrimShape::Line(s) => Some(s),
            PrimShape::NegativeCharge { seg, .. } => Some(seg),
            _ => None,
        }
    }

    /// Shapes to measure distances against; plus charges contribute both arms.
    pub fn shapes(&self) -> Vec<Shape> {
        match &self.shape {
            PrimShape::Line(s) => vec![Shape::Segment(*s)],
            PrimShape::Polyline(p) => vec![Shape::Polyline(p.clone())],
            PrimShape::Polygon(p) => vec![Shape::Polygon(p.clone())],
            PrimShape::Char { bbox, .. } => vec![Shape::Rect(*bbox)],
            PrimShape::SolidWedge { outline, .. } => vec![Shape::Polygon(outline.clone())],
            PrimShape::PlusCharge { first, second, .. } => {
                vec![Shape::Segment(*first), Shape::Segment(*second)]
            }
            PrimShape::NegativeCharge { seg, .. } => vec![Shape::Segment(*seg)],
        }
    }

    pub fn bbox(&self) -> Rect {
        let shapes = self.shapes();
        let mut it = shapes.iter();
        let mut bbox = it.next().expect("primitive has geometry").bbox();
        for s in it {
            bbox = bbox.union(&s.bbox());
        }
        bbox
    }

    pub fn centroid(&self) -> Point {
        self.bbox().center()
    }
}

/// Closest-point distance between two primitives.
pub fn primitive_distance(a: &Primitive, b: &Primitive) -> f64 {
    let mut best = f64::INFINITY;
    for sa in a.shapes() {
        for sb in b.shapes() {
            best = best.min(closest_distance(&sa, &sb));
        }
    }
    best
}
