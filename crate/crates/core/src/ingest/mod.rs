//! Reading primitives from instruction streams and SymbolScraper-style JSON,
//! then normalizing raw graphics into typed input tokens.

pub mod instructions;
pub mod normalize;
pub mod sscraper;

use crate::geometry::{Point, Rect};
use crate::primitive::{PrimShape, Primitive, Source};

/// A graphic as read from an input, before normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct RawGraphic {
    pub shape: RawShape,
    pub line_width: f64,
    pub source: Source,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RawShape {
    /// An open path; curves are flattened during normalization.
    Path { start: Point, pieces: Vec<PathPiece> },
    /// A closed, filled outline (rectangles are expanded to this form).
    FilledPolygon { ring: Vec<Point> },
    /// A character cell with its glyph label.
    Char { bbox: Rect, glyph: String },
    /// An already-normalized primitive passing through unchanged.
    Normalized(PrimShape),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PathPiece {
    LineTo(Point),
    /// Cubic Bézier controls (c1, c2, end); the start is the previous point.
    CurveTo(Point, Point, Point),
}

impl From<&Primitive> for RawGraphic {
    /// Embeds a normalized primitive back into raw form. Normalizing the
    /// result reproduces the primitive, which is what makes normalization
    /// idempotent.
    fn from(p: &Primitive) -> Self {
        let shape = match &p.shape {
            PrimShape::Line(s) => RawShape::Path {
                start: s.a,
                pieces: vec![PathPiece::LineTo(s.b)],
            },
            PrimShape::Polyline(pl) => {
                let v = pl.vertices();
                RawShape::Path {
                    start: v[0],
                    pieces: v[1..].iter().map(|p| PathPiece::LineTo(*p)).collect(),
                }
            }
            PrimShape::Polygon(poly) => RawShape::FilledPolygon {
                ring: poly.distinct_vertices().to_vec(),
            },
            PrimShape::Char { bbox, glyph } => RawShape::Char {
                bbox: *bbox,
                glyph: glyph.clone(),
            },
            other => RawShape::Normalized(other.clone()),
        };
        RawGraphic {
            shape,
            line_width: p.line_width,
            source: p.source,
        }
    }
}
