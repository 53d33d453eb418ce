//! SymbolScraper-style JSON ingestion.
//!
//! The schema is an array of objects with `typeFromPDF` in
//! {"line", "polyline", "polygon", "char"}, a `graphicObjectID`, a `points`
//! array of `{x, y}`, a `lineWidth`, optional `length`/`angle` for lines,
//! and a `label` required for chars. Polygons accept an optional `filled`
//! flag defaulting to true.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{PathPiece, RawGraphic, RawShape};
use crate::geometry::{Point, Rect, Segment};
use crate::primitive::{PrimShape, Primitive, Source};

#[derive(Debug, Error)]
pub enum JsonIngestError {
    #[error("invalid JSON: {0}")]
    Syntax(#[from] serde_json::Error),
    #[error("object {id}: missing required field {field}")]
    MissingField { id: i64, field: &'static str },
    #[error("object {id}: unknown typeFromPDF {ty:?}")]
    UnknownType { id: i64, ty: String },
    #[error("object {id}: {reason}")]
    BadGeometry { id: i64, reason: String },
    #[error("cannot serialize a {0:?} primitive to SymbolScraper JSON")]
    Unrepresentable(crate::primitive::PrimKind),
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonPoint {
    x: f64,
    y: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct JsonObject {
    #[serde(rename = "typeFromPDF")]
    type_from_pdf: String,
    #[serde(rename = "graphicObjectID")]
    graphic_object_id: i64,
    #[serde(skip_serializing_if = "Option::is_none")]
    length: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    angle: Option<f64>,
    #[serde(rename = "lineWidth", skip_serializing_if = "Option::is_none")]
    line_width: Option<f64>,
    points: Vec<JsonPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    filled: Option<bool>,
}

/// Result of JSON ingestion: raw graphics plus recorded warnings.
#[derive(Debug)]
pub struct JsonIngest {
    pub raws: Vec<RawGraphic>,
    pub warnings: Vec<String>,
}

fn checked_points(id: i64, pts: &[JsonPoint]) -> Result<Vec<Point>, JsonIngestError> {
    pts.iter()
        .map(|p| {
            Point::checked(p.x, p.y).map_err(|e| JsonIngestError::BadGeometry {
                id,
                reason: e.to_string(),
            })
        })
        .collect()
}

/// Reads a SymbolScraper-style JSON document into raw graphics.
///
/// For line objects the stored `length`/`angle` are checked against values
/// recomputed from `points`; on disagreement beyond 0.5% relative the
/// recomputed values win and a warning is recorded.
pub fn parse_symbolscraper_json(text: &str) -> Result<JsonIngest, JsonIngestError> {
    let objects: Vec<JsonObject> = serde_json::from_str(text)?;
    let mut raws = Vec::with_capacity(objects.len());
    let mut warnings = Vec::new();
    for obj in &objects {
        let id = obj.graphic_object_id;
        let line_width = obj.line_width.unwrap_or(1.0);
        let points = checked_points(id, &obj.points)?;
        let shape = match obj.type_from_pdf.as_str() {
            "line" => {
                if points.len() != 2 {
                    return Err(JsonIngestError::BadGeometry {
                        id,
                        reason: format!("line needs exactly 2 points, got {}", points.len()),
                    });
                }
                let seg =
                    Segment::new(points[0], points[1]).map_err(|e| JsonIngestError::BadGeometry {
                        id,
                        reason: e.to_string(),
                    })?;
                if let Some(stored) = obj.length {
                    let actual = seg.length();
                    if (stored - actual).abs() > 0.005 * actual.max(f64::MIN_POSITIVE) {
                        warnings.push(format!(
                            "object {id}: stored length {stored} disagrees with recomputed {actual}; using recomputed"
                        ));
                    }
                }
                if let Some(stored) = obj.angle {
                    let actual = seg.angle();
                    let diff = (stored - actual).rem_euclid(360.0);
                    let diff = diff.min(360.0 - diff);
                    if diff > 0.005 * 360.0 {
                        warnings.push(format!(
                            "object {id}: stored angle {stored} disagrees with recomputed {actual}; using recomputed"
                        ));
                    }
                }
                RawShape::Path {
                    start: points[0],
                    pieces: vec![PathPiece::LineTo(points[1])],
                }
            }
            "polyline" => {
                if points.len() < 2 {
                    return Err(JsonIngestError::BadGeometry {
                        id,
                        reason: format!("polyline needs at least 2 points, got {}", points.len()),
                    });
                }
                RawShape::Path {
                    start: points[0],
                    pieces: points[1..].iter().map(|p| PathPiece::LineTo(*p)).collect(),
                }
            }
            "polygon" => {
                if points.len() < 3 {
                    return Err(JsonIngestError::BadGeometry {
                        id,
                        reason: format!("polygon needs at least 3 points, got {}", points.len()),
                    });
                }
                if obj.filled.unwrap_or(true) {
                    RawShape::FilledPolygon { ring: points }
                } else {
                    // unfilled outline: treat as a closed path of lines
                    let mut pieces: Vec<PathPiece> =
                        points[1..].iter().map(|p| PathPiece::LineTo(*p)).collect();
                    pieces.push(PathPiece::LineTo(points[0]));
                    RawShape::Path {
                        start: points[0],
                        pieces,
                    }
                }
            }
            "char" => {
                let label = match &obj.label {
                    Some(l) if !l.is_empty() => l.clone(),
                    _ => return Err(JsonIngestError::MissingField { id, field: "label" }),
                };
                if points.is_empty() {
                    return Err(JsonIngestError::MissingField {
                        id,
                        field: "points",
                    });
                }
                RawShape::Char {
                    bbox: Rect::hull(points.iter()),
                    glyph: label,
                }
            }
            other => {
                return Err(JsonIngestError::UnknownType {
                    id,
                    ty: other.to_string(),
                })
            }
        };
        raws.push(RawGraphic {
            shape,
            line_width,
            source: Source::Json,
        });
    }
    Ok(JsonIngest { raws, warnings })
}

/// Serializes primitives back to the SymbolScraper JSON schema. Only the
/// four base kinds are representable; normalized wedges and charges are not
/// part of the schema.
pub fn primitives_to_json(prims: &[Primitive]) -> Result<String, JsonIngestError> {
    let mut objects = Vec::with_capacity(prims.len());
    for p in prims {
        let obj = match &p.shape {
            PrimShape::Line(seg) => JsonObject {
                type_from_pdf: "line".to_string(),
                graphic_object_id: p.id as i64,
                length: Some(seg.length()),
                angle: Some(seg.angle()),
                line_width: Some(p.line_width),
                points: vec![
                    JsonPoint {
                        x: seg.a.x,
                        y: seg.a.y,
                    },
                    JsonPoint {
                        x: seg.b.x,
                        y: seg.b.y,
                    },
                ],
                label: None,
                filled: None,
            },
            PrimShape::Polyline(pl) => JsonObject {
                type_from_pdf: "polyline".to_string(),
                graphic_object_id: p.id as i64,
                length: None,
                angle: None,
                line_width: Some(p.line_width),
                points: pl
                    .vertices()
                    .iter()
                    .map(|v| JsonPoint { x: v.x, y: v.y })
                    .collect(),
                label: None,
                filled: None,
            },
            PrimShape::Polygon(poly) => JsonObject {
                type_from_pdf: "polygon".to_string(),
                graphic_object_id: p.id as i64,
                length: None,
                angle: None,
                line_width: Some(p.line_width),
                points: poly
                    .distinct_vertices()
                    .iter()
                    .map(|v| JsonPoint { x: v.x, y: v.y })
                    .collect(),
                label: None,
                filled: Some(poly.filled),
            },
            PrimShape::Char { bbox, glyph } => JsonObject {
                type_from_pdf: "char".to_string(),
                graphic_object_id: p.id as i64,
                length: None,
                angle: None,
                line_width: Some(p.line_width),
                points: vec![
                    JsonPoint {
                        x: bbox.min.x,
                        y: bbox.min.y,
                    },
                    JsonPoint {
                        x: bbox.max.x,
                        y: bbox.max.y,
                    },
                ],
                label: Some(glyph.clone()),
                filled: None,
            },
            _ => return Err(JsonIngestError::Unrepresentable(p.kind())),
        };
        objects.push(obj);
    }
    Ok(serde_json::to_string_pretty(&objects).expect("json serialization"))
}

#[cfg(test)]
mod tests {
    use super::*;

    const LINE_OBJECT: &str = r#"[{
        "typeFromPDF": "line",
        "graphicObjectID": 0,
        "length": 70.32814383876341,
        "angle": 330.00006986692745,
        "lineWidth": 3.333334,
        "points": [
            {"x": 44.48262170992254, "y": 39.73133054974975},
            {"x": 108.27537771024348, "y": 2.9006694197326697}
        ]
    }]"#;

    #[test]
    fn line_object_parses_with_consistent_metadata() {
        let out = parse_symbolscraper_json(LINE_OBJECT).unwrap();
        assert_eq!(out.raws.len(), 1);
        assert!(out.warnings.is_empty(), "unexpected: {:?}", out.warnings);
        match &out.raws[0].shape {
            RawShape::Path { start, pieces } => {
                assert!((start.x - 44.48262170992254).abs() < 1e-9);
                assert!((start.y - 39.73133054974975).abs() < 1e-9);
                match pieces[0] {
                    PathPiece::LineTo(p) => {
                        assert!((p.x - 108.27537771024348).abs() < 1e-9);
                        assert!((p.y - 2.9006694197326697).abs() < 1e-9);
                    }
                    _ => panic!("expected line"),
                }
            }
            other => panic!("expected path, got {other:?}"),
        }
        assert!((out.raws[0].line_width - 3.333334).abs() < 1e-9);
    }

    #[test]
    fn empty_array_gives_empty_list() {
        let out = parse_symbolscraper_json("[]").unwrap();
        assert!(out.raws.is_empty());
        assert!(out.warnings.is_empty());
    }

    #[test]
    fn disagreeing_angle_warns_and_recomputed_wins() {
        // stored angle 90 vs recomputed ~330: recompute atan2 of the delta
        let text = r#"[{
            "typeFromPDF": "line",
            "graphicObjectID": 7,
            "angle": 90.0,
            "lineWidth": 1.0,
            "points": [
                {"x": 44.48262170992254, "y": 39.73133054974975},
                {"x": 108.27537771024348, "y": 2.9006694197326697}
            ]
        }]"#;
        let out = parse_symbolscraper_json(text).unwrap();
        assert_eq!(out.warnings.len(), 1);
        assert!(out.warnings[0].contains("object 7"));
        let dy = 2.9006694197326697 - 39.73133054974975_f64;
        let dx = 108.27537771024348 - 44.48262170992254_f64;
        let expected = dy.atan2(dx).to_degrees().rem_euclid(360.0);
        assert!(out.warnings[0].contains(&format!("{expected}")));
    }

    #[test]
    fn missing_label_is_an_error_with_object_id() {
        let text = r#"[{
            "typeFromPDF": "char",
            "graphicObjectID": 3,
            "points": [{"x": 0, "y": 0}, {"x": 7, "y": 10}]
        }]"#;
        match parse_symbolscraper_json(text) {
            Err(JsonIngestError::MissingField { id: 3, field }) => assert_eq!(field, "label"),
            other => panic!("expected missing-field error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_type_is_an_error() {
        let text = r#"[{
            "typeFromPDF": "spline",
            "graphicObjectID": 1,
            "points": [{"x": 0, "y": 0}, {"x": 1, "y": 1}]
        }]"#;
        assert!(matches!(
            parse_symbolscraper_json(text),
            Err(JsonIngestError::UnknownType { id: 1, .. })
        ));
    }
}
