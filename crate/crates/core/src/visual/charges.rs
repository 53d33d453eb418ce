//! Negative charge detection: distinguishing short superscript dashes from
//! bond lines.

use crate::geometry::Segment;
use crate::params::ParserParams;
use crate::primitive::{PrimKind, PrimShape};

use super::PrimitiveGraph;

fn horizontal_deviation(seg: &Segment) -> f64 {
    let a = seg.angle() % 180.0;
    a.min(180.0 - a)
}

/// Re-types qualifying lines as negative charges bound to their adjacent
/// character. A line qualifies when it is (1) roughly horizontal, (2) no
/// longer than `NEG-CHARGE_LENGTH_TOLERANCE` times the average line length,
/// and (3) right-adjacent to a character with its vertical center in the
/// top `NEG-CHARGE_Y_POSITION` fraction of the character's box.
pub fn detect_negative_charges(mut g: PrimitiveGraph, params: &ParserParams) -> PrimitiveGraph {
    let lines: Vec<(usize, Segment)> = g
        .nodes
        .iter()
        .filter(|p| p.kind() == PrimKind::Line)
        .map(|p| (p.id, *p.as_segment().unwrap()))
        .collect();
    if lines.is_empty() {
        return g;
    }
    let avg_len = lines.iter().map(|(_, s)| s.length()).sum::<f64>() / lines.len() as f64;

    let chars: Vec<(usize, crate::geometry::Rect)> = g
        .nodes
        .iter()
        .filter_map(|p| match &p.shape {
            PrimShape::Char { bbox, .. } => Some((p.id, *bbox)),
            _ => None,
        })
        .collect();

    let mut retype: Vec<(usize, Segment, usize)> = Vec::new();
    for (id, seg) in &lines {
        if horizontal_deviation(seg) > params.angle_tolerance_degrees {
            continue;
        }
        if seg.length() > params.neg_charge_length_tolerance * avg_len {
            continue;
        }
        let line_cy = seg.midpoint().y;
        let line_left = seg.a.x.min(seg.b.x);
        // nearest character the line sits to the right of, with the line's
        // vertical center inside the top fraction of the character box
        let mut best: Option<(usize, f64)> = None;
        for (cid, bbox) in &chars {
            if line_left < bbox.center().x {
                continue; // not to the right of the character
            }
            let top_band = bbox.max.y - params.neg_charge_y_position * bbox.height();
            if line_cy < top_band || line_cy > bbox.max.y + bbox.height() * 0.25 {
                continue;
            }
            let gap = (line_left - bbox.max.x).abs();
            if gap > bbox.width() * 2.0 {
                continue; // not adjacent
            }
            if best.map_or(true, |(_, g)| gap < g) {
                best = Some((*cid, gap));
            }
        }
        if let Some((cid, _)) = best {
            retype.push((*id, *seg, cid));
        }
    }

    for (id, seg, bound_char) in retype {
        g.nodes[id].shape = PrimShape::NegativeCharge { seg, bound_char };
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point, Rect};
    use crate::primitive::{Primitive, Source};
    use crate::visual::{EdgeOrigin, GraphEdge};

    fn line(id: usize, ax: f64, ay: f64, bx: f64, by: f64) -> Primitive {
        Primitive {
            id,
            shape: PrimShape::Line(
                Segment::new(Point::new(ax, ay), Point::new(bx, by)).unwrap(),
            ),
            line_width: 1.0,
            source: Source::Instructions,
        }
    }

    fn chr(id: usize, x: f64, y: f64, label: &str) -> Primitive {
        Primitive {
            id,
            shape: PrimShape::Char {
                bbox: Rect::new(Point::new(x, y), Point::new(x + 7.0, y + 10.0)),
                glyph: label.to_string(),
            },
            line_width: 1.0,
            source: Source::Instructions,
        }
    }

    fn graph(nodes: Vec<Primitive>) -> PrimitiveGraph {
        let edges = (1..nodes.len())
            .map(|i| GraphEdge {
                a: i - 1,
                b: i,
                weight: 1.0,
                origin: EdgeOrigin::Skeleton,
                alive: true,
            })
            .collect();
        PrimitiveGraph { nodes, edges }
    }

    #[test]
    fn short_horizontal_line_in_upper_half_becomes_charge() {
        // average line length (30 + 9) / 2 = 19.5; 9 <= 0.5 * 19.5
        // char box y 0..10; line at y 8 is in the top half
        let g = graph(vec![
            line(0, 100.0, 100.0, 130.0, 100.0), // unrelated bond line
            chr(1, 0.0, 0.0, "O"),
            line(2, 9.0, 8.0, 18.0, 8.0), // superscript dash right of O
        ]);
        let g = detect_negative_charges(g, &ParserParams::default());
        match &g.nodes[2].shape {
            PrimShape::NegativeCharge { bound_char, .. } => assert_eq!(*bound_char, 1),
            other => panic!("expected negative charge, got {other:?}"),
        }
    }

    #[test]
    fn long_horizontal_line_stays_line() {
        let g = graph(vec![
            line(0, 100.0, 100.0, 130.0, 100.0),
            chr(1, 0.0, 0.0, "O"),
            line(2, 9.0, 8.0, 39.0, 8.0), // full average length
        ]);
        let g = detect_negative_charges(g, &ParserParams::default());
        assert_eq!(g.nodes[2].kind(), PrimKind::Line);
    }

    #[test]
    fn tilted_short_line_stays_line() {
        let g = graph(vec![
            line(0, 100.0, 100.0, 130.0, 100.0),
            chr(1, 0.0, 0.0, "O"),
            line(2, 9.0, 8.0, 15.0, 14.0), // 45 degrees
        ]);
        let g = detect_negative_charges(g, &ParserParams::default());
        assert_eq!(g.nodes[2].kind(), PrimKind::Line);
    }

    #[test]
    fn line_below_upper_band_stays_line() {
        let g = graph(vec![
            line(0, 100.0, 100.0, 130.0, 100.0),
            chr(1, 0.0, 0.0, "O"),
            line(2, 9.0, 2.0, 18.0, 2.0), // lower half of the box
        ]);
        let g = detect_negative_charges(g, &ParserParams::default());
        assert_eq!(g.nodes[2].kind(), PrimKind::Line);
    }
}
