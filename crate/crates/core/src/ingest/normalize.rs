//! Normalization of raw graphics into typed primitives.
//!
//! Rules applied, in order:
//! 1. curves are flattened into polylines;
//! 2. filled quadrilaterals whose two longest sides cover more than
//!    `RECT2LINE_LONG_RATIO` of the perimeter and differ in angle by at
//!    most `RECT2LINE_ANGLE_TOLERANCE` become lines at their medial axis;
//! 3. remaining filled trapezoids whose parallel sides have a short:long
//!    ratio below `S-WEDGE_LENGTHS_DIFF_RATIO` become solid wedges directed
//!    from the short side to the long side;
//! 4. two crossing lines perpendicular within `ANGLE_TOLERANCE_DEGREES`,
//!    intersecting in the middle half of both, merge into one plus charge;
//! 5. everything else passes through.

use crate::geometry::{
    angle_between, flatten_bezier, segment_intersection, Point, Polygon, Polyline, Segment, EPS,
};
use crate::params::ParserParams;
use crate::primitive::{PrimShape, Primitive};

use super::{PathPiece, RawGraphic, RawShape};

fn flatten_path(start: Point, pieces: &[PathPiece], flatness: f64) -> Vec<Point> {
    let mut vertices = vec![start];
    for piece in pieces {
        let cursor = *vertices.last().unwrap();
        match piece {
            PathPiece::LineTo(p) => vertices.push(*p),
            PathPiece::CurveTo(c1, c2, end) => {
                match flatten_bezier(&[cursor, *c1, *c2, *end], flatness) {
                    Ok(poly) => vertices.extend_from_slice(&poly.vertices()[1..]),
                    Err(_) => vertices.push(*end), // collapsed curve: keep endpoint
                }
            }
        }
    }
    vertices.dedup_by(|a, b| a.distance(b) <= EPS);
    vertices
}

/// Attempts the rectangle-to-line rule on a filled quadrilateral.
fn rect_to_line(poly: &Polygon, params: &ParserParams) -> Option<Segment> {
    let edges = poly.edges();
    if edges.len() != 4 {
        return None;
    }
    let mut order: Vec<usize> = (0..4).collect();
    order.sort_by(|&i, &j| edges[j].length().partial_cmp(&edges[i].length()).unwrap());
    let (li, lj) = (order[0], order[1]);
    // the two longest sides must be opposite edges of the ring
    if (li + 2) % 4 != lj {
        return None;
    }
    let covered = edges[li].length() + edges[lj].length();
    if covered / poly.perimeter() <= params.rect2line_long_ratio {
        return None;
    }
    if angle_between(&edges[li], &edges[lj]) > params.rect2line_angle_tolerance {
        return None;
    }
    let (si, sj) = ((li + 1) % 4, (li + 3) % 4);
    Segment::new(edges[si].midpoint(), edges[sj].midpoint()).ok()
}

/// Attempts the solid-wedge rule on a filled quadrilateral.
fn trapezoid_to_wedge(poly: &Polygon, params: &ParserParams) -> Option<(Segment, Segment)> {
    let edges = poly.edges();
    if edges.len() != 4 {
        return None;
    }
    let mut best: Option<(usize, usize, f64)> = None;
    for (i, j) in [(0usize, 2usize), (1, 3)] {
        if angle_between(&edges[i], &edges[j]) <= params.angle_tolerance_degrees {
            let (a, b) = (edges[i].length(), edges[j].length());
            let ratio = a.min(b) / a.max(b);
            if best.map_or(true, |(_, _, r)| ratio < r) {
                best = Some((i, j, ratio));
            }
        }
    }
    let (i, j, ratio) = best?;
    if ratio >= params.s_wedge_lengths_diff_ratio {
        return None;
    }
    let (short, long) = if edges[i].length() <= edges[j].length() {
        (edges[i], edges[j])
    } else {
        (edges[j], edges[i])
    };
    Some((short, long))
}

fn is_filled_quad(poly: &Polygon) -> bool {
    poly.filled && poly.distinct_vertices().len() == 4
}

/// Detects a plus charge: two lines perpendicular within tolerance whose
/// intersection lies in the middle half of both segments.
fn plus_charge_cross(
    a: &Segment,
    b: &Segment,
    params: &ParserParams,
) -> Option<Point> {
    if angle_between(a, b) < 90.0 - params.angle_tolerance_degrees {
        return None;
    }
    let (p, t, u) = segment_intersection(a, b)?;
    if (0.25..=0.75).contains(&t) && (0.25..=0.75).contains(&u) {
        Some(p)
    } else {
        None
    }
}

/// Normalizes raw graphics into typed primitives with dense ids.
/// Non-matching shapes pass through untouched; the transformation is
/// idempotent over the [`RawGraphic`] embedding of its own output.
pub fn normalize_primitives(raws: &[RawGraphic], params: &ParserParams) -> Vec<Primitive> {
    let mut shapes: Vec<(PrimShape, f64, crate::primitive::Source)> = Vec::new();
    for raw in raws {
        let shape = match &raw.shape {
            RawShape::Path { start, pieces } => {
                let vertices = flatten_path(*start, pieces, params.bezier_flatness_pts);
                if vertices.len() < 2 {
                    continue; // degenerate path draws nothing
                }
                let closed =
                    vertices.len() >= 4 && vertices[0].distance(vertices.last().unwrap()) <= EPS;
                if closed {
                    match Polygon::new(vertices, true) {
                        Ok(poly) => classify_polygon(poly, params),
                        Err(_) => continue,
                    }
                } else if vertices.len() == 2 {
                    match Segment::new(vertices[0], vertices[1]) {
                        Ok(seg) => PrimShape::Line(seg),
                        Err(_) => continue,
                    }
                } else {
                    match Polyline::new(vertices) {
                        Ok(poly) => PrimShape::Polyline(poly),
                        Err(_) => continue,
                    }
                }
            }
            RawShape::FilledPolygon { ring } => match Polygon::new(ring.clone(), true) {
                Ok(poly) => classify_polygon(poly, params),
                Err(_) => continue,
            },
            RawShape::Char { bbox, glyph } => PrimShape::Char {
                bbox: *bbox,
                glyph: glyph.clone(),
            },
            RawShape::Normalized(shape) => shape.clone(),
        };
        shapes.push((shape, raw.line_width, raw.source));
    }

    // merge perpendicular crossing line pairs into plus charges
    let mut consumed = vec![false; shapes.len()];
    let mut merged: Vec<(PrimShape, f64, crate::primitive::Source)> = Vec::new();
    for i in 0..shapes.len() {
        if consumed[i] {
            continue;
        }
        if let PrimShape::Line(si) = shapes[i].0 {
            let mut found = None;
            for (j, other) in shapes.iter().enumerate().skip(i + 1) {
                if consumed[j] {
                    continue;
                }
                if let PrimShape::Line(sj) = other.0 {
                    if let Some(center) = plus_charge_cross(&si, &sj, params) {
                        found = Some((j, sj, center));
                        break;
                    }
                }
            }
            if let Some((j, sj, center)) = found {
                consumed[i] = true;
                consumed[j] = true;
                merged.push((
                    PrimShape::PlusCharge {
                        first: si,
                        second: sj,
                        center,
                    },
                    shapes[i].1,
                    shapes[i].2,
                ));
                continue;
            }
        }
        consumed[i] = true;
        merged.push(shapes[i].clone());
    }

    merged
        .into_iter()
        .enumerate()
        .map(|(id, (shape, line_width, source))| Primitive {
            id,
            shape,
            line_width,
            source,
        })
        .collect()
}

fn classify_polygon(poly: Polygon, params: &ParserParams) -> PrimShape {
    if is_filled_quad(&poly) {
        if let Some(seg) = rect_to_line(&poly, params) {
            return PrimShape::Line(seg);
        }
        if let Some((short, long)) = trapezoid_to_wedge(&poly, params) {
            return PrimShape::SolidWedge {
                outline: poly,
                short,
                long,
            };
        }
    }
    PrimShape::Polygon(poly)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primitive::{PrimKind, Source};

    fn raw_polygon(ring: Vec<Point>) -> RawGraphic {
        RawGraphic {
            shape: RawShape::FilledPolygon { ring },
            line_width: 1.0,
            source: Source::Instructions,
        }
    }

    fn raw_line(ax: f64, ay: f64, bx: f64, by: f64) -> RawGraphic {
        RawGraphic {
            shape: RawShape::Path {
                start: Point::new(ax, ay),
                pieces: vec![PathPiece::LineTo(Point::new(bx, by))],
            },
            line_width: 1.0,
            source: Source::Instructions,
        }
    }

    #[test]
    fn thin_filled_rectangle_becomes_line() {
        // 100 x 1 rectangle: long sides cover 200/202 of the perimeter
        let ring = vec![
            Point::new(0.0, 0.0),
            Point::new(100.0, 0.0),
            Point::new(100.0, 1.0),
            Point::new(0.0, 1.0),
        ];
        let ratio = (100.0 + 100.0) / 202.0;
        assert!(ratio > 0.85);
        let prims = normalize_primitives(&[raw_polygon(ring)], &ParserParams::default());
        assert_eq!(prims.len(), 1);
        match &prims[0].shape {
            PrimShape::Line(seg) => {
                assert!((seg.length() - 100.0).abs() < EPS);
                assert!((seg.midpoint().y - 0.5).abs() < EPS);
            }
            other => panic!("expected line, got {other:?}"),
        }
    }

    #[test]
    fn trapezoid_becomes_wedge_directed_short_to_long() {
        // parallel sides 1 and 6: ratio 1/6 < 0.7
        let ring = vec![
            Point::new(0.0, -0.5),
            Point::new(30.0, -3.0),
            Point::new(30.0, 3.0),
            Point::new(0.0, 0.5),
        ];
        let prims = normalize_primitives(&[raw_polygon(ring)], &ParserParams::default());
        match &prims[0].shape {
            PrimShape::SolidWedge { short, long, .. } => {
                assert!((short.length() - 1.0).abs() < EPS);
                assert!((long.length() - 6.0).abs() < EPS);
            }
            other => panic!("expected wedge, got {other:?}"),
        }
    }

    #[test]
    fn square_is_not_a_wedge() {
        // side ratio 1.0 >= 0.7 and rect2line needs > 0.85 coverage
        let ring = vec![
            Point::new(0.0, 0.0),
            Point::new(10.0, 0.0),
            Point::new(10.0, 10.0),
            Point::new(0.0, 10.0),
        ];
        let prims = normalize_primitives(&[raw_polygon(ring)], &ParserParams::default());
        assert_eq!(prims[0].kind(), PrimKind::Polygon);
    }

    #[test]
    fn perpendicular_crossing_lines_merge_into_plus_charge() {
        let prims = normalize_primitives(
            &[raw_line(0.0, 0.0, 4.0, 0.0), raw_line(2.0, -2.0, 2.0, 2.0)],
            &ParserParams::default(),
        );
        assert_eq!(prims.len(), 1);
        match &prims[0].shape {
            PrimShape::PlusCharge { center, .. } => {
                assert!((center.x - 2.0).abs() < EPS);
                assert!(center.y.abs() < EPS);
            }
            other => panic!("expected plus charge, got {other:?}"),
        }
    }

    #[test]
    fn endpoint_touching_perpendicular_lines_stay_lines() {
        // crossing outside the middle half of the segments
        let prims = normalize_primitives(
            &[raw_line(0.0, 0.0, 4.0, 0.0), raw_line(4.0, -2.0, 4.0, 2.0)],
            &ParserParams::default(),
        );
        assert_eq!(prims.len(), 2);
        assert!(prims.iter().all(|p| p.kind() == PrimKind::Line));
    }

    #[test]
    fn curve_becomes_polyline_within_flatness() {
        let raw = RawGraphic {
            shape: RawShape::Path {
                start: Point::new(0.0, 0.0),
                pieces: vec![PathPiece::CurveTo(
                    Point::new(0.0, 10.0),
                    Point::new(10.0, 10.0),
                    Point::new(10.0, 0.0),
                )],
            },
            line_width: 1.0,
            source: Source::Instructions,
        };
        let prims = normalize_primitives(&[raw], &ParserParams::default());
        assert_eq!(prims[0].kind(), PrimKind::Polyline);
    }

    #[test]
    fn ids_are_dense_in_order() {
        let prims = normalize_primitives(
            &[
                raw_line(0.0, 0.0, 10.0, 0.0),
                raw_line(20.0, 0.0, 30.0, 0.0),
                raw_line(40.0, 0.0, 50.0, 0.0),
            ],
            &ParserParams::default(),
        );
        assert_eq!(
            prims.iter().map(|p| p.id).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn normalization_is_idempotent() {
        let raws = vec![
            raw_polygon(vec![
                Point::new(0.0, -0.5),
                Point::new(30.0, -3.0),
                Point::new(30.0, 3.0),
                Point::new(0.0, 0.5),
            ]),
            raw_line(0.0, 10.0, 4.0, 10.0),
            raw_line(2.0, 8.0, 2.0, 12.0),
            raw_polygon(vec![
                Point::new(50.0, 50.0),
                Point::new(60.0, 50.0),
                Point::new(60.0, 60.0),
                Point::new(50.0, 60.0),
            ]),
        ];
        let params = ParserParams::default();
        let once = normalize_primitives(&raws, &params);
        let reembedded: Vec<RawGraphic> = once.iter().map(RawGraphic::from).collect();
        let twice = normalize_primitives(&reembedded, &params);
        assert_eq!(once, twice);
    }
}
