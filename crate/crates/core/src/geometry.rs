//! 2D geometric kernel shared by all pipeline stages.
//!
//! Coordinates are document points (1/72 inch) with the y axis pointing up,
//! matching PDF user space. All distance predicates use an absolute epsilon
//! of [`EPS`] points.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute epsilon for geometric predicates, far below drawing precision.
pub const EPS: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("coordinate is not finite: ({0}, {1})")]
    NonFinite(f64, f64),
    #[error("degenerate segment: both endpoints at ({0}, {1})")]
    DegenerateSegment(f64, f64),
    #[error("polyline needs at least 2 vertices, got {0}")]
    ShortPolyline(usize),
    #[error("polyline has coincident consecutive vertices at index {0}")]
    CoincidentVertices(usize),
    #[error("polygon needs at least 3 distinct vertices, got {0}")]
    ShortPolygon(usize),
    #[error("polygon has zero perimeter")]
    ZeroPerimeter,
    #[error("bezier flatness must be positive, got {0}")]
    BadFlatness(f64),
}

/// A point in document coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Constructor used at ingestion boundaries; rejects NaN/infinity.
    pub fn checked(x: f64, y: f64) -> Result<Self, GeometryError> {
        if x.is_finite() && y.is_finite() {
            Ok(Point { x, y })
        } else {
            Err(GeometryError::NonFinite(x, y))
        }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn midpoint(&self, other: &Point) -> Point {
        Point::new((self.x + other.x) / 2.0, (self.y + other.y) / 2.0)
    }

    pub fn rotate_about(&self, center: &Point, degrees: f64) -> Point {
        let r = degrees.to_radians();
        let (s, c) = r.sin_cos();
        let dx = self.x - center.x;
        let dy = self.y - center.y;
        Point::new(center.x + dx * c - dy * s, center.y + dx * s + dy * c)
    }

    fn close_to(&self, other: &Point) -> bool {
        self.distance(other) <= EPS
    }
}

/// A straight line segment between two distinct points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Result<Self, GeometryError> {
        if a.close_to(&b) {
            return Err(GeometryError::DegenerateSegment(a.x, a.y));
        }
        Ok(Segment { a, b })
    }

    pub fn length(&self) -> f64 {
        self.a.distance(&self.b)
    }

    /// Direction angle in degrees, counter-clockwise from +x, in [0, 360).
    pub fn angle(&self) -> f64 {
        let raw = (self.b.y - self.a.y).atan2(self.b.x - self.a.x).to_degrees();
        let mut a = raw % 360.0;
        if a < 0.0 {
            a += 360.0;
        }
        // normalize -0.0 and the 360.0 boundary
        if a >= 360.0 {
            a -= 360.0;
        }
        a.abs()
    }

    pub fn midpoint(&self) -> Point {
        self.a.midpoint(&self.b)
    }

    pub fn endpoints(&self) -> [Point; 2] {
        [self.a, self.b]
    }

    pub fn bbox(&self) -> Rect {
        Rect::hull([self.a, self.b].iter())
    }

    /// Projection interval of the segment onto a unit direction vector.
    fn projection(&self, dir: (f64, f64)) -> (f64, f64) {
        let pa = self.a.x * dir.0 + self.a.y * dir.1;
        let pb = self.b.x * dir.0 + self.b.y * dir.1;
        (pa.min(pb), pa.max(pb))
    }
}

/// Acute angle between the undirected carrier lines of two segments, in [0, 90].
pub fn angle_between(l1: &Segment, l2: &Segment) -> f64 {
    let d = (l1.angle() - l2.angle()).abs() % 180.0;
    d.min(180.0 - d)
}

/// Whether two segments are parallel within an angular tolerance in degrees.
pub fn is_parallel(l1: &Segment, l2: &Segment, tolerance_degrees: f64) -> bool {
    angle_between(l1, l2) <= tolerance_degrees
}

/// Minimum over the 4 endpoint-pair distances. Strictly positive for
/// overlapping lines whose endpoints differ, unlike closest-point distance.
pub fn endpoint_distance(l1: &Segment, l2: &Segment) -> f64 {
    let mut best = f64::INFINITY;
    for p in l1.endpoints() {
        for q in l2.endpoints() {
            best = best.min(p.distance(&q));
        }
    }
    best
}

/// Mean endpoint distance between two segments under the better of the two
/// endpoint pairings. Used for reconnecting floating parallel lines.
pub fn average_endpoint_distance(l1: &Segment, l2: &Segment) -> f64 {
    let straight = l1.a.distance(&l2.a) + l1.b.distance(&l2.b);
    let crossed = l1.a.distance(&l2.b) + l1.b.distance(&l2.a);
    straight.min(crossed) / 2.0
}

/// Length of the shared span when both segments are projected onto the
/// first segment's direction; 0 or negative when they do not overlap.
/// Collinear end-to-end segments touching at a point have overlap 0.
pub fn projection_overlap_length(l1: &Segment, l2: &Segment) -> f64 {
    let ang = l1.angle().to_radians();
    let dir = (ang.cos(), ang.sin());
    let (a0, a1) = l1.projection(dir);
    let (b0, b1) = l2.projection(dir);
    a1.min(b1) - a0.max(b0)
}

/// Whether the projections of two segments onto their common direction
/// share a span longer than a point.
pub fn segments_overlap_along_axis(l1: &Segment, l2: &Segment) -> bool {
    projection_overlap_length(l1, l2) > EPS
}

fn point_segment_distance(p: &Point, s: &Segment) -> f64 {
    let vx = s.b.x - s.a.x;
    let vy = s.b.y - s.a.y;
    let wx = p.x - s.a.x;
    let wy = p.y - s.a.y;
    let c1 = vx * wx + vy * wy;
    if c1 <= 0.0 {
        return p.distance(&s.a);
    }
    let c2 = vx * vx + vy * vy;
    if c1 >= c2 {
        return p.distance(&s.b);
    }
    let t = c1 / c2;
    let proj = Point::new(s.a.x + t * vx, s.a.y + t * vy);
    p.distance(&proj)
}

fn orient(a: &Point, b: &Point, c: &Point) -> f64 {
    (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)
}

/// Whether two segments intersect or touch.
pub fn segments_intersect(s1: &Segment, s2: &Segment) -> bool {
    let d1 = orient(&s2.a, &s2.b, &s1.a);
    let d2 = orient(&s2.a, &s2.b, &s1.b);
    let d3 = orient(&s1.a, &s1.b, &s2.a);
    let d4 = orient(&s1.a, &s1.b, &s2.b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    // collinear / touching cases fall through to the distance check
    segment_segment_distance_no_cross(s1, s2) <= EPS
}

fn segment_segment_distance_no_cross(s1: &Segment, s2: &Segment) -> f64 {
    let mut best = f64::INFINITY;
    for p in s1.endpoints() {
        best = best.min(point_segment_distance(&p, s2));
    }
    for p in s2.endpoints() {
        best = best.min(point_segment_distance(&p, s1));
    }
    best
}

/// Closest-point distance between two segments; 0 if they cross or touch.
pub fn segment_segment_distance(s1: &Segment, s2: &Segment) -> f64 {
    let d1 = orient(&s2.a, &s2.b, &s1.a);
    let d2 = orient(&s2.a, &s2.b, &s1.b);
    let d3 = orient(&s1.a, &s1.b, &s2.a);
    let d4 = orient(&s1.a, &s1.b, &s2.b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return 0.0;
    }
    segment_segment_distance_no_cross(s1, s2)
}

/// Intersection point of two properly crossing segments, with the curve
/// parameters on each. Returns None for parallel or non-crossing pairs.
pub fn segment_intersection(s1: &Segment, s2: &Segment) -> Option<(Point, f64, f64)> {
    let r = (s1.b.x - s1.a.x, s1.b.y - s1.a.y);
    let s = (s2.b.x - s2.a.x, s2.b.y - s2.a.y);
    let denom = r.0 * s.1 - r.1 * s.0;
    if denom.abs() < EPS {
        return None;
    }
    let qp = (s2.a.x - s1.a.x, s2.a.y - s1.a.y);
    let t = (qp.0 * s.1 - qp.1 * s.0) / denom;
    let u = (qp.0 * r.1 - qp.1 * r.0) / denom;
    if !(-EPS..=1.0 + EPS).contains(&t) || !(-EPS..=1.0 + EPS).contains(&u) {
        return None;
    }
    let p = Point::new(s1.a.x + t * r.0, s1.a.y + t * r.1);
    Some((p, t, u))
}

/// An open chain of straight segments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polyline {
    vertices: Vec<Point>,
}

impl Polyline {
    pub fn new(vertices: Vec<Point>) -> Result<Self, GeometryError> {
        if vertices.len() < 2 {
            return Err(GeometryError::ShortPolyline(vertices.len()));
        }
        for (i, w) in vertices.windows(2).enumerate() {
            if w[0].close_to(&w[1]) {
                return Err(GeometryError::CoincidentVertices(i + 1));
            }
        }
        Ok(Polyline { vertices })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn segments(&self) -> Vec<Segment> {
        self.vertices
            .windows(2)
            .map(|w| Segment { a: w[0], b: w[1] })
            .collect()
    }

    pub fn first(&self) -> Point {
        self.vertices[0]
    }

    pub fn last(&self) -> Point {
        *self.vertices.last().unwrap()
    }

    pub fn bbox(&self) -> Rect {
        Rect::hull(self.vertices.iter())
    }
}

/// A closed ring of vertices; the stored ring repeats the first vertex last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polygon {
    ring: Vec<Point>,
    pub filled: bool,
}

impl Polygon {
    /// Builds a polygon from distinct vertices, closing the ring if needed.
    pub fn new(mut vertices: Vec<Point>, filled: bool) -> Result<Self, GeometryError> {
        if vertices.len() >= 2 && vertices[0].close_to(vertices.last().unwrap()) {
            vertices.pop();
        }
        if vertices.len() < 3 {
            return Err(GeometryError::ShortPolygon(vertices.len()));
        }
        for (i, w) in vertices.windows(2).enumerate() {
            if w[0].close_to(&w[1]) {
                return Err(GeometryError::CoincidentVertices(i + 1));
            }
        }
        let first = vertices[0];
        vertices.push(first);
        let poly = Polygon {
            ring: vertices,
            filled,
        };
        if poly.perimeter() <= EPS {
            return Err(GeometryError::ZeroPerimeter);
        }
        Ok(poly)
    }

    /// Closed ring including the repeated first vertex.
    pub fn ring(&self) -> &[Point] {
        &self.ring
    }

    /// Distinct vertices without the closing duplicate.
    pub fn distinct_vertices(&self) -> &[Point] {
        &self.ring[..self.ring.len() - 1]
    }

    pub fn edges(&self) -> Vec<Segment> {
        self.ring
            .windows(2)
            .map(|w| Segment { a: w[0], b: w[1] })
            .collect()
    }

    pub fn perimeter(&self) -> f64 {
        self.edges().iter().map(Segment::length).sum()
    }

    pub fn centroid(&self) -> Point {
        let v = self.distinct_vertices();
        let n = v.len() as f64;
        Point::new(
            v.iter().map(|p| p.x).sum::<f64>() / n,
            v.iter().map(|p| p.y).sum::<f64>() / n,
        )
    }

    pub fn bbox(&self) -> Rect {
        Rect::hull(self.ring.iter())
    }

    /// Even-odd point containment test.
    pub fn contains(&self, p: &Point) -> bool {
        let mut inside = false;
        let v = &self.ring;
        for w in v.windows(2) {
            let (a, b) = (w[0], w[1]);
            if (a.y > p.y) != (b.y > p.y) {
                let xin = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if p.x < xin {
                    inside = !inside;
                }
            }
        }
        inside
    }
}

/// Axis-aligned rectangle, used for character bounding boxes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub min: Point,
    pub max: Point,
}

impl Rect {
    pub fn new(min: Point, max: Point) -> Self {
        Rect {
            min: Point::new(min.x.min(max.x), min.y.min(max.y)),
            max: Point::new(min.x.max(max.x), min.y.max(max.y)),
        }
    }

    pub fn hull<'a>(points: impl Iterator<Item = &'a Point>) -> Rect {
        let mut min = Point::new(f64::INFINITY, f64::INFINITY);
        let mut max = Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        Rect { min, max }
    }

    pub fn center(&self) -> Point {
        self.min.midpoint(&self.max)
    }

    pub fn width(&self) -> f64 {
        self.max.x - self.min.x
    }

    pub fn height(&self) -> f64 {
        self.max.y - self.min.y
    }

    pub fn corners(&self) -> [Point; 4] {
        [
            self.min,
            Point::new(self.max.x, self.min.y),
            self.max,
            Point::new(self.min.x, self.max.y),
        ]
    }

    pub fn edges(&self) -> Vec<Segment> {
        let c = self.corners();
        (0..4)
            .map(|i| Segment {
                a: c[i],
                b: c[(i + 1) % 4],
            })
            .collect()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.x >= self.min.x - EPS
            && p.x <= self.max.x + EPS
            && p.y >= self.min.y - EPS
            && p.y <= self.max.y + EPS
    }

    pub fn union(&self, other: &Rect) -> Rect {
        Rect {
            min: Point::new(self.min.x.min(other.min.x), self.min.y.min(other.min.y)),
            max: Point::new(self.max.x.max(other.max.x), self.max.y.max(other.max.y)),
        }
    }

    /// Area of the intersection with another rectangle; 0 when disjoint.
    pub fn intersection_area(&self, other: &Rect) -> f64 {
        let w = (self.max.x.min(other.max.x) - self.min.x.max(other.min.x)).max(0.0);
        let h = (self.max.y.min(other.max.y) - self.min.y.max(other.min.y)).max(0.0);
        w * h
    }

    pub fn expand(&self, by: f64) -> Rect {
        Rect {
            min: Point::new(self.min.x - by, self.min.y - by),
            max: Point::new(self.max.x + by, self.max.y + by),
        }
    }
}

/// Geometry carried by a primitive, used for pairwise distance queries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Shape {
    Point(Point),
    Segment(Segment),
    Polyline(Polyline),
    Polygon(Polygon),
    Rect(Rect),
}

impl Shape {
    fn segments(&self) -> Vec<Segment> {
        match self {
            Shape::Point(_) => Vec::new(),
            Shape::Segment(s) => vec![*s],
            Shape::Polyline(p) => p.segments(),
            Shape::Polygon(p) => p.edges(),
            Shape::Rect(r) => r.edges(),
        }
    }

    fn sample_point(&self) -> Point {
        match self {
            Shape::Point(p) => *p,
            Shape::Segment(s) => s.a,
            Shape::Polyline(p) => p.first(),
            Shape::Polygon(p) => p.ring()[0],
            Shape::Rect(r) => r.min,
        }
    }

    fn contains(&self, p: &Point) -> bool {
        match self {
            Shape::Polygon(poly) => poly.contains(p),
            Shape::Rect(r) => r.contains(p),
            _ => false,
        }
    }

    pub fn bbox(&self) -> Rect {
        match self {
            Shape::Point(p) => Rect { min: *p, max: *p },
            Shape::Segment(s) => s.bbox(),
            Shape::Polyline(p) => p.bbox(),
            Shape::Polygon(p) => p.bbox(),
            Shape::Rect(r) => *r,
        }
    }
}

/// Minimum euclidean distance between any point of `g1` and any point of
/// `g2`; 0 when they intersect, touch, or one contains the other.
pub fn closest_distance(g1: &Shape, g2: &Shape) -> f64 {
    // containment: a vertex of one shape inside the other's area
    if g1.contains(&g2.sample_point()) || g2.contains(&g1.sample_point()) {
        return 0.0;
    }
    let s1 = g1.segments();
    let s2 = g2.segments();
    match (s1.is_empty(), s2.is_empty()) {
        (true, true) => g1.sample_point().distance(&g2.sample_point()),
        (true, false) => {
            let p = g1.sample_point();
            s2.iter()
                .map(|s| point_segment_distance(&p, s))
                .fold(f64::INFINITY, f64::min)
        }
        (false, true) => {
            let p = g2.sample_point();
            s1.iter()
                .map(|s| point_segment_distance(&p, s))
                .fold(f64::INFINITY, f64::min)
        }
        (false, false) => {
            let mut best = f64::INFINITY;
            for a in &s1 {
                for b in &s2 {
                    best = best.min(segment_segment_distance(a, b));
                    if best <= 0.0 {
                        return 0.0;
                    }
                }
            }
            best
        }
    }
}

fn bezier_point(c: &[Point; 4], t: f64) -> Point {
    let u = 1.0 - t;
    let b0 = u * u * u;
    let b1 = 3.0 * u * u * t;
    let b2 = 3.0 * u * t * t;
    let b3 = t * t * t;
    Point::new(
        b0 * c[0].x + b1 * c[1].x + b2 * c[2].x + b3 * c[3].x,
        b0 * c[0].y + b1 * c[1].y + b2 * c[2].y + b3 * c[3].y,
    )
}

fn split_bezier(c: &[Point; 4]) -> ([Point; 4], [Point; 4]) {
    let m01 = c[0].midpoint(&c[1]);
    let m12 = c[1].midpoint(&c[2]);
    let m23 = c[2].midpoint(&c[3]);
    let m012 = m01.midpoint(&m12);
    let m123 = m12.midpoint(&m23);
    let mid = m012.midpoint(&m123);
    ([c[0], m01, m012, mid], [mid, m123, m23, c[3]])
}

fn bezier_is_flat(c: &[Point; 4], flatness: f64) -> bool {
    if c[0].close_to(&c[3]) {
        // chord degenerate: bound by control-point spread instead
        return c[1].distance(&c[0]) <= flatness && c[2].distance(&c[0]) <= flatness;
    }
    let chord = Segment { a: c[0], b: c[3] };
    point_segment_distance(&c[1], &chord) <= flatness
        && point_segment_distance(&c[2], &chord) <= flatness
}

fn flatten_rec(c: &[Point; 4], flatness: f64, depth: u32, out: &mut Vec<Point>) {
    if depth == 0 || bezier_is_flat(c, flatness) {
        out.push(c[3]);
        return;
    }
    let (l, r) = split_bezier(c);
    flatten_rec(&l, flatness, depth - 1, out);
    flatten_rec(&r, flatness, depth - 1, out);
}

/// Flattens a cubic Bézier curve into a polyline by recursive subdivision
/// until every segment deviates from the true curve by at most `flatness`
/// points. All output vertices lie on the curve.
pub fn flatten_bezier(control: &[Point; 4], flatness: f64) -> Result<Polyline, GeometryError> {
    if !(flatness > 0.0) {
        return Err(GeometryError::BadFlatness(flatness));
    }
    let mut vertices = vec![control[0]];
    flatten_rec(control, flatness, 24, &mut vertices);
    vertices.dedup_by(|a, b| a.close_to(b));
    if vertices.len() < 2 {
        // curve collapsed to a point; keep a minimal stub around the point
        vertices = vec![control[0], control[3]];
        if vertices[0].close_to(&vertices[1]) {
            return Err(GeometryError::DegenerateSegment(control[0].x, control[0].y));
        }
    }
    Polyline::new(vertices)
}

/// Evaluates the curve at `samples` evenly spaced parameters; test support.
pub fn sample_bezier(control: &[Point; 4], samples: usize) -> Vec<Point> {
    (0..=samples)
        .map(|i| bezier_point(control, i as f64 / samples as f64))
        .collect()
}

/// Minimum distance from a point to any segment of a polyline; test support.
pub fn point_polyline_distance(p: &Point, poly: &Polyline) -> f64 {
    poly.segments()
        .iter()
        .map(|s| point_segment_distance(p, s))
        .fold(f64::INFINITY, f64::min)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seg(ax: f64, ay: f64, bx: f64, by: f64) -> Segment {
        Segment::new(Point::new(ax, ay), Point::new(bx, by)).unwrap()
    }

    #[test]
    fn closest_distance_parallel_unit_offset() {
        let d = closest_distance(
            &Shape::Segment(seg(0.0, 0.0, 1.0, 0.0)),
            &Shape::Segment(seg(0.0, 1.0, 1.0, 1.0)),
        );
        assert!((d - 1.0).abs() < EPS);
    }

    #[test]
    fn closest_distance_intersecting_is_zero() {
        let d = closest_distance(
            &Shape::Segment(seg(0.0, 0.0, 1.0, 0.0)),
            &Shape::Segment(seg(0.5, 0.0, 0.5, 1.0)),
        );
        assert_eq!(d, 0.0);
    }

    #[test]
    fn closest_distance_point_to_segment_matches_dense_sampling() {
        // oracle: dense sampling of the segment, min over samples
        let p = Point::new(0.0, 0.0);
        let s = seg(3.0, 4.0, 3.0, 10.0);
        let oracle = (0..=100_000)
            .map(|i| {
                let t = i as f64 / 100_000.0;
                let q = Point::new(
                    s.a.x + t * (s.b.x - s.a.x),
                    s.a.y + t * (s.b.y - s.a.y),
                );
                p.distance(&q)
            })
            .fold(f64::INFINITY, f64::min);
        assert!((oracle - 5.0).abs() < 1e-6);
        let d = closest_distance(&Shape::Point(p), &Shape::Segment(s));
        assert!((d - 5.0).abs() < EPS);
    }

    #[test]
    fn endpoint_distance_shared_endpoint() {
        assert_eq!(
            endpoint_distance(&seg(0.0, 0.0, 1.0, 0.0), &seg(1.0, 0.0, 2.0, 0.0)),
            0.0
        );
    }

    #[test]
    fn endpoint_distance_overlapping_lines_positive() {
        // oracle: enumerate the 4 endpoint pairs by hand
        let l1 = seg(0.0, 0.0, 2.0, 0.0);
        let l2 = seg(0.5, 0.0, 1.5, 0.0);
        let pairs = [
            l1.a.distance(&l2.a),
            l1.a.distance(&l2.b),
            l1.b.distance(&l2.a),
            l1.b.distance(&l2.b),
        ];
        let expect = pairs.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((expect - 0.5).abs() < EPS);
        let d = endpoint_distance(&l1, &l2);
        assert!((d - 0.5).abs() < EPS);
        // overlapping closest-point distance would be 0
        assert_eq!(segment_segment_distance(&l1, &l2), 0.0);
    }

    #[test]
    fn endpoint_distance_symmetric_offset() {
        let d = endpoint_distance(&seg(0.0, 0.0, 1.0, 0.0), &seg(0.0, 1.0, 1.0, 1.0));
        assert!((d - 1.0).abs() < EPS);
    }

    #[test]
    fn angle_between_basic_cases() {
        assert!((angle_between(&seg(0.0, 0.0, 1.0, 0.0), &seg(0.0, 1.0, 1.0, 1.0))).abs() < EPS);
        assert!(
            (angle_between(&seg(0.0, 0.0, 1.0, 0.0), &seg(0.0, 0.0, 0.0, 1.0)) - 90.0).abs() < EPS
        );
        assert!(
            (angle_between(&seg(0.0, 0.0, 1.0, 0.0), &seg(0.0, 0.0, 1.0, 1.0)) - 45.0).abs() < EPS
        );
    }

    #[test]
    fn flatten_collinear_controls_is_single_segment() {
        let c = [
            Point::new(0.0, 0.0),
            Point::new(1.0, 0.0),
            Point::new(2.0, 0.0),
            Point::new(3.0, 0.0),
        ];
        let poly = flatten_bezier(&c, 0.25).unwrap();
        assert_eq!(poly.vertices().len(), 2);
        assert_eq!(poly.first(), Point::new(0.0, 0.0));
        assert_eq!(poly.last(), Point::new(3.0, 0.0));
    }

    #[test]
    fn flatten_deviation_within_flatness() {
        let c = [
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
        ];
        let poly = flatten_bezier(&c, 0.25).unwrap();
        let max_dev = sample_bezier(&c, 1000)
            .iter()
            .map(|p| point_polyline_distance(p, &poly))
            .fold(0.0, f64::max);
        assert!(max_dev <= 0.25, "deviation {max_dev} exceeds flatness");
    }

    #[test]
    fn flatten_finer_flatness_gives_more_vertices() {
        let c = [
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
        ];
        let coarse = flatten_bezier(&c, 0.25).unwrap();
        let fine = flatten_bezier(&c, 0.01).unwrap();
        assert!(fine.vertices().len() > coarse.vertices().len());
    }

    #[test]
    fn flatten_rejects_nonpositive_flatness() {
        let c = [
            Point::new(0.0, 0.0),
            Point::new(0.0, 1.0),
            Point::new(1.0, 1.0),
            Point::new(1.0, 0.0),
        ];
        assert!(flatten_bezier(&c, 0.0).is_err());
    }

    #[test]
    fn degenerate_segment_rejected() {
        assert_eq!(
            Segment::new(Point::new(1.0, 1.0), Point::new(1.0, 1.0)),
            Err(GeometryError::DegenerateSegment(1.0, 1.0))
        );
    }

    #[test]
    fn polygon_ring_closes() {
        let poly = Polygon::new(
            vec![
                Point::new(0.0, 0.0),
                Point::new(1.0, 0.0),
                Point::new(1.0, 1.0),
            ],
            true,
        )
        .unwrap();
        assert_eq!(poly.ring().first(), poly.ring().last());
        assert_eq!(poly.distinct_vertices().len(), 3);
        assert!(poly.contains(&Point::new(0.9, 0.5)));
        assert!(!poly.contains(&Point::new(0.1, 0.9)));
    }

    #[test]
    fn rect_intersection_area() {
        let a = Rect::new(Point::new(0.0, 0.0), Point::new(2.0, 2.0));
        let b = Rect::new(Point::new(1.0, 1.0), Point::new(3.0, 3.0));
        assert!((a.intersection_area(&b) - 1.0).abs() < EPS);
        let c = Rect::new(Point::new(5.0, 5.0), Point::new(6.0, 6.0));
        assert_eq!(a.intersection_area(&c), 0.0);
    }

    #[test]
    fn rect_containment_gives_zero_distance() {
        let r = Rect::new(Point::new(0.0, 0.0), Point::new(10.0, 10.0));
        let s = seg(2.0, 2.0, 3.0, 3.0);
        assert_eq!(
            closest_distance(&Shape::Rect(r), &Shape::Segment(s)),
            0.0
        );
    }
}
