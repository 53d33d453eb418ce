//! Correction of floating bond lines that attached to the wrong neighbor in
//! the MST (typically the inner line of a double bond grabbing a nearby
//! ring line's endpoint instead of its parallel partner).

use crate::geometry::{average_endpoint_distance, is_parallel, segments_overlap_along_axis};
use crate::mst::pair_distance;
use crate::params::ParserParams;
use crate::primitive::PrimKind;

use super::{EdgeOrigin, PrimitiveGraph};

/// For each degree-1 line, looks for an overlapping parallel line among its
/// five nearest neighbors; if the average endpoint distance to that line
/// beats the distance to the current neighbor, the line is rewired.
pub fn reconnect_floating_parallels(
    mut g: PrimitiveGraph,
    params: &ParserParams,
) -> PrimitiveGraph {
    let n = g.nodes.len();
    for id in 0..n {
        if g.nodes[id].kind() != PrimKind::Line || g.degree(id) != 1 {
            continue;
        }
        let seg = *g.nodes[id].as_segment().unwrap();
        let current = g.neighbors(id)[0];
        let current_weight = g
            .alive_edges()
            .find(|e| (e.a == id && e.b == current) || (e.b == id && e.a == current))
            .map(|e| e.weight)
            .unwrap_or(f64::INFINITY);
        if current_weight <= crate::geometry::EPS {
            continue; // touching its neighbor: not a floating line
        }

        // metric for the current attachment
        let cur_metric = match g.nodes[current].as_segment() {
            Some(cseg) if g.nodes[current].kind() == PrimKind::Line => {
                average_endpoint_distance(&seg, cseg)
            }
            _ => current_weight,
        };

        // five nearest neighbors by pair distance
        let mut near: Vec<(f64, usize)> = (0..n)
            .filter(|&j| j != id)
            .map(|j| (pair_distance(&g.nodes[id], &g.nodes[j]), j))
            .collect();
        near.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap().then(x.1.cmp(&y.1)));
        near.truncate(5);

        let mut best: Option<(f64, usize)> = None;
        for (_, j) in near {
            if j == current || g.nodes[j].kind() != PrimKind::Line {
                continue;
            }
            let other = g.nodes[j].as_segment().unwrap();
            if !is_parallel(&seg, other, params.angle_tolerance_degrees) {
                continue;
            }
            if !segments_overlap_along_axis(&seg, other) {
                continue;
            }
            let metric = average_endpoint_distance(&seg, other);
            if best.map_or(true, |(m, _)| metric < m) {
                best = Some((metric, j));
            }
        }

        if let Some((metric, j)) = best {
            if metric < cur_metric && !g.has_alive_edge(id, j) {
                g.remove_edge(id, current);
                g.add_edge(id, j, pair_distance(&g.nodes[id], &g.nodes[j]), EdgeOrigin::Skeleton);
            }
        }
    }
    g.sort_edges();
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{Point, Segment};
    use crate::primitive::{PrimShape, Primitive, Source};
    use crate::visual::GraphEdge;

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

    fn edge(a: usize, b: usize, weight: f64) -> GraphEdge {
        GraphEdge {
            a,
            b,
            weight,
            origin: EdgeOrigin::Skeleton,
            alive: true,
        }
    }

    #[test]
    fn inner_double_bond_line_reattaches_to_parallel_partner() {
        // outer ring line 0 with parallel inner line 1 floating nearby, and a
        // touching non-parallel line 2 that captured the inner line's edge
        let nodes = vec![
            line(0, 0.0, 0.0, 40.0, 0.0),   // outer line of the double bond
            line(1, 8.0, 4.0, 32.0, 4.0),   // inner line, parallel, inset
            line(2, 40.0, 0.0, 60.0, 35.0), // adjacent ring line sharing a corner
        ];
        let g = PrimitiveGraph {
            nodes,
            edges: vec![edge(0, 2, 0.0), edge(1, 2, 9.0)],
        };
        let g = reconnect_floating_parallels(g, &ParserParams::default());
        assert!(g.has_alive_edge(0, 1), "inner line should attach to partner");
        assert!(!g.has_alive_edge(1, 2), "old attachment should be removed");
    }

    #[test]
    fn mutually_connected_parallel_pair_is_a_fixed_point() {
        let nodes = vec![
            line(0, 0.0, 0.0, 40.0, 0.0),
            line(1, 8.0, 4.0, 32.0, 4.0),
        ];
        let g = PrimitiveGraph {
            nodes,
            edges: vec![edge(0, 1, 8.9)],
        };
        let before = g.clone();
        let g = reconnect_floating_parallels(g, &ParserParams::default());
        assert_eq!(before, g);
    }

    #[test]
    fn degree_two_line_is_never_moved() {
        let nodes = vec![
            line(0, 0.0, 0.0, 40.0, 0.0),
            line(1, 8.0, 4.0, 32.0, 4.0),
            line(2, 40.0, 0.0, 60.0, 35.0),
            line(3, 0.0, 0.0, -20.0, 35.0),
        ];
        // line 1 has degree 2: it must not be rewired even though line 0 is
        // its parallel partner; line 0 is corner-touching and stays put
        let g = PrimitiveGraph {
            nodes,
            edges: vec![
                edge(1, 2, 9.0),
                edge(1, 3, 9.0),
                edge(0, 2, 0.0),
                edge(0, 3, 0.0),
            ],
        };
        let g2 = reconnect_floating_parallels(g.clone(), &ParserParams::default());
        assert!(g2.has_alive_edge(1, 2));
        assert!(g2.has_alive_edge(1, 3));
        assert!(!g2.has_alive_edge(0, 1));
    }

    #[test]
    fn corner_touching_line_is_not_floating() {
        // degree-1 line touching its neighbor at a corner stays attached
        // even with a parallel partner nearby
        let nodes = vec![
            line(0, 0.0, 0.0, 40.0, 0.0),
            line(1, 8.0, 4.0, 32.0, 4.0),
            line(2, 40.0, 0.0, 60.0, 35.0),
        ];
        let g = PrimitiveGraph {
            nodes,
            edges: vec![edge(0, 2, 0.0), edge(0, 1, 8.944271909999159)],
        };
        let g2 = reconnect_floating_parallels(g.clone(), &ParserParams::default());
        assert!(g2.has_alive_edge(0, 2));
        assert!(g2.has_alive_edge(0, 1));
    }
}
