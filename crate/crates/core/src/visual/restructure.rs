//! Distance-based edge corrections turning the MST into a visual structure
//! graph: closing ring cycles, completing character-line connections, and
//! splitting floating structures.
//!
//! All thresholds derive from skeleton-origin edges (including ones already
//! pruned), never from added edges, so applying the transform to its own
//! output changes nothing.

use crate::geometry::{endpoint_distance, is_parallel};
use crate::params::ParserParams;
use crate::primitive::{PrimKind, Primitive};

use super::{EdgeOrigin, PrimitiveGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum PairClass {
    NonParallelLines,
    ParallelLines,
    CharLine,
    Other,
}

fn classify(a: &Primitive, b: &Primitive, params: &ParserParams) -> PairClass {
    let (ka, kb) = (a.kind(), b.kind());
    if ka == PrimKind::Line && kb == PrimKind::Line {
        let (sa, sb) = (a.as_segment().unwrap(), b.as_segment().unwrap());
        if is_parallel(sa, sb, params.angle_tolerance_degrees) {
            PairClass::ParallelLines
        } else {
            PairClass::NonParallelLines
        }
    } else if matches!(
        (ka, kb),
        (PrimKind::Char, PrimKind::Line) | (PrimKind::Line, PrimKind::Char)
    ) {
        PairClass::CharLine
    } else {
        PairClass::Other
    }
}

/// Drops values more than `z` standard deviations above the mean; skipped
/// with fewer than two samples.
fn z_filter(values: &[f64], z: f64) -> Vec<f64> {
    if values.len() < 2 || !z.is_finite() {
        return values.to_vec();
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / values.len() as f64;
    let std = var.sqrt();
    if std <= 0.0 {
        return values.to_vec();
    }
    let cutoff = mean + z * std;
    values.iter().copied().filter(|v| *v <= cutoff).collect()
}

fn max_of(values: &[f64]) -> Option<f64> {
    values.iter().copied().fold(None, |acc, v| {
        Some(match acc {
            None => v,
            Some(m) => m.max(v),
        })
    })
}

/// Applies the three distance-clustering corrections:
///
/// 1. adds edges between non-parallel lines whose endpoint distance is at
///    most `CLOSE_NONPARALLEL_ALPHA` times the maximum skeleton non-parallel
///    distance (closing rings and multi-line intersections);
/// 2. adds character-line edges within `CLOSE_CHAR_LINE_ALPHA` times the
///    z-filtered maximum skeleton char-line distance;
/// 3. removes edges longer than `MAX_ALPHA_DIST` times a reference distance
///    (first available of char-line, parallel-line, non-parallel-line),
///    splitting floating structures into separate components.
pub fn restructure_edges(mut g: PrimitiveGraph, params: &ParserParams) -> PrimitiveGraph {
    // skeleton statistics, dead edges included
    let mut np_dists = Vec::new();
    let mut par_dists = Vec::new();
    let mut cl_dists = Vec::new();
    for e in g.edges.iter().filter(|e| e.origin == EdgeOrigin::Skeleton) {
        match classify(&g.nodes[e.a], &g.nodes[e.b], params) {
            PairClass::NonParallelLines => np_dists.push(e.weight),
            PairClass::ParallelLines => par_dists.push(e.weight),
            PairClass::CharLine => cl_dists.push(e.weight),
            PairClass::Other => {}
        }
    }
    let max_np = max_of(&np_dists);
    let filtered_cl = z_filter(&cl_dists, params.char_line_z_tolerance);
    let max_cl = max_of(&filtered_cl);
    let max_par = max_of(&par_dists);

    let n = g.nodes.len();

    // 1. missing non-parallel line intersections
    if let Some(max_np) = max_np {
        let limit = params.close_nonparallel_alpha * max_np;
        for i in 0..n {
            for j in (i + 1)..n {
                if classify(&g.nodes[i], &g.nodes[j], params) != PairClass::NonParallelLines {
                    continue;
                }
                let d = endpoint_distance(
                    g.nodes[i].as_segment().unwrap(),
                    g.nodes[j].as_segment().unwrap(),
                );
                if d <= limit && !g.has_alive_edge(i, j) {
                    g.add_edge(i, j, d, EdgeOrigin::Added);
                }
            }
        }
    }

    // 2. character-line connections
    if let Some(max_cl) = max_cl {
        let limit = params.close_char_line_alpha * max_cl;
        for i in 0..n {
            for j in (i + 1)..n {
                if classify(&g.nodes[i], &g.nodes[j], params) != PairClass::CharLine {
                    continue;
                }
                let d = crate::mst::pair_distance(&g.nodes[i], &g.nodes[j]);
                if d <= limit && !g.has_alive_edge(i, j) {
                    g.add_edge(i, j, d, EdgeOrigin::Added);
                }
            }
        }
    }

    // 3. split floating structures
    let reference = max_cl.or(max_par).or(max_np);
    if let Some(reference) = reference {
        let limit = params.max_alpha_dist * reference;
        let too_long: Vec<(usize, usize)> = g
            .alive_edges()
            .filter(|e| e.weight > limit)
            .map(|e| (e.a, e.b))
            .collect();
        for (a, b) in too_long {
            g.kill_edge(a, b);
        }
    }

    g.sort_edges();
    g
}
