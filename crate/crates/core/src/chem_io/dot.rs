//! DOT (graphviz) dumps of intermediate graphs for debugging.

use crate::primitive::Primitive;
use crate::visual::{PrimitiveGraph, TokenGraph, TokenNode};

fn prim_label(p: &Primitive) -> String {
    match p.glyph() {
        Some(g) => format!("{} {:?}", p.id, g),
        None => format!("{} {:?}", p.id, p.kind()),
    }
}

/// Primitive graph (MST or visual) as DOT; dead edges render dashed grey.
pub fn primitive_graph_to_dot(g: &PrimitiveGraph, title: &str) -> String {
    let mut out = format!("graph {title} {{\n");
    for node in &g.nodes {
        out.push_str(&format!(
            "  n{} [label=\"{}\"];\n",
            node.id,
            prim_label(node)
        ));
    }
    for e in &g.edges {
        let style = if e.alive {
            String::new()
        } else {
            " [style=dashed, color=grey]".to_string()
        };
        out.push_str(&format!(
            "  n{} -- n{} [label=\"{:.2}\"]{};\n",
            e.a, e.b, e.weight, style
        ));
    }
    out.push_str("}\n");
    out
}

/// Tokenized visual graph as DOT.
pub fn token_graph_to_dot(tg: &TokenGraph) -> String {
    let mut out = String::from("graph tokens {\n");
    for (i, node) in tg.nodes.iter().enumerate() {
        let label = match node {
            TokenNode::Name { text, .. } => format!("{text:?}"),
            TokenNode::Bond {
                kind, line_count, ..
            } => match kind {
                Some(k) => format!("{} x{line_count}", k.label()),
                None => format!("lines x{line_count}"),
            },
            TokenNode::Charge { sign, .. } => (if *sign < 0 { "-" } else { "+" }).to_string(),
            TokenNode::Opaque { .. } => "polygon".to_string(),
        };
        out.push_str(&format!("  t{i} [label=\"{label}\"];\n"));
    }
    for &(a, b) in &tg.edges {
        out.push_str(&format!("  t{a} -- t{b};\n"));
    }
    out.push_str("}\n");
    out
}
