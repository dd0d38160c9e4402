//! Graphviz export. The root is `v_0_1`; each level below it gets one
//! `rank=same` group, spacer vertices are boxed and edge labels are `xi`.

use std::fmt::Write;

use bv_core::OrderedDiagram;

pub fn export_dot(diagram: &OrderedDiagram, depth: usize) -> String {
    let depth = match diagram.depth() {
        Some(d) => depth.min(d),
        None => depth,
    };
    let mut out = String::from("digraph bv {\n  rankdir=TB;\n  node [shape=circle];\n");
    out.push_str("  v_0_1 [label=\"root\"];\n");
    for n in 1..=depth {
        out.push_str("  { rank=same;");
        for j in 1..=diagram.vertex_count(n) {
            if j == diagram.spacer(n) {
                let _ = write!(out, " v_{}_{} [shape=box, label=\"s\"];", n, j);
            } else {
                let _ = write!(out, " v_{}_{};", n, j);
            }
        }
        out.push_str(" }\n");
    }
    for n in 1..=depth {
        for j in 1..=diagram.vertex_count(n) {
            for (xi, &g) in diagram.in_edges(n, j).iter().enumerate() {
                let _ = writeln!(out, "  v_{}_{} -> v_{}_{} [label=\"{}\"];", n - 1, g, n, j, xi + 1);
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use bv_core::corpus::fixture;

    fn count(text: &str, pat: &str) -> usize {
        text.lines().filter(|l| l.contains(pat)).count()
    }

    #[test]
    fn chacon_to_depth_three() {
        let d = fixture("chacon").unwrap().diagram().unwrap();
        let dot = export_dot(&d, 3);
        assert!(dot.contains("v_1_1 -> v_2_1 [label=\"1\"];"));
        assert_eq!(count(&dot, "rank=same"), 3);
        let edges: usize = (1..=3).map(|n| d.layer(n - 1).edge_count()).sum();
        assert_eq!(count(&dot, " -> "), edges);
        assert_eq!(dot, export_dot(&d, 3));
    }

    #[test]
    fn depth_one_is_root_and_first_level() {
        let d = fixture("fig1a").unwrap().diagram().unwrap();
        let dot = export_dot(&d, 1);
        assert_eq!(count(&dot, "rank=same"), 1);
        assert_eq!(count(&dot, " -> "), 5);
        assert!(!dot.contains("v_2_"));
    }
}
