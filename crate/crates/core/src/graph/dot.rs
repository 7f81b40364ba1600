use std::fmt::Write;

use super::dag::Dag;

/// Graphviz rendering: one node per variable in scheme order, then edges
/// sorted by parent and child.
pub fn to_dot(dag: &Dag) -> String {
    let mut out = String::from("digraph G {\n");
    for name in dag.names() {
        writeln!(out, "  {};", quote(name)).unwrap();
    }
    for (p, c) in dag.edges() {
        writeln!(out, "  {} -> {};", quote(&dag.names()[p]), quote(&dag.names()[c])).unwrap();
    }
    out.push_str("}\n");
    out
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}
