//! Graphviz export of a model's graph, for eyeballing.

use alloc::string::String;
use core::fmt::Write;

use crate::model::GraphModel;

pub fn to_dot(g: &GraphModel) -> String {
    let mut s = String::from("graph model {\n");
    for v in g.graph().vertices() {
        let _ = writeln!(s, "  v{} [label=\"{}\"];", v.0, g.info(v));
    }
    for (a, b) in g.graph().edges() {
        let _ = writeln!(s, "  v{} -- v{};", a.0, b.0);
    }
    s.push_str("}\n");
    s
}
