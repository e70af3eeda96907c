use std::fmt::Write;

use super::Graph;

pub(crate) fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Deterministic DOT rendering. Labelled vertices carry their label.
pub fn to_dot(g: &Graph, name: &str) -> String {
    let mut out = String::new();
    writeln!(out, "graph {} {{", quote(name)).unwrap();
    for (i, id) in g.ids().iter().enumerate() {
        match g.label(i) {
            Some(label) => writeln!(out, "  {} [label={}];", quote(id.as_str()), quote(label)).unwrap(),
            None => writeln!(out, "  {};", quote(id.as_str())).unwrap(),
        }
    }
    for &(a, b) in g.edges() {
        writeln!(out, "  {} -- {};", quote(g.id(a).as_str()), quote(g.id(b).as_str())).unwrap();
    }
    out.push_str("}\n");
    out
}
