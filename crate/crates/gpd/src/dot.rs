//! Graph-description output: objects as nodes, non-identity elements as
//! labeled edges from domain to range.

use std::fmt::Write as _;

use groupoid_core::GroupoidTable;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}

pub fn to_dot(t: &GroupoidTable) -> String {
    let mut out = String::new();
    writeln!(out, "digraph {} {{", quote(t.name())).unwrap();
    for &e in t.objects() {
        writeln!(out, "  {};", quote(t.name_of(e))).unwrap();
    }
    for g in t.elements().filter(|&g| !t.is_object(g)) {
        writeln!(
            out,
            "  {} -> {} [label={}];",
            quote(t.name_of(t.d(g))),
            quote(t.name_of(t.r(g))),
            quote(t.name_of(g))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}
