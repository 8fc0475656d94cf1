//! Graphviz output. The initial state gets an entering arrow from an
//! invisible node; marked states are drawn as double circles.

use std::fmt::Write;

use scalsup_core::Generator;

pub fn to_dot(name: &str, g: &Generator) -> String {
    let g = g.canonical();
    let mut out = String::new();
    writeln!(out, "digraph \"{}\" {{", escape(name)).unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  node [shape=circle];").unwrap();
    if let Some(q0) = g.initial() {
        writeln!(out, "  __start [shape=point, style=invis];").unwrap();
        writeln!(out, "  __start -> {q0};").unwrap();
    }
    for q in 0..g.num_states() {
        let shape = if g.is_marked(q) {
            "doublecircle"
        } else {
            "circle"
        };
        writeln!(out, "  {q} [shape={shape}];").unwrap();
    }
    for (p, e, q) in g.transitions() {
        let style = if e.is_controllable() {
            ""
        } else {
            ", style=dashed"
        };
        writeln!(
            out,
            "  {p} -> {q} [label=\"{}\"{style}];",
            escape(e.label())
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}
