//! Graphviz DOT export.

use std::fmt::Write as _;

use covsynth_core::{Automaton, Event};

#[derive(Debug, Clone)]
pub struct DotOptions {
    pub name: String,
    pub left_to_right: bool,
}

impl Default for DotOptions {
    fn default() -> Self {
        DotOptions {
            name: "automaton".into(),
            left_to_right: true,
        }
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn edge_style(e: &Event) -> &'static str {
    match e {
        Event::Plain(_) => "",
        Event::Relabeled(_) => ", color=red, fontcolor=red",
        Event::Command(_) => ", color=blue, fontcolor=blue, style=bold",
        Event::Stop => ", style=dashed",
    }
}

/// Marked states are double circles and the initial state is drawn bold;
/// `#` events are red, commands blue and bold, `stop` dashed. One node per
/// state and one edge per transition.
pub fn export_dot(a: &Automaton, opts: &DotOptions) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph {} {{", quote(&opts.name));
    if opts.left_to_right {
        out.push_str("  rankdir=LR;\n");
    }
    out.push_str("  node [shape=circle];\n");
    for q in a.states() {
        let shape = if a.is_marked(q) { "doublecircle" } else { "circle" };
        let init = if q == a.initial() {
            ", style=bold, penwidth=2"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  n{q} [label={}, shape={shape}{init}];",
            quote(&a.label(q).render())
        );
    }
    for (q, e, d) in a.transitions() {
        let _ = writeln!(
            out,
            "  n{q} -> n{d} [label={}{}];",
            quote(&e.to_string()),
            edge_style(e)
        );
    }
    out.push_str("}\n");
    out
}
