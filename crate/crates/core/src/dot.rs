//! Graphviz export.
//!
//! Attack-structure nodes are filled by classification with precedence
//! gray (exposing) > yellow (weakly exposing) > green (target) > white.

use std::fmt::{Display, Write as _};

use crate::automaton::Automaton;
use crate::structure::AttackStructure;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

fn write_graph<S, L>(aut: &Automaton<S, L>, fill: impl Fn(&S) -> Option<&'static str>) -> String
where
    S: Ord + Clone + Display,
    L: Ord + Clone + Display,
{
    let mut out = String::new();
    out.push_str("digraph automaton {\n");
    out.push_str("  rankdir=LR;\n");
    out.push_str("  node [shape=ellipse];\n");
    out.push_str("  __start [shape=point, label=\"\"];\n");
    for (i, s) in aut.states().enumerate() {
        match fill(s) {
            Some(color) => writeln!(out, "  n{i} [label={}, style=filled, fillcolor={color}];", quote(&s.to_string())),
            None => writeln!(out, "  n{i} [label={}];", quote(&s.to_string())),
        }
        .unwrap();
    }
    writeln!(out, "  __start -> n{};", aut.initial_index()).unwrap();
    for i in 0..aut.num_states() {
        for (l, d) in aut.edges_at(i) {
            writeln!(out, "  n{i} -> n{d} [label={}];", quote(&l.to_string())).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

/// Plain export without node colors.
pub fn export_dot<S, L>(aut: &Automaton<S, L>) -> String
where
    S: Ord + Clone + Display,
    L: Ord + Clone + Display,
{
    write_graph(aut, |_| None)
}

/// Export with classification colors. An empty structure renders as an
/// empty graph.
pub fn export_attack_structure_dot(a: &AttackStructure) -> String {
    let Some(g) = a.graph() else {
        return "digraph automaton {\n  rankdir=LR;\n}\n".to_owned();
    };
    write_graph(g, |r| {
        Some(if a.exposing_states().contains(r) {
            "gray"
        } else if a.weakly_exposing().contains(r) {
            "yellow"
        } else if a.target_states().contains(r) {
            "green"
        } else {
            "white"
        })
    })
}
