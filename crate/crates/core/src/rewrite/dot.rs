use alloc::format;
use alloc::string::String;
use core::fmt::Write;

use super::{Node, OpenDiagram, ScalarAtom, Sink, Source};

fn src_id(s: &Source) -> String {
    match s {
        Source::Input(i) => format!("in{i}"),
        Source::Port(n, _) => format!("n{n}"),
    }
}

fn dst_id(s: &Sink) -> String {
    match s {
        Sink::Output(i) => format!("out{i}"),
        Sink::Port(n, _) => format!("n{n}"),
    }
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering. Node ids are `in<i>`, `out<j>` and `n<k>`; inputs sit
/// on the top rank and outputs on the bottom rank.
pub fn export_dot(d: &OpenDiagram) -> String {
    let mut s = String::new();
    s.push_str("digraph diagram {\n");
    s.push_str("  rankdir=TB;\n");
    s.push_str("  node [fontname=\"Helvetica\"];\n");
    s.push_str("  { rank=source;");
    for i in 0..d.inputs.len() {
        let _ = write!(s, " in{i};");
    }
    s.push_str(" }\n");
    s.push_str("  { rank=sink;");
    for j in 0..d.outputs.len() {
        let _ = write!(s, " out{j};");
    }
    s.push_str(" }\n");
    for (i, f) in d.inputs.iter().enumerate() {
        let dual = if f.dual { "^d" } else { "" };
        let _ = writeln!(s, "  in{i} [shape=plaintext, label=\"{}{dual}\"];", escape(&f.base));
    }
    for (j, f) in d.outputs.iter().enumerate() {
        let dual = if f.dual { "^d" } else { "" };
        let _ = writeln!(s, "  out{j} [shape=plaintext, label=\"{}{dual}\"];", escape(&f.base));
    }
    for (&id, node) in &d.nodes {
        let attrs = match node {
            Node::Spider { classical, .. } => {
                let (i, o) = d.arity(id);
                format!(
                    "shape=circle, style=filled, fillcolor=black, fontcolor=white, width=0.3, label=\"{}({i},{o})\"",
                    escape(classical)
                )
            }
            Node::Box { .. } => format!("shape=box, label=\"{}\"", escape(&node.box_label().unwrap_or_default())),
            Node::Cup(b) => format!("shape=invtriangle, width=0.2, label=\"\", xlabel=\"cup {}\"", escape(b)),
            Node::Cap(b) => format!("shape=triangle, width=0.2, label=\"\", xlabel=\"cap {}\"", escape(b)),
        };
        let _ = writeln!(s, "  n{id} [{attrs}];");
    }
    for w in &d.wires {
        let dual = if w.ty.dual { "^d" } else { "" };
        let mut attrs = format!("label=\"{}{dual}\"", escape(&w.ty.base));
        if let Source::Port(n, p) = w.src {
            if matches!(d.nodes.get(&n), Some(Node::Box { .. } | Node::Cup(_))) {
                let _ = write!(attrs, ", taillabel=\"{p}\"");
            }
        }
        if let Sink::Port(n, p) = w.dst {
            if matches!(d.nodes.get(&n), Some(Node::Box { .. } | Node::Cap(_))) {
                let _ = write!(attrs, ", headlabel=\"{p}\"");
            }
        }
        let _ = writeln!(s, "  {} -> {} [{attrs}];", src_id(&w.src), dst_id(&w.dst));
    }
    if !d.scalars.is_empty() {
        let mut label = String::new();
        for (atom, m) in &d.scalars {
            if !label.is_empty() {
                label.push(' ');
            }
            match atom {
                ScalarAtom::Dim(_) => {
                    let _ = write!(label, "{atom}^({m}/2)");
                }
                ScalarAtom::Sym { .. } => {
                    let _ = write!(label, "{atom}^{m}");
                }
            }
        }
        let _ = writeln!(s, "  scalar [shape=note, label=\"{}\"];", escape(&label));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::object::ObjectWord;
    use crate::rewrite::{normalize, term_to_diagram};
    use crate::term::{MorTerm, Signature};

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.add_object("A").unwrap();
        s.add_classical("X", "X").unwrap();
        s
    }

    #[test]
    fn identity_wire() {
        let d = term_to_diagram(&MorTerm::id(ObjectWord::base("A")), &sig()).unwrap();
        let dot = export_dot(&d);
        assert!(dot.contains("in0 [shape=plaintext, label=\"A\"];"));
        assert!(dot.contains("out0 [shape=plaintext, label=\"A\"];"));
        assert_eq!(dot.matches(" -> ").count(), 1);
        assert!(dot.contains("in0 -> out0"));
    }

    #[test]
    fn spider_has_three_edges() {
        let d = term_to_diagram(&MorTerm::delta("X"), &sig()).unwrap();
        let dot = export_dot(&d);
        assert!(dot.contains("label=\"X(1,2)\""));
        assert_eq!(dot.matches(" -> ").count(), 3);
    }

    #[test]
    fn deterministic() {
        let t = MorTerm::eta(ObjectWord::base("X"))
            .then(MorTerm::tensor(MorTerm::id(ObjectWord::base("X")), MorTerm::delta("X")));
        let d = normalize(&term_to_diagram(&t, &sig()).unwrap()).0;
        assert_eq!(export_dot(&d), export_dot(&d.clone()));
    }
}
