//! Open string diagrams and the graphical calculus: building diagrams from
//! terms, normalizing them, deciding equality and rendering DOT.

mod build;
mod contract;
mod dot;
mod iso;
mod normalize;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::object::{Factor, ObjectWord};

pub use build::term_to_diagram;
pub use contract::eval_diagram;
pub use dot::export_dot;
pub use iso::isomorphic;
pub use normalize::{normalize, normalize_with_order, replay, symbolic_eq, Rule, TraceEntry, Verdict};

pub type NodeId = usize;

/// A node of an open diagram. Box ports are ordered; spider legs are not.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Node {
    /// A generator. `dom`/`cod` are the port types of this occurrence, after
    /// the dagger and transpose flags have been applied.
    Box {
        name: String,
        dagger: bool,
        transpose: bool,
        dom: ObjectWord,
        cod: ObjectWord,
    },
    Spider {
        classical: String,
        carrier: String,
    },
    /// Outputs `[A*, A]`.
    Cup(String),
    /// Inputs `[A*, A]`.
    Cap(String),
}

impl Node {
    pub fn is_spider(&self) -> bool {
        matches!(self, Node::Spider { .. })
    }

    /// `f`, `f†`, `f^T` or `f_*` (dagger and transpose together).
    pub fn box_label(&self) -> Option<String> {
        match self {
            Node::Box {
                name,
                dagger,
                transpose,
                ..
            } => Some(match (dagger, transpose) {
                (false, false) => name.clone(),
                (true, false) => alloc::format!("{name}†"),
                (false, true) => alloc::format!("{name}^T"),
                (true, true) => alloc::format!("{name}_*"),
            }),
            _ => None,
        }
    }
}

/// Where a wire starts: a diagram input or a node output port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Source {
    Input(usize),
    Port(NodeId, usize),
}

/// Where a wire ends: a diagram output or a node input port.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sink {
    Output(usize),
    Port(NodeId, usize),
}

impl Source {
    pub fn node(&self) -> Option<NodeId> {
        match self {
            Source::Port(n, _) => Some(*n),
            Source::Input(_) => None,
        }
    }
}

impl Sink {
    pub fn node(&self) -> Option<NodeId> {
        match self {
            Sink::Port(n, _) => Some(*n),
            Sink::Output(_) => None,
        }
    }
}

/// A directed wire. Wires on classical carriers are stored with non-dual type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Wire {
    pub src: Source,
    pub dst: Sink,
    pub ty: Factor,
}

/// A scalar factor pulled out of a diagram.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ScalarAtom {
    /// `s_A`; the multiplicity is a half-power.
    Dim(String),
    /// A free scalar or its conjugate; the multiplicity is a count.
    Sym { name: String, conj: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct OpenDiagram {
    pub(crate) inputs: Vec<Factor>,
    pub(crate) outputs: Vec<Factor>,
    pub(crate) nodes: BTreeMap<NodeId, Node>,
    pub(crate) wires: Vec<Wire>,
    pub(crate) scalars: BTreeMap<ScalarAtom, i32>,
    pub(crate) next_id: NodeId,
}

impl OpenDiagram {
    pub fn inputs(&self) -> &[Factor] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Factor] {
        &self.outputs
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &Node)> {
        self.nodes.iter().map(|(k, v)| (*k, v))
    }

    pub fn node(&self, id: NodeId) -> Option<&Node> {
        self.nodes.get(&id)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn scalars(&self) -> &BTreeMap<ScalarAtom, i32> {
        &self.scalars
    }

    /// No boxes and no free scalars.
    pub fn is_generator_free(&self) -> bool {
        self.nodes.values().all(|n| !matches!(n, Node::Box { .. }))
            && self.scalars.keys().all(|a| matches!(a, ScalarAtom::Dim(_)))
    }

    /// `(in, out)` leg counts of a node, counting a self-loop once on each side.
    pub fn arity(&self, id: NodeId) -> (usize, usize) {
        let ins = self.wires.iter().filter(|w| w.dst.node() == Some(id)).count();
        let outs = self.wires.iter().filter(|w| w.src.node() == Some(id)).count();
        (ins, outs)
    }

    pub(crate) fn add_node(&mut self, node: Node) -> NodeId {
        let id = self.next_id;
        self.next_id += 1;
        self.nodes.insert(id, node);
        id
    }

    pub(crate) fn add_scalar(&mut self, atom: ScalarAtom, mult: i32) {
        let e = self.scalars.entry(atom.clone()).or_insert(0);
        *e += mult;
        if *e == 0 {
            self.scalars.remove(&atom);
        }
    }

    /// Renumbers nodes `0..n` preserving order and sorts the wire list.
    pub(crate) fn compact(&mut self) {
        let map: BTreeMap<NodeId, NodeId> = self.nodes.keys().enumerate().map(|(new, &old)| (old, new)).collect();
        let nodes = core::mem::take(&mut self.nodes);
        self.nodes = nodes.into_iter().map(|(k, v)| (map[&k], v)).collect();
        for w in &mut self.wires {
            if let Source::Port(n, p) = w.src {
                w.src = Source::Port(map[&n], p);
            }
            if let Sink::Port(n, p) = w.dst {
                w.dst = Sink::Port(map[&n], p);
            }
        }
        self.wires.sort();
        self.next_id = self.nodes.len();
    }
}

fn fmt_source(s: &Source) -> String {
    match s {
        Source::Input(i) => alloc::format!("in{i}"),
        Source::Port(n, p) => alloc::format!("n{n}.{p}"),
    }
}

fn fmt_sink(s: &Sink) -> String {
    match s {
        Sink::Output(i) => alloc::format!("out{i}"),
        Sink::Port(n, p) => alloc::format!("n{n}.{p}"),
    }
}

fn fmt_word(w: &[Factor]) -> String {
    alloc::format!("{}", ObjectWord::from_factors(w.to_vec()))
}

impl fmt::Display for ScalarAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarAtom::Dim(b) => write!(f, "s_{b}"),
            ScalarAtom::Sym { name, conj: false } => f.write_str(name),
            ScalarAtom::Sym { name, conj: true } => write!(f, "{name}_*"),
        }
    }
}

/// Line-oriented summary, stable across runs.
impl fmt::Display for OpenDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "inputs: {}", fmt_word(&self.inputs))?;
        writeln!(f, "outputs: {}", fmt_word(&self.outputs))?;
        for (&id, node) in &self.nodes {
            let (i, o) = self.arity(id);
            match node {
                Node::Box { dom, cod, .. } => writeln!(
                    f,
                    "n{id}: box {} : {dom} -> {cod}",
                    node.box_label().unwrap_or_default()
                )?,
                Node::Spider { classical, .. } => writeln!(f, "n{id}: spider {classical}({i},{o})")?,
                Node::Cup(b) => writeln!(f, "n{id}: cup {b}")?,
                Node::Cap(b) => writeln!(f, "n{id}: cap {b}")?,
            }
        }
        for w in &self.wires {
            writeln!(
                f,
                "wire {} -> {} : {}",
                fmt_source(&w.src),
                fmt_sink(&w.dst),
                fmt_word(core::slice::from_ref(&w.ty))
            )?;
        }
        if self.scalars.is_empty() {
            write!(f, "scalar: 1")
        } else {
            f.write_str("scalar:")?;
            for (atom, m) in &self.scalars {
                match atom {
                    ScalarAtom::Dim(_) => write!(f, " {atom}^({m}/2)")?,
                    ScalarAtom::Sym { .. } => write!(f, " {atom}^{m}")?,
                }
            }
            Ok(())
        }
    }
}
