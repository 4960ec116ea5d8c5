use alloc::collections::{BTreeMap, BTreeSet, VecDeque};
use alloc::vec::Vec;

use super::{Node, NodeId, OpenDiagram, Sink, Source, Wire};

type Label = (Node, (usize, usize));

fn label(d: &OpenDiagram, id: NodeId) -> Label {
    (d.nodes[&id].clone(), d.arity(id))
}

/// Boundary-anchored isomorphism of labeled open graphs, with equal scalars.
pub fn isomorphic(d1: &OpenDiagram, d2: &OpenDiagram) -> bool {
    if d1.inputs != d2.inputs
        || d1.outputs != d2.outputs
        || d1.scalars != d2.scalars
        || d1.nodes.len() != d2.nodes.len()
        || d1.wires.len() != d2.wires.len()
    {
        return false;
    }
    let mut l1: Vec<Label> = d1.nodes.keys().map(|&n| label(d1, n)).collect();
    let mut l2: Vec<Label> = d2.nodes.keys().map(|&n| label(d2, n)).collect();
    l1.sort();
    l2.sort();
    if l1 != l2 {
        return false;
    }
    let order = search_order(d1);
    let mut m = Matcher {
        d1,
        d2,
        fwd: BTreeMap::new(),
        used: BTreeSet::new(),
    };
    m.search(&order, 0)
}

/// Nodes of `d1` in breadth-first order from the boundary, then the closed
/// components, so most candidates are pinned by an already-mapped neighbour.
fn search_order(d: &OpenDiagram) -> Vec<NodeId> {
    let mut seen = BTreeSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::new();
    let mut starts: Vec<NodeId> = Vec::new();
    for w in &d.wires {
        if matches!(w.src, Source::Input(_)) {
            starts.extend(w.dst.node());
        }
        if matches!(w.dst, Sink::Output(_)) {
            starts.extend(w.src.node());
        }
    }
    starts.extend(d.nodes.keys().copied());
    for s in starts {
        if !seen.insert(s) {
            continue;
        }
        queue.push_back(s);
        while let Some(n) = queue.pop_front() {
            order.push(n);
            for nb in neighbours(d, n) {
                if seen.insert(nb) {
                    queue.push_back(nb);
                }
            }
        }
    }
    order
}

fn neighbours(d: &OpenDiagram, n: NodeId) -> Vec<NodeId> {
    let mut out = Vec::new();
    for w in &d.wires {
        if w.src.node() == Some(n) {
            out.extend(w.dst.node());
        }
        if w.dst.node() == Some(n) {
            out.extend(w.src.node());
        }
    }
    out
}

struct Matcher<'a> {
    d1: &'a OpenDiagram,
    d2: &'a OpenDiagram,
    fwd: BTreeMap<NodeId, NodeId>,
    used: BTreeSet<NodeId>,
}

impl Matcher<'_> {
    fn search(&mut self, order: &[NodeId], k: usize) -> bool {
        if k == order.len() {
            return self.all_wires_match();
        }
        let a = order[k];
        let la = label(self.d1, a);
        let pinned: Option<Vec<NodeId>> = neighbours(self.d1, a)
            .into_iter()
            .find_map(|nb| self.fwd.get(&nb).copied())
            .map(|img| neighbours(self.d2, img));
        let mut candidates: Vec<NodeId> = match pinned {
            Some(c) => c,
            None => self.d2.nodes.keys().copied().collect(),
        };
        candidates.sort_unstable();
        candidates.dedup();
        for b in candidates {
            if self.used.contains(&b) || label(self.d2, b) != la {
                continue;
            }
            self.fwd.insert(a, b);
            self.used.insert(b);
            if self.local_ok(a, b) && self.search(order, k + 1) {
                return true;
            }
            self.fwd.remove(&a);
            self.used.remove(&b);
        }
        false
    }

    fn map_wire(&self, w: &Wire) -> Option<Wire> {
        let src = match w.src {
            Source::Input(i) => Source::Input(i),
            Source::Port(n, p) => Source::Port(*self.fwd.get(&n)?, p),
        };
        let dst = match w.dst {
            Sink::Output(i) => Sink::Output(i),
            Sink::Port(n, p) => Sink::Port(*self.fwd.get(&n)?, p),
        };
        Some(Wire {
            src,
            dst,
            ty: w.ty.clone(),
        })
    }

    fn in_image(&self, w: &Wire) -> bool {
        let ok = |n: Option<NodeId>| n.is_none_or(|x| self.used.contains(&x));
        ok(w.src.node()) && ok(w.dst.node())
    }

    /// Wires touching `a` whose other end is already placed must map onto
    /// exactly the wires touching `b` whose other end is in the image.
    fn local_ok(&self, a: NodeId, b: NodeId) -> bool {
        let touches = |w: &Wire, n: NodeId| w.src.node() == Some(n) || w.dst.node() == Some(n);
        let mut lhs: Vec<Wire> = self
            .d1
            .wires
            .iter()
            .filter(|w| touches(w, a))
            .filter_map(|w| self.map_wire(w))
            .collect();
        let mut rhs: Vec<Wire> = self
            .d2
            .wires
            .iter()
            .filter(|w| touches(w, b) && self.in_image(w))
            .cloned()
            .collect();
        lhs.sort();
        rhs.sort();
        lhs == rhs
    }

    fn all_wires_match(&self) -> bool {
        let mut lhs: Vec<Wire> = match self.d1.wires.iter().map(|w| self.map_wire(w)).collect() {
            Some(v) => v,
            None => return false,
        };
        let mut rhs = self.d2.wires.clone();
        lhs.sort();
        rhs.sort();
        lhs == rhs
    }
}
