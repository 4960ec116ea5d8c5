use alloc::collections::BTreeSet;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{isomorphic, term_to_diagram, Node, NodeId, OpenDiagram, ScalarAtom, Sink, Source, Wire};
use crate::error::{Error, Result};
use crate::term::{MorTerm, Signature};

/// The rewrite rules, in the order the deterministic normalizer tries them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// R1: a cup feeding a cap straightens; a closed cup-cap loop becomes `s_A`.
    Snake,
    /// R2: two connected spiders merge and lose their shared wires.
    Fusion,
    /// R3: a wire from a spider to itself disappears.
    SelfLoop,
    /// R4: a spider with one input and one output is a plain wire.
    IdentitySpider,
    /// R5: a box whose every input hangs off a cup and every output off a cap
    /// is replaced by its transpose.
    Transpose,
    /// R6: a spider with no legs becomes the scalar `s_X`.
    ClosedSpider,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Snake => "snake",
            Rule::Fusion => "spider-fusion",
            Rule::SelfLoop => "self-loop",
            Rule::IdentitySpider => "identity-spider",
            Rule::Transpose => "transpose-box",
            Rule::ClosedSpider => "closed-spider",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One rewrite step: the rule, the nodes it matched and its position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub rule: Rule,
    pub nodes: Vec<NodeId>,
    pub step: usize,
}

impl fmt::Display for TraceEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t", self.step, self.rule)?;
        for (i, n) in self.nodes.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "n{n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equal,
    NotEqual,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "Equal",
            Verdict::NotEqual => "NotEqual",
            Verdict::Unknown => "Unknown",
        })
    }
}

/// Rewrites to the fixpoint, always taking the first redex in rule order.
pub fn normalize(d: &OpenDiagram) -> (OpenDiagram, Vec<TraceEntry>) {
    run(d, |_| 0)
}

/// Rewrites to the fixpoint, picking redexes in a seeded random order.
pub fn normalize_with_order(d: &OpenDiagram, seed: u64) -> (OpenDiagram, Vec<TraceEntry>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    run(d, |n| rng.random_range(0..n))
}

fn run(d: &OpenDiagram, mut pick: impl FnMut(usize) -> usize) -> (OpenDiagram, Vec<TraceEntry>) {
    let mut d = d.clone();
    let mut trace = Vec::new();
    loop {
        let redexes = find_redexes(&d);
        if redexes.is_empty() {
            break;
        }
        let (rule, nodes) = redexes[pick(redexes.len())].clone();
        let applied = apply(&mut d, rule, &nodes);
        debug_assert!(applied, "a found redex must apply");
        trace.push(TraceEntry {
            rule,
            nodes,
            step: trace.len(),
        });
    }
    d.compact();
    (d, trace)
}

/// Re-applies a trace to the diagram it was recorded on. `None` if some step
/// no longer matches.
pub fn replay(d: &OpenDiagram, trace: &[TraceEntry]) -> Option<OpenDiagram> {
    let mut d = d.clone();
    for entry in trace {
        if !apply(&mut d, entry.rule, &entry.nodes) {
            return None;
        }
    }
    d.compact();
    Some(d)
}

/// Normal-form comparison. `NotEqual` is only returned on the generator-free
/// fragment, where normal forms are unique.
pub fn symbolic_eq(t1: &MorTerm, t2: &MorTerm, sig: &Signature) -> Result<Verdict> {
    let ty1 = t1.typecheck(sig)?;
    let ty2 = t2.typecheck(sig)?;
    if ty1.0 != ty2.0 {
        return Err(Error::TypeMismatch {
            position: "symbolic_eq.dom".to_string(),
            expected: ty1.0,
            found: ty2.0,
        });
    }
    if ty1.1 != ty2.1 {
        return Err(Error::TypeMismatch {
            position: "symbolic_eq.cod".to_string(),
            expected: ty1.1,
            found: ty2.1,
        });
    }
    let (n1, _) = normalize(&term_to_diagram(t1, sig)?);
    let (n2, _) = normalize(&term_to_diagram(t2, sig)?);
    Ok(if isomorphic(&n1, &n2) {
        Verdict::Equal
    } else if n1.is_generator_free() && n2.is_generator_free() {
        Verdict::NotEqual
    } else {
        Verdict::Unknown
    })
}

fn spider_loops(d: &OpenDiagram, id: NodeId) -> bool {
    d.wires
        .iter()
        .any(|w| w.src.node() == Some(id) && w.dst.node() == Some(id))
}

fn find_redexes(d: &OpenDiagram) -> Vec<(Rule, Vec<NodeId>)> {
    let mut found: BTreeSet<(Rule, Vec<NodeId>)> = BTreeSet::new();
    for w in &d.wires {
        let (Some(a), Some(b)) = (w.src.node(), w.dst.node()) else {
            continue;
        };
        match (&d.nodes[&a], &d.nodes[&b]) {
            (Node::Cup(_), Node::Cap(_)) => {
                found.insert((Rule::Snake, vec![a, b]));
            }
            (Node::Spider { .. }, Node::Spider { .. }) if a == b => {
                found.insert((Rule::SelfLoop, vec![a]));
            }
            (Node::Spider { .. }, Node::Spider { .. }) => {
                found.insert((Rule::Fusion, vec![a.min(b), a.max(b)]));
            }
            _ => {}
        }
    }
    for (&id, node) in &d.nodes {
        match node {
            Node::Spider { .. } => {
                let arity = d.arity(id);
                if arity == (1, 1) && !spider_loops(d, id) {
                    found.insert((Rule::IdentitySpider, vec![id]));
                }
                if arity == (0, 0) {
                    found.insert((Rule::ClosedSpider, vec![id]));
                }
            }
            Node::Box { .. } if bend_pattern(d, id).is_some() => {
                found.insert((Rule::Transpose, vec![id]));
            }
            _ => {}
        }
    }
    found.into_iter().collect()
}

fn wire_index(d: &OpenDiagram, pred: impl Fn(&Wire) -> bool) -> Option<usize> {
    d.wires.iter().position(pred)
}

fn remove_wires(d: &mut OpenDiagram, mut idx: Vec<usize>) {
    idx.sort_unstable();
    idx.dedup();
    for i in idx.into_iter().rev() {
        d.wires.remove(i);
    }
}

fn apply(d: &mut OpenDiagram, rule: Rule, nodes: &[NodeId]) -> bool {
    match rule {
        Rule::Snake => apply_snake(d, nodes),
        Rule::Fusion => apply_fusion(d, nodes),
        Rule::SelfLoop => apply_self_loop(d, nodes),
        Rule::IdentitySpider => apply_identity(d, nodes),
        Rule::Transpose => apply_transpose(d, nodes),
        Rule::ClosedSpider => apply_closed(d, nodes),
    }
}

fn apply_snake(d: &mut OpenDiagram, nodes: &[NodeId]) -> bool {
    let &[cup, cap] = nodes else { return false };
    let base = match (d.nodes.get(&cup), d.nodes.get(&cap)) {
        (Some(Node::Cup(a)), Some(Node::Cap(b))) if a == b => a.clone(),
        _ => return false,
    };
    let joins: Vec<usize> = (0..d.wires.len())
        .filter(|&i| d.wires[i].src.node() == Some(cup) && d.wires[i].dst.node() == Some(cap))
        .collect();
    match joins.len() {
        2 => {
            remove_wires(d, joins);
            d.nodes.remove(&cup);
            d.nodes.remove(&cap);
            d.add_scalar(ScalarAtom::Dim(base), 2);
            true
        }
        1 => {
            let Source::Port(_, p) = d.wires[joins[0]].src else {
                return false;
            };
            let other = 1 - p;
            let Some(out_i) = wire_index(d, |w| w.src == Source::Port(cup, other)) else {
                return false;
            };
            let Some(in_i) = wire_index(d, |w| w.dst == Sink::Port(cap, other)) else {
                return false;
            };
            let new = Wire {
                src: d.wires[in_i].src,
                dst: d.wires[out_i].dst,
                ty: d.wires[in_i].ty.clone(),
            };
            remove_wires(d, vec![joins[0], out_i, in_i]);
            d.wires.push(new);
            d.nodes.remove(&cup);
            d.nodes.remove(&cap);
            true
        }
        _ => false,
    }
}

fn apply_fusion(d: &mut OpenDiagram, nodes: &[NodeId]) -> bool {
    let &[keep, gone] = nodes else { return false };
    let same = match (d.nodes.get(&keep), d.nodes.get(&gone)) {
        (Some(Node::Spider { classical: a, .. }), Some(Node::Spider { classical: b, .. })) => a == b,
        _ => false,
    };
    if !same || keep == gone {
        return false;
    }
    let pair = |w: &Wire| {
        let (s, t) = (w.src.node(), w.dst.node());
        (s == Some(keep) && t == Some(gone)) || (s == Some(gone) && t == Some(keep))
    };
    if !d.wires.iter().any(pair) {
        return false;
    }
    d.wires.retain(|w| !pair(w));
    for w in &mut d.wires {
        if w.src.node() == Some(gone) {
            w.src = Source::Port(keep, 0);
        }
        if w.dst.node() == Some(gone) {
            w.dst = Sink::Port(keep, 0);
        }
    }
    d.nodes.remove(&gone);
    true
}

fn apply_self_loop(d: &mut OpenDiagram, nodes: &[NodeId]) -> bool {
    let &[s] = nodes else { return false };
    if !matches!(d.nodes.get(&s), Some(Node::Spider { .. })) || !spider_loops(d, s) {
        return false;
    }
    d.wires
        .retain(|w| !(w.src.node() == Some(s) && w.dst.node() == Some(s)));
    true
}

fn apply_identity(d: &mut OpenDiagram, nodes: &[NodeId]) -> bool {
    let &[s] = nodes else { return false };
    if !matches!(d.nodes.get(&s), Some(Node::Spider { .. })) || d.arity(s) != (1, 1) || spider_loops(d, s) {
        return false;
    }
    let in_i = wire_index(d, |w| w.dst.node() == Some(s)).expect("one input leg");
    let out_i = wire_index(d, |w| w.src.node() == Some(s)).expect("one output leg");
    let new = Wire {
        src: d.wires[in_i].src,
        dst: d.wires[out_i].dst,
        ty: d.wires[in_i].ty.clone(),
    };
    remove_wires(d, vec![in_i, out_i]);
    d.wires.push(new);
    d.nodes.remove(&s);
    true
}

fn apply_closed(d: &mut OpenDiagram, nodes: &[NodeId]) -> bool {
    let &[s] = nodes else { return false };
    let Some(Node::Spider { carrier, .. }) = d.nodes.get(&s) else {
        return false;
    };
    if d.arity(s) != (0, 0) {
        return false;
    }
    let carrier = carrier.clone();
    d.nodes.remove(&s);
    d.add_scalar(ScalarAtom::Dim(carrier), 2);
    true
}

/// A box with every leg bent back by a cup or cap.
struct Bend {
    helpers: Vec<NodeId>,
    dead_wires: Vec<usize>,
    new_ins: Vec<Wire>,
    new_outs: Vec<Wire>,
}

fn is_cup_like(d: &OpenDiagram, id: NodeId) -> bool {
    match &d.nodes[&id] {
        Node::Cup(_) => true,
        Node::Spider { .. } => d.arity(id) == (0, 2),
        _ => false,
    }
}

fn is_cap_like(d: &OpenDiagram, id: NodeId) -> bool {
    match &d.nodes[&id] {
        Node::Cap(_) => true,
        Node::Spider { .. } => d.arity(id) == (2, 0),
        _ => false,
    }
}

fn bend_pattern(d: &OpenDiagram, b: NodeId) -> Option<Bend> {
    let Node::Box { dom, cod, .. } = d.nodes.get(&b)? else {
        return None;
    };
    let (n, m) = (dom.len(), cod.len());
    if n + m == 0 {
        return None;
    }
    let mut helpers = Vec::new();
    let mut dead = Vec::new();
    // Outer ends, indexed by the new box's ports.
    let mut outer_sinks: Vec<Option<(Sink, usize)>> = vec![None; n];
    let mut outer_sources: Vec<Option<(Source, usize)>> = vec![None; m];
    for j in 0..n {
        let wi = wire_index(d, |w| w.dst == Sink::Port(b, j))?;
        let h = d.wires[wi].src.node()?;
        if !is_cup_like(d, h) || helpers.contains(&h) {
            return None;
        }
        let oi = (0..d.wires.len()).find(|&k| k != wi && d.wires[k].src.node() == Some(h))?;
        helpers.push(h);
        dead.extend([wi, oi]);
        outer_sinks[n - 1 - j] = Some((d.wires[oi].dst, oi));
    }
    for i in 0..m {
        let wi = wire_index(d, |w| w.src == Source::Port(b, i))?;
        let h = d.wires[wi].dst.node()?;
        if !is_cap_like(d, h) || helpers.contains(&h) {
            return None;
        }
        let oi = (0..d.wires.len()).find(|&k| k != wi && d.wires[k].dst.node() == Some(h))?;
        helpers.push(h);
        dead.extend([wi, oi]);
        outer_sources[m - 1 - i] = Some((d.wires[oi].src, oi));
    }
    let inside = |id: Option<NodeId>| id.is_some_and(|x| x == b || helpers.contains(&x));
    let mut new_outs = Vec::with_capacity(n);
    for (k, e) in outer_sinks.into_iter().enumerate() {
        let (sink, oi) = e?;
        if inside(sink.node()) {
            return None;
        }
        new_outs.push(Wire {
            src: Source::Port(b, k),
            dst: sink,
            ty: d.wires[oi].ty.clone(),
        });
    }
    let mut new_ins = Vec::with_capacity(m);
    for (k, e) in outer_sources.into_iter().enumerate() {
        let (src, oi) = e?;
        if inside(src.node()) {
            return None;
        }
        new_ins.push(Wire {
            src,
            dst: Sink::Port(b, k),
            ty: d.wires[oi].ty.clone(),
        });
    }
    Some(Bend {
        helpers,
        dead_wires: dead,
        new_ins,
        new_outs,
    })
}

fn apply_transpose(d: &mut OpenDiagram, nodes: &[NodeId]) -> bool {
    let &[b] = nodes else { return false };
    let Some(bend) = bend_pattern(d, b) else {
        return false;
    };
    remove_wires(d, bend.dead_wires);
    for h in &bend.helpers {
        d.nodes.remove(h);
    }
    if let Some(Node::Box {
        transpose, dom, cod, ..
    }) = d.nodes.get_mut(&b)
    {
        *transpose = !*transpose;
        let (new_dom, new_cod) = (cod.dual(), dom.dual());
        *dom = new_dom;
        *cod = new_cod;
    }
    d.wires.extend(bend.new_ins);
    d.wires.extend(bend.new_outs);
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::object::ObjectWord;

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.add_object("A").unwrap();
        s.add_classical("X", "X").unwrap();
        s.add_generator("f", ObjectWord::base("A"), ObjectWord::base("A"))
            .unwrap();
        s
    }

    fn nf(t: &MorTerm) -> OpenDiagram {
        normalize(&term_to_diagram(t, &sig()).unwrap()).0
    }

    fn a() -> ObjectWord {
        ObjectWord::base("A")
    }

    fn x() -> ObjectWord {
        ObjectWord::base("X")
    }

    #[test]
    fn snake_becomes_identity() {
        let snake = MorTerm::tensor(MorTerm::id(a()), MorTerm::eta(a()))
            .then(MorTerm::tensor(MorTerm::counit(&a()), MorTerm::id(a())));
        assert_eq!(nf(&snake), nf(&MorTerm::id(a())));
    }

    #[test]
    fn coassociativity_fuses_to_one_spider() {
        let l = MorTerm::delta("X").then(MorTerm::tensor(MorTerm::id(x()), MorTerm::delta("X")));
        let r = MorTerm::delta("X").then(MorTerm::tensor(MorTerm::delta("X"), MorTerm::id(x())));
        let (nl, nr) = (nf(&l), nf(&r));
        assert_eq!(nl.node_count(), 1);
        assert_eq!(nl.arity(0), (1, 3));
        assert!(isomorphic(&nl, &nr));
    }

    #[test]
    fn special_law_is_a_wire() {
        let t = MorTerm::delta("X").then(MorTerm::dagger_node(MorTerm::delta("X")));
        assert_eq!(nf(&t), nf(&MorTerm::id(x())));
    }

    #[test]
    fn loop_becomes_dimension_scalar() {
        let t = MorTerm::eta(a()).then(MorTerm::dagger_node(MorTerm::eta(a())));
        let d = nf(&t);
        assert_eq!(d.node_count(), 0);
        assert_eq!(d.scalars().get(&ScalarAtom::Dim("A".into())), Some(&2));
    }

    #[test]
    fn double_transpose_cancels() {
        let s = sig();
        let f = MorTerm::gen("f", a(), a());
        let tt = crate::term::transpose(&crate::term::transpose(&f, &s).unwrap(), &s).unwrap();
        assert_eq!(nf(&tt), nf(&f));
        let t1 = nf(&crate::term::transpose(&f, &s).unwrap());
        assert_eq!(t1.node_count(), 1);
    }

    #[test]
    fn normalize_is_idempotent_and_replayable() {
        let t = MorTerm::delta("X")
            .then(MorTerm::tensor(MorTerm::delta("X"), MorTerm::id(x())))
            .then(MorTerm::tensor(
                MorTerm::id(x()),
                MorTerm::dagger_node(MorTerm::delta("X")),
            ));
        let d = term_to_diagram(&t, &sig()).unwrap();
        let (n, trace) = normalize(&d);
        assert_eq!(normalize(&n).0, n);
        assert!(normalize(&n).1.is_empty());
        assert_eq!(replay(&d, &trace), Some(n));
    }

    #[test]
    fn verdicts() {
        let s = sig();
        let ghz1 = MorTerm::eta(x()).then(MorTerm::tensor(MorTerm::id(x()), MorTerm::delta("X")));
        let ghz2 = MorTerm::eta(x()).then(MorTerm::tensor(MorTerm::delta("X"), MorTerm::id(x())));
        assert_eq!(symbolic_eq(&ghz1, &ghz2, &s).unwrap(), Verdict::Equal);
        let unit = MorTerm::dagger_node(MorTerm::eps("X")).then(MorTerm::delta("X"));
        assert_eq!(symbolic_eq(&unit, &MorTerm::eta(x()), &s).unwrap(), Verdict::Equal);
        assert_eq!(
            symbolic_eq(
                &MorTerm::delta("X"),
                &MorTerm::tensor(MorTerm::id(x()), MorTerm::dagger_node(MorTerm::eps("X"))),
                &s
            )
            .unwrap(),
            Verdict::NotEqual
        );
        let f = MorTerm::gen("f", a(), a());
        let ff = f.clone().then(f.clone());
        assert_eq!(symbolic_eq(&f, &ff, &s).unwrap(), Verdict::Unknown);
        assert!(matches!(
            symbolic_eq(&f, &MorTerm::id(x()), &s),
            Err(Error::TypeMismatch { .. })
        ));
    }
}
