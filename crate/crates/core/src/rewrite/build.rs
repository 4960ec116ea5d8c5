use alloc::string::ToString;
use alloc::vec::Vec;

use super::{Node, OpenDiagram, ScalarAtom, Sink, Source, Wire};
use crate::error::{Error, Result};
use crate::object::{Factor, ObjectWord};
use crate::term::{MorTerm, Signature};

/// A wire end waiting for its sink.
type Dangling = (Source, Factor);

struct Builder<'a> {
    sig: &'a Signature,
    d: OpenDiagram,
}

/// Converts a well-typed term to an open diagram. Daggers are pushed onto
/// leaves; δ, ε and their daggers become spiders; η on a classical wire is
/// the two-legged spider.
pub fn term_to_diagram(t: &MorTerm, sig: &Signature) -> Result<OpenDiagram> {
    let (dom, cod) = t.typecheck(sig)?;
    let mut b = Builder {
        sig,
        d: OpenDiagram::default(),
    };
    b.d.inputs = dom.factors().to_vec();
    b.d.outputs = cod.factors().to_vec();
    let ins: Vec<Dangling> = dom
        .factors()
        .iter()
        .enumerate()
        .map(|(i, f)| (Source::Input(i), b.canonical(f)))
        .collect();
    let outs = b.build(t, false, ins)?;
    for (j, end) in outs.into_iter().enumerate() {
        b.connect(end, Sink::Output(j));
    }
    b.d.compact();
    Ok(b.d)
}

impl Builder<'_> {
    fn classical_of(&self, base: &str) -> Option<&str> {
        self.sig.classical_on(base)
    }

    /// Classical wires forget their polarity.
    fn canonical(&self, f: &Factor) -> Factor {
        if self.classical_of(&f.base).is_some() {
            Factor::new(f.base.clone(), false)
        } else {
            f.clone()
        }
    }

    fn connect(&mut self, (src, ty): Dangling, dst: Sink) {
        self.d.wires.push(Wire { src, dst, ty });
    }

    fn spider(&mut self, classical: &str) -> Result<(usize, Factor)> {
        let carrier = self
            .sig
            .carrier(classical)
            .ok_or_else(|| Error::UnknownName(classical.to_string()))?
            .to_string();
        let id = self.d.add_node(Node::Spider {
            classical: classical.to_string(),
            carrier: carrier.clone(),
        });
        Ok((id, Factor::new(carrier, false)))
    }

    fn build(&mut self, t: &MorTerm, dag: bool, ins: Vec<Dangling>) -> Result<Vec<Dangling>> {
        match t {
            MorTerm::Id(_) => Ok(ins),
            MorTerm::Compose { after, before } => {
                let (first, second) = if dag { (after, before) } else { (before, after) };
                let mid = self.build(first, dag, ins)?;
                self.build(second, dag, mid)
            }
            MorTerm::Tensor(l, r) => {
                let (ld, lc) = l.typecheck(self.sig)?;
                let n = if dag { lc.len() } else { ld.len() };
                let mut ins = ins;
                let rest = ins.split_off(n);
                let mut out = self.build(l, dag, ins)?;
                out.extend(self.build(r, dag, rest)?);
                Ok(out)
            }
            MorTerm::Sym(a, b) => {
                let n = if dag { b.len() } else { a.len() };
                let (x, y) = ins.split_at(n);
                let mut out = y.to_vec();
                out.extend_from_slice(x);
                Ok(out)
            }
            MorTerm::Eta(w) => {
                if dag {
                    self.caps(w, ins);
                    Ok(Vec::new())
                } else {
                    self.cups(w)
                }
            }
            MorTerm::Dagger(inner) => self.build(inner, !dag, ins),
            MorTerm::Delta(x) => {
                let (s, ty) = self.spider(x)?;
                for end in ins {
                    self.connect(end, Sink::Port(s, 0));
                }
                let n_out = if dag { 1 } else { 2 };
                Ok((0..n_out).map(|_| (Source::Port(s, 0), ty.clone())).collect())
            }
            MorTerm::Eps(x) => {
                let (s, ty) = self.spider(x)?;
                for end in ins {
                    self.connect(end, Sink::Port(s, 0));
                }
                Ok(if dag {
                    alloc::vec![(Source::Port(s, 0), ty)]
                } else {
                    Vec::new()
                })
            }
            MorTerm::ScalarSym(name) => {
                self.d.add_scalar(
                    ScalarAtom::Sym {
                        name: name.clone(),
                        conj: dag,
                    },
                    1,
                );
                Ok(ins)
            }
            MorTerm::ScalarDim(w, p) => {
                for base in w.bases() {
                    self.d.add_scalar(ScalarAtom::Dim(base.to_string()), *p);
                }
                Ok(ins)
            }
            MorTerm::Gen { name, dom, cod } => {
                let (dom, cod) = if dag { (cod, dom) } else { (dom, cod) };
                let id = self.d.add_node(Node::Box {
                    name: name.clone(),
                    dagger: dag,
                    transpose: false,
                    dom: dom.clone(),
                    cod: cod.clone(),
                });
                for (k, end) in ins.into_iter().enumerate() {
                    self.connect(end, Sink::Port(id, k));
                }
                Ok(cod
                    .factors()
                    .iter()
                    .enumerate()
                    .map(|(k, f)| (Source::Port(id, k), self.canonical(f)))
                    .collect())
            }
        }
    }

    /// `η_w` as nested single-wire cups: factor `i` of `w` pairs with
    /// position `n-1-i` of `w*`.
    fn cups(&mut self, w: &ObjectWord) -> Result<Vec<Dangling>> {
        let n = w.len();
        let mut out: Vec<Option<Dangling>> = alloc::vec![None; 2 * n];
        for (i, f) in w.factors().iter().enumerate() {
            let (dual_pos, pos) = (n - 1 - i, n + i);
            if let Some(x) = self.classical_of(&f.base).map(ToString::to_string) {
                let (s, ty) = self.spider(&x)?;
                out[dual_pos] = Some((Source::Port(s, 0), ty.clone()));
                out[pos] = Some((Source::Port(s, 0), ty));
                continue;
            }
            let id = self.d.add_node(Node::Cup(f.base.clone()));
            let star = (Source::Port(id, 0), Factor::new(f.base.clone(), true));
            let plain = (Source::Port(id, 1), Factor::new(f.base.clone(), false));
            if f.dual {
                out[pos] = Some(star);
                out[dual_pos] = Some(plain);
            } else {
                out[dual_pos] = Some(star);
                out[pos] = Some(plain);
            }
        }
        Ok(out
            .into_iter()
            .map(|e| e.expect("every cup position is filled"))
            .collect())
    }

    fn caps(&mut self, w: &ObjectWord, ins: Vec<Dangling>) {
        let n = w.len();
        for (i, f) in w.factors().iter().enumerate() {
            let dual_end = ins[n - 1 - i].clone();
            let end = ins[n + i].clone();
            if let Some(x) = self.classical_of(&f.base).map(ToString::to_string) {
                let (s, _) = self.spider(&x).expect("classical name resolves");
                self.connect(dual_end, Sink::Port(s, 0));
                self.connect(end, Sink::Port(s, 0));
                continue;
            }
            let id = self.d.add_node(Node::Cap(f.base.clone()));
            let (star, plain) = if f.dual { (end, dual_end) } else { (dual_end, end) };
            self.connect(star, Sink::Port(id, 0));
            self.connect(plain, Sink::Port(id, 1));
        }
    }
}
