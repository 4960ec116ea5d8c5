//! Evaluates an open diagram by tensor-network contraction. This is a second,
//! independent route to the matrix of a term.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

// Float supplies powf/powi when std is absent.
#[allow(unused_imports)]
use num_traits::Float;

use super::{Node, NodeId, OpenDiagram, ScalarAtom, Sink, Source};
use crate::error::{Error, Result};
use crate::matrix::{c, CMatrix, C64};
use crate::model::Interpretation;

/// A dense tensor with one axis per wire label, row-major over `labels`.
#[derive(Debug, Clone)]
struct Tensor {
    labels: Vec<usize>,
    dims: Vec<usize>,
    data: Vec<C64>,
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

fn digits(mut idx: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = idx % dims[k];
        idx /= dims[k];
    }
    out
}

impl Tensor {
    fn scalar(z: C64) -> Self {
        Tensor {
            labels: Vec::new(),
            dims: Vec::new(),
            data: vec![z],
        }
    }

    /// Builds a tensor over `ports` (labels may repeat, meaning a self-loop);
    /// repeated labels are traced out immediately.
    fn from_ports(ports: &[usize], port_dims: &[usize], f: impl Fn(&[usize]) -> C64) -> Self {
        let mut labels = Vec::new();
        let mut dims = Vec::new();
        for (&l, &d) in ports.iter().zip(port_dims) {
            if !labels.contains(&l) {
                labels.push(l);
                dims.push(d);
            }
        }
        let repeated: Vec<usize> = labels
            .iter()
            .copied()
            .filter(|l| ports.iter().filter(|&&p| p == *l).count() > 1)
            .collect();
        let kept: Vec<usize> = labels.iter().copied().filter(|l| !repeated.contains(l)).collect();
        let kept_dims: Vec<usize> = kept
            .iter()
            .map(|l| dims[labels.iter().position(|x| x == l).unwrap()])
            .collect();
        let total: usize = dims.iter().product();
        let mut data = vec![c(0.0, 0.0); kept_dims.iter().product()];
        let kept_strides = strides(&kept_dims);
        let mut port_vals = vec![0; ports.len()];
        for idx in 0..total {
            let vals = digits(idx, &dims);
            for (k, p) in ports.iter().enumerate() {
                port_vals[k] = vals[labels.iter().position(|x| x == p).unwrap()];
            }
            let z = f(&port_vals);
            if z == c(0.0, 0.0) {
                continue;
            }
            let mut off = 0;
            for (k, l) in kept.iter().enumerate() {
                off += vals[labels.iter().position(|x| x == l).unwrap()] * kept_strides[k];
            }
            data[off] += z;
        }
        Tensor {
            labels: kept,
            dims: kept_dims,
            data,
        }
    }

    /// Multiplies two tensors and sums over the labels in `closing`.
    fn contract(&self, other: &Tensor, closing: &[usize]) -> Tensor {
        let mut all: Vec<usize> = self.labels.clone();
        let mut all_dims = self.dims.clone();
        for (l, d) in other.labels.iter().zip(&other.dims) {
            if !all.contains(l) {
                all.push(*l);
                all_dims.push(*d);
            }
        }
        let out_labels: Vec<usize> = all.iter().copied().filter(|l| !closing.contains(l)).collect();
        let out_dims: Vec<usize> = out_labels
            .iter()
            .map(|l| all_dims[all.iter().position(|x| x == l).unwrap()])
            .collect();
        let pos = |labels: &[usize]| -> Vec<usize> {
            labels
                .iter()
                .map(|l| all.iter().position(|x| x == l).unwrap())
                .collect()
        };
        let (p_self, p_other, p_out) = (pos(&self.labels), pos(&other.labels), pos(&out_labels));
        let (s_self, s_other, s_out) = (strides(&self.dims), strides(&other.dims), strides(&out_dims));
        let mut data = vec![c(0.0, 0.0); out_dims.iter().product()];
        let total: usize = all_dims.iter().product();
        for idx in 0..total {
            let vals = digits(idx, &all_dims);
            let a = self.data[p_self.iter().zip(&s_self).map(|(&p, &s)| vals[p] * s).sum::<usize>()];
            if a == c(0.0, 0.0) {
                continue;
            }
            let b = other.data[p_other.iter().zip(&s_other).map(|(&p, &s)| vals[p] * s).sum::<usize>()];
            let off: usize = p_out.iter().zip(&s_out).map(|(&p, &s)| vals[p] * s).sum();
            data[off] += a * b;
        }
        Tensor {
            labels: out_labels,
            dims: out_dims,
            data,
        }
    }

    fn get(&self, assignment: &BTreeMap<usize, usize>) -> C64 {
        let st = strides(&self.dims);
        let off: usize = self.labels.iter().zip(&st).map(|(l, s)| assignment[l] * s).sum();
        self.data[off]
    }
}

fn wire_dim(d: &OpenDiagram, interp: &Interpretation, w: usize) -> Result<usize> {
    interp.dim_of_base(&d.wires[w].ty.base)
}

/// Entry of a box, given its port values (inputs then outputs).
fn box_tensor(node: &Node, interp: &Interpretation, ports: &[usize], port_dims: &[usize]) -> Result<Tensor> {
    let Node::Box {
        name,
        dagger,
        transpose,
        dom,
        cod,
    } = node
    else {
        unreachable!("box_tensor on a non-box");
    };
    let m = interp
        .gens
        .get(name)
        .ok_or_else(|| Error::MissingInterpretation(name.clone()))?;
    let m = if *dagger { m.adjoint() } else { m.clone() };
    // The untransposed map has dom* -> cod* swapped back.
    let (g_dom, g_cod) = if *transpose {
        (cod.dual(), dom.dual())
    } else {
        (dom.clone(), cod.clone())
    };
    let gd = interp.factor_dims(&g_dom)?;
    let gc = interp.factor_dims(&g_cod)?;
    let (rows, cols): (usize, usize) = (gc.iter().product(), gd.iter().product());
    if m.shape() != (rows, cols) {
        return Err(Error::ShapeMismatch {
            what: name.to_string(),
            expected_rows: rows,
            expected_cols: cols,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let (n, k) = (dom.len(), cod.len());
    let transpose = *transpose;
    Ok(Tensor::from_ports(ports, port_dims, |vals| {
        let (ins, outs) = vals.split_at(n);
        // Port digits of the untransposed map, slow index first.
        let (a, b): (Vec<usize>, Vec<usize>) = if transpose {
            (
                outs.iter().rev().copied().collect(),
                ins.iter().rev().copied().collect(),
            )
        } else {
            (ins.to_vec(), outs.to_vec())
        };
        debug_assert_eq!(a.len() + b.len(), n + k);
        let col = a.iter().zip(&gd).fold(0, |acc, (x, d)| acc * d + x);
        let row = b.iter().zip(&gc).fold(0, |acc, (x, d)| acc * d + x);
        m[(row, col)]
    }))
}

fn scalar_factor(d: &OpenDiagram, interp: &Interpretation) -> Result<C64> {
    let mut z = c(1.0, 0.0);
    for (atom, &mult) in &d.scalars {
        match atom {
            ScalarAtom::Dim(base) => {
                let dim = interp.dim_of_base(base)? as f64;
                z *= dim.powf(mult as f64 / 2.0);
            }
            ScalarAtom::Sym { name, conj } => {
                let m = interp
                    .gens
                    .get(name)
                    .ok_or_else(|| Error::MissingInterpretation(name.clone()))?;
                let v = if *conj { m[(0, 0)].conj() } else { m[(0, 0)] };
                z *= v.powi(mult);
            }
        }
    }
    Ok(z)
}

/// The matrix of a diagram (shape `dim(outputs) x dim(inputs)`).
pub fn eval_diagram(d: &OpenDiagram, interp: &Interpretation) -> Result<CMatrix> {
    let wire_dims: Vec<usize> = (0..d.wires.len())
        .map(|w| wire_dim(d, interp, w))
        .collect::<Result<_>>()?;
    // Remaining endpoints of each wire still outside the running product;
    // boundary ends never close.
    let mut open_ends: Vec<usize> = d
        .wires
        .iter()
        .map(|w| usize::from(w.src.node().is_some()) + usize::from(w.dst.node().is_some()))
        .collect();
    let mut pending: Vec<NodeId> = d.nodes.keys().copied().collect();
    let mut acc = Tensor::scalar(scalar_factor(d, interp)?);
    while !pending.is_empty() {
        // Greedy: the node sharing the most wires with what is built so far.
        let pick = pending
            .iter()
            .enumerate()
            .max_by_key(|(_, &n)| {
                let shared = d
                    .wires
                    .iter()
                    .enumerate()
                    .filter(|(i, w)| acc.labels.contains(i) && (w.src.node() == Some(n) || w.dst.node() == Some(n)))
                    .count();
                (shared, core::cmp::Reverse(n))
            })
            .map(|(i, _)| i)
            .expect("pending is non-empty");
        let n = pending.remove(pick);
        let t = node_tensor(d, interp, n, &wire_dims)?;
        let mut closing = Vec::new();
        for (i, w) in d.wires.iter().enumerate() {
            let hits = usize::from(w.src.node() == Some(n)) + usize::from(w.dst.node() == Some(n));
            if hits > 0 {
                open_ends[i] -= hits;
                let boundary = w.src.node().is_none() || w.dst.node().is_none();
                if open_ends[i] == 0 && !boundary {
                    closing.push(i);
                }
            }
        }
        acc = acc.contract(&t, &closing);
    }
    let in_wire: Vec<usize> = (0..d.inputs.len())
        .map(|i| {
            d.wires
                .iter()
                .position(|w| w.src == Source::Input(i))
                .expect("input is wired")
        })
        .collect();
    let out_wire: Vec<usize> = (0..d.outputs.len())
        .map(|j| {
            d.wires
                .iter()
                .position(|w| w.dst == Sink::Output(j))
                .expect("output is wired")
        })
        .collect();
    let in_dims: Vec<usize> = in_wire.iter().map(|&w| wire_dims[w]).collect();
    let out_dims: Vec<usize> = out_wire.iter().map(|&w| wire_dims[w]).collect();
    let rows: usize = out_dims.iter().product();
    let cols: usize = in_dims.iter().product();
    let mut out = CMatrix::zeros(rows, cols);
    for r in 0..rows {
        let rd = digits(r, &out_dims);
        'col: for col in 0..cols {
            let cd = digits(col, &in_dims);
            let mut assignment = BTreeMap::new();
            for (&w, &v) in out_wire.iter().zip(&rd).chain(in_wire.iter().zip(&cd)) {
                if let Some(&prev) = assignment.get(&w) {
                    if prev != v {
                        continue 'col;
                    }
                }
                assignment.insert(w, v);
            }
            out[(r, col)] = acc.get(&assignment);
        }
    }
    Ok(out)
}

fn node_tensor(d: &OpenDiagram, interp: &Interpretation, n: NodeId, wire_dims: &[usize]) -> Result<Tensor> {
    let node = &d.nodes[&n];
    let into = |port: usize| {
        d.wires
            .iter()
            .position(|w| w.dst == Sink::Port(n, port))
            .expect("port is wired")
    };
    let from = |port: usize| {
        d.wires
            .iter()
            .position(|w| w.src == Source::Port(n, port))
            .expect("port is wired")
    };
    match node {
        Node::Box { dom, cod, .. } => {
            let mut ports: Vec<usize> = (0..dom.len()).map(into).collect();
            ports.extend((0..cod.len()).map(from));
            let dims: Vec<usize> = ports.iter().map(|&w| wire_dims[w]).collect();
            box_tensor(node, interp, &ports, &dims)
        }
        Node::Cup(_) | Node::Cap(_) => {
            let ports: Vec<usize> = if matches!(node, Node::Cup(_)) {
                vec![from(0), from(1)]
            } else {
                vec![into(0), into(1)]
            };
            let dims: Vec<usize> = ports.iter().map(|&w| wire_dims[w]).collect();
            Ok(Tensor::from_ports(&ports, &dims, |v| {
                if v[0] == v[1] {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            }))
        }
        Node::Spider { carrier, .. } => {
            let ports: Vec<usize> = d
                .wires
                .iter()
                .enumerate()
                .flat_map(|(i, w)| {
                    let k = usize::from(w.src.node() == Some(n)) + usize::from(w.dst.node() == Some(n));
                    core::iter::repeat_n(i, k)
                })
                .collect();
            if ports.is_empty() {
                return Ok(Tensor::scalar(c(interp.dim_of_base(carrier)? as f64, 0.0)));
            }
            let dims: Vec<usize> = ports.iter().map(|&w| wire_dims[w]).collect();
            Ok(Tensor::from_ports(&ports, &dims, |v| {
                if v.iter().all(|&x| x == v[0]) {
                    c(1.0, 0.0)
                } else {
                    c(0.0, 0.0)
                }
            }))
        }
    }
}
