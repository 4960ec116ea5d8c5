//! Random test data: matrices, states, projector families, unitary bases,
//! signatures and well-typed terms.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

// Float supplies cos/sin/sqrt when std is absent.
#[allow(unused_imports)]
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::linalg::orthonormalize_columns;
use crate::matrix::{c, CMatrix, C64};
use crate::model::gaussian_matrix;
use crate::object::{Factor, ObjectWord};
use crate::term::{conjugate, dagger, trace, transpose, MorTerm, Signature};

/// Haar-like unitary: Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    orthonormalize_columns(&gaussian_matrix(n, n, rng))
}

/// Unit column vector.
pub fn random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let v = gaussian_matrix(n, 1, rng);
    let norm = v.frobenius_norm();
    v.scale(c(1.0 / norm, 0.0))
}

/// Full-rank density matrix `G G† / tr(G G†)`.
pub fn random_density<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = gaussian_matrix(n, n, rng);
    let rho = g.matmul(&g.adjoint());
    let t = rho.trace();
    rho.scale(c(1.0, 0.0) / t)
}

/// `blocks` mutually orthogonal projectors on `C^dim` summing to the
/// identity, each of rank at least one, in a random orthonormal frame.
pub fn random_projector_family<R: Rng + ?Sized>(dim: usize, blocks: usize, rng: &mut R) -> Vec<CMatrix> {
    assert!(blocks >= 1 && blocks <= dim, "need 1 <= blocks <= dim");
    let u = random_unitary(dim, rng);
    let mut owner: Vec<usize> = (0..dim)
        .map(|i| if i < blocks { i } else { rng.random_range(0..blocks) })
        .collect();
    owner.shuffle(rng);
    (0..blocks)
        .map(|b| {
            let mut p = CMatrix::zeros(dim, dim);
            for (i, _) in owner.iter().enumerate().filter(|(_, &o)| o == b) {
                let col = u.block(0, i, dim, 1);
                p = &p + &col.matmul(&col.adjoint());
            }
            p
        })
        .collect()
}

/// `I, σx, σy, σz`.
pub fn pauli_family() -> Vec<CMatrix> {
    let o = c(0.0, 0.0);
    let l = c(1.0, 0.0);
    let i = c(0.0, 1.0);
    vec![
        CMatrix::identity(2),
        CMatrix::from_vec(2, 2, vec![o, l, l, o]),
        CMatrix::from_vec(2, 2, vec![o, -i, i, o]),
        CMatrix::from_vec(2, 2, vec![l, o, o, -l]),
    ]
}

/// Shift `X|j⟩ = |j+1⟩` on `C^d`.
pub fn shift(d: usize) -> CMatrix {
    CMatrix::from_fn(
        d,
        d,
        |r, col| if r == (col + 1) % d { c(1.0, 0.0) } else { c(0.0, 0.0) },
    )
}

/// Clock `Z|j⟩ = ω^j |j⟩`, `ω = e^{2πi/d}`.
pub fn clock(d: usize) -> CMatrix {
    let w = 2.0 * core::f64::consts::PI / d as f64;
    CMatrix::from_fn(d, d, |r, col| {
        if r == col {
            C64::from_polar(1.0, w * r as f64)
        } else {
            c(0.0, 0.0)
        }
    })
}

/// The `d²` Weyl operators `X^a Z^b`, indexed `a·d + b`.
pub fn weyl_family(d: usize) -> Vec<CMatrix> {
    let x = shift(d);
    let z = clock(d);
    let mut out = Vec::with_capacity(d * d);
    let mut xa = CMatrix::identity(d);
    for _ in 0..d {
        let mut zb = CMatrix::identity(d);
        for _ in 0..d {
            out.push(xa.matmul(&zb));
            zb = zb.matmul(&z);
        }
        xa = xa.matmul(&x);
    }
    out
}

/// A random unitary operator basis with `tr(U_j† U_i) = d δ_ij`: the Weyl
/// basis sandwiched between two Haar-like unitaries, shuffled, with random phases.
pub fn random_unitary_basis<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<CMatrix> {
    let v = random_unitary(d, rng);
    let w = random_unitary(d, rng);
    let mut fam: Vec<CMatrix> = weyl_family(d)
        .iter()
        .map(|u| {
            let phase = C64::from_polar(1.0, rng.random_range(0.0..core::f64::consts::TAU));
            v.matmul(u).matmul(&w).scale(phase)
        })
        .collect();
    fam.shuffle(rng);
    fam
}

/// Gram matrix `G_ij = tr(U_i† U_j)` of a family of operators.
pub fn hs_gram(fam: &[CMatrix]) -> CMatrix {
    CMatrix::from_fn(fam.len(), fam.len(), |i, j| fam[i].inner(&fam[j]))
}

/// A small random signature: objects `A`, `B`, classical `X`, a free scalar
/// `s` and `n_gens` generators `g0..` with words of length at most two.
pub fn random_signature<R: Rng + ?Sized>(n_gens: usize, rng: &mut R) -> Signature {
    let mut sig = Signature::new();
    sig.add_object("A").expect("fresh");
    sig.add_object("B").expect("fresh");
    sig.add_classical("X", "X").expect("fresh");
    sig.add_scalar("s").expect("fresh");
    for k in 0..n_gens {
        let dom = random_word(&sig, rng, 0, 2);
        let mut cod = random_word(&sig, rng, 0, 2);
        if dom.is_unit() && cod.is_unit() {
            cod = ObjectWord::base("A");
        }
        sig.add_generator(format!("g{k}"), dom, cod).expect("fresh");
    }
    sig
}

fn random_factor<R: Rng + ?Sized>(sig: &Signature, rng: &mut R) -> Factor {
    let bases: Vec<&str> = sig.objects().collect();
    let base = bases[rng.random_range(0..bases.len())];
    let dual = sig.classical_on(base).is_none() && rng.random_bool(0.3);
    Factor::new(base, dual)
}

/// A random word of length `lo..=hi` over the signature's objects.
pub fn random_word<R: Rng + ?Sized>(sig: &Signature, rng: &mut R, lo: usize, hi: usize) -> ObjectWord {
    let n = rng.random_range(lo..=hi);
    ObjectWord::from_factors((0..n).map(|_| random_factor(sig, rng)).collect())
}

/// Knobs for [`random_term`].
#[derive(Debug, Clone, Copy)]
pub struct TermShape {
    pub depth: usize,
    /// Words on any intermediate wire bundle stay at most this long.
    pub max_width: usize,
    pub generators: bool,
}

impl Default for TermShape {
    fn default() -> Self {
        TermShape {
            depth: 4,
            max_width: 4,
            generators: true,
        }
    }
}

/// A random well-typed term with domain `dom`.
pub fn random_term_from<R: Rng + ?Sized>(sig: &Signature, dom: &ObjectWord, shape: TermShape, rng: &mut R) -> MorTerm {
    let dom = sig.canonical(dom);
    TermGen { sig, shape, rng }.from(&dom, shape.depth)
}

/// A random well-typed term with a random domain of length at most two.
pub fn random_term<R: Rng + ?Sized>(sig: &Signature, shape: TermShape, rng: &mut R) -> MorTerm {
    let dom = random_word(sig, rng, 0, 2);
    random_term_from(sig, &dom, shape, rng)
}

struct TermGen<'a, R: Rng + ?Sized> {
    sig: &'a Signature,
    shape: TermShape,
    rng: &'a mut R,
}

impl<R: Rng + ?Sized> TermGen<'_, R> {
    fn cod(&self, t: &MorTerm) -> ObjectWord {
        t.typecheck(self.sig).expect("generated terms are well typed").1
    }

    fn classical(&self, f: &Factor) -> Option<String> {
        self.sig.classical_on(&f.base).map(String::from)
    }

    /// Leaves whose domain is exactly `dom`.
    fn leaves(&mut self, dom: &ObjectWord) -> Vec<MorTerm> {
        let sig = self.sig;
        let mut out = Vec::new();
        if self.shape.generators {
            for (name, (d, c)) in sig.generators() {
                if sig.canonical(d) == *dom {
                    out.push(MorTerm::gen(name, d.clone(), c.clone()));
                }
                let g = MorTerm::gen(name, d.clone(), c.clone());
                if sig.canonical(c) == *dom {
                    out.push(MorTerm::dagger_node(g.clone()));
                }
                if sig.canonical(&c.dual()) == *dom {
                    out.push(transpose(&g, sig).expect("generator is well typed"));
                }
                if sig.canonical(&d.dual()) == *dom {
                    out.push(conjugate(&g, sig).expect("generator is well typed"));
                }
            }
        }
        let fs = dom.factors();
        match fs {
            [] => {
                let w = random_word(sig, self.rng, 1, 2);
                out.push(MorTerm::eta(w));
                let b = random_word(sig, self.rng, 1, 1);
                out.push(MorTerm::scalar_dim(b, self.rng.random_range(-2..=2)));
                for (x, _) in sig.classicals() {
                    out.push(MorTerm::dagger_node(MorTerm::eps(x)));
                }
                if self.shape.generators {
                    for s in sig.scalars() {
                        out.push(MorTerm::scalar(s));
                        out.push(MorTerm::dagger_node(MorTerm::scalar(s)));
                    }
                }
            }
            [f] => {
                if let Some(x) = self.classical(f) {
                    out.push(MorTerm::delta(x.clone()));
                    out.push(MorTerm::eps(x));
                }
            }
            [f, g] if f.base == g.base => {
                if let Some(x) = self.classical(f) {
                    out.push(MorTerm::dagger_node(MorTerm::delta(x.clone())));
                    out.push(MorTerm::dagger_node(MorTerm::eta(ObjectWord::base(x))));
                } else if f.dual != g.dual {
                    // [a*, a] is the codomain of η_a.
                    out.push(MorTerm::dagger_node(MorTerm::eta(ObjectWord::from_factors(vec![
                        g.clone()
                    ]))));
                }
            }
            _ => {}
        }
        out
    }

    fn leaf(&mut self, dom: &ObjectWord) -> MorTerm {
        let leaves = self.leaves(dom);
        if leaves.is_empty() {
            self.split_leaf(dom)
        } else {
            leaves[self.rng.random_range(0..leaves.len())].clone()
        }
    }

    fn from(&mut self, dom: &ObjectWord, depth: usize) -> MorTerm {
        let roll = self.rng.random_range(0..100);
        let t = if depth == 0 {
            if roll < 80 {
                self.leaf(dom)
            } else {
                MorTerm::id(dom.clone())
            }
        } else {
            match roll {
                0..5 => MorTerm::id(dom.clone()),
                5..25 => self.leaf(dom),
                25..33 if dom.len() >= 2 => {
                    let k = self.rng.random_range(1..dom.len());
                    let (a, b) = dom.split_at(k).expect("k < len");
                    MorTerm::sym(a, b)
                }
                25..50 => {
                    let k = self.rng.random_range(0..=dom.len());
                    let (a, b) = dom.split_at(k).expect("k <= len");
                    let l = self.from(&a, depth - 1);
                    let r = self.from(&b, depth - 1);
                    MorTerm::tensor(l, r)
                }
                50..85 => {
                    let f = self.from(dom, depth - 1);
                    let mid = self.cod(&f);
                    if mid.len() > self.shape.max_width {
                        f
                    } else {
                        let g = self.from(&mid, depth - 1);
                        f.then(g)
                    }
                }
                85..92 => {
                    let t = self.from(dom, depth - 1);
                    MorTerm::dagger_node(dagger(&t))
                }
                _ => self.traced(dom, depth),
            }
        };
        if self.cod(&t).len() > self.shape.max_width {
            MorTerm::id(dom.clone())
        } else {
            t
        }
    }

    /// `tr^C(f)` for a random `f : C⊗dom -> C⊗B`, when one comes out.
    fn traced(&mut self, dom: &ObjectWord, depth: usize) -> MorTerm {
        let c = random_word(self.sig, self.rng, 1, 1);
        let c = self.sig.canonical(&c);
        if dom.len() + 1 > self.shape.max_width {
            return self.leaf(dom);
        }
        let f = self.from(&c.tensor(dom), depth - 1);
        if self.cod(&f).strip_prefix(&c).is_some() {
            trace(&f, &c, self.sig).expect("prefix checked")
        } else {
            self.leaf(dom)
        }
    }

    /// A leaf on one factor tensored with identities elsewhere.
    fn split_leaf(&mut self, dom: &ObjectWord) -> MorTerm {
        if dom.is_unit() {
            return MorTerm::id(dom.clone());
        }
        let k = self.rng.random_range(0..dom.len());
        let (pre, rest) = dom.split_at(k).expect("k < len");
        let (mid, post) = rest.split_at(1).expect("nonempty");
        let leaves = self.leaves(&mid);
        let leaf = if leaves.is_empty() {
            MorTerm::id(mid)
        } else {
            leaves[self.rng.random_range(0..leaves.len())].clone()
        };
        MorTerm::tensor(MorTerm::tensor(MorTerm::id(pre), leaf), MorTerm::id(post))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian_eigen;
    use crate::matrix::approx_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitaries_and_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..=4 {
            assert!(random_unitary(n, &mut rng).unitarity_residual() < 1e-10);
            let rho = random_density(n, &mut rng);
            assert!((rho.trace() - c(1.0, 0.0)).norm() < 1e-12);
            assert!(hermitian_eigen(&rho).0[0] > -1e-12);
        }
    }

    #[test]
    fn projector_families_are_complete() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for dim in 1..=4 {
            for blocks in 1..=dim {
                let fam = random_projector_family(dim, blocks, &mut rng);
                let mut sum = CMatrix::zeros(dim, dim);
                for p in &fam {
                    assert!(approx_eq(&p.matmul(p), p, 1e-10));
                    sum = &sum + p;
                }
                assert!(approx_eq(&sum, &CMatrix::identity(dim), 1e-10));
            }
        }
    }

    #[test]
    fn weyl_and_random_bases_are_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..=3 {
            let id = CMatrix::identity(d * d).scale(c(d as f64, 0.0));
            assert!(approx_eq(&hs_gram(&weyl_family(d)), &id, 1e-10));
            let fam = random_unitary_basis(d, &mut rng);
            assert!(approx_eq(&hs_gram(&fam), &id, 1e-10));
            assert!(fam.iter().all(|u| u.unitarity_residual() < 1e-10));
        }
        assert!(approx_eq(
            &hs_gram(&pauli_family()),
            &CMatrix::identity(4).scale(c(2.0, 0.0)),
            1e-12
        ));
    }

    #[test]
    fn random_terms_typecheck() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..200 {
            let sig = random_signature(3, &mut rng);
            let t = random_term(&sig, TermShape::default(), &mut rng);
            assert!(t.typecheck(&sig).is_ok(), "{t}");
        }
    }
}
