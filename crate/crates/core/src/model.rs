//! The finite-dimensional Hilbert space model: interpretations and the
//! evaluation functor from terms to matrices.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

// Float supplies sqrt/powf when std is absent.
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{approx_eq, c, CMatrix, C64};
use crate::object::ObjectWord;
use crate::term::{MorTerm, Signature};

/// Tolerance used by numeric comparisons throughout the model.
pub const TOL: f64 = 1e-9;

/// Dimensions for base objects and matrices for generators. Free scalars are
/// generators with a 1x1 matrix. Classical objects are always interpreted by
/// the standard copying structure on their carrier.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Interpretation {
    pub dims: BTreeMap<String, usize>,
    pub gens: BTreeMap<String, CMatrix>,
}

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_dim(mut self, base: impl Into<String>, dim: usize) -> Self {
        self.dims.insert(base.into(), dim);
        self
    }

    pub fn with_gen(mut self, name: impl Into<String>, m: CMatrix) -> Self {
        self.gens.insert(name.into(), m);
        self
    }

    pub fn dim_of_base(&self, base: &str) -> Result<usize> {
        self.dims
            .get(base)
            .copied()
            .ok_or_else(|| Error::MissingInterpretation(base.to_string()))
    }

    pub fn factor_dims(&self, w: &ObjectWord) -> Result<Vec<usize>> {
        w.bases().map(|b| self.dim_of_base(b)).collect()
    }

    pub fn dim(&self, w: &ObjectWord) -> Result<usize> {
        Ok(self.factor_dims(w)?.iter().product())
    }

    /// Checks every generator of `sig` has a matrix of the right shape.
    pub fn validate(&self, sig: &Signature) -> Result<()> {
        for (name, (dom, cod)) in sig.generators() {
            let m = self
                .gens
                .get(name)
                .ok_or_else(|| Error::MissingInterpretation(name.to_string()))?;
            check_shape(name, m, self.dim(cod)?, self.dim(dom)?)?;
        }
        for name in sig.scalars() {
            let m = self
                .gens
                .get(name)
                .ok_or_else(|| Error::MissingInterpretation(name.to_string()))?;
            check_shape(name, m, 1, 1)?;
        }
        for obj in sig.objects() {
            self.dim_of_base(obj)?;
        }
        Ok(())
    }

    /// Random interpretation: each base gets a dimension drawn from `dims`,
    /// each generator and free scalar independent standard complex Gaussian entries.
    pub fn random<R: Rng + ?Sized>(sig: &Signature, dims: &[usize], rng: &mut R) -> Self {
        let mut interp = Interpretation::new();
        for obj in sig.objects() {
            let d = dims[rng.random_range(0..dims.len())];
            interp.dims.insert(obj.to_string(), d);
        }
        for (name, (dom, cod)) in sig.generators() {
            let rows = interp.dim(cod).unwrap_or(1);
            let cols = interp.dim(dom).unwrap_or(1);
            interp.gens.insert(name.to_string(), gaussian_matrix(rows, cols, rng));
        }
        for name in sig.scalars() {
            interp.gens.insert(name.to_string(), gaussian_matrix(1, 1, rng));
        }
        interp
    }
}

fn check_shape(what: &str, m: &CMatrix, rows: usize, cols: usize) -> Result<()> {
    if m.shape() != (rows, cols) {
        return Err(Error::ShapeMismatch {
            what: what.to_string(),
            expected_rows: rows,
            expected_cols: cols,
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    Ok(())
}

/// Matrix with independent standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        c(re, im)
    })
}

/// The standard classical structure on `C^n`: `δ|i⟩ = |ii⟩`, `ε|i⟩ = 1`.
pub fn standard_classical(n: usize) -> (CMatrix, CMatrix) {
    let mut delta = CMatrix::zeros(n * n, n);
    for i in 0..n {
        delta[(i * n + i, i)] = c(1.0, 0.0);
    }
    let eps = CMatrix::from_fn(1, n, |_, _| c(1.0, 0.0));
    (delta, eps)
}

/// Mixed-radix index of the reversed multi-index, as used by dual words.
fn reversed_index(mut idx: usize, dims: &[usize]) -> usize {
    let mut digits = Vec::with_capacity(dims.len());
    for &d in dims.iter().rev() {
        digits.push(idx % d);
        idx /= d;
    }
    // digits now holds i_k, ..., i_1; read them in that order over dims reversed.
    let mut out = 0;
    for (digit, &d) in digits.iter().zip(dims.iter().rev()) {
        out = out * d + digit;
    }
    out
}

/// The Bell state `η_A = Σ_i |rev(i), i⟩` on `A* ⊗ A`.
pub fn eta_vector(factor_dims: &[usize]) -> CMatrix {
    let d: usize = factor_dims.iter().product();
    let mut v = CMatrix::zeros(d * d, 1);
    for i in 0..d {
        v[(reversed_index(i, factor_dims) * d + i, 0)] = c(1.0, 0.0);
    }
    v
}

/// Permutation `|a, b⟩ ↦ |b, a⟩` from `A ⊗ B` to `B ⊗ A`.
pub fn swap_matrix(da: usize, db: usize) -> CMatrix {
    let n = da * db;
    let mut m = CMatrix::zeros(n, n);
    for a in 0..da {
        for b in 0..db {
            m[(b * da + a, a * db + b)] = c(1.0, 0.0);
        }
    }
    m
}

/// Evaluates a well-typed term to its matrix (shape `dim(cod) x dim(dom)`).
pub fn eval(t: &MorTerm, sig: &Signature, interp: &Interpretation) -> Result<CMatrix> {
    match t {
        MorTerm::Gen { name, dom, cod } => {
            let m = interp
                .gens
                .get(name)
                .ok_or_else(|| Error::MissingInterpretation(name.clone()))?;
            check_shape(name, m, interp.dim(cod)?, interp.dim(dom)?)?;
            Ok(m.clone())
        }
        MorTerm::Id(a) => Ok(CMatrix::identity(interp.dim(a)?)),
        MorTerm::Compose { after, before } => {
            let b = eval(before, sig, interp)?;
            let a = eval(after, sig, interp)?;
            if a.cols() != b.rows() {
                return Err(Error::ShapeMismatch {
                    what: "composition".to_string(),
                    expected_rows: b.rows(),
                    expected_cols: b.rows(),
                    rows: a.rows(),
                    cols: a.cols(),
                });
            }
            Ok(a.matmul(&b))
        }
        MorTerm::Tensor(l, r) => Ok(eval(l, sig, interp)?.kron(&eval(r, sig, interp)?)),
        MorTerm::Sym(a, b) => Ok(swap_matrix(interp.dim(a)?, interp.dim(b)?)),
        MorTerm::Eta(a) => Ok(eta_vector(&interp.factor_dims(a)?)),
        MorTerm::Dagger(inner) => Ok(eval(inner, sig, interp)?.adjoint()),
        MorTerm::Delta(x) => {
            let n = interp.dim(&sig.carrier_word(x)?)?;
            Ok(standard_classical(n).0)
        }
        MorTerm::Eps(x) => {
            let n = interp.dim(&sig.carrier_word(x)?)?;
            Ok(standard_classical(n).1)
        }
        MorTerm::ScalarSym(name) => {
            let m = interp
                .gens
                .get(name)
                .ok_or_else(|| Error::MissingInterpretation(name.clone()))?;
            check_shape(name, m, 1, 1)?;
            Ok(m.clone())
        }
        MorTerm::ScalarDim(a, p) => {
            let d = interp.dim(a)? as f64;
            Ok(CMatrix::scalar(c(d.powf(*p as f64 / 2.0), 0.0)))
        }
    }
}

/// Compares two terms under `trials` random interpretations (dims in {2, 3},
/// Gaussian generators) at [`TOL`].
pub fn numeric_eq<R: Rng + ?Sized>(
    t1: &MorTerm,
    t2: &MorTerm,
    sig: &Signature,
    trials: usize,
    rng: &mut R,
) -> Result<bool> {
    let ty1 = t1.typecheck(sig)?;
    let ty2 = t2.typecheck(sig)?;
    if ty1 != ty2 {
        return Err(Error::TypeMismatch {
            position: "numeric_eq".to_string(),
            expected: ty1.0.tensor(&ty1.1),
            found: ty2.0.tensor(&ty2.1),
        });
    }
    for _ in 0..trials {
        let interp = Interpretation::random(sig, &[2, 3], rng);
        let m1 = eval(t1, sig, &interp)?;
        let m2 = eval(t2, sig, &interp)?;
        if !approx_eq(&m1, &m2, TOL) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Value of a 1x1 matrix.
pub fn scalar_value(m: &CMatrix) -> C64 {
    m[(0, 0)]
}
