//! X-unitaries, Bell demolition measurements, teleportation and dense coding.
//!
//! Conventions: an X-unitary `U : X⊗A -> A` is the row of blocks
//! `[U_0 U_1 … U_{k-1}]`, so `U(|i⟩⊗v) = U_i v`. The Bell demolition
//! measurement has rows `(1/√d)·vec(conj U_i)`, which makes Bob's branch
//! after outcome `i` equal to `(1/d)·U_i† ψ`; the correction is therefore
//! the controlled `U` itself.

use alloc::format;
use alloc::vec::Vec;

// Float supplies sqrt when std is absent.
#[allow(unused_imports)]
use num_traits::Float;

use crate::classical::ClassicalStructure;
use crate::cpm::{density_operator, gamma, pure};
use crate::error::{Error, Result};
use crate::matrix::{c, CMatrix, C64};
use crate::model::{eta_vector, TOL};
use crate::report::CheckReport;
use crate::spectra::{check_spectrum, Spectrum};

/// `s_X = η†∘η`, cross-checked against `ε∘ε†` by [`size_report`].
pub fn size(x: &ClassicalStructure) -> C64 {
    let eta = x.eta();
    eta.adjoint().matmul(&eta)[(0, 0)]
}

pub fn size_report(x: &ClassicalStructure) -> CheckReport {
    let by_eps = x.eps.matmul(&x.eps.adjoint())[(0, 0)];
    let mut rep = CheckReport::new();
    rep.record("size-agreement", (size(x) - by_eps).norm(), TOL);
    rep
}

/// `(1_X⊗U)∘(δ⊗1_A)` for `U : X⊗A -> A`.
pub fn controlled(u: &CMatrix, x: &ClassicalStructure) -> Result<CMatrix> {
    let k = x.dim();
    let a = u.rows();
    if u.cols() != k * a {
        return Err(Error::ShapeMismatch {
            what: "U".into(),
            expected_rows: a,
            expected_cols: k * a,
            rows: u.rows(),
            cols: u.cols(),
        });
    }
    let id_a = CMatrix::identity(a);
    Ok(CMatrix::identity(k).kron(u).matmul(&x.delta.kron(&id_a)))
}

/// Unitarity residual of the controlled form.
pub fn x_unitarity_residual(u: &CMatrix, x: &ClassicalStructure) -> Result<f64> {
    Ok(controlled(u, x)?.unitarity_residual())
}

pub fn check_x_unitary(u: &CMatrix, x: &ClassicalStructure) -> Result<bool> {
    Ok(x_unitarity_residual(u, x)? <= TOL)
}

/// An X-unitary on the standard structure of `C^k`, stored as its blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct XUnitary {
    mats: Vec<CMatrix>,
}

impl XUnitary {
    pub fn k(&self) -> usize {
        self.mats.len()
    }

    /// Dimension of `A`.
    pub fn dim(&self) -> usize {
        self.mats[0].rows()
    }

    pub fn family(&self) -> &[CMatrix] {
        &self.mats
    }

    pub fn classical(&self) -> ClassicalStructure {
        ClassicalStructure::standard(self.k())
    }

    /// `U : X⊗A -> A`.
    pub fn matrix(&self) -> CMatrix {
        block_row(&self.mats)
    }

    /// Slices `U(|i⟩⊗-)` back out of a block row.
    pub fn slices(u: &CMatrix, k: usize) -> Vec<CMatrix> {
        let a = u.rows();
        (0..k).map(|i| u.block(0, i * a, a, a)).collect()
    }
}

fn block_row(mats: &[CMatrix]) -> CMatrix {
    let a = mats.first().map_or(0, CMatrix::rows);
    let mut u = CMatrix::zeros(a, mats.len() * a);
    for (i, m) in mats.iter().enumerate() {
        u.set_block(0, i * a, m);
    }
    u
}

/// Assembles `U(|i⟩⊗v) = U_i v` from `k ≥ 1` unitaries of one size.
pub fn x_unitary_from_family(mats: &[CMatrix]) -> Result<XUnitary> {
    let a = mats.first().map_or(0, CMatrix::rows);
    for (index, m) in mats.iter().enumerate() {
        if m.shape() != (a, a) {
            return Err(Error::ShapeMismatch {
                what: format!("family member {index}"),
                expected_rows: a,
                expected_cols: a,
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let residual = m.unitarity_residual();
        if residual > TOL {
            return Err(Error::NotUnitary { index, residual });
        }
    }
    if mats.is_empty() {
        return Err(Error::NotUnitary {
            index: 0,
            residual: 1.0,
        });
    }
    Ok(XUnitary { mats: mats.to_vec() })
}

/// `(1/s_A)·tr^A(U†∘U)` over the `A` wire of `X⊗A`, which should be `1_X`.
pub fn trace_unitarity(u: &XUnitary) -> CMatrix {
    let (k, a) = (u.k(), u.dim());
    let uu = u.matrix().adjoint().matmul(&u.matrix());
    CMatrix::from_fn(k, k, |y, x| {
        let t: C64 = (0..a).map(|r| uu[(y * a + r, x * a + r)]).sum();
        t / (a as f64)
    })
}

/// A demolition Bell measurement `A⊗A* -> X` and its induced spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct BellMeasurement {
    pub unitary: XUnitary,
    pub demeas: CMatrix,
    pub spectrum: Spectrum,
}

/// `(1/√s_A)•(1_X⊗η†)∘(U†⊗1_{A*})`: row `i` is `(1/√d)·vec(conj U_i)`.
pub fn bell_demeas_matrix(u: &XUnitary) -> CMatrix {
    let a = u.dim();
    let cap = eta_vector(&[a]).adjoint();
    let lowered = CMatrix::identity(u.k()).kron(&cap);
    let raised = u.matrix().adjoint().kron(&CMatrix::identity(a));
    lowered.matmul(&raised).scale(c(1.0 / (a as f64).sqrt(), 0.0))
}

/// `M_Bell = (1_X⊗D†)∘δ∘D : A⊗A* -> X⊗(A⊗A*)`.
pub fn bell_spectrum(d: &CMatrix, x: &ClassicalStructure) -> Spectrum {
    let m = CMatrix::identity(x.dim()).kron(&d.adjoint()).matmul(&x.delta).matmul(d);
    Spectrum { x: x.clone(), m }
}

pub fn bell_demeas(u: &XUnitary) -> Result<BellMeasurement> {
    let x = u.classical();
    let res = x_unitarity_residual(&u.matrix(), &x)?;
    if res > TOL {
        return Err(Error::NotXUnitary(res));
    }
    let (k, a) = (u.k(), u.dim());
    if k != a * a {
        return Err(Error::DegenerateDimensions { x: k, a });
    }
    let d = bell_demeas_matrix(u);
    let left = d.matmul(&d.adjoint()).max_abs_diff(&CMatrix::identity(k));
    let right = d.adjoint().matmul(&d).max_abs_diff(&CMatrix::identity(a * a));
    let worst = left.max(right);
    if worst > TOL {
        return Err(Error::UnitarityFailed(worst));
    }
    let spectrum = bell_spectrum(&d, &x);
    let rep = check_spectrum(&spectrum)?;
    if let Some(l) = rep.first_failure() {
        return Err(Error::SpectrumCheckFailed {
            law: l.law.clone(),
            residual: l.residual,
        });
    }
    Ok(BellMeasurement {
        unitary: u.clone(),
        demeas: d,
        spectrum,
    })
}

/// The two unitarity equations, trace-unitarity and the induced spectrum laws.
pub fn bell_report(b: &BellMeasurement) -> Result<CheckReport> {
    let k = b.unitary.k();
    let d = &b.demeas;
    let mut rep = CheckReport::new();
    rep.record(
        "demeas-demeas-dagger",
        d.matmul(&d.adjoint()).max_abs_diff(&CMatrix::identity(k)),
        TOL,
    );
    rep.record(
        "demeas-dagger-demeas",
        d.adjoint().matmul(d).max_abs_diff(&CMatrix::identity(d.cols())),
        TOL,
    );
    rep.record(
        "trace-unitarity",
        trace_unitarity(&b.unitary).max_abs_diff(&CMatrix::identity(k)),
        TOL,
    );
    rep.extend_prefixed("bell-spectrum-", check_spectrum(&b.spectrum)?);
    Ok(rep)
}

/// Applies `Γ_X ⊗ 1` to a doubled matrix with row layout `(x, r, x', r')`,
/// `x` ranging over `C^k`. For the standard structure `Γ` zeroes `x ≠ x'`.
fn decohere_rows(m: &CMatrix, k: usize, rest: usize) -> CMatrix {
    let mut out = m.clone();
    for row in 0..m.rows() {
        let x = row / (rest * k * rest);
        let x2 = (row / rest) % k;
        if x != x2 {
            for col in 0..m.cols() {
                out[(row, col)] = c(0.0, 0.0);
            }
        }
    }
    out
}

/// The doubled map `ρ ↦ Σ_{x,x'} w(x, x') |x⟩⟨x'| ⊗ ρ` on a register of
/// dimension `reg` next to `A = C^a`.
fn register_channel(reg: usize, a: usize, w: impl Fn(usize, usize) -> f64) -> CMatrix {
    let n = reg * a;
    CMatrix::from_fn(n * n, a * a, |row, col| {
        let (out, out2) = (row / n, row % n);
        let (x, r, x2, r2) = (out / a, out % a, out2 / a, out2 % a);
        let (b, b2) = (col / a, col % a);
        if r == b && r2 == b2 {
            c(w(x, x2), 0.0)
        } else {
            c(0.0, 0.0)
        }
    })
}

/// `(1/√s_A)•η_A` as a state on `A*⊗A`.
fn resource(a: usize) -> CMatrix {
    eta_vector(&[a]).scale(c(1.0 / (a as f64).sqrt(), 0.0))
}

/// The teleportation composite `A -> X⊗X^copies⊗A`: Bell-measure Alice's
/// input against her half of the resource, copy the outcome `copies + 1`
/// times and let the last copy drive `correction` on Bob's half.
pub fn teleport_composite(b: &BellMeasurement, correction: &[CMatrix], copies: usize) -> CMatrix {
    let a = b.unitary.dim();
    let k = b.unitary.k();
    let x = ClassicalStructure::standard(k);
    let id_a = CMatrix::identity(a);
    let share = id_a.kron(&resource(a));
    let measure = b.demeas.kron(&id_a);
    let mut classical = CMatrix::identity(k);
    for _ in 0..=copies {
        let width = classical.rows() / k;
        classical = CMatrix::identity(width).kron(&x.delta).matmul(&classical);
    }
    let fan = classical.kron(&id_a);
    let lead = classical.rows() / k;
    let correct = CMatrix::identity(lead).kron(&block_row(correction));
    correct.matmul(&fan).matmul(&measure).matmul(&share)
}

/// Teleportation with correction family `correction` (normally the
/// measurement's own `U_i`).
pub fn teleport_verify_with(b: &BellMeasurement, correction: &[CMatrix]) -> CheckReport {
    let a = b.unitary.dim();
    let k = b.unitary.k();
    let id_a = CMatrix::identity(a);
    let inv_sa = c(1.0 / a as f64, 0.0);
    let mut rep = CheckReport::new();

    let composite = teleport_composite(b, correction, 0);
    let mut branch: f64 = 0.0;
    for i in 0..k {
        let slice = CMatrix::basis(k, i).adjoint().kron(&id_a).matmul(&composite);
        branch = branch.max(slice.max_abs_diff(&id_a.scale(inv_sa)));
    }
    rep.record("branch-scalar", branch, TOL);

    let inv_sx = 1.0 / k as f64;
    let doubled = decohere_rows(&pure(&composite).matrix, k, a);
    let expect = register_channel(k, a, |x, x2| if x == x2 { inv_sx } else { 0.0 });
    rep.record("cpm-channel", doubled.max_abs_diff(&expect), TOL);

    let copied = teleport_composite(b, correction, 1);
    let doubled = decohere_rows(&pure(&copied).matrix, k, k * a);
    let expect = register_channel(k * k, a, |x, x2| {
        let same = x / k == x % k && x2 / k == x2 % k && x == x2;
        if same {
            inv_sx
        } else {
            0.0
        }
    });
    rep.record("copy-before-consume", doubled.max_abs_diff(&expect), TOL);
    rep
}

pub fn teleport_verify(u: &XUnitary) -> Result<CheckReport> {
    let b = bell_demeas(u)?;
    Ok(teleport_verify_with(&b, u.family()))
}

/// Dense coding where message `i` is encoded by `encoding[i]` on Alice's
/// half of `(1/√s_A)•η'_A`.
pub fn dense_coding_verify_with(b: &BellMeasurement, encoding: &[CMatrix]) -> CheckReport {
    let a = b.unitary.dim();
    let k = b.unitary.k();
    let shared = eta_vector(&[a]).scale(c(1.0 / (a as f64).sqrt(), 0.0));
    let id_a = CMatrix::identity(a);
    let mut rep = CheckReport::new();
    let mut channel = CMatrix::zeros(k, k);
    let mut exact: f64 = 0.0;
    for (i, e) in encoding.iter().enumerate().take(k) {
        let out = b.demeas.matmul(&e.kron(&id_a)).matmul(&shared);
        exact = exact.max(out.max_abs_diff(&CMatrix::basis(k, i)));
        let classical = pure(&out).then(&gamma(&ClassicalStructure::standard(k)));
        let rho = density_operator(&classical.matrix, k);
        for j in 0..k {
            channel[(j, i)] = rho[(j, j)];
        }
    }
    rep.record("messages-exact", exact, TOL);
    rep.record("classical-channel", channel.max_abs_diff(&CMatrix::identity(k)), TOL);
    rep
}

pub fn dense_coding_verify(u: &XUnitary) -> Result<CheckReport> {
    let b = bell_demeas(u)?;
    Ok(dense_coding_verify_with(&b, u.family()))
}
