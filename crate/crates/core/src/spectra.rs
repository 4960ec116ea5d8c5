//! Projector-valued spectra `M : A -> X⊗A` and their correspondence with
//! complete families of mutually orthogonal projectors.

use alloc::vec::Vec;

use crate::classical::{check_x_selfadjoint, copyable_vectors, ClassicalStructure};
use crate::error::{Error, Result};
use crate::linalg::min_eigenvalue;
use crate::matrix::CMatrix;
use crate::model::TOL;
use crate::report::CheckReport;

/// A candidate spectrum: a classical structure on `C^k` and a map `A -> X⊗A`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub x: ClassicalStructure,
    pub m: CMatrix,
}

/// `P_1..P_k` on `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectorFamily(pub Vec<CMatrix>);

/// How much of the spectrum axioms a candidate satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumKind {
    /// X-self-adjoint, X-idempotent and X-complete.
    Spectrum,
    /// X-self-adjoint and X-idempotent with `(ε⊗1)∘M ≤ 1_A`.
    XProjector,
    Neither,
}

impl Spectrum {
    /// Dimension of `A`.
    pub fn dim(&self) -> usize {
        self.m.cols()
    }

    fn shape_ok(&self) -> Result<()> {
        let (k, a) = (self.x.dim(), self.m.cols());
        if self.m.rows() != k * a {
            return Err(Error::ShapeMismatch {
                what: "M".into(),
                expected_rows: k * a,
                expected_cols: a,
                rows: self.m.rows(),
                cols: self.m.cols(),
            });
        }
        Ok(())
    }

    /// `(ε⊗1_A)∘M`, which is `Σ P_i` for a genuine spectrum.
    fn marginal(&self) -> CMatrix {
        self.x.eps.kron(&CMatrix::identity(self.dim())).matmul(&self.m)
    }
}

/// X-idempotence, X-completeness and X-self-adjointness residuals.
pub fn check_spectrum(s: &Spectrum) -> Result<CheckReport> {
    s.shape_ok()?;
    let a = s.dim();
    let id_a = CMatrix::identity(a);
    let id_x = CMatrix::identity(s.x.dim());
    let copy_then = s.x.delta.kron(&id_a).matmul(&s.m);
    let twice = id_x.kron(&s.m).matmul(&s.m);
    let mut rep = CheckReport::new();
    rep.record("x-idempotence", copy_then.max_abs_diff(&twice), TOL);
    rep.record("x-completeness", s.marginal().max_abs_diff(&id_a), TOL);
    rep.extend(check_x_selfadjoint(&s.m, &s.x)?);
    Ok(rep)
}

/// Spectrum, X-projector (possibly incomplete) or neither.
pub fn classify(s: &Spectrum) -> Result<SpectrumKind> {
    let rep = check_spectrum(s)?;
    let sa = rep.get("x-selfadjoint").is_some_and(|l| l.passed);
    let idem = rep.get("x-idempotence").is_some_and(|l| l.passed);
    if !(sa && idem) {
        return Ok(SpectrumKind::Neither);
    }
    if rep.passed() {
        return Ok(SpectrumKind::Spectrum);
    }
    let slack = &CMatrix::identity(s.dim()) - &s.marginal();
    Ok(if min_eigenvalue(&slack) >= -TOL {
        SpectrumKind::XProjector
    } else {
        SpectrumKind::Neither
    })
}

fn first_failure(rep: &CheckReport) -> Option<Error> {
    rep.first_failure().map(|l| Error::SpectrumCheckFailed {
        law: l.law.clone(),
        residual: l.residual,
    })
}

/// `P_i = (v_i†⊗1_A)∘M` over the copyable vectors `v_i` of `X`, in their
/// canonical order (the coordinate order for standard structures).
pub fn spectrum_to_projectors(s: &Spectrum) -> Result<ProjectorFamily> {
    if let Some(e) = first_failure(&check_spectrum(s)?) {
        return Err(e);
    }
    let id_a = CMatrix::identity(s.dim());
    let base = copyable_vectors(&s.x)?;
    Ok(ProjectorFamily(
        base.iter().map(|v| v.adjoint().kron(&id_a).matmul(&s.m)).collect(),
    ))
}

impl ProjectorFamily {
    /// Residuals of self-adjointness, idempotence, orthogonality, completeness.
    pub fn check(&self) -> CheckReport {
        let ps = &self.0;
        let n = ps.first().map_or(0, CMatrix::rows);
        let mut sa: f64 = 0.0;
        let mut idem: f64 = 0.0;
        let mut orth: f64 = 0.0;
        let mut sum = CMatrix::zeros(n, n);
        let zero = CMatrix::zeros(n, n);
        for (i, p) in ps.iter().enumerate() {
            sa = sa.max(p.adjoint().max_abs_diff(p));
            idem = idem.max(p.matmul(p).max_abs_diff(p));
            for q in &ps[i + 1..] {
                orth = orth.max(p.matmul(q).max_abs_diff(&zero));
            }
            sum = &sum + p;
        }
        let mut rep = CheckReport::new();
        rep.record("self-adjoint", sa, TOL);
        rep.record("idempotent", idem, TOL);
        rep.record("orthogonal", orth, TOL);
        rep.record("complete", sum.max_abs_diff(&CMatrix::identity(n)), TOL);
        rep
    }
}

/// `M = Σ_i |i⟩⊗P_i` with no validation, for building mutants.
pub fn spectrum_from_family_unchecked(f: &ProjectorFamily) -> Spectrum {
    let k = f.0.len();
    let a = f.0.first().map_or(0, CMatrix::rows);
    let mut m = CMatrix::zeros(k * a, a);
    for (i, p) in f.0.iter().enumerate() {
        m.set_block(i * a, 0, p);
    }
    Spectrum {
        x: ClassicalStructure::standard(k),
        m,
    }
}

/// `M = Σ_i |i⟩⊗P_i` over the standard structure on `C^k`.
pub fn projectors_to_spectrum(f: &ProjectorFamily) -> Result<Spectrum> {
    if f.0.is_empty() {
        return Err(Error::InvalidFamily {
            law: "nonempty".into(),
            residual: 1.0,
        });
    }
    let a = f.0[0].rows();
    for p in &f.0 {
        if p.shape() != (a, a) {
            return Err(Error::ShapeMismatch {
                what: "projector".into(),
                expected_rows: a,
                expected_cols: a,
                rows: p.rows(),
                cols: p.cols(),
            });
        }
    }
    if let Some(l) = f.check().first_failure() {
        return Err(Error::InvalidFamily {
            law: l.law.clone(),
            residual: l.residual,
        });
    }
    Ok(spectrum_from_family_unchecked(f))
}

/// `M_m = (1_X⊗m†)∘δ∘m` for `m : A -> X` with `m∘m† = 1_X`.
pub fn spectrum_from_isometry(m: &CMatrix, x: &ClassicalStructure) -> Result<Spectrum> {
    let k = x.dim();
    if m.rows() != k {
        return Err(Error::ShapeMismatch {
            what: "m".into(),
            expected_rows: k,
            expected_cols: m.cols(),
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let res = m.matmul(&m.adjoint()).max_abs_diff(&CMatrix::identity(k));
    if res > TOL {
        return Err(Error::NotAnIsometry(res));
    }
    let mm = CMatrix::identity(k).kron(&m.adjoint()).matmul(&x.delta).matmul(m);
    Ok(Spectrum { x: x.clone(), m: mm })
}
