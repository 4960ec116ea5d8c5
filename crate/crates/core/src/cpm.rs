//! Doubled (completely positive) maps. A density operator `ρ` on `A` is the
//! row-major vector of its entries, living on `A⊗A*`; a doubled morphism
//! `A⊗A* -> B⊗B*` acts on these vectors. For compound wires `A⊗B` the
//! doubled layout is `(a, b, a', b')`.

use alloc::vec::Vec;

use rand::Rng;

use crate::classical::ClassicalStructure;
use crate::error::{Error, Result};
use crate::linalg::min_eigenvalue;
use crate::matrix::{c, CMatrix, C64};
use crate::model::{eval, Interpretation, TOL};
use crate::object::ObjectWord;
use crate::report::CheckReport;
use crate::rewrite::{symbolic_eq, Verdict};
use crate::sample::random_density;
use crate::spectra::{check_spectrum, Spectrum};
use crate::term::{conjugate, MorTerm, Signature};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Pure,
    Composite,
}

/// A map on doubled spaces; `dom` and `cod` are the undoubled dimensions.
#[derive(Debug, Clone, PartialEq)]
pub struct DoubledMorphism {
    pub matrix: CMatrix,
    pub dom: usize,
    pub cod: usize,
    pub provenance: Provenance,
}

pub fn density_vector(rho: &CMatrix) -> CMatrix {
    rho.reshape(rho.rows() * rho.cols(), 1)
}

pub fn density_operator(v: &CMatrix, n: usize) -> CMatrix {
    v.reshape(n, n)
}

/// `f ⊗ f_*`.
pub fn pure(f: &CMatrix) -> DoubledMorphism {
    DoubledMorphism {
        matrix: f.kron(&f.conj()),
        dom: f.cols(),
        cod: f.rows(),
        provenance: Provenance::Pure,
    }
}

/// The term `f ⊗ f_* : A⊗A* -> B⊗B*`.
pub fn pure_term(t: &MorTerm, sig: &Signature) -> Result<MorTerm> {
    Ok(MorTerm::tensor(t.clone(), conjugate(t, sig)?))
}

/// Splits a doubled index laid out as `(a, b, a', b')` into the indices
/// `(a, a')` and `(b, b')` of the two factors.
fn split_pairs(idx: usize, da: usize, db: usize) -> (usize, usize) {
    let b2 = idx % db;
    let a2 = (idx / db) % da;
    let b = (idx / (db * da)) % db;
    let a = idx / (db * da * db);
    (a * da + a2, b * db + b2)
}

impl DoubledMorphism {
    pub fn identity(n: usize) -> Self {
        pure(&CMatrix::identity(n))
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &DoubledMorphism) -> DoubledMorphism {
        assert_eq!(self.cod, next.dom, "doubled composition dimension mismatch");
        DoubledMorphism {
            matrix: next.matrix.matmul(&self.matrix),
            dom: self.dom,
            cod: next.cod,
            provenance: Provenance::Composite,
        }
    }

    /// Parallel composition in the doubled layout.
    pub fn tensor(&self, other: &DoubledMorphism) -> DoubledMorphism {
        let (rows, cols) = ((self.cod * other.cod).pow(2), (self.dom * other.dom).pow(2));
        let matrix = CMatrix::from_fn(rows, cols, |r, col| {
            let (ra, rb) = split_pairs(r, self.cod, other.cod);
            let (ca, cb) = split_pairs(col, self.dom, other.dom);
            self.matrix[(ra, ca)] * other.matrix[(rb, cb)]
        });
        let provenance = if self.provenance == Provenance::Pure && other.provenance == Provenance::Pure {
            Provenance::Pure
        } else {
            Provenance::Composite
        };
        DoubledMorphism {
            matrix,
            dom: self.dom * other.dom,
            cod: self.cod * other.cod,
            provenance,
        }
    }

    /// Image of a density operator, as an operator.
    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        density_operator(&self.matrix.matmul(&density_vector(rho)), self.cod)
    }
}

/// `Γ_X = δ∘δ†` on the doubled classical wire.
pub fn gamma(x: &ClassicalStructure) -> DoubledMorphism {
    DoubledMorphism {
        matrix: x.delta.matmul(&x.delta.adjoint()),
        dom: x.dim(),
        cod: x.dim(),
        provenance: Provenance::Composite,
    }
}

/// The two term forms of `Γ_X`: `(1_X⊗η†⊗1_X)∘(δ⊗δ)` and `δ∘δ†`.
pub fn gamma_terms(classical: &str, carrier: &str) -> (MorTerm, MorTerm) {
    let x = ObjectWord::base(carrier);
    let id = MorTerm::id(x.clone());
    let cap = MorTerm::dagger_node(MorTerm::eta(x));
    let wide = MorTerm::tensor(MorTerm::delta(classical), MorTerm::delta(classical))
        .then(MorTerm::tensor(id.clone(), MorTerm::tensor(cap, id)));
    let narrow = MorTerm::dagger_node(MorTerm::delta(classical)).then(MorTerm::delta(classical));
    (wide, narrow)
}

/// Both term forms of `Γ` agree symbolically and numerically on `C^n`,
/// and agree with the matrix `δδ†`.
pub fn gamma_report(n: usize) -> Result<CheckReport> {
    let mut sig = Signature::new();
    sig.add_classical("X", "X")?;
    let interp = Interpretation::new().with_dim("X", n);
    let (wide, narrow) = gamma_terms("X", "X");
    let w = eval(&wide, &sig, &interp)?;
    let v = eval(&narrow, &sig, &interp)?;
    let mut rep = CheckReport::new();
    rep.record("gamma-term-forms", w.max_abs_diff(&v), TOL);
    let g = gamma(&ClassicalStructure::standard(n));
    rep.record("gamma-matrix", v.max_abs_diff(&g.matrix), TOL);
    let sym = symbolic_eq(&wide, &narrow, &sig)? == Verdict::Equal;
    rep.record_flag("gamma-symbolic", sym, if sym { 0.0 } else { 1.0 });
    rep.record(
        "gamma-idempotent",
        g.matrix.matmul(&g.matrix).max_abs_diff(&g.matrix),
        TOL,
    );
    Ok(rep)
}

/// `Γ_X ⊗ 1` on the doubled layout `(x, r, x', r')`.
fn decohere_first(x: &ClassicalStructure, rest: usize) -> CMatrix {
    gamma(x).tensor(&DoubledMorphism::identity(rest)).matrix
}

/// `(1⊗Γ_X⊗1)∘(M⊗M_*)` without checking that `M` is a spectrum.
pub fn meas_unchecked(s: &Spectrum) -> DoubledMorphism {
    let a = s.dim();
    let raw = pure(&s.m);
    DoubledMorphism {
        matrix: decohere_first(&s.x, a).matmul(&raw.matrix),
        dom: a,
        cod: s.x.dim() * a,
        provenance: Provenance::Composite,
    }
}

/// The non-demolition measurement of a spectrum: `ρ ↦ Σ_i |i⟩⟨i| ⊗ P_i ρ P_i`.
pub fn meas(s: &Spectrum) -> Result<DoubledMorphism> {
    let rep = check_spectrum(s)?;
    if let Some(l) = rep.first_failure() {
        return Err(Error::SpectrumCheckFailed {
            law: l.law.clone(),
            residual: l.residual,
        });
    }
    Ok(meas_unchecked(s))
}

/// The demolition measurement `Γ_X∘(m⊗m_*)` for `m : A -> X` with `m∘m† = 1_X`.
pub fn demeas(m: &CMatrix, x: &ClassicalStructure) -> Result<DoubledMorphism> {
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
    Ok(pure(m).then(&gamma(x)))
}

/// `p_i = tr((|i⟩⟨i|⊗1) σ)` for an output `σ` on `C^k ⊗ C^a`.
pub fn born_marginals(out: &CMatrix, k: usize, a: usize) -> Vec<f64> {
    (0..k)
        .map(|i| (0..a).map(|r| out[(i * a + r, i * a + r)].re).sum())
        .collect()
}

/// `(pure(δ_X)⊗1)∘meas` against `(1_X⊗meas)∘meas` on `samples` random densities.
pub fn projection_postulate_cpm<R: Rng + ?Sized>(s: &Spectrum, samples: usize, rng: &mut R) -> CheckReport {
    let a = s.dim();
    let k = s.x.dim();
    let m = meas_unchecked(s);
    let copy = pure(&s.x.delta).tensor(&DoubledMorphism::identity(a));
    let lhs = m.then(&copy);
    let rhs = m.then(&DoubledMorphism::identity(k).tensor(&m));
    let mut worst: f64 = 0.0;
    for _ in 0..samples {
        let rho = random_density(a, rng);
        worst = worst.max(lhs.apply(&rho).max_abs_diff(&rhs.apply(&rho)));
    }
    let mut rep = CheckReport::new();
    rep.record("projection-postulate", worst, TOL);
    rep
}

/// Smallest eigenvalue over the images of `samples` random densities, and
/// the worst Hermiticity defect. Both should be `≥ -TOL` and `≤ TOL`.
pub fn positivity_floor<R: Rng + ?Sized>(d: &DoubledMorphism, samples: usize, rng: &mut R) -> (f64, f64) {
    let mut floor = f64::INFINITY;
    let mut herm: f64 = 0.0;
    for _ in 0..samples {
        let out = d.apply(&random_density(d.dom, rng));
        herm = herm.max(out.adjoint().max_abs_diff(&out));
        floor = floor.min(min_eigenvalue(&out));
    }
    (floor, herm)
}

/// `t = η†_{A*}∘(ψ⊗ψ_*)`, the square root of `pure(ψ†∘ψ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SqrtScalar {
    pub term: MorTerm,
    pub value: C64,
    /// `|t∘t − pure(ψ†ψ)|`.
    pub residual: f64,
}

impl SqrtScalar {
    pub fn is_real_nonnegative(&self) -> bool {
        self.value.im.abs() <= TOL && self.value.re >= -TOL
    }
}

pub fn sqrt_positive_scalar(psi: &MorTerm, sig: &Signature, interp: &Interpretation) -> Result<SqrtScalar> {
    let (dom, cod) = psi.typecheck(sig)?;
    if !dom.is_unit() {
        return Err(Error::TypeMismatch {
            position: "sqrt_positive_scalar".into(),
            expected: ObjectWord::unit(),
            found: dom,
        });
    }
    let cap = MorTerm::dagger_node(MorTerm::eta(cod.dual()));
    let term = pure_term(psi, sig)?.then(cap);
    let value = eval(&term, sig, interp)?[(0, 0)];
    let v = eval(psi, sig, interp)?;
    let norm_sq = v.adjoint().matmul(&v)[(0, 0)];
    let pure_norm = pure(&CMatrix::scalar(norm_sq)).matrix[(0, 0)];
    Ok(SqrtScalar {
        term,
        value,
        residual: (value * value - pure_norm).norm(),
    })
}

/// Embeds a classical distribution as a diagonal density operator.
pub fn classical_state(p: &[f64]) -> CMatrix {
    let n = p.len();
    CMatrix::from_fn(n, n, |i, j| if i == j { c(p[i], 0.0) } else { c(0.0, 0.0) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::approx_eq;
    use crate::sample::{random_state, random_unitary};
    use crate::spectra::{projectors_to_spectrum, spectrum_from_family_unchecked, ProjectorFamily};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn diag(entries: &[f64]) -> CMatrix {
        classical_state(entries)
    }

    fn plus() -> CMatrix {
        CMatrix::from_real(2, 2, &[0.5, 0.5, 0.5, 0.5])
    }

    #[test]
    fn pure_examples() {
        let id = pure(&CMatrix::identity(3));
        assert_eq!(id.matrix, CMatrix::identity(9));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let f = crate::model::gaussian_matrix(2, 3, &mut rng);
        let phased = f.scale(C64::from_polar(1.0, core::f64::consts::PI / 5.0));
        assert!(approx_eq(&pure(&phased).matrix, &pure(&f).matrix, 1e-12));
        let psi = random_state(3, &mut rng);
        let rho = pure(&psi).apply(&CMatrix::identity(1));
        assert!(approx_eq(&rho, &psi.matmul(&psi.adjoint()), 1e-12));
        let g = crate::model::gaussian_matrix(4, 2, &mut rng);
        let lhs = pure(&g.matmul(&f));
        assert!(approx_eq(&lhs.matrix, &pure(&f).then(&pure(&g)).matrix, 1e-9));
    }

    #[test]
    fn pure_tensor_is_pure_of_kron() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let f = crate::model::gaussian_matrix(2, 3, &mut rng);
        let g = crate::model::gaussian_matrix(3, 2, &mut rng);
        let both = pure(&f).tensor(&pure(&g));
        assert!(approx_eq(&both.matrix, &pure(&f.kron(&g)).matrix, 1e-9));
    }

    #[test]
    fn pure_term_matches_matrix() {
        let mut sig = Signature::new();
        sig.add_object("A").unwrap();
        sig.add_object("B").unwrap();
        let (a, b) = (ObjectWord::base("A"), ObjectWord::base("B"));
        sig.add_generator("f", a.clone(), b.clone()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = crate::model::gaussian_matrix(3, 2, &mut rng);
        let interp = Interpretation::new()
            .with_dim("A", 2)
            .with_dim("B", 3)
            .with_gen("f", f.clone());
        let t = pure_term(&MorTerm::gen("f", a, b), &sig).unwrap();
        assert!(approx_eq(&eval(&t, &sig, &interp).unwrap(), &pure(&f).matrix, 1e-9));
    }

    #[test]
    fn gamma_examples() {
        let g = gamma(&ClassicalStructure::standard(2));
        let rho = CMatrix::from_vec(2, 2, alloc::vec![c(0.3, 0.0), c(0.1, 0.2), c(0.1, -0.2), c(0.7, 0.0)]);
        assert!(approx_eq(&g.apply(&rho), &diag(&[0.3, 0.7]), 1e-12));
        let d = diag(&[0.25, 0.75]);
        assert!(approx_eq(&g.apply(&d), &d, 1e-12));
        for n in 2..=4 {
            assert!(gamma_report(n).unwrap().passed());
        }
    }

    #[test]
    fn gamma_fixes_copyable_states() {
        let x = ClassicalStructure::standard(3);
        let e = CMatrix::basis(3, 1);
        let lhs = pure(&e).then(&gamma(&x));
        assert!(approx_eq(&lhs.matrix, &pure(&e).matrix, 1e-12));
    }

    #[test]
    fn meas_examples() {
        let x = ClassicalStructure::standard(2);
        let s = Spectrum { m: x.delta.clone(), x };
        let out = meas(&s).unwrap().apply(&plus());
        let e0 = diag(&[1.0, 0.0]);
        let e1 = diag(&[0.0, 1.0]);
        let oracle = &e0.kron(&e0).scale(c(0.5, 0.0)) + &e1.kron(&e1).scale(c(0.5, 0.0));
        assert!(approx_eq(&out, &oracle, 1e-12));

        let fam = ProjectorFamily(alloc::vec![diag(&[1.0, 1.0, 0.0]), diag(&[0.0, 0.0, 1.0])]);
        let s = projectors_to_spectrum(&fam).unwrap();
        let rho = CMatrix::identity(3).scale(c(1.0 / 3.0, 0.0));
        let p = born_marginals(&meas(&s).unwrap().apply(&rho), 2, 3);
        assert!((p[0] - 2.0 / 3.0).abs() < 1e-12 && (p[1] - 1.0 / 3.0).abs() < 1e-12);

        let trivial = projectors_to_spectrum(&ProjectorFamily(alloc::vec![CMatrix::identity(2)])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let r = random_density(2, &mut rng);
        assert!(approx_eq(&meas(&trivial).unwrap().apply(&r), &r, 1e-12));
    }

    #[test]
    fn meas_matches_lueders_and_born() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for a in 2..=4 {
            let fam = crate::sample::random_projector_family(a, 2, &mut rng);
            let s = projectors_to_spectrum(&ProjectorFamily(fam.clone())).unwrap();
            let rho = random_density(a, &mut rng);
            let out = meas(&s).unwrap().apply(&rho);
            let mut oracle = CMatrix::zeros(2 * a, 2 * a);
            for (i, p) in fam.iter().enumerate() {
                let e = CMatrix::basis(2, i);
                oracle = &oracle + &e.matmul(&e.adjoint()).kron(&p.matmul(&rho).matmul(p));
            }
            assert!(approx_eq(&out, &oracle, 1e-9));
            let born = born_marginals(&out, 2, a);
            for (i, p) in fam.iter().enumerate() {
                assert!((born[i] - p.matmul(&rho).trace().re).abs() < 1e-9);
            }
            assert!((out.trace().re - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn meas_rejects_non_spectra() {
        let two = CMatrix::identity(2);
        let s = spectrum_from_family_unchecked(&ProjectorFamily(alloc::vec![two.clone(), two]));
        assert!(matches!(meas(&s), Err(Error::SpectrumCheckFailed { .. })));
    }

    #[test]
    fn demeas_examples() {
        let x = ClassicalStructure::standard(2);
        let d = demeas(&CMatrix::identity(2), &x).unwrap();
        assert!(approx_eq(&d.apply(&plus()), &diag(&[0.5, 0.5]), 1e-12));
        let one = diag(&[0.0, 1.0]);
        assert!(approx_eq(&d.apply(&one), &one, 1e-12));
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let u = random_unitary(2, &mut rng);
        let out = demeas(&u, &x).unwrap().apply(&diag(&[1.0, 0.0]));
        let probs: Vec<f64> = (0..2).map(|i| u[(i, 0)].norm_sqr()).collect();
        assert!(approx_eq(&out, &diag(&probs), 1e-12));
        assert!(matches!(
            demeas(&CMatrix::zeros(2, 2), &x),
            Err(Error::NotAnIsometry(_))
        ));
    }

    #[test]
    fn projection_postulate() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = ClassicalStructure::standard(2);
        let s = Spectrum { m: x.delta.clone(), x };
        assert!(projection_postulate_cpm(&s, 20, &mut rng).passed());
        let fam = ProjectorFamily(alloc::vec![diag(&[1.0, 1.0, 0.0]), diag(&[0.0, 0.0, 1.0])]);
        let s = projectors_to_spectrum(&fam).unwrap();
        assert!(projection_postulate_cpm(&s, 20, &mut rng).passed());
        let bad = ProjectorFamily(alloc::vec![diag(&[0.7, 0.2]), diag(&[0.3, 0.8])]);
        let s = spectrum_from_family_unchecked(&bad);
        assert!(!projection_postulate_cpm(&s, 20, &mut rng).passed());
    }

    #[test]
    fn constructions_are_positive_and_trace_preserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = ClassicalStructure::standard(3);
        let u = random_unitary(3, &mut rng);
        let d = demeas(&u, &x).unwrap();
        let fam = crate::sample::random_projector_family(3, 2, &mut rng);
        let m = meas(&projectors_to_spectrum(&ProjectorFamily(fam)).unwrap()).unwrap();
        for map in [&d, &m, &gamma(&x), &pure(&u)] {
            let (floor, herm) = positivity_floor(map, 50, &mut rng);
            assert!(floor >= -1e-9 && herm <= 1e-9);
        }
        for _ in 0..10 {
            let rho = random_density(3, &mut rng);
            assert!((d.apply(&rho).trace().re - 1.0).abs() < 1e-9);
            assert!((m.apply(&rho).trace().re - 1.0).abs() < 1e-9);
        }
    }

    fn one_object_sig() -> Signature {
        let mut sig = Signature::new();
        sig.add_object("A").unwrap();
        sig.add_generator("psi", ObjectWord::unit(), ObjectWord::base("A"))
            .unwrap();
        sig
    }

    #[test]
    fn square_roots() {
        let sig = one_object_sig();
        let psi = MorTerm::gen("psi", ObjectWord::unit(), ObjectWord::base("A"));
        let cases = [
            (CMatrix::basis(2, 0), 1.0),
            (CMatrix::from_real(2, 1, &[1.0, 1.0]), 2.0),
        ];
        for (v, t) in cases {
            let interp = Interpretation::new().with_dim("A", 2).with_gen("psi", v);
            let r = sqrt_positive_scalar(&psi, &sig, &interp).unwrap();
            assert!((r.value - c(t, 0.0)).norm() < 1e-12);
            assert!(r.residual < 1e-9 && r.is_real_nonnegative());
        }
        let interp = Interpretation::new().with_dim("A", 2);
        let r = sqrt_positive_scalar(&MorTerm::eta(ObjectWord::base("A")), &sig, &interp).unwrap();
        assert!((r.value - c(2.0, 0.0)).norm() < 1e-12);
        let bad = MorTerm::id(ObjectWord::base("A"));
        assert!(matches!(
            sqrt_positive_scalar(&bad, &sig, &interp),
            Err(Error::TypeMismatch { .. })
        ));
    }
}
