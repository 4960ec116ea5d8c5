//! Classical objects in the matrix model: law checks, GHZ states, copyable
//! vectors, comonoid homomorphisms and the cloning obstruction.

use alloc::vec::Vec;

// Float supplies sqrt when std is absent.
#[allow(unused_imports)]
use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::hermitian_eigen;
use crate::matrix::{c, CMatrix, C64};
use crate::model::{eval, standard_classical, swap_matrix, Interpretation, TOL};
use crate::object::ObjectWord;
use crate::report::CheckReport;
use crate::term::{MorTerm, Signature};

/// A candidate classical structure on `C^n`: `δ : n -> n²`, `ε : n -> 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalStructure {
    pub delta: CMatrix,
    pub eps: CMatrix,
}

impl ClassicalStructure {
    /// Checks shapes only.
    pub fn new(delta: CMatrix, eps: CMatrix) -> Result<Self> {
        let n = delta.cols();
        if delta.rows() != n * n {
            return Err(shape("delta", n * n, n, &delta));
        }
        if eps.shape() != (1, n) {
            return Err(shape("eps", 1, n, &eps));
        }
        Ok(Self { delta, eps })
    }

    pub fn standard(n: usize) -> Self {
        let (delta, eps) = standard_classical(n);
        Self { delta, eps }
    }

    pub fn dim(&self) -> usize {
        self.delta.cols()
    }

    /// `((S⊗S) δ S⁻¹, ε S⁻¹)` for an invertible `s` with inverse `s_inv`.
    pub fn transported(&self, s: &CMatrix, s_inv: &CMatrix) -> Self {
        Self {
            delta: s.kron(s).matmul(&self.delta).matmul(s_inv),
            eps: self.eps.matmul(s_inv),
        }
    }

    /// Transport along a unitary.
    pub fn conjugated_by(&self, u: &CMatrix) -> Self {
        self.transported(u, &u.adjoint())
    }

    /// The unit `η = δ∘ε† : I -> X⊗X`.
    pub fn eta(&self) -> CMatrix {
        self.delta.matmul(&self.eps.adjoint())
    }
}

fn shape(what: &str, rows: usize, cols: usize, m: &CMatrix) -> Error {
    Error::ShapeMismatch {
        what: what.into(),
        expected_rows: rows,
        expected_cols: cols,
        rows: m.rows(),
        cols: m.cols(),
    }
}

fn x() -> ObjectWord {
    ObjectWord::base("X")
}

fn a() -> ObjectWord {
    ObjectWord::base("A")
}

fn d() -> MorTerm {
    MorTerm::gen("d", x(), x().tensor(&x()))
}

fn e() -> MorTerm {
    MorTerm::gen("e", x(), ObjectWord::unit())
}

fn id_x() -> MorTerm {
    MorTerm::id(x())
}

fn dag(t: MorTerm) -> MorTerm {
    MorTerm::dagger_node(t)
}

fn t2(l: MorTerm, r: MorTerm) -> MorTerm {
    MorTerm::tensor(l, r)
}

/// Signature in which the candidate's maps are plain generators `d`, `e`.
fn law_signature(with_a: Option<(ObjectWord, ObjectWord)>) -> Signature {
    let mut sig = Signature::new();
    sig.add_object("X").expect("fresh");
    sig.add_object("A").expect("fresh");
    sig.add_generator("d", x(), x().tensor(&x())).expect("fresh");
    sig.add_generator("e", x(), ObjectWord::unit()).expect("fresh");
    if let Some((dom, cod)) = with_a {
        sig.add_generator("F", dom, cod).expect("fresh");
    }
    sig
}

fn law_interp(s: &ClassicalStructure, dim_a: usize) -> Interpretation {
    Interpretation::new()
        .with_dim("X", s.dim())
        .with_dim("A", dim_a)
        .with_gen("d", s.delta.clone())
        .with_gen("e", s.eps.clone())
}

fn residual(l: &MorTerm, r: &MorTerm, sig: &Signature, interp: &Interpretation) -> Result<f64> {
    Ok(eval(l, sig, interp)?.max_abs_diff(&eval(r, sig, interp)?))
}

/// The six laws of a special commutative †-Frobenius algebra.
pub fn check_classical_object(s: &ClassicalStructure) -> Result<CheckReport> {
    let s = ClassicalStructure::new(s.delta.clone(), s.eps.clone())?;
    let sig = law_signature(None);
    let it = law_interp(&s, 1);
    let r = |l: MorTerm, rt: MorTerm| residual(&l, &rt, &sig, &it);
    let mut rep = CheckReport::new();
    rep.record(
        "coassociativity",
        r(d().then(t2(d(), id_x())), d().then(t2(id_x(), d())))?,
        TOL,
    );
    let counit = r(d().then(t2(e(), id_x())), id_x())?.max(r(d().then(t2(id_x(), e())), id_x())?);
    rep.record("counit", counit, TOL);
    rep.record("commutativity", r(d().then(MorTerm::sym(x(), x())), d())?, TOL);
    let frob_l = t2(id_x(), d()).then(t2(dag(d()), id_x()));
    let frob_r = t2(d(), id_x()).then(t2(id_x(), dag(d())));
    let mid = dag(d()).then(d());
    let frob = r(frob_l, mid.clone())?.max(r(frob_r, mid)?);
    rep.record("frobenius", frob, TOL);
    rep.record("special", r(d().then(dag(d())), id_x())?, TOL);
    let eta = dag(e()).then(d());
    let snake_l = t2(id_x(), eta.clone()).then(t2(dag(eta.clone()), id_x()));
    let snake_r = t2(eta.clone(), id_x()).then(t2(id_x(), dag(eta)));
    let snake = r(snake_l, id_x())?.max(r(snake_r, id_x())?);
    rep.record("unit-snake", snake, TOL);
    Ok(rep)
}

/// Residual of `(1_X⊗F†)∘(η_X⊗1_A) = F` for `F : A -> X⊗A`.
pub fn check_x_selfadjoint(f: &CMatrix, s: &ClassicalStructure) -> Result<CheckReport> {
    let n = s.dim();
    let dim_a = f.cols();
    if f.rows() != n * dim_a {
        return Err(shape("F", n * dim_a, dim_a, f));
    }
    let xa = x().tensor(&a());
    let sig = law_signature(Some((a(), xa.clone())));
    let it = law_interp(s, dim_a).with_gen("F", f.clone());
    let ff = MorTerm::gen("F", a(), xa);
    let eta = dag(e()).then(d());
    let lhs = t2(eta, MorTerm::id(a())).then(t2(id_x(), dag(ff.clone())));
    let mut rep = CheckReport::new();
    rep.record("x-selfadjoint", residual(&lhs, &ff, &sig, &it)?, TOL);
    Ok(rep)
}

/// Entrywise `δ_* = δ` and `ε_* = ε`, conjugating with the computational-basis
/// cups. For a structure in another basis use the intrinsic checks in
/// [`check_consequences`].
pub fn check_phase_free(s: &ClassicalStructure) -> CheckReport {
    let mut rep = CheckReport::new();
    rep.record("delta-phase-free", s.delta.conj().max_abs_diff(&s.delta), TOL);
    rep.record("eps-phase-free", s.eps.conj().max_abs_diff(&s.eps), TOL);
    rep
}

/// `η_{X^k}` built from the structure's own unit by nesting.
fn eta_power(s: &ClassicalStructure, k: usize) -> CMatrix {
    let n = s.dim();
    let eta = s.eta();
    let mut out = CMatrix::identity(1);
    for level in 1..=k {
        // Outer cup around the previous level's nested cups.
        let inner = out;
        let id = CMatrix::identity(n);
        out = if level == 1 {
            eta.clone()
        } else {
            id.kron(&inner).kron(&id).matmul(&eta)
        };
    }
    out
}

fn power(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, _| acc * n)
}

/// Transpose relative to the structure's own cups, for `f : X^p -> X^q`.
pub fn intrinsic_transpose(f: &CMatrix, s: &ClassicalStructure, p: usize, q: usize) -> CMatrix {
    let n = s.dim();
    let (dp, dq) = (power(n, p), power(n, q));
    let open = eta_power(s, p).kron(&CMatrix::identity(dq));
    let apply = CMatrix::identity(dp).kron(f).kron(&CMatrix::identity(dq));
    let close = CMatrix::identity(dp).kron(&eta_power(s, q).adjoint());
    close.matmul(&apply).matmul(&open)
}

/// Consequences of being a classical object, evaluated with the
/// structure's own cups: δ is X-self-adjoint, δ satisfies Frobenius,
/// `pt(δ) = δ`, `δ* = δ†`, and `δ_* = δ`, `ε_* = ε`.
pub fn check_consequences(s: &ClassicalStructure) -> Result<CheckReport> {
    let n = s.dim();
    let laws = check_classical_object(s)?;
    let mut rep = CheckReport::new();
    rep.extend(check_x_selfadjoint(&s.delta, s)?);
    rep.laws.extend(laws.laws.into_iter().filter(|l| l.law == "frobenius"));
    let id = CMatrix::identity(n);
    let eta = s.eta();
    let pt = id
        .kron(&eta.adjoint())
        .kron(&id)
        .matmul(&swap_matrix(n, n).kron(&s.delta))
        .matmul(&id.kron(&eta));
    rep.record("pt-invariance", pt.max_abs_diff(&s.delta), TOL);
    let dt = intrinsic_transpose(&s.delta, s, 1, 2);
    rep.record("transpose-is-dagger", dt.max_abs_diff(&s.delta.adjoint()), TOL);
    let dc = intrinsic_transpose(&s.delta.adjoint(), s, 2, 1);
    rep.record("delta-self-conjugate", dc.max_abs_diff(&s.delta), TOL);
    let ec = intrinsic_transpose(&s.eps.adjoint(), s, 0, 1);
    rep.record("eps-self-conjugate", ec.max_abs_diff(&s.eps), TOL);
    Ok(rep)
}

/// The `legs`-legged GHZ state of classical object `name`: `ε†` for one
/// leg, `η` for two, then `(1⊗δ)` appended on the last leg.
pub fn ghz(name: &str, carrier: &str, legs: usize) -> MorTerm {
    assert!(legs >= 1, "a GHZ state has at least one leg");
    let xw = ObjectWord::base(carrier);
    match legs {
        1 => dag(MorTerm::eps(name)),
        2 => MorTerm::eta(xw),
        k => {
            let prev = ghz(name, carrier, k - 1);
            let rest = ObjectWord::from_factors(alloc::vec![xw.factors()[0].clone(); k - 2]);
            prev.then(t2(MorTerm::id(rest), MorTerm::delta(name)))
        }
    }
}

/// `‖δv − v⊗v‖`.
pub fn copy_residual(v: &CMatrix, s: &ClassicalStructure) -> f64 {
    (&s.delta.matmul(v) - &v.kron(v)).frobenius_norm()
}

/// The vectors copied by `δ`, found by diagonalizing a random Hermitian
/// combination of the multiplication operators `L_j = δ†(e_j ⊗ 1)` and
/// validated against `δv = v⊗v`. Sorted by the index of their largest entry.
pub fn copyable_vectors(s: &ClassicalStructure) -> Result<Vec<CMatrix>> {
    let n = s.dim();
    let mu = s.delta.adjoint();
    let ops: Vec<CMatrix> = (0..n)
        .map(|j| mu.matmul(&CMatrix::basis(n, j).kron(&CMatrix::identity(n))))
        .collect();
    let mut best = Vec::new();
    for attempt in 0..8u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FF_EE00 + attempt);
        let mut h = CMatrix::zeros(n, n);
        for l in &ops {
            let z = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            h = &h + &(&l.scale(z) + &l.adjoint().scale(z.conj()));
        }
        let (_, vecs) = hermitian_eigen(&h);
        let mut found = Vec::new();
        for k in 0..vecs.cols() {
            let u = vecs.block(0, k, n, 1);
            // δu = λ u⊗u fixes v = λu.
            let lambda: C64 = u.kron(&u).inner(&s.delta.matmul(&u));
            let v = u.scale(lambda);
            if v.frobenius_norm() > 1e-6 && copy_residual(&v, s) <= 1e-7 {
                found.push(v);
            }
        }
        if found.len() == n {
            found.sort_by_key(peak);
            return Ok(found);
        }
        if found.len() > best.len() {
            best = found;
        }
    }
    Err(Error::ExtractionFailed {
        found: best.len(),
        expected: n,
    })
}

fn peak(v: &CMatrix) -> usize {
    let mut best = 0;
    for i in 0..v.rows() {
        if v[(i, 0)].norm() > v[(best, 0)].norm() + 1e-9 {
            best = i;
        }
    }
    best
}

/// `δ_Y∘f = (f⊗f)∘δ_X` and `ε_Y∘f = ε_X`, as a report.
pub fn comonoid_hom_report(f: &CMatrix, sx: &ClassicalStructure, sy: &ClassicalStructure) -> Result<CheckReport> {
    if f.shape() != (sy.dim(), sx.dim()) {
        return Err(shape("f", sy.dim(), sx.dim(), f));
    }
    let mut rep = CheckReport::new();
    rep.record(
        "preserves-delta",
        sy.delta.matmul(f).max_abs_diff(&f.kron(f).matmul(&sx.delta)),
        TOL,
    );
    rep.record("preserves-eps", sy.eps.matmul(f).max_abs_diff(&sx.eps), TOL);
    Ok(rep)
}

pub fn check_comonoid_hom(f: &CMatrix, sx: &ClassicalStructure, sy: &ClassicalStructure) -> Result<bool> {
    Ok(comonoid_hom_report(f, sx, sy)?.passed())
}

/// All `n x m` 0/1 matrices that are comonoid maps between the standard
/// structures on `C^m` and `C^n`.
pub fn enumerate_classical_maps(m: usize, n: usize) -> Vec<CMatrix> {
    assert!((1..=3).contains(&m) && (1..=3).contains(&n), "1 <= m, n <= 3");
    let (sx, sy) = (ClassicalStructure::standard(m), ClassicalStructure::standard(n));
    let cells = m * n;
    (0u32..(1 << cells))
        .map(|bits| CMatrix::from_fn(n, m, |r, col| c(f64::from((bits >> (r * m + col)) & 1), 0.0)))
        .filter(|f| check_comonoid_hom(f, &sx, &sy).expect("shapes agree"))
        .collect()
}

/// `‖Δ(f(1)) − (f⊗f)(Δ(1))‖` for a state `f : C -> C^n` with the standard
/// copying maps on both sides.
pub fn cloning_residual(f: &CMatrix) -> f64 {
    let s = ClassicalStructure::standard(f.rows());
    let one = ClassicalStructure::standard(1);
    (&s.delta.matmul(f) - &f.kron(f).matmul(&one.delta)).frobenius_norm()
}

/// The cloning residual of `1 ↦ |0⟩ + |1⟩`.
pub fn no_cloning_witness() -> f64 {
    cloning_residual(&CMatrix::from_real(2, 1, &[1.0, 1.0]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::approx_eq;
    use crate::sample::random_unitary;

    fn hadamard() -> CMatrix {
        CMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, -1.0]).scale(c(core::f64::consts::FRAC_1_SQRT_2, 0.0))
    }

    #[test]
    fn standard_structures_pass() {
        for n in 1..=4 {
            let rep = check_classical_object(&ClassicalStructure::standard(n)).unwrap();
            assert!(rep.passed(), "{rep}");
            assert_eq!(rep.laws.len(), 6);
        }
    }

    #[test]
    fn zero_counit_fails_counit_law() {
        let mut s = ClassicalStructure::standard(2);
        s.eps = CMatrix::zeros(1, 2);
        let rep = check_classical_object(&s).unwrap();
        assert!(!rep.get("counit").unwrap().passed);
        assert!(rep.get("coassociativity").unwrap().passed);
    }

    #[test]
    fn non_unitary_similarity_breaks_specialness() {
        // S = [[1, 2], [0, 1]], with its inverse written out.
        let s = CMatrix::from_real(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        let s_inv = CMatrix::from_real(2, 2, &[1.0, -2.0, 0.0, 1.0]);
        let t = ClassicalStructure::standard(2).transported(&s, &s_inv);
        let rep = check_classical_object(&t).unwrap();
        assert!(rep.get("coassociativity").unwrap().passed);
        assert!(rep.get("counit").unwrap().passed);
        assert!(rep.get("special").unwrap().residual > 1e-3);
    }

    #[test]
    fn x_selfadjoint_examples() {
        let s = ClassicalStructure::standard(2);
        assert!(check_x_selfadjoint(&s.delta, &s).unwrap().passed());
        // F = |0⟩ ⊗ (i·1_A), A = C^2.
        let f = CMatrix::basis(2, 0).kron(&CMatrix::identity(2).scale(c(0.0, 1.0)));
        let rep = check_x_selfadjoint(&f, &s).unwrap();
        assert!((rep.laws[0].residual - 2.0).abs() < 1e-12);
        let unit = ClassicalStructure::standard(1);
        let herm = CMatrix::from_vec(2, 2, alloc::vec![c(1.0, 0.0), c(0.0, 2.0), c(0.0, -2.0), c(3.0, 0.0)]);
        assert!(check_x_selfadjoint(&herm, &unit).unwrap().passed());
        let nonherm = CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(!check_x_selfadjoint(&nonherm, &unit).unwrap().passed());
    }

    #[test]
    fn phase_freeness() {
        for n in 1..=4 {
            assert!(check_phase_free(&ClassicalStructure::standard(n)).passed());
        }
        let theta = core::f64::consts::PI / 3.0;
        let p = CMatrix::from_vec(
            2,
            2,
            alloc::vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), C64::from_polar(1.0, theta)],
        );
        let twisted = ClassicalStructure::standard(2).conjugated_by(&p);
        let rep = check_phase_free(&twisted);
        let expected = (C64::from_polar(1.0, theta) - C64::from_polar(1.0, -theta)).norm();
        assert!((rep.get("delta-phase-free").unwrap().residual - expected).abs() < 1e-12);
        assert!((expected - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn consequences_hold_on_conjugated_structures() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for n in 2..=3 {
            let u = random_unitary(n, &mut rng);
            let s = ClassicalStructure::standard(n).conjugated_by(&u);
            assert!(check_classical_object(&s).unwrap().passed());
            let rep = check_consequences(&s).unwrap();
            assert!(rep.passed(), "{rep}");
        }
        let std3 = ClassicalStructure::standard(3);
        let f = crate::model::gaussian_matrix(9, 3, &mut rng);
        // Transposing reverses the order of the codomain factors.
        let oracle = f.transpose().matmul(&swap_matrix(3, 3));
        assert!(approx_eq(&intrinsic_transpose(&f, &std3, 1, 2), &oracle, 1e-12));
    }

    #[test]
    fn ghz_vectors() {
        let mut sig = Signature::new();
        sig.add_classical("X", "X").unwrap();
        let it = Interpretation::new().with_dim("X", 2);
        let v1 = eval(&ghz("X", "X", 1), &sig, &it).unwrap();
        assert_eq!(v1, CMatrix::from_real(2, 1, &[1.0, 1.0]));
        let v2 = eval(&ghz("X", "X", 2), &sig, &it).unwrap();
        assert_eq!(v2, CMatrix::from_real(4, 1, &[1.0, 0.0, 0.0, 1.0]));
        let v3 = eval(&ghz("X", "X", 3), &sig, &it).unwrap();
        let mut oracle = CMatrix::zeros(8, 1);
        oracle[(0, 0)] = c(1.0, 0.0);
        oracle[(7, 0)] = c(1.0, 0.0);
        assert_eq!(v3, oracle);
    }

    #[test]
    fn copyable_vectors_examples() {
        let s = ClassicalStructure::standard(2);
        let vs = copyable_vectors(&s).unwrap();
        assert!(approx_eq(&vs[0], &CMatrix::basis(2, 0), 1e-9));
        assert!(approx_eq(&vs[1], &CMatrix::basis(2, 1), 1e-9));
        let h = hadamard();
        let sh = s.conjugated_by(&h);
        let vh = copyable_vectors(&sh).unwrap();
        assert_eq!(vh.len(), 2);
        for v in &vh {
            assert!(copy_residual(v, &sh) < 1e-9);
        }
        let plus = CMatrix::from_real(2, 1, &[1.0, 1.0]);
        assert!(copy_residual(&plus, &s) > 1.0);
    }

    #[test]
    fn copyable_vectors_of_unitary_transport_are_the_rotated_base() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for n in 2..=4 {
            let u = random_unitary(n, &mut rng);
            let s = ClassicalStructure::standard(n).conjugated_by(&u);
            let vs = copyable_vectors(&s).unwrap();
            assert_eq!(vs.len(), n);
            // Each v is some column of U up to a phase.
            for v in &vs {
                let hit = (0..n).any(|k| {
                    let col = u.block(0, k, n, 1);
                    (col.inner(v).norm() - 1.0).abs() < 1e-9
                });
                assert!(hit);
            }
        }
    }

    #[test]
    fn comonoid_maps() {
        let s2 = ClassicalStructure::standard(2);
        let s3 = ClassicalStructure::standard(3);
        // φ(0) = 2, φ(1) = 0.
        let f = CMatrix::from_real(3, 2, &[0.0, 1.0, 0.0, 0.0, 1.0, 0.0]);
        assert!(check_comonoid_hom(&f, &s2, &s3).unwrap());
        assert!(!check_comonoid_hom(&hadamard(), &s2, &s2).unwrap());
        assert!(check_comonoid_hom(&CMatrix::identity(2), &s2, &s2).unwrap());
        assert_eq!(enumerate_classical_maps(1, 1).len(), 1);
        assert_eq!(enumerate_classical_maps(2, 2).len(), 4);
        assert_eq!(enumerate_classical_maps(3, 2).len(), 8);
    }

    #[test]
    fn cloning() {
        assert!((no_cloning_witness() - 2f64.sqrt()).abs() < 1e-12);
        assert!(cloning_residual(&CMatrix::basis(2, 0)) < 1e-12);
        assert!((cloning_residual(&CMatrix::from_real(2, 1, &[2.0, 0.0])) - 2.0).abs() < 1e-12);
    }
}
