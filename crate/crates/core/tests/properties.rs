use frobenius_core::classical::{
    check_classical_object, check_consequences, check_x_selfadjoint, copyable_vectors, ghz, ClassicalStructure,
};
use frobenius_core::cpm::{demeas, gamma, meas, positivity_floor, pure, sqrt_positive_scalar, DoubledMorphism};
use frobenius_core::linalg::min_eigenvalue;
use frobenius_core::model::{eval, numeric_eq, Interpretation};
use frobenius_core::rewrite::{symbolic_eq, Verdict};
use frobenius_core::sample::{
    random_density, random_projector_family, random_signature, random_state, random_term, random_unitary, TermShape,
};
use frobenius_core::spectra::{
    check_spectrum, projectors_to_spectrum, spectrum_from_family_unchecked, spectrum_to_projectors, ProjectorFamily,
};
use frobenius_core::{approx_eq, c, CMatrix, MorTerm, ObjectWord, Signature};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Permutes the tensor legs of a vector on `(C^n)^legs`.
fn permute_legs(v: &CMatrix, n: usize, perm: &[usize]) -> CMatrix {
    let legs = perm.len();
    let mut out = CMatrix::zeros(v.rows(), 1);
    for idx in 0..v.rows() {
        let mut digits = vec![0; legs];
        let mut rest = idx;
        for d in digits.iter_mut().rev() {
            *d = rest % n;
            rest /= n;
        }
        let target = perm.iter().fold(0, |acc, &p| acc * n + digits[p]);
        out[(target, 0)] = v[(idx, 0)];
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ghz_is_leg_symmetric(n in 1usize..=3, legs in 1usize..=4, perm_seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut sig = Signature::new();
        sig.add_classical("X", "X").unwrap();
        let interp = Interpretation::new().with_dim("X", n);
        let v = eval(&ghz("X", "X", legs), &sig, &interp).unwrap();
        let mut perm: Vec<usize> = (0..legs).collect();
        perm.shuffle(&mut rng(perm_seed));
        prop_assert!(approx_eq(&permute_legs(&v, n, &perm), &v, 1e-12));
    }

    #[test]
    fn classical_objects_are_self_adjoint_and_consistent(n in 2usize..=4, seed in any::<u64>()) {
        let u = random_unitary(n, &mut rng(seed));
        let s = ClassicalStructure::standard(n).conjugated_by(&u);
        prop_assert!(check_classical_object(&s).unwrap().passed());
        prop_assert!(check_x_selfadjoint(&s.delta, &s).unwrap().passed());
        let rep = check_consequences(&s).unwrap();
        prop_assert!(rep.passed(), "{}", rep);
    }

    #[test]
    fn copyables_of_rotated_structures_are_rotated_base(n in 1usize..=4, seed in any::<u64>()) {
        let u = random_unitary(n, &mut rng(seed));
        let s = ClassicalStructure::standard(n).conjugated_by(&u);
        let vs = copyable_vectors(&s).unwrap();
        prop_assert_eq!(vs.len(), n);
        for (i, v) in vs.iter().enumerate() {
            for w in &vs[i + 1..] {
                prop_assert!(v.inner(w).norm() < 1e-9);
            }
            let hits = (0..n).filter(|&k| (u.block(0, k, n, 1).inner(v).norm() - 1.0).abs() < 1e-9).count();
            prop_assert_eq!(hits, 1);
        }
    }

    #[test]
    fn projector_families_roundtrip(dim in 1usize..=4, blocks_seed in any::<u64>(), seed in any::<u64>()) {
        let blocks = 1 + (blocks_seed as usize) % dim;
        let fam = ProjectorFamily(random_projector_family(dim, blocks, &mut rng(seed)));
        let s = projectors_to_spectrum(&fam).unwrap();
        prop_assert!(check_spectrum(&s).unwrap().passed());
        let back = spectrum_to_projectors(&s).unwrap();
        for (p, q) in fam.0.iter().zip(&back.0) {
            prop_assert!(approx_eq(p, q, 1e-9));
        }
        let again = projectors_to_spectrum(&back).unwrap();
        prop_assert!(approx_eq(&again.m, &s.m, 1e-9));
    }

    #[test]
    fn spectra_project_like_the_postulate(dim in 2usize..=4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let fam = random_projector_family(dim, 2, &mut r);
        let s = projectors_to_spectrum(&ProjectorFamily(fam)).unwrap();
        let rep = frobenius_core::cpm::projection_postulate_cpm(&s, 5, &mut r);
        prop_assert!(rep.passed());
    }

    #[test]
    fn doubled_constructions_are_positive(dim in 2usize..=4, seed in any::<u64>()) {
        let mut r = rng(seed);
        let x = ClassicalStructure::standard(dim);
        let u = random_unitary(dim, &mut r);
        let fam = random_projector_family(dim, 2, &mut r);
        let m = meas(&projectors_to_spectrum(&ProjectorFamily(fam)).unwrap()).unwrap();
        let d = demeas(&u, &x).unwrap();
        for map in [&m, &d, &gamma(&x)] {
            let (floor, herm) = positivity_floor(map, 8, &mut r);
            prop_assert!(floor >= -1e-9 && herm <= 1e-9);
        }
        let rho = random_density(dim, &mut r);
        prop_assert!((m.apply(&rho).trace().re - 1.0).abs() < 1e-9);
        prop_assert!((d.apply(&rho).trace().re - 1.0).abs() < 1e-9);
    }

    #[test]
    fn gamma_kills_off_diagonals(dim in 2usize..=4, seed in any::<u64>()) {
        let rho = random_density(dim, &mut rng(seed));
        let out = gamma(&ClassicalStructure::standard(dim)).apply(&rho);
        for i in 0..dim {
            for j in 0..dim {
                let expected = if i == j { rho[(i, i)] } else { c(0.0, 0.0) };
                prop_assert!((out[(i, j)] - expected).norm() < 1e-12);
            }
        }
        let e = CMatrix::basis(dim, (seed as usize) % dim);
        let fixed = pure(&e).then(&gamma(&ClassicalStructure::standard(dim)));
        prop_assert!(approx_eq(&fixed.matrix, &pure(&e).matrix, 1e-12));
    }

    #[test]
    fn square_roots_of_random_states(dim in 1usize..=4, scale in 0.1f64..3.0, seed in any::<u64>()) {
        let mut sig = Signature::new();
        sig.add_object("A").unwrap();
        sig.add_generator("psi", ObjectWord::unit(), ObjectWord::base("A")).unwrap();
        let v = random_state(dim, &mut rng(seed)).scale(c(scale, 0.0));
        let interp = Interpretation::new().with_dim("A", dim).with_gen("psi", v);
        let psi = MorTerm::gen("psi", ObjectWord::unit(), ObjectWord::base("A"));
        let t = sqrt_positive_scalar(&psi, &sig, &interp).unwrap();
        prop_assert!(t.residual < 1e-9);
        prop_assert!(t.is_real_nonnegative());
        prop_assert!((t.value.re - scale * scale).abs() < 1e-9);
    }

    #[test]
    fn symbolic_equal_is_numerically_equal(seed in any::<u64>()) {
        use rand::Rng;
        let mut r = rng(seed);
        let sig = random_signature(r.random_range(0..=2), &mut r);
        let t1 = random_term(&sig, TermShape::default(), &mut r);
        let (dom, _) = t1.typecheck(&sig).unwrap();
        let t2 = frobenius_core::sample::random_term_from(&sig, &dom, TermShape::default(), &mut r);
        if t1.typecheck(&sig).unwrap() == t2.typecheck(&sig).unwrap()
            && symbolic_eq(&t1, &t2, &sig).unwrap() == Verdict::Equal
        {
            prop_assert!(numeric_eq(&t1, &t2, &sig, 3, &mut r).unwrap());
        }
        prop_assert_eq!(symbolic_eq(&t1, &t1, &sig).unwrap(), Verdict::Equal);
    }
}

#[test]
fn spectrum_mutants_fail_exactly_their_law() {
    let diag = |a: f64, b: f64| CMatrix::from_real(2, 2, &[a, 0.0, 0.0, b]);
    let oblique = CMatrix::from_real(2, 2, &[1.0, 1.0, 0.0, 0.0]);
    let cases = [
        (
            ProjectorFamily(vec![oblique.clone(), &CMatrix::identity(2) - &oblique]),
            "x-selfadjoint",
        ),
        (ProjectorFamily(vec![diag(0.7, 0.2), diag(0.3, 0.8)]), "x-idempotence"),
        (ProjectorFamily(vec![diag(1.0, 0.0)]), "x-completeness"),
    ];
    for (fam, law) in cases {
        let rep = check_spectrum(&spectrum_from_family_unchecked(&fam)).unwrap();
        let failing: Vec<&str> = rep.laws.iter().filter(|l| !l.passed).map(|l| l.law.as_str()).collect();
        assert_eq!(failing, vec![law], "{rep}");
    }
}

#[test]
fn doubled_identity_is_neutral() {
    let mut r = rng(3);
    let u = random_unitary(3, &mut r);
    let p = pure(&u);
    let id = DoubledMorphism::identity(3);
    assert!(approx_eq(&p.then(&id).matrix, &p.matrix, 1e-12));
    assert!(min_eigenvalue(&p.apply(&random_density(3, &mut r))) > -1e-9);
}
