//! The compact-structure axiom battery: snakes, `η_{A*} = σ∘η_A`, scalar
//! interchange and `f† = (f*)_* = (f_*)*`, each as a worst-case residual.

use alloc::format;

use rand::Rng;

use crate::error::Result;
use crate::model::{eval, gaussian_matrix, Interpretation, TOL};
use crate::object::ObjectWord;
use crate::report::CheckReport;
use crate::rewrite::{symbolic_eq, Verdict};
use crate::sample::random_word;
use crate::term::{conjugate, dagger, scalar_mul, transpose, MorTerm, Signature};

fn base_signature() -> Signature {
    let mut sig = Signature::new();
    sig.add_object("A").expect("fresh");
    sig.add_object("B").expect("fresh");
    sig
}

fn diff(l: &MorTerm, r: &MorTerm, sig: &Signature, interp: &Interpretation) -> Result<f64> {
    Ok(eval(l, sig, interp)?.max_abs_diff(&eval(r, sig, interp)?))
}

/// The two snakes on `w`, with identities on `w` and `w*` as right-hand sides.
fn snakes(w: &ObjectWord) -> [(MorTerm, MorTerm); 2] {
    let wd = w.dual();
    let left = MorTerm::tensor(MorTerm::id(w.clone()), MorTerm::eta(w.clone()))
        .then(MorTerm::tensor(MorTerm::counit(w), MorTerm::id(w.clone())));
    let right = MorTerm::tensor(MorTerm::eta(w.clone()), MorTerm::id(wd.clone()))
        .then(MorTerm::tensor(MorTerm::id(wd.clone()), MorTerm::counit(w)));
    [(left, MorTerm::id(w.clone())), (right, MorTerm::id(wd))]
}

/// Runs the battery for every dimension `1..=dim_max` of `A` (with `B` of a
/// random dimension in the same range) and `generators` random generators.
pub fn axiom_battery<R: Rng + ?Sized>(dim_max: usize, generators: usize, rng: &mut R) -> Result<CheckReport> {
    let dim_max = dim_max.max(1);
    let mut worst = [0.0f64; 7];
    let a = ObjectWord::base("A");
    let ab = a.tensor(&ObjectWord::base("B"));
    let mut sig = base_signature();
    sig.add_scalar("s")?;
    sig.add_scalar("t")?;
    sig.add_generator("f", a.clone(), ab.clone())?;
    sig.add_generator("g", ab.clone(), a.clone())?;
    for d in 1..=dim_max {
        let interp = Interpretation::new()
            .with_dim("A", d)
            .with_dim("B", rng.random_range(1..=dim_max))
            .with_gen("s", gaussian_matrix(1, 1, rng))
            .with_gen("t", gaussian_matrix(1, 1, rng));
        let interp = {
            let (rows_ab, cols_a) = (interp.dim(&ab)?, d);
            interp
                .with_gen("f", gaussian_matrix(rows_ab, cols_a, rng))
                .with_gen("g", gaussian_matrix(cols_a, rows_ab, rng))
        };
        for w in [&a, &ab] {
            let [(l, li), (r, ri)] = snakes(w);
            worst[0] = worst[0].max(diff(&l, &li, &sig, &interp)?);
            worst[1] = worst[1].max(diff(&r, &ri, &sig, &interp)?);
            let coh = MorTerm::eta(w.clone()).then(MorTerm::sym(w.dual(), w.clone()));
            worst[2] = worst[2].max(diff(&MorTerm::eta(w.dual()), &coh, &sig, &interp)?);
        }
        let (s, t) = (MorTerm::scalar("s"), MorTerm::scalar("t"));
        let f = MorTerm::gen("f", a.clone(), ab.clone());
        let g = MorTerm::gen("g", ab.clone(), a.clone());
        // (s•g)∘(t•f) = (s∘t)•(g∘f)
        let lhs = MorTerm::compose(scalar_mul(&s, &g, &sig)?, scalar_mul(&t, &f, &sig)?);
        let st = MorTerm::compose(s.clone(), t.clone());
        let rhs = scalar_mul(&st, &MorTerm::compose(g.clone(), f.clone()), &sig)?;
        worst[3] = worst[3].max(diff(&lhs, &rhs, &sig, &interp)?);
        // (s•f)⊗(t•g) = (s∘t)•(f⊗g)
        let lhs = MorTerm::tensor(scalar_mul(&s, &f, &sig)?, scalar_mul(&t, &g, &sig)?);
        let rhs = scalar_mul(&st, &MorTerm::tensor(f, g), &sig)?;
        worst[4] = worst[4].max(diff(&lhs, &rhs, &sig, &interp)?);
    }
    for i in 0..generators {
        let mut gsig = base_signature();
        let dom = random_word(&gsig, rng, 0, 2);
        let cod = random_word(&gsig, rng, 0, 2);
        let name = format!("h{i}");
        gsig.add_generator(name.clone(), dom.clone(), cod.clone())?;
        let mut interp = Interpretation::new()
            .with_dim("A", rng.random_range(1..=dim_max))
            .with_dim("B", rng.random_range(1..=dim_max));
        let (rows, cols) = (interp.dim(&cod)?, interp.dim(&dom)?);
        interp = interp.with_gen(name.clone(), gaussian_matrix(rows, cols, rng));
        let h = MorTerm::gen(name, dom, cod);
        let dag = dagger(&h);
        let via_ct = conjugate(&transpose(&h, &gsig)?, &gsig)?;
        let via_tc = transpose(&conjugate(&h, &gsig)?, &gsig)?;
        worst[5] = worst[5].max(diff(&dag, &via_ct, &gsig, &interp)?);
        worst[6] = worst[6].max(diff(&dag, &via_tc, &gsig, &interp)?);
    }
    let names = [
        "snake-left",
        "snake-right",
        "eta-dual-coherence",
        "scalar-compose",
        "scalar-tensor",
        "dagger-is-conj-of-transpose",
        "dagger-is-transpose-of-conj",
    ];
    let mut rep = CheckReport::new();
    for (name, r) in names.iter().zip(worst) {
        rep.record(*name, r, TOL);
    }
    let sig = base_signature();
    let mut symbolic = true;
    for w in [&a, &ab] {
        for (l, r) in snakes(w) {
            symbolic &= symbolic_eq(&l, &r, &sig)? == Verdict::Equal;
        }
    }
    rep.record_flag("snake-symbolic", symbolic, if symbolic { 0.0 } else { 1.0 });
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn battery_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let rep = axiom_battery(3, 30, &mut rng).unwrap();
        assert!(rep.passed(), "{rep}");
        assert_eq!(rep.laws.len(), 8);
    }
}
