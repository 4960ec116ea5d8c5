//! Subcommand bodies. Each returns an [`Output`] (exit 0 or 1) or an
//! [`InputError`] (exit 2); `main` only does argument parsing and printing.

use std::fmt::Write as _;
use std::path::Path;

use frobenius_core::axioms::axiom_battery;
use frobenius_core::classical::{
    check_classical_object, check_consequences, check_phase_free, copyable_vectors, ClassicalStructure,
};
use frobenius_core::cpm::{born_marginals, gamma_report, meas, projection_postulate_cpm, pure};
use frobenius_core::model::{eval, Interpretation, TOL};
use frobenius_core::protocols::{
    bell_demeas, bell_report, dense_coding_verify_with, size_report, teleport_composite, teleport_verify_with,
    x_unitary_from_family,
};
use frobenius_core::report::CheckReport;
use frobenius_core::rewrite::{export_dot, normalize, symbolic_eq, term_to_diagram, Verdict};
use frobenius_core::sample::{pauli_family, random_density, weyl_family};
use frobenius_core::spectra::{
    check_spectrum, classify, spectrum_from_family_unchecked, spectrum_to_projectors, ProjectorFamily, Spectrum,
};
use frobenius_core::{CMatrix, MorTerm, Signature};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{InputError, Result};
use crate::interp::{load_interpretation, read_json, MatrixJson};
use crate::program::Program;
use crate::render::circ;

/// Report text plus the verdict that decides between exit codes 0 and 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub passed: bool,
}

impl Output {
    fn info(text: String) -> Self {
        Output { text, passed: true }
    }

    /// Notes as `#` lines, then the law lines, then the first failure if any.
    fn report(notes: &[String], rep: &CheckReport) -> Self {
        let mut text = String::new();
        for n in notes {
            let _ = writeln!(text, "# {n}");
        }
        let _ = writeln!(text, "{rep}");
        if let Some(l) = rep.first_failure() {
            let _ = writeln!(text, "# first failure: {} residual {:.3e}", l.law, l.residual);
        }
        Output {
            text,
            passed: rep.passed(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn read_program(path: &Path) -> Result<Program> {
    let src = std::fs::read_to_string(path).map_err(|e| InputError::file(path, e))?;
    Program::parse(&src).map_err(|e| match e {
        InputError::File { .. } => e,
        other => InputError::file(path, other),
    })
}

fn context(decls: Option<&Path>) -> Result<Program> {
    decls.map_or_else(|| Ok(Program::default()), read_program)
}

const RANDOM_DIMS: [usize; 2] = [2, 3];

/// Worst entrywise gap between `l` and `r` under `interp`, or under
/// `trials` random interpretations when none is given.
fn numeric_gap(
    l: &MorTerm,
    r: &MorTerm,
    sig: &Signature,
    interp: Option<&Interpretation>,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    if let Some(i) = interp {
        i.validate(sig)?;
        return Ok(eval(l, sig, i)?.max_abs_diff(&eval(r, sig, i)?));
    }
    let mut worst: f64 = 0.0;
    for _ in 0..trials.max(1) {
        let i = Interpretation::random(sig, &RANDOM_DIMS, rng);
        worst = worst.max(eval(l, sig, &i)?.max_abs_diff(&eval(r, sig, &i)?));
    }
    Ok(worst)
}

/// Pass/fail of an `==` (or `!=`) claim from the symbolic verdict, falling
/// back on the numeric gap when the verdict is `Unknown`.
fn decide(verdict: Verdict, gap: f64, equal: bool) -> bool {
    let holds = match verdict {
        Verdict::Equal => true,
        Verdict::NotEqual => false,
        Verdict::Unknown => gap <= TOL,
    };
    holds == equal
}

pub fn check(path: &Path, interp: Option<&Path>, trials: usize, seed: u64) -> Result<Output> {
    let prog = read_program(path)?;
    let interp = interp.map(load_interpretation).transpose()?;
    let mut r = rng(seed);
    let mut rep = CheckReport::new();
    let mut notes = Vec::new();
    for a in &prog.asserts {
        let verdict = symbolic_eq(&a.lhs, &a.rhs, &prog.sig).map_err(InputError::at_line(a.line))?;
        let gap = numeric_gap(&a.lhs, &a.rhs, &prog.sig, interp.as_ref(), trials, &mut r)
            .map_err(|e| InputError::file(path, format!("line {}: {e}", a.line)))?;
        let op = if a.equal { "==" } else { "!=" };
        notes.push(format!("line {}: {} {op} {} [{verdict}]", a.line, a.lhs, a.rhs));
        rep.record_flag(format!("assert@{}", a.line), decide(verdict, gap, a.equal), gap);
    }
    notes.push(format!("{} assertion(s)", prog.asserts.len()));
    Ok(Output::report(&notes, &rep))
}

pub fn normalize_expr(expr: &str, decls: Option<&Path>, trace: bool) -> Result<Output> {
    let mut prog = context(decls)?;
    let t = prog.lower_standalone(expr)?;
    let (dom, cod) = t.typecheck(&prog.sig)?;
    let (nf, steps) = normalize(&term_to_diagram(&t, &prog.sig)?);
    let mut text = String::new();
    let _ = writeln!(text, "term: {t}");
    let _ = writeln!(text, "composition: {}", circ(&t));
    let _ = writeln!(text, "type: {dom} -> {cod}");
    let _ = writeln!(text, "normal form:\n{nf}");
    if trace {
        let _ = writeln!(text, "trace ({} steps):", steps.len());
        for s in &steps {
            let _ = writeln!(text, "{s}");
        }
    }
    Ok(Output::info(text))
}

pub fn eval_expr(expr: &str, interp: &Path, decls: Option<&Path>, json: bool) -> Result<Output> {
    let interp = load_interpretation(interp)?;
    let mut prog = context(decls)?;
    let t = prog.lower_standalone(expr)?;
    let (dom, cod) = t.typecheck(&prog.sig)?;
    interp.validate(&prog.sig)?;
    let m = eval(&t, &prog.sig, &interp)?;
    let text = if json {
        serde_json::to_string_pretty(&MatrixJson::from_matrix(&m)).expect("matrices serialize") + "\n"
    } else {
        format!("type: {dom} -> {cod}\nshape: {}x{}\n{m}\n", m.rows(), m.cols())
    };
    Ok(Output::info(text))
}

pub fn eq_exprs(e1: &str, e2: &str, decls: Option<&Path>, trials: usize, seed: u64) -> Result<Output> {
    let mut prog = context(decls)?;
    let l = prog.lower_standalone(e1)?;
    let r = prog.lower_standalone(e2)?;
    let verdict = symbolic_eq(&l, &r, &prog.sig)?;
    let gap = numeric_gap(&l, &r, &prog.sig, None, trials, &mut rng(seed))?;
    let notes = vec![
        format!("lhs: {l}  =  {}", circ(&l)),
        format!("rhs: {r}  =  {}", circ(&r)),
        format!("symbolic verdict: {verdict}"),
        match verdict {
            Verdict::Unknown => format!("decided numerically over {} random interpretation(s)", trials.max(1)),
            _ => "decided symbolically".into(),
        },
    ];
    let mut rep = CheckReport::new();
    rep.record_flag("eq", decide(verdict, gap, true), gap);
    if verdict == Verdict::Equal {
        // A symbolic Equal that evaluates differently would be a rewriting bug.
        rep.record("soundness-guard", gap, TOL);
    }
    Ok(Output::report(&notes, &rep))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ClassicalFile {
    delta: MatrixJson,
    eps: MatrixJson,
}

/// The six laws; on success also the consequences computed with the
/// structure's own cups (including `δ_* = δ`, `ε_* = ε`) and the copyable basis.
pub fn classical_verify(s: &ClassicalStructure) -> Result<Output> {
    let mut rep = check_classical_object(s)?;
    let mut notes = vec![format!("carrier dimension {}", s.dim())];
    if rep.passed() {
        rep.extend(check_consequences(s)?);
        rep.extend(size_report(s));
        match copyable_vectors(s) {
            Ok(vs) => {
                notes.push(format!("{} copyable vectors", vs.len()));
                rep.record_flag("copyables-span", vs.len() == s.dim(), 0.0);
            }
            Err(e) => {
                notes.push(e.to_string());
                rep.record_flag("copyables-span", false, 1.0);
            }
        }
    }
    Ok(Output::report(&notes, &rep))
}

pub fn classical_verify_file(path: &Path) -> Result<Output> {
    let f: ClassicalFile = read_json(path)?;
    let s = ClassicalStructure::new(f.delta.to_matrix("delta")?, f.eps.to_matrix("eps")?)?;
    classical_verify(&s)
}

/// Either a projector family or a map `M : A -> X⊗A` on the standard `C^k`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SpectrumFile {
    #[serde(default)]
    projectors: Option<Vec<MatrixJson>>,
    #[serde(default)]
    m: Option<MatrixJson>,
    #[serde(default)]
    classical_dim: Option<usize>,
}

pub fn spectrum_verify(path: &Path, seed: u64) -> Result<Output> {
    let f: SpectrumFile = read_json(path)?;
    let mut rep = CheckReport::new();
    let mut notes = Vec::new();
    let s = match (f.projectors, f.m, f.classical_dim) {
        (Some(ps), None, None) => {
            let mats = ps
                .iter()
                .enumerate()
                .map(|(i, p)| p.to_matrix(&format!("projectors[{i}]")))
                .collect::<Result<Vec<_>>>()?;
            if mats.is_empty() || mats.iter().any(|p| !p.is_square() || p.shape() != mats[0].shape()) {
                return Err(InputError::file(path, "projectors must be square and of one size"));
            }
            let fam = ProjectorFamily(mats);
            rep.extend_prefixed("family-", fam.check());
            spectrum_from_family_unchecked(&fam)
        }
        (None, Some(m), Some(k)) => {
            let m = m.to_matrix("m")?;
            let a = m.cols();
            if m.rows() != k * a {
                return Err(InputError::Model(frobenius_core::Error::ShapeMismatch {
                    what: "m".into(),
                    expected_rows: k * a,
                    expected_cols: a,
                    rows: m.rows(),
                    cols: a,
                }));
            }
            Spectrum {
                x: ClassicalStructure::standard(k),
                m,
            }
        }
        _ => {
            return Err(InputError::file(
                path,
                "expected either \"projectors\" or both \"m\" and \"classical_dim\"",
            ))
        }
    };
    rep.extend(check_spectrum(&s)?);
    notes.push(format!("classification: {:?}", classify(&s)?));
    if rep.passed() {
        let back = spectrum_to_projectors(&s)?;
        rep.extend_prefixed("extracted-", back.check());
        let mut r = rng(seed);
        rep.extend(projection_postulate_cpm(&s, 5, &mut r));
        let out_map = meas(&s)?;
        let (k, a) = (s.x.dim(), s.dim());
        let mut worst: f64 = 0.0;
        for _ in 0..5 {
            let rho = random_density(a, &mut r);
            let got = born_marginals(&out_map.apply(&rho), k, a);
            for (p, proj) in got.iter().zip(&back.0) {
                worst = worst.max((p - proj.matmul(&rho).trace().re).abs());
            }
        }
        rep.record("born-marginals", worst, TOL);
        notes.push(format!("{} outcome(s) on a {a}-dimensional system", k));
    }
    Ok(Output::report(&notes, &rep))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Protocol {
    Teleport,
    DenseCoding,
}

/// The Pauli family at `d = 2`, clock and shift otherwise.
pub fn standard_family(d: usize) -> Vec<CMatrix> {
    if d == 2 {
        pauli_family()
    } else {
        weyl_family(d)
    }
}

fn fmt_list(xs: impl IntoIterator<Item = f64>) -> String {
    xs.into_iter().map(|x| format!("{x:.6}")).collect::<Vec<_>>().join(" ")
}

pub fn protocol(which: Protocol, dim: usize, seed: u64) -> Result<Output> {
    if dim < 2 {
        return Err(InputError::file("--dim", "dimension must be at least 2"));
    }
    let fam = standard_family(dim);
    let u = x_unitary_from_family(&fam)?;
    let b = bell_demeas(&u)?;
    let mut rep = bell_report(&b)?;
    let k = u.k();
    let mut notes = vec![format!("A = C^{dim}, {k} outcomes")];
    match which {
        Protocol::Teleport => {
            rep.extend(teleport_verify_with(&b, u.family()));
            let composite = teleport_composite(&b, u.family(), 0);
            let branches: Vec<f64> = (0..k)
                .map(|i| {
                    let slice = CMatrix::basis(k, i)
                        .adjoint()
                        .kron(&CMatrix::identity(dim))
                        .matmul(&composite);
                    slice.trace().re / dim as f64
                })
                .collect();
            notes.push(format!("branch scalars: {}", fmt_list(branches.iter().copied())));
            let rho = random_density(dim, &mut rng(seed));
            let marginals = born_marginals(&pure(&composite).apply(&rho), k, dim);
            notes.push(format!("outcome marginals: {}", fmt_list(marginals.iter().copied())));
            let inv = 1.0 / dim as f64;
            rep.record(
                "branch-scalar-inverse-size",
                branches.iter().map(|s| (s - inv).abs()).fold(0.0, f64::max),
                TOL,
            );
            rep.record(
                "uniform-marginal",
                marginals.iter().map(|p| (p - 1.0 / k as f64).abs()).fold(0.0, f64::max),
                TOL,
            );
        }
        Protocol::DenseCoding => {
            rep.extend(dense_coding_verify_with(&b, u.family()));
            notes.push(format!("{k} messages"));
        }
    }
    Ok(Output::report(&notes, &rep))
}

pub fn export_dot_file(expr: &str, out: &Path, decls: Option<&Path>, normalized: bool) -> Result<Output> {
    let mut prog = context(decls)?;
    let t = prog.lower_standalone(expr)?;
    let mut d = term_to_diagram(&t, &prog.sig)?;
    if normalized {
        d = normalize(&d).0;
    }
    std::fs::write(out, export_dot(&d)).map_err(|e| InputError::file(out, e))?;
    Ok(Output::info(format!("wrote {}\n", out.display())))
}

/// The compact-structure battery plus the classical and decoherence laws
/// of the standard structures up to `dim_max`.
pub fn axioms(dim_max: usize, generators: usize, seed: u64) -> Result<Output> {
    let mut r = rng(seed);
    let mut rep = axiom_battery(dim_max, generators, &mut r)?;
    for n in 1..=dim_max.max(1) {
        let s = ClassicalStructure::standard(n);
        rep.extend_prefixed(&format!("classical{n}-"), check_classical_object(&s)?);
        rep.extend_prefixed(&format!("classical{n}-"), check_phase_free(&s));
        rep.extend_prefixed(&format!("gamma{n}-"), gamma_report(n)?);
    }
    let notes = vec![format!(
        "dimensions 1..={dim_max}, {generators} random generators, seed {seed}"
    )];
    Ok(Output::report(&notes, &rep))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decide_table() {
        assert!(decide(Verdict::Equal, 5.0, true));
        assert!(!decide(Verdict::NotEqual, 0.0, true));
        assert!(decide(Verdict::Unknown, 1e-12, true));
        assert!(!decide(Verdict::Unknown, 1e-3, true));
        assert!(decide(Verdict::Unknown, 1e-3, false));
        assert!(decide(Verdict::NotEqual, 0.0, false));
    }

    #[test]
    fn teleport_dim_two_reports_half_and_quarter() {
        let out = protocol(Protocol::Teleport, 2, 0).unwrap();
        assert!(out.passed, "{}", out.text);
        assert!(
            out.text
                .contains("# branch scalars: 0.500000 0.500000 0.500000 0.500000"),
            "{}",
            out.text
        );
        assert!(
            out.text
                .contains("# outcome marginals: 0.250000 0.250000 0.250000 0.250000"),
            "{}",
            out.text
        );
    }

    #[test]
    fn coassociativity_is_symbolic() {
        let out = eq_exprs(
            "delta[X]; (id[X] (x) delta[X])",
            "delta[X]; (delta[X] (x) id[X])",
            None,
            2,
            0,
        )
        .unwrap();
        assert!(out.passed, "{}", out.text);
        assert!(out.text.contains("symbolic verdict: Equal"));
    }

    #[test]
    fn standard_structures_verify() {
        for n in 1..=3 {
            let out = classical_verify(&ClassicalStructure::standard(n)).unwrap();
            assert!(out.passed, "{}", out.text);
        }
    }
}
