//! Name resolution and typing: turns parsed statements into a signature,
//! a table of definitions and a list of typed assertions.

use std::collections::BTreeMap;

use frobenius_core::{conjugate, MorTerm, Signature};

use crate::error::{InputError, Result};
use crate::syntax::{self, Expr, Pos, SourceFile, Stmt};

#[derive(Debug, Clone, PartialEq)]
pub struct Assertion {
    pub line: usize,
    pub lhs: MorTerm,
    pub rhs: MorTerm,
    /// `==` when true, `!=` otherwise.
    pub equal: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Program {
    pub sig: Signature,
    pub defs: BTreeMap<String, MorTerm>,
    pub asserts: Vec<Assertion>,
}

fn taken(sig: &Signature, name: &str) -> bool {
    sig.has_object(name) || sig.generator(name).is_some() || sig.carrier(name).is_some() || sig.has_scalar(name)
}

impl Program {
    pub fn parse(src: &str) -> Result<Program> {
        Program::from_source(&syntax::parse(src)?)
    }

    pub fn from_source(file: &SourceFile) -> Result<Program> {
        let mut p = Program::default();
        for (stmt, pos) in &file.stmts {
            let line = pos.line;
            let core = InputError::at_line;
            match stmt {
                Stmt::Object(n) => {
                    p.fresh(n, *pos)?;
                    p.sig.add_object(n).map_err(core(line))?;
                }
                Stmt::Classical(n) => {
                    p.fresh(n, *pos)?;
                    p.sig.add_classical(n, n).map_err(core(line))?;
                }
                Stmt::Scalar(n) => {
                    p.fresh(n, *pos)?;
                    p.sig.add_scalar(n).map_err(core(line))?;
                }
                Stmt::Gen { name, dom, cod } => {
                    p.fresh(name, *pos)?;
                    p.sig
                        .add_generator(name, dom.clone(), cod.clone())
                        .map_err(core(line))?;
                }
                Stmt::Define(name, e) => {
                    p.fresh(name, *pos)?;
                    let t = p.lower(e, line)?;
                    p.defs.insert(name.clone(), t);
                }
                Stmt::Assert { lhs, rhs, equal } => {
                    let lhs = p.lower(lhs, line)?;
                    let rhs = p.lower(rhs, line)?;
                    let (tl, tr) = (lhs.typecheck(&p.sig), rhs.typecheck(&p.sig));
                    let (tl, tr) = (tl.map_err(core(line))?, tr.map_err(core(line))?);
                    if tl != tr {
                        let (expected, found) = if tl.0 != tr.0 { (tl.0, tr.0) } else { (tl.1, tr.1) };
                        return Err(InputError::Core {
                            line,
                            source: frobenius_core::Error::TypeMismatch {
                                position: "assert".into(),
                                expected,
                                found,
                            },
                        });
                    }
                    p.asserts.push(Assertion {
                        line,
                        lhs,
                        rhs,
                        equal: *equal,
                    });
                }
            }
        }
        Ok(p)
    }

    fn fresh(&self, name: &str, pos: Pos) -> Result<()> {
        if self.defs.contains_key(name) || taken(&self.sig, name) {
            return Err(InputError::Resolve {
                pos,
                msg: format!("`{name}` is already defined"),
            });
        }
        Ok(())
    }

    /// Resolves and typechecks `e`; `line` locates type errors.
    pub fn lower(&self, e: &Expr, line: usize) -> Result<MorTerm> {
        let t = self.lower_raw(e, line)?;
        t.typecheck(&self.sig).map_err(InputError::at_line(line))?;
        Ok(t)
    }

    fn lower_raw(&self, e: &Expr, line: usize) -> Result<MorTerm> {
        Ok(match e {
            Expr::Name(n, pos) => {
                if let Some(t) = self.defs.get(n) {
                    t.clone()
                } else if let Some((dom, cod)) = self.sig.generator(n) {
                    MorTerm::gen(n, dom.clone(), cod.clone())
                } else if self.sig.has_scalar(n) {
                    MorTerm::scalar(n)
                } else {
                    return Err(InputError::Resolve {
                        pos: *pos,
                        msg: format!("`{n}` is not a generator, scalar or definition"),
                    });
                }
            }
            Expr::Delta(x, pos) | Expr::Eps(x, pos) => {
                if self.sig.carrier(x).is_none() {
                    return Err(InputError::Resolve {
                        pos: *pos,
                        msg: format!("`{x}` is not a classical object"),
                    });
                }
                if matches!(e, Expr::Delta(..)) {
                    MorTerm::delta(x)
                } else {
                    MorTerm::eps(x)
                }
            }
            Expr::Id(w) => MorTerm::id(w.clone()),
            Expr::Sym(a, b) => MorTerm::sym(a.clone(), b.clone()),
            Expr::Eta(w) => MorTerm::eta(w.clone()),
            Expr::Sdim(w, p) => MorTerm::scalar_dim(w.clone(), *p),
            Expr::Dag(inner) => MorTerm::dagger_node(self.lower_raw(inner, line)?),
            Expr::Conj(inner) => {
                let t = self.lower(inner, line)?;
                conjugate(&t, &self.sig).map_err(InputError::at_line(line))?
            }
            Expr::Seq(first, second) => MorTerm::compose(self.lower_raw(second, line)?, self.lower_raw(first, line)?),
            Expr::Tensor(l, r) => MorTerm::tensor(self.lower_raw(l, line)?, self.lower_raw(r, line)?),
        })
    }

    /// Lowers a one-line expression. Names under `delta`/`eps` that are not
    /// yet classical become classical objects; other unknown type names
    /// become plain objects.
    pub fn lower_standalone(&mut self, src: &str) -> Result<MorTerm> {
        let e = syntax::parse_expr(src)?;
        let mut classical = Vec::new();
        e.visit_classicals(&mut |x| classical.push(x.to_string()));
        for x in classical {
            if self.sig.carrier(&x).is_none() && !self.defs.contains_key(&x) {
                self.sig.add_classical(&x, &x)?;
            }
        }
        let mut bases = Vec::new();
        e.visit_words(&mut |w| bases.extend(w.bases().map(String::from)));
        for b in bases {
            if !self.sig.has_object(&b) && !taken(&self.sig, &b) && !self.defs.contains_key(&b) {
                self.sig.add_object(&b)?;
            }
        }
        self.lower(&e, 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use frobenius_core::ObjectWord;

    #[test]
    fn definitions_expand_inline() {
        let p = Program::parse("classical X\nm := dag(delta[X])\nassert delta[X] ; m == id[X]\n").unwrap();
        let a = &p.asserts[0];
        assert_eq!(
            a.lhs,
            MorTerm::compose(MorTerm::dagger_node(MorTerm::delta("X")), MorTerm::delta("X"))
        );
        assert!(a.equal);
    }

    #[test]
    fn names_must_be_fresh_and_defined_first() {
        let err = Program::parse("object A\nobject A\n").unwrap_err();
        assert!(err.to_string().starts_with("2:1"), "{err}");
        let err = Program::parse("object A\nassert f == f\ngen f : A -> A\n").unwrap_err();
        assert!(err.to_string().contains("`f` is not a generator"), "{err}");
        let err = Program::parse("object A\nf := id[A]\nf := id[A]\n").unwrap_err();
        assert!(err.to_string().contains("already defined"), "{err}");
    }

    #[test]
    fn ill_typed_assertions_are_rejected() {
        let err = Program::parse("classical X\nassert delta[X] == id[X]\n").unwrap_err();
        assert!(matches!(err, InputError::Core { line: 2, .. }), "{err}");
        let err = Program::parse("classical X\nassert delta[X] ; delta[X] == id[X]\n").unwrap_err();
        assert!(matches!(err, InputError::Core { line: 2, .. }), "{err}");
    }

    #[test]
    fn standalone_auto_declares() {
        let mut p = Program::default();
        let t = p.lower_standalone("eta[X] ; (id[X] (x) delta[X])").unwrap();
        assert_eq!(p.sig.carrier("X"), Some("X"));
        assert_eq!(t.typecheck(&p.sig).unwrap().0, ObjectWord::unit());
        let t = p.lower_standalone("eta[A] ; dag(eta[A])").unwrap();
        assert!(p.sig.has_object("A") && p.sig.carrier("A").is_none());
        assert_eq!(t.typecheck(&p.sig).unwrap(), (ObjectWord::unit(), ObjectWord::unit()));
        assert!(p.lower_standalone("f ; f").is_err());
    }

    #[test]
    fn conj_expands_to_transposed_dagger() {
        let p = Program::parse("object A\nobject B\ngen f : A -> B\nassert conj(f) == conj(f)\n").unwrap();
        let (dom, cod) = p.asserts[0].lhs.typecheck(&p.sig).unwrap();
        assert_eq!(
            (dom.to_string(), cod.to_string()),
            ("A^d".to_string(), "B^d".to_string())
        );
    }
}
