//! Morphism terms over a signature, their typing, and the derived
//! constructions of a strict dagger-compact category.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use core::fmt;

use crate::error::{Error, Result};
use crate::object::ObjectWord;

/// Abstract syntax of a morphism. `Compose { after, before }` is `after ∘ before`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MorTerm {
    Gen {
        name: String,
        dom: ObjectWord,
        cod: ObjectWord,
    },
    Id(ObjectWord),
    Compose {
        after: Box<MorTerm>,
        before: Box<MorTerm>,
    },
    Tensor(Box<MorTerm>, Box<MorTerm>),
    Sym(ObjectWord, ObjectWord),
    /// The Bell state `I -> A* ⊗ A`.
    Eta(ObjectWord),
    Dagger(Box<MorTerm>),
    Delta(String),
    Eps(String),
    ScalarSym(String),
    /// `s_A^(half_power / 2)`, where `s_A` is the dimension scalar of `A`.
    ScalarDim(ObjectWord, i32),
}

impl MorTerm {
    pub fn gen(name: impl Into<String>, dom: ObjectWord, cod: ObjectWord) -> Self {
        MorTerm::Gen {
            name: name.into(),
            dom,
            cod,
        }
    }

    pub fn id(a: ObjectWord) -> Self {
        MorTerm::Id(a)
    }

    /// `after ∘ before`.
    pub fn compose(after: MorTerm, before: MorTerm) -> Self {
        MorTerm::Compose {
            after: Box::new(after),
            before: Box::new(before),
        }
    }

    /// Diagrammatic composition: `self` first, then `next`.
    pub fn then(self, next: MorTerm) -> Self {
        MorTerm::compose(next, self)
    }

    pub fn tensor(left: MorTerm, right: MorTerm) -> Self {
        MorTerm::Tensor(Box::new(left), Box::new(right))
    }

    pub fn sym(a: ObjectWord, b: ObjectWord) -> Self {
        MorTerm::Sym(a, b)
    }

    pub fn eta(a: ObjectWord) -> Self {
        MorTerm::Eta(a)
    }

    /// The counit `ε_A = η†_{A*} : A ⊗ A* -> I`.
    pub fn counit(a: &ObjectWord) -> Self {
        MorTerm::Dagger(Box::new(MorTerm::Eta(a.dual())))
    }

    pub fn delta(x: impl Into<String>) -> Self {
        MorTerm::Delta(x.into())
    }

    pub fn eps(x: impl Into<String>) -> Self {
        MorTerm::Eps(x.into())
    }

    pub fn scalar(name: impl Into<String>) -> Self {
        MorTerm::ScalarSym(name.into())
    }

    pub fn scalar_dim(a: ObjectWord, half_power: i32) -> Self {
        MorTerm::ScalarDim(a, half_power)
    }

    /// Raw dagger node, without pushing it inward.
    pub fn dagger_node(t: MorTerm) -> Self {
        MorTerm::Dagger(Box::new(t))
    }

    /// True if no generator or free scalar occurs in the term.
    pub fn is_generator_free(&self) -> bool {
        match self {
            MorTerm::Gen { .. } | MorTerm::ScalarSym(_) => false,
            MorTerm::Compose { after, before } => after.is_generator_free() && before.is_generator_free(),
            MorTerm::Tensor(l, r) => l.is_generator_free() && r.is_generator_free(),
            MorTerm::Dagger(t) => t.is_generator_free(),
            _ => true,
        }
    }

    /// Number of syntax nodes.
    pub fn size(&self) -> usize {
        match self {
            MorTerm::Compose { after, before } => 1 + after.size() + before.size(),
            MorTerm::Tensor(l, r) => 1 + l.size() + r.size(),
            MorTerm::Dagger(t) => 1 + t.size(),
            _ => 1,
        }
    }

    /// Domain and codomain, with classical carriers written without polarity.
    pub fn typecheck(&self, sig: &Signature) -> Result<(ObjectWord, ObjectWord)> {
        typecheck_at(self, sig, &mut String::from("root"))
    }
}

/// Declared names: base objects, generators, classical objects and free scalars.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    objects: BTreeSet<String>,
    generators: BTreeMap<String, (ObjectWord, ObjectWord)>,
    classical: BTreeMap<String, String>,
    scalars: BTreeSet<String>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    fn name_taken(&self, name: &str) -> bool {
        self.objects.contains(name)
            || self.generators.contains_key(name)
            || self.classical.contains_key(name)
            || self.scalars.contains(name)
    }

    pub fn add_object(&mut self, name: impl Into<String>) -> Result<()> {
        let name = name.into();
        if self.objects.contains(&name) {
            return Ok(());
        }
        if self.name_taken(&name) {
            return Err(Error::InvalidSignature(format!("`{name}` is already declared")));
        }
        self.objects.insert(name);
        Ok(())
    }

    pub fn add_generator(&mut self, name: impl Into<String>, dom: ObjectWord, cod: ObjectWord) -> Result<()> {
        let name = name.into();
        if self.name_taken(&name) {
            return Err(Error::InvalidSignature(format!("`{name}` is already declared")));
        }
        for base in dom.bases().chain(cod.bases()) {
            if !self.objects.contains(base) {
                return Err(Error::UnknownName(base.to_string()));
            }
        }
        self.generators.insert(name, (dom, cod));
        Ok(())
    }

    /// Declares a classical object `name` carried by the base object `carrier`.
    /// The carrier is declared if needed; it may share the classical object's name.
    pub fn add_classical(&mut self, name: impl Into<String>, carrier: impl Into<String>) -> Result<()> {
        let name = name.into();
        let carrier = carrier.into();
        if self.generators.contains_key(&name)
            || self.scalars.contains(&name)
            || self.classical.contains_key(&name)
            || (self.objects.contains(&name) && name != carrier)
        {
            return Err(Error::InvalidSignature(format!("`{name}` is already declared")));
        }
        if let Some(other) = self.classical_on(&carrier) {
            return Err(Error::InvalidSignature(format!(
                "base `{carrier}` already carries classical object `{other}`"
            )));
        }
        if !self.objects.contains(&carrier) {
            self.add_object(carrier.clone())?;
        }
        self.classical.insert(name, carrier);
        Ok(())
    }

    pub fn add_scalar(&mut self, name: impl Into<String>) -> Result<()> {
        let name = name.into();
        if self.name_taken(&name) {
            return Err(Error::InvalidSignature(format!("`{name}` is already declared")));
        }
        self.scalars.insert(name);
        Ok(())
    }

    pub fn has_object(&self, name: &str) -> bool {
        self.objects.contains(name)
    }

    pub fn objects(&self) -> impl Iterator<Item = &str> {
        self.objects.iter().map(String::as_str)
    }

    pub fn generator(&self, name: &str) -> Option<&(ObjectWord, ObjectWord)> {
        self.generators.get(name)
    }

    pub fn generators(&self) -> impl Iterator<Item = (&str, &(ObjectWord, ObjectWord))> {
        self.generators.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn has_scalar(&self, name: &str) -> bool {
        self.scalars.contains(name)
    }

    pub fn scalars(&self) -> impl Iterator<Item = &str> {
        self.scalars.iter().map(String::as_str)
    }

    /// Carrier base of a classical object.
    pub fn carrier(&self, classical: &str) -> Option<&str> {
        self.classical.get(classical).map(String::as_str)
    }

    pub fn carrier_word(&self, classical: &str) -> Result<ObjectWord> {
        self.carrier(classical)
            .map(ObjectWord::base)
            .ok_or_else(|| Error::UnknownName(classical.to_string()))
    }

    /// The classical object living on `base`, if any.
    pub fn classical_on(&self, base: &str) -> Option<&str> {
        self.classical
            .iter()
            .find(|(_, c)| c.as_str() == base)
            .map(|(n, _)| n.as_str())
    }

    pub fn classicals(&self) -> impl Iterator<Item = (&str, &str)> {
        self.classical.iter().map(|(k, v)| (k.as_str(), v.as_str()))
    }

    /// Erases the polarity of classical carriers: `X* = X` for classical `X`.
    pub fn canonical(&self, w: &ObjectWord) -> ObjectWord {
        ObjectWord::from_factors(
            w.factors()
                .iter()
                .map(|f| {
                    if f.dual && self.classical_on(&f.base).is_some() {
                        f.dualized()
                    } else {
                        f.clone()
                    }
                })
                .collect(),
        )
    }

    /// Checks every base of `w` is declared.
    pub fn check_word(&self, w: &ObjectWord) -> Result<()> {
        for base in w.bases() {
            if !self.objects.contains(base) {
                return Err(Error::UnknownName(base.to_string()));
            }
        }
        Ok(())
    }
}

fn mismatch(position: &str, expected: &ObjectWord, found: &ObjectWord) -> Error {
    Error::TypeMismatch {
        position: position.to_string(),
        expected: expected.clone(),
        found: found.clone(),
    }
}

fn typecheck_at(t: &MorTerm, sig: &Signature, pos: &mut String) -> Result<(ObjectWord, ObjectWord)> {
    match t {
        MorTerm::Gen { name, dom, cod } => {
            let (d, c) = sig.generator(name).ok_or_else(|| Error::UnknownName(name.clone()))?;
            let (d, c) = (sig.canonical(d), sig.canonical(c));
            let (dom, cod) = (sig.canonical(dom), sig.canonical(cod));
            if d != dom {
                return Err(mismatch(pos, &d, &dom));
            }
            if c != cod {
                return Err(mismatch(pos, &c, &cod));
            }
            Ok((dom, cod))
        }
        MorTerm::Id(a) => {
            sig.check_word(a)?;
            let a = sig.canonical(a);
            Ok((a.clone(), a))
        }
        MorTerm::Compose { after, before } => {
            let len = pos.len();
            pos.push_str(".before");
            let (d1, c1) = typecheck_at(before, sig, pos)?;
            pos.truncate(len);
            pos.push_str(".after");
            let (d2, c2) = typecheck_at(after, sig, pos)?;
            pos.truncate(len);
            if c1 != d2 {
                return Err(mismatch(pos, &c1, &d2));
            }
            Ok((d1, c2))
        }
        MorTerm::Tensor(l, r) => {
            let len = pos.len();
            pos.push_str(".left");
            let (d1, c1) = typecheck_at(l, sig, pos)?;
            pos.truncate(len);
            pos.push_str(".right");
            let (d2, c2) = typecheck_at(r, sig, pos)?;
            pos.truncate(len);
            Ok((d1.tensor(&d2), c1.tensor(&c2)))
        }
        MorTerm::Sym(a, b) => {
            sig.check_word(a)?;
            sig.check_word(b)?;
            let (a, b) = (sig.canonical(a), sig.canonical(b));
            Ok((a.tensor(&b), b.tensor(&a)))
        }
        MorTerm::Eta(a) => {
            sig.check_word(a)?;
            Ok((ObjectWord::unit(), sig.canonical(&a.dual().tensor(a))))
        }
        MorTerm::Dagger(inner) => {
            let len = pos.len();
            pos.push_str(".dagger");
            let (d, c) = typecheck_at(inner, sig, pos)?;
            pos.truncate(len);
            Ok((c, d))
        }
        MorTerm::Delta(x) => {
            let w = sig.carrier_word(x)?;
            Ok((w.clone(), w.tensor(&w)))
        }
        MorTerm::Eps(x) => {
            let w = sig.carrier_word(x)?;
            Ok((w, ObjectWord::unit()))
        }
        MorTerm::ScalarSym(name) => {
            if !sig.has_scalar(name) {
                return Err(Error::UnknownName(name.clone()));
            }
            Ok((ObjectWord::unit(), ObjectWord::unit()))
        }
        MorTerm::ScalarDim(a, _) => {
            sig.check_word(a)?;
            Ok((ObjectWord::unit(), ObjectWord::unit()))
        }
    }
}

/// The dagger functor, pushed down to the leaves. Double daggers cancel.
pub fn dagger(t: &MorTerm) -> MorTerm {
    match t {
        MorTerm::Id(a) => MorTerm::Id(a.clone()),
        MorTerm::Compose { after, before } => MorTerm::compose(dagger(before), dagger(after)),
        MorTerm::Tensor(l, r) => MorTerm::tensor(dagger(l), dagger(r)),
        MorTerm::Sym(a, b) => MorTerm::Sym(b.clone(), a.clone()),
        MorTerm::Dagger(inner) => strip_dagger(inner),
        MorTerm::ScalarDim(a, p) => MorTerm::ScalarDim(a.clone(), *p),
        leaf => MorTerm::dagger_node(leaf.clone()),
    }
}

fn strip_dagger(inner: &MorTerm) -> MorTerm {
    match inner {
        MorTerm::Dagger(t) => dagger(t),
        other => other.clone(),
    }
}

/// `f ↦ f*`: for `f : A -> B` builds
/// `(1_{A*} ⊗ η†_{B*}) ∘ (1_{A*} ⊗ f ⊗ 1_{B*}) ∘ (η_A ⊗ 1_{B*}) : B* -> A*`.
pub fn transpose(t: &MorTerm, sig: &Signature) -> Result<MorTerm> {
    let (a, b) = t.typecheck(sig)?;
    let a_star = a.dual();
    let b_star = b.dual();
    let open = MorTerm::tensor(MorTerm::eta(a.clone()), MorTerm::id(b_star.clone()));
    let apply = MorTerm::tensor(
        MorTerm::id(a_star.clone()),
        MorTerm::tensor(t.clone(), MorTerm::id(b_star.clone())),
    );
    let close = MorTerm::tensor(MorTerm::id(a_star), MorTerm::dagger_node(MorTerm::eta(b_star)));
    Ok(open.then(apply).then(close))
}

/// `f ↦ f_* := (f†)*`, of type `A* -> B*` for `f : A -> B`.
pub fn conjugate(t: &MorTerm, sig: &Signature) -> Result<MorTerm> {
    transpose(&dagger(t), sig)
}

/// `s • f`, realised as `s ⊗ f` since `I` is the empty word.
pub fn scalar_mul(s: &MorTerm, t: &MorTerm, sig: &Signature) -> Result<MorTerm> {
    let (dom, cod) = s.typecheck(sig)?;
    if !dom.is_unit() || !cod.is_unit() {
        return Err(Error::NotAScalar { dom, cod });
    }
    t.typecheck(sig)?;
    Ok(MorTerm::tensor(s.clone(), t.clone()))
}

/// `tr^C_{A,B}(f) = (η†_C ⊗ 1_B) ∘ (1_{C*} ⊗ f) ∘ (η_C ⊗ 1_A)` for `f : C⊗A -> C⊗B`.
pub fn trace(t: &MorTerm, c: &ObjectWord, sig: &Signature) -> Result<MorTerm> {
    let (dom, cod) = t.typecheck(sig)?;
    let cc = sig.canonical(c);
    let a = dom.strip_prefix(&cc).ok_or_else(|| mismatch("trace.dom", &cc, &dom))?;
    let b = cod.strip_prefix(&cc).ok_or_else(|| mismatch("trace.cod", &cc, &cod))?;
    let open = MorTerm::tensor(MorTerm::eta(c.clone()), MorTerm::id(a));
    let apply = MorTerm::tensor(MorTerm::id(c.dual()), t.clone());
    let close = MorTerm::tensor(MorTerm::dagger_node(MorTerm::eta(c.clone())), MorTerm::id(b));
    Ok(open.then(apply).then(close))
}

/// `pt^{C,D}_{A,B}(f) : D*⊗A -> C*⊗B` for `f : C⊗A -> D⊗B`:
/// `(1_{C*} ⊗ η†_D ⊗ 1_B) ∘ (σ_{D*,C*} ⊗ f) ∘ (1_{D*} ⊗ η_C ⊗ 1_A)`.
pub fn partial_transpose(t: &MorTerm, c: &ObjectWord, d: &ObjectWord, sig: &Signature) -> Result<MorTerm> {
    let (dom, cod) = t.typecheck(sig)?;
    let a = dom
        .strip_prefix(&sig.canonical(c))
        .ok_or_else(|| mismatch("partial_transpose.dom", c, &dom))?;
    let b = cod
        .strip_prefix(&sig.canonical(d))
        .ok_or_else(|| mismatch("partial_transpose.cod", d, &cod))?;
    let open = MorTerm::tensor(
        MorTerm::id(d.dual()),
        MorTerm::tensor(MorTerm::eta(c.clone()), MorTerm::id(a)),
    );
    let apply = MorTerm::tensor(MorTerm::sym(d.dual(), c.dual()), t.clone());
    let close = MorTerm::tensor(
        MorTerm::id(c.dual()),
        MorTerm::tensor(MorTerm::dagger_node(MorTerm::eta(d.clone())), MorTerm::id(b)),
    );
    Ok(open.then(apply).then(close))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Compose,
    Tensor,
    Atom,
}

fn prec(t: &MorTerm) -> Prec {
    match t {
        MorTerm::Compose { .. } => Prec::Compose,
        MorTerm::Tensor(..) => Prec::Tensor,
        _ => Prec::Atom,
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, t: &MorTerm, min: Prec) -> fmt::Result {
    if prec(t) < min {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

/// Textual syntax: `;` is diagrammatic composition (left runs first), `(x)`
/// binds tighter than `;`, both associate to the left.
impl fmt::Display for MorTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MorTerm::Gen { name, .. } => f.write_str(name),
            MorTerm::Id(a) => write!(f, "id[{a}]"),
            MorTerm::Compose { after, before } => {
                write_operand(f, before, Prec::Compose)?;
                f.write_str(" ; ")?;
                write_operand(f, after, Prec::Tensor)
            }
            MorTerm::Tensor(l, r) => {
                write_operand(f, l, Prec::Tensor)?;
                f.write_str(" (x) ")?;
                write_operand(f, r, Prec::Atom)
            }
            MorTerm::Sym(a, b) => write!(f, "sym[{a}, {b}]"),
            MorTerm::Eta(a) => write!(f, "eta[{a}]"),
            MorTerm::Dagger(t) => write!(f, "dag({t})"),
            MorTerm::Delta(x) => write!(f, "delta[{x}]"),
            MorTerm::Eps(x) => write!(f, "eps[{x}]"),
            MorTerm::ScalarSym(s) => f.write_str(s),
            MorTerm::ScalarDim(a, p) => write!(f, "sdim[{a}, {p}]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::object::Factor;
    use alloc::vec;

    fn sig() -> Signature {
        let mut s = Signature::new();
        s.add_object("A").unwrap();
        s.add_object("B").unwrap();
        s.add_classical("X", "X").unwrap();
        s.add_generator("f", ObjectWord::base("A"), ObjectWord::base("B"))
            .unwrap();
        s.add_generator("g", ObjectWord::base("B"), ObjectWord::base("A"))
            .unwrap();
        s.add_scalar("s").unwrap();
        s
    }

    fn a() -> ObjectWord {
        ObjectWord::base("A")
    }

    fn x() -> ObjectWord {
        ObjectWord::base("X")
    }

    #[test]
    fn typing_examples() {
        let s = sig();
        let t = MorTerm::compose(MorTerm::eps("X"), MorTerm::id(x()));
        assert_eq!(t.typecheck(&s).unwrap(), (x(), ObjectWord::unit()));

        let star_a = ObjectWord::from(vec![Factor::new("A", true)]);
        assert_eq!(
            MorTerm::eta(a()).typecheck(&s).unwrap(),
            (ObjectWord::unit(), star_a.tensor(&a()))
        );

        let bad = MorTerm::compose(MorTerm::delta("X"), MorTerm::eps("X"));
        assert!(matches!(bad.typecheck(&s), Err(Error::TypeMismatch { .. })));
    }

    #[test]
    fn unknown_names() {
        let s = sig();
        assert_eq!(MorTerm::delta("Y").typecheck(&s), Err(Error::UnknownName("Y".into())));
        assert_eq!(
            MorTerm::id(ObjectWord::base("Q")).typecheck(&s),
            Err(Error::UnknownName("Q".into()))
        );
        let wrong = MorTerm::gen("f", a(), a());
        assert!(matches!(wrong.typecheck(&s), Err(Error::TypeMismatch { .. })));
    }

    #[test]
    fn dagger_is_contravariant_and_involutive() {
        let s = sig();
        let f = MorTerm::gen("f", a(), ObjectWord::base("B"));
        let g = MorTerm::gen("g", ObjectWord::base("B"), a());
        assert_eq!(dagger(&MorTerm::id(a())), MorTerm::id(a()));
        let gf = MorTerm::compose(g.clone(), f.clone());
        assert_eq!(dagger(&gf), MorTerm::compose(dagger(&f), dagger(&g)));
        assert_eq!(dagger(&dagger(&gf)), gf);
        let (d, c) = dagger(&f).typecheck(&s).unwrap();
        assert_eq!((d, c), (ObjectWord::base("B"), a()));
        assert_eq!(dagger(&MorTerm::eta(a())), MorTerm::dagger_node(MorTerm::eta(a())));
        assert_eq!(dagger(&MorTerm::dagger_node(MorTerm::eta(a()))), MorTerm::eta(a()));
    }

    #[test]
    fn derived_constructions_typecheck() {
        let s = sig();
        let f = MorTerm::gen("f", a(), ObjectWord::base("B"));
        let ft = transpose(&f, &s).unwrap();
        assert_eq!(ft.typecheck(&s).unwrap(), (ObjectWord::base("B").dual(), a().dual()));
        let fc = conjugate(&f, &s).unwrap();
        assert_eq!(fc.typecheck(&s).unwrap(), (a().dual(), ObjectWord::base("B").dual()));
        let sf = scalar_mul(&MorTerm::scalar("s"), &f, &s).unwrap();
        assert_eq!(sf.typecheck(&s).unwrap(), (a(), ObjectWord::base("B")));
        assert!(matches!(scalar_mul(&f, &f, &s), Err(Error::NotAScalar { .. })));
    }

    #[test]
    fn trace_and_partial_transpose_types() {
        let s = sig();
        let ca = x().tensor(&a());
        let t = trace(&MorTerm::id(ca.clone()), &x(), &s).unwrap();
        assert_eq!(t.typecheck(&s).unwrap(), (a(), a()));
        assert!(matches!(
            trace(&MorTerm::id(a()), &x(), &s),
            Err(Error::TypeMismatch { .. })
        ));
        let pt = partial_transpose(&MorTerm::id(ca), &x(), &x(), &s).unwrap();
        assert_eq!(pt.typecheck(&s).unwrap(), (x().tensor(&a()), x().tensor(&a())));
        // Classical carriers are self-dual.
        assert_eq!(MorTerm::eta(x()).typecheck(&s).unwrap().1, x().tensor(&x()));
    }

    #[test]
    fn signature_rules() {
        let mut s = sig();
        assert!(s.add_generator("A", a(), a()).is_err());
        assert!(s.add_classical("Y", "X").is_err());
        assert!(s.add_scalar("f").is_err());
        assert_eq!(s.classical_on("X"), Some("X"));
        s.add_classical("Z", "Zc").unwrap();
        assert!(s.has_object("Zc"));
    }

    #[test]
    fn printing() {
        let f = MorTerm::gen("f", a(), ObjectWord::base("B"));
        let g = MorTerm::gen("g", ObjectWord::base("B"), a());
        let t = MorTerm::tensor(f.clone().then(g.clone()), MorTerm::id(a()));
        assert_eq!(alloc::format!("{t}"), "(f ; g) (x) id[A]");
        let u = f.then(MorTerm::tensor(g, MorTerm::eps("X")));
        assert_eq!(alloc::format!("{u}"), "f ; g (x) eps[X]");
    }
}
