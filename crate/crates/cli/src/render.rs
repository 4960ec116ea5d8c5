//! Conventional `∘`-order rendering, shown next to the diagrammatic syntax.

use frobenius_core::{MorTerm, ObjectWord};

fn word(w: &ObjectWord) -> String {
    if w.is_unit() {
        "I".into()
    } else {
        w.factors()
            .iter()
            .map(|f| if f.dual { format!("{}*", f.base) } else { f.base.clone() })
            .collect::<Vec<_>>()
            .join("⊗")
    }
}

fn level(t: &MorTerm) -> u8 {
    match t {
        MorTerm::Compose { .. } => 0,
        MorTerm::Tensor(..) => 1,
        _ => 2,
    }
}

fn operand(t: &MorTerm, min: u8) -> String {
    let s = circ(t);
    if level(t) < min {
        format!("({s})")
    } else {
        s
    }
}

/// `after ∘ before`, with `⊗` binding tighter than `∘`.
pub fn circ(t: &MorTerm) -> String {
    match t {
        MorTerm::Gen { name, .. } | MorTerm::ScalarSym(name) => name.clone(),
        MorTerm::Id(a) => format!("1_{{{}}}", word(a)),
        MorTerm::Compose { after, before } => format!("{} ∘ {}", operand(after, 1), operand(before, 0)),
        MorTerm::Tensor(l, r) => format!("{} ⊗ {}", operand(l, 1), operand(r, 2)),
        MorTerm::Sym(a, b) => format!("σ_{{{},{}}}", word(a), word(b)),
        MorTerm::Eta(a) => format!("η_{{{}}}", word(a)),
        MorTerm::Dagger(inner) => format!("{}†", operand(inner, 2)),
        MorTerm::Delta(x) => format!("δ_{x}"),
        MorTerm::Eps(x) => format!("ε_{x}"),
        MorTerm::ScalarDim(a, p) => format!("s_{{{}}}^({p}/2)", word(a)),
    }
}
