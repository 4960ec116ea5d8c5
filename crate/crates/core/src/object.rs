//! Object words: the object monoid of a strict dagger-compact category.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// One wire of an object word: a base object, possibly dualized.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Factor {
    pub base: String,
    pub dual: bool,
}

impl Factor {
    pub fn new(base: impl Into<String>, dual: bool) -> Self {
        Self {
            base: base.into(),
            dual,
        }
    }

    pub fn dualized(&self) -> Self {
        Self {
            base: self.base.clone(),
            dual: !self.dual,
        }
    }
}

/// An ordered tensor word of base wires. The empty word is the unit `I`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectWord {
    factors: Vec<Factor>,
}

impl ObjectWord {
    pub fn unit() -> Self {
        Self::default()
    }

    /// A single non-dual base wire.
    pub fn base(name: impl Into<String>) -> Self {
        Self {
            factors: alloc::vec![Factor::new(name, false)],
        }
    }

    pub fn from_factors(factors: Vec<Factor>) -> Self {
        Self { factors }
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_unit(&self) -> bool {
        self.factors.is_empty()
    }

    /// Same as [`ObjectWord::is_unit`].
    pub fn is_empty(&self) -> bool {
        self.is_unit()
    }

    pub fn tensor(&self, other: &ObjectWord) -> ObjectWord {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        ObjectWord { factors }
    }

    /// `(A ⊗ B)* = B* ⊗ A*`: reverse the word and flip every polarity.
    pub fn dual(&self) -> ObjectWord {
        ObjectWord {
            factors: self.factors.iter().rev().map(Factor::dualized).collect(),
        }
    }

    /// Splits off a prefix of `n` factors.
    pub fn split_at(&self, n: usize) -> Option<(ObjectWord, ObjectWord)> {
        if n > self.factors.len() {
            return None;
        }
        let (a, b) = self.factors.split_at(n);
        Some((
            ObjectWord::from_factors(a.to_vec()),
            ObjectWord::from_factors(b.to_vec()),
        ))
    }

    /// If `prefix` is a prefix of this word, returns the remainder.
    pub fn strip_prefix(&self, prefix: &ObjectWord) -> Option<ObjectWord> {
        if self.factors.starts_with(&prefix.factors) {
            Some(ObjectWord::from_factors(self.factors[prefix.len()..].to_vec()))
        } else {
            None
        }
    }

    pub fn bases(&self) -> impl Iterator<Item = &str> {
        self.factors.iter().map(|f| f.base.as_str())
    }
}

impl From<Vec<Factor>> for ObjectWord {
    fn from(factors: Vec<Factor>) -> Self {
        Self { factors }
    }
}

/// Prints in the textual syntax: `I`, `A`, `A^d * B`.
impl fmt::Display for ObjectWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return f.write_str("I");
        }
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str(" * ")?;
            }
            f.write_str(&factor.base)?;
            if factor.dual {
                f.write_str("^d")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(spec: &[(&str, bool)]) -> ObjectWord {
        spec.iter().map(|&(b, d)| Factor::new(b, d)).collect::<Vec<_>>().into()
    }

    #[test]
    fn dual_reverses_and_flips() {
        let w = word(&[("A", false), ("B", true)]);
        assert_eq!(w.dual(), word(&[("B", false), ("A", true)]));
        assert_eq!(w.dual().dual(), w);
        assert!(ObjectWord::unit().dual().is_unit());
    }

    #[test]
    fn display() {
        assert_eq!(alloc::format!("{}", ObjectWord::unit()), "I");
        assert_eq!(alloc::format!("{}", word(&[("A", false), ("B", true)])), "A * B^d");
    }

    #[test]
    fn prefix_split() {
        let w = word(&[("C", false), ("A", false)]);
        assert_eq!(w.strip_prefix(&ObjectWord::base("C")), Some(ObjectWord::base("A")));
        assert_eq!(w.strip_prefix(&ObjectWord::base("A")), None);
    }
}
