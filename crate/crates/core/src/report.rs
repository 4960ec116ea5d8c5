//! Pass/fail reports for batteries of numeric laws.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub struct LawResult {
    pub law: String,
    pub passed: bool,
    pub residual: f64,
}

/// One line per law, in the order checked. Passes iff every law passes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CheckReport {
    pub laws: Vec<LawResult>,
}

impl CheckReport {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records a residual; the law passes when it is at most `tol` (NaN fails).
    pub fn record(&mut self, law: impl Into<String>, residual: f64, tol: f64) -> &mut Self {
        self.laws.push(LawResult {
            law: law.into(),
            passed: residual <= tol,
            residual,
        });
        self
    }

    /// Records a boolean outcome with an explanatory residual.
    pub fn record_flag(&mut self, law: impl Into<String>, passed: bool, residual: f64) -> &mut Self {
        self.laws.push(LawResult {
            law: law.into(),
            passed,
            residual,
        });
        self
    }

    pub fn extend(&mut self, other: CheckReport) -> &mut Self {
        self.laws.extend(other.laws);
        self
    }

    /// Appends `other` with every law name prefixed by `prefix`.
    pub fn extend_prefixed(&mut self, prefix: &str, other: CheckReport) -> &mut Self {
        for mut l in other.laws {
            l.law = alloc::format!("{prefix}{}", l.law);
            self.laws.push(l);
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.laws.iter().all(|l| l.passed)
    }

    pub fn first_failure(&self) -> Option<&LawResult> {
        self.laws.iter().find(|l| !l.passed)
    }

    pub fn get(&self, law: &str) -> Option<&LawResult> {
        self.laws.iter().find(|l| l.law == law)
    }

    pub fn max_residual(&self) -> f64 {
        self.laws.iter().map(|l| l.residual).fold(0.0, f64::max)
    }
}

/// `LAW\tPASS|FAIL\tresidual`, one law per line.
impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, l) in self.laws.iter().enumerate() {
            if i > 0 {
                f.write_str("\n")?;
            }
            let verdict = if l.passed { "PASS" } else { "FAIL" };
            write!(f, "{}\t{verdict}\t{:.3e}", l.law, l.residual)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overall_verdict_and_format() {
        let mut r = CheckReport::new();
        r.record("a", 1e-12, 1e-9)
            .record("b", 0.5, 1e-9)
            .record("c", f64::NAN, 1e-9);
        assert!(!r.passed());
        assert_eq!(r.first_failure().unwrap().law, "b");
        assert!(!r.get("c").unwrap().passed);
        let text = alloc::format!("{r}");
        assert!(text.starts_with("a\tPASS\t1.000e-12\nb\tFAIL\t5.000e-1"));
    }
}
