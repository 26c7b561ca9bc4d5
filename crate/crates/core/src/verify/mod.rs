//! Checks of loop equations, the projection property, quasi-polynomiality
//! and cross-engine agreement.

pub mod cross;
pub mod lemmas;
pub mod loops;
pub mod poles;
pub mod quasi;
pub mod suite;

use std::time::Instant;

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "status", content = "reason")]
pub enum Verdict {
    Pass,
    Fail,
    Skipped(String),
}

/// Which `(g, n, r, a)` a check covers; unused fields stay `None`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scope {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
}

impl Scope {
    pub fn gn(g: u32, n: u32) -> Self {
        Scope { g: Some(g), n: Some(n), ..Default::default() }
    }
    pub fn with_r(mut self, r: u32) -> Self {
        self.r = Some(r);
        self
    }
    pub fn with_a(mut self, a: usize) -> Self {
        self.a = Some(a);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    pub model: String,
    pub scope: Scope,
    pub verdict: Verdict,
    /// offending coefficient, residual or the data the verdict rests on
    pub witness: String,
    pub millis: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
    pub fn failed(&self) -> bool {
        self.verdict == Verdict::Fail
    }
}

/// Runs `f` and wraps its outcome; errors become skips.
pub(crate) fn timed(
    id: &str,
    model: &str,
    scope: Scope,
    f: impl FnOnce() -> crate::Result<(bool, String)>,
) -> CheckReport {
    let t = Instant::now();
    let (verdict, witness) = match f() {
        Ok((true, w)) => (Verdict::Pass, w),
        Ok((false, w)) => (Verdict::Fail, w),
        Err(e) => (Verdict::Skipped(e.to_string()), String::new()),
    };
    CheckReport { id: id.to_string(), model: model.to_string(), scope, verdict, witness, millis: t.elapsed().as_millis() as u64 }
}

/// Relative numeric tolerance for a field: `10^(-digits/2)` in numeric mode.
pub fn tolerance<F: crate::Scalar>() -> f64 {
    if F::is_exact() {
        0.0
    } else {
        let digits = (crate::scalar::numeric_bits() as f64 - 32.0) / 3.3219;
        10f64.powf(-digits / 2.0)
    }
}
