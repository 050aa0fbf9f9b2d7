//! Verification reports: one record per checked identity.

use crate::scalar::Ring;
use crate::tensor::Tensor;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::time::Instant;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// Where the identity comes from, e.g. `"App C, −(k+1)(n−k)"`.
    pub anchor: String,
    pub status: Status,
    /// `"0"` on success, otherwise the offending entry.
    pub residual: String,
    pub timing_ms: u64,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: impl Into<String>, passed: bool, residual: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            residual: residual.into(),
            timing_ms: 0,
        }
    }

    /// Passes iff the residual tensor vanishes (within `tol` in float mode); otherwise records the
    /// first offending entry.
    pub fn zero_tensor<C: Ring>(name: impl Into<String>, anchor: impl Into<String>, r: &Tensor<C>, tol: f64) -> Self {
        match r.indices().zip(r.data()).find(|(_, c)| !c.is_negligible(tol)) {
            None => Check::new(name, anchor, true, "0"),
            Some((idx, c)) => Check::new(name, anchor, false, format!("{:?}: {}", idx, c.render())),
        }
    }

    /// Passes iff `value == expected`.
    pub fn equal<T: PartialEq + std::fmt::Display>(name: impl Into<String>, anchor: impl Into<String>, value: T, expected: T) -> Self {
        let ok = value == expected;
        let residual = if ok { "0".to_string() } else { format!("got {value}, expected {expected}") };
        Check::new(name, anchor, ok, residual)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.timing_ms = start.elapsed().as_millis() as u64;
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub title: String,
    pub checks: Vec<Check>,
    /// Named tables and values that are not pass/fail checks.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, String>,
}

impl Report {
    pub fn new(title: impl Into<String>) -> Self {
        Report { schema_version: SCHEMA_VERSION, title: title.into(), checks: Vec::new(), data: BTreeMap::new() }
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed())
    }

    /// Checks sorted by name, as emitted in machine-readable output.
    pub fn sorted(&self) -> Report {
        let mut r = self.clone();
        r.checks.sort_by(|a, b| a.name.cmp(&b.name));
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{qi, Q};
    use crate::tensor::Lower;

    #[test]
    fn residual_names_first_entry() {
        let mut t = Tensor::<Q>::zeros(4, &[Lower], 0);
        assert!(Check::zero_tensor("z", "a", &t, 0.0).passed());
        t.set(&[2], qi(-3));
        let c = Check::zero_tensor("z", "a", &t, 0.0);
        assert!(!c.passed());
        assert_eq!(c.residual, "[2]: -3");
    }
}
