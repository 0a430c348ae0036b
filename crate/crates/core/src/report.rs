//! Structured pass/fail records for verification runs.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};
use serde_json::Value;

/// A JSON number when it fits in `i64`, otherwise a decimal string.
pub fn int_value(n: &BigInt) -> Value {
    n.to_i64().map_or_else(|| Value::String(n.to_string()), Value::from)
}

pub(crate) fn ser_int<S: Serializer>(n: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    int_value(n).serialize(s)
}

pub(crate) fn ser_opt_int<S: Serializer>(n: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    n.as_ref().map(int_value).serialize(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    NotApplicable,
}

impl Status {
    pub fn is_ok(self) -> bool {
        self != Status::Fail
    }
}

/// Which cell a report belongs to.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Instance {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub root_system: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub fgls: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trunc: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub suite: String,
    pub instance: Instance,
    pub status: Status,
    pub checks: Vec<Check>,
    pub computed: BTreeMap<String, Value>,
    pub bound: BTreeMap<String, Value>,
    pub caveats: Vec<String>,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, instance: Instance) -> Self {
        VerificationReport {
            suite: suite.into(),
            instance,
            status: Status::NotApplicable,
            checks: Vec::new(),
            computed: BTreeMap::new(),
            bound: BTreeMap::new(),
            caveats: Vec::new(),
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) -> &mut Self {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
        self.status = if self.checks.iter().all(|c| c.passed) { Status::Pass } else { Status::Fail };
        self
    }

    pub fn computed(&mut self, key: impl Into<String>, value: impl Serialize) -> &mut Self {
        self.computed.insert(key.into(), serde_json::to_value(value).unwrap_or(Value::Null));
        self
    }

    pub fn bound(&mut self, key: impl Into<String>, value: &BigInt) -> &mut Self {
        self.bound.insert(key.into(), int_value(value));
        self
    }

    pub fn caveat(&mut self, text: impl Into<String>) -> &mut Self {
        let text = text.into();
        if !self.caveats.contains(&text) {
            self.caveats.push(text);
        }
        self
    }

    /// Compares against a rerun of the same check at a larger truncation.
    pub fn stabilization(&mut self, rerun: &VerificationReport) -> &mut Self {
        let mut keys: Vec<&String> = self.computed.keys().chain(rerun.computed.keys()).collect();
        keys.sort();
        keys.dedup();
        let moved: Vec<&str> =
            keys.into_iter().filter(|k| self.computed.get(*k) != rerun.computed.get(*k)).map(String::as_str).collect();
        let at = rerun.instance.trunc.map_or_else(|| "rerun".to_string(), |t| format!("truncation {t}"));
        let detail = if moved.is_empty() { String::new() } else { format!("changed: {}", moved.join(", ")) };
        self.check(format!("stable at {at}"), moved.is_empty() && self.status == rerun.status, detail)
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}
