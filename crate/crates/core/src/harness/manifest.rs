use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// How `measured` is compared with `bound`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
    #[serde(rename = ">")]
    Above,
    #[serde(rename = "==")]
    Equal,
}

/// One embedded pass/fail check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub measured: f64,
    pub relation: Relation,
    pub bound: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, measured: f64, relation: Relation, bound: f64) -> Self {
        // NaN fails every comparison
        let passed = match relation {
            Relation::AtMost => measured <= bound,
            Relation::AtLeast => measured >= bound,
            Relation::Above => measured > bound,
            Relation::Equal => measured == bound,
        };
        Check {
            name: name.into(),
            passed,
            measured,
            relation,
            bound,
        }
    }

    pub fn at_most(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(name, measured, Relation::AtMost, bound)
    }

    pub fn at_least(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(name, measured, Relation::AtLeast, bound)
    }

    pub fn above(name: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(name, measured, Relation::Above, bound)
    }

    /// A yes/no outcome, recorded as `1 == 1` or `0 == 1`.
    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        Self::new(name, if ok { 1.0 } else { 0.0 }, Relation::Equal, 1.0)
    }
}

/// Contents of `manifest.json`. Nothing in it depends on the clock or the
/// output location, so reruns reproduce it byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub experiment: String,
    /// SHA-256 of the config file bytes.
    pub config_sha256: String,
    pub parameters: Value,
    pub checks: Vec<Check>,
    /// Informational numbers that are not pass/fail.
    pub diagnostics: BTreeMap<String, f64>,
    /// Files written next to the manifest.
    pub outputs: Vec<String>,
    pub passed: bool,
}

impl Manifest {
    pub fn failed_checks(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relations() {
        assert!(Check::at_most("a", 1e-13, 1e-12).passed);
        assert!(!Check::at_most("a", f64::NAN, 1e-12).passed);
        assert!(Check::at_least("b", 3.0, 2.9).passed);
        assert!(!Check::above("c", 0.0, 0.0).passed);
        assert!(Check::holds("d", true).passed);
        assert!(!Check::holds("d", false).passed);
    }

    #[test]
    fn digest() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
