//! Pass/fail reports shared by all verification suites.

use std::fmt;

use serde::{Deserialize, Serialize};

/// A human-readable description of where a check failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness(pub String);

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<String> for Witness {
    fn from(s: String) -> Self {
        Witness(s)
    }
}

impl From<&str> for Witness {
    fn from(s: &str) -> Self {
        Witness(s.to_string())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportEntry {
    pub equation: String,
    pub status: Status,
    pub degree: Option<usize>,
    pub witness: Option<String>,
}

impl ReportEntry {
    pub fn new(equation: impl Into<String>, degree: Option<usize>, result: Result<(), Witness>) -> Self {
        match result {
            Ok(()) => ReportEntry { equation: equation.into(), status: Status::Pass, degree, witness: None },
            Err(w) => ReportEntry { equation: equation.into(), status: Status::Fail, degree, witness: Some(w.0) },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Report {
    pub entries: Vec<ReportEntry>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, equation: impl Into<String>, degree: Option<usize>, result: Result<(), Witness>) {
        self.entries.push(ReportEntry::new(equation, degree, result));
    }

    pub fn extend(&mut self, other: Report) {
        self.entries.extend(other.entries);
    }

    pub fn all_pass(&self) -> bool {
        self.entries.iter().all(|e| e.passed())
    }

    pub fn failures(&self) -> impl Iterator<Item = &ReportEntry> {
        self.entries.iter().filter(|e| !e.passed())
    }

    pub fn get(&self, equation: &str) -> Option<&ReportEntry> {
        self.entries.iter().find(|e| e.equation == equation)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for e in &self.entries {
            let st = if e.passed() { "pass" } else { "FAIL" };
            s.push_str(&format!("{:<4} {}", st, e.equation));
            if let Some(d) = e.degree {
                s.push_str(&format!(" [degree {}]", d));
            }
            if let Some(w) = &e.witness {
                s.push_str(&format!("\n     witness: {}", w));
            }
            s.push('\n');
        }
        let fails = self.failures().count();
        s.push_str(&format!("{} checks, {} failed\n", self.entries.len(), fails));
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shape() {
        let mut r = Report::new();
        r.push("(52)", Some(3), Ok(()));
        r.push("(95)", None, Err("entry (1,2,2,1)".into()));
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v[0]["equation"], "(52)");
        assert_eq!(v[0]["status"], "pass");
        assert_eq!(v[0]["degree"], 3);
        assert!(v[0]["witness"].is_null());
        assert_eq!(v[1]["status"], "fail");
        assert!(!r.all_pass());
    }
}
