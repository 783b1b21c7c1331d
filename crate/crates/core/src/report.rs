//! Line-oriented `key=value` reports.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

/// An ordered list of `key=value` entries followed by `status=pass|fail`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Report {
    entries: Vec<(String, String)>,
    failed: bool,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl fmt::Display) {
        self.entries.push((key.into(), value.to_string()));
    }

    /// Records `key=value` for a measured deviation and fails the report if it
    /// exceeds `bound`.
    pub fn check(&mut self, key: impl Into<String>, value: f64, bound: f64) -> bool {
        let ok = value <= bound;
        self.push(key, format_args!("{value:e}"));
        if !ok {
            self.failed = true;
        }
        ok
    }

    /// Records a boolean check.
    pub fn check_flag(&mut self, key: impl Into<String>, ok: bool) -> bool {
        self.push(key, ok);
        if !ok {
            self.failed = true;
        }
        ok
    }

    pub fn fail(&mut self) {
        self.failed = true;
    }

    pub fn passed(&self) -> bool {
        !self.failed
    }

    pub fn entries(&self) -> &[(String, String)] {
        &self.entries
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    /// Appends another report's entries, each key prefixed with `prefix.`.
    pub fn merge(&mut self, prefix: &str, other: Report) {
        for (k, v) in other.entries {
            self.entries.push((alloc::format!("{prefix}.{k}"), v));
        }
        self.failed |= other.failed;
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.entries {
            writeln!(f, "{k}={v}")?;
        }
        writeln!(f, "status={}", if self.failed { "fail" } else { "pass" })
    }
}
