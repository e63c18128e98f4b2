//! Check records and the aggregated verification report.

use std::collections::BTreeMap;
use std::fmt;
use std::fmt::Write as _;
use std::time::Duration;

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Brute force is self-consistent but disagrees with a printed closed form.
    Discrepancy,
}

impl fmt::Display for CheckStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckStatus::Pass => "pass",
            CheckStatus::Fail => "FAIL",
            CheckStatus::Discrepancy => "discrepancy",
        })
    }
}

/// Fixed scientific notation with 12 significant digits.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub status: CheckStatus,
    pub measured: String,
    pub expected: String,
    pub tolerance: String,
}

impl CheckRecord {
    /// Residual-style check: pass iff `measured < tolerance`.
    pub fn residual(id: impl Into<String>, anchor: &str, measured: f64, tolerance: f64) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.to_string(),
            status: if measured < tolerance {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            measured: fmt_float(measured),
            expected: "0".into(),
            tolerance: fmt_float(tolerance),
        }
    }

    /// Exact check: pass iff `measured == expected`.
    pub fn exact<T: PartialEq + fmt::Display>(
        id: impl Into<String>,
        anchor: &str,
        measured: T,
        expected: T,
    ) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.to_string(),
            status: if measured == expected {
                CheckStatus::Pass
            } else {
                CheckStatus::Fail
            },
            measured: measured.to_string(),
            expected: expected.to_string(),
            tolerance: "exact".into(),
        }
    }

    /// Like [`CheckRecord::exact`] but a mismatch is a discrepancy.
    pub fn claimed<T: PartialEq + fmt::Display>(
        id: impl Into<String>,
        anchor: &str,
        measured: T,
        expected: T,
    ) -> Self {
        let mut r = Self::exact(id, anchor, measured, expected);
        if r.status == CheckStatus::Fail {
            r.status = CheckStatus::Discrepancy;
        }
        r
    }

    pub fn with_status(mut self, status: CheckStatus) -> Self {
        self.status = status;
        self
    }
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct VerificationReport {
    pub dims: Vec<u64>,
    pub splits: BTreeMap<u64, Vec<String>>,
    pub checks: Vec<CheckRecord>,
    pub notes: Vec<String>,
    /// Wall-clock time; kept out of the serialized form so reports are reproducible.
    #[serde(skip)]
    pub duration: Duration,
}

impl VerificationReport {
    /// Panics on a duplicate id.
    pub fn push(&mut self, record: CheckRecord) {
        assert!(
            self.checks.iter().all(|c| c.id != record.id),
            "duplicate check id {}",
            record.id
        );
        self.checks.push(record);
    }

    pub fn count(&self, status: CheckStatus) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn has_failures(&self) -> bool {
        self.count(CheckStatus::Fail) > 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    pub fn to_table(&self) -> String {
        let w = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(2);
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{:<w$}  {:<11}  {:<20}  {:<20}  {}",
            "id", "status", "measured", "expected", "tolerance"
        );
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{:<w$}  {:<11}  {:<20}  {:<20}  {}",
                c.id,
                c.status.to_string(),
                c.measured,
                c.expected,
                c.tolerance
            );
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(
            out,
            "{} checks: {} pass, {} discrepancy, {} fail",
            self.checks.len(),
            self.count(CheckStatus::Pass),
            self.count(CheckStatus::Discrepancy),
            self.count(CheckStatus::Fail)
        );
        out
    }
}
