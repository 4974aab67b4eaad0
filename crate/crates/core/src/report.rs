//! Named residual tables with pass/fail verdicts.

use serde::{Deserialize, Serialize};

/// One residual: a sup-norm (or scalar) value checked against a tolerance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualRow {
    pub label: String,
    /// The identity or condition the residual instantiates.
    pub check: String,
    pub value: f64,
    pub tol: f64,
    /// Informational rows are recorded but never fail a report.
    pub asserted: bool,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructureReport {
    pub name: String,
    pub rows: Vec<ResidualRow>,
    pub notes: Vec<String>,
    /// `Some(false)` when a check was skipped because its hypotheses failed.
    pub hypotheses_met: Option<bool>,
}

impl StructureReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            rows: Vec::new(),
            notes: Vec::new(),
            hypotheses_met: None,
        }
    }

    /// Records a residual that must be at most `tol`.
    pub fn assert_small(&mut self, label: &str, check: &str, value: f64, tol: f64) -> &mut Self {
        self.rows.push(ResidualRow {
            label: label.to_string(),
            check: check.to_string(),
            value,
            tol,
            asserted: true,
            passed: value.is_finite() && value.abs() <= tol,
        });
        self
    }

    /// Records a quantity that must be at least `threshold` (a nonzero witness).
    pub fn assert_large(&mut self, label: &str, check: &str, value: f64, threshold: f64) -> &mut Self {
        self.rows.push(ResidualRow {
            label: label.to_string(),
            check: check.to_string(),
            value,
            tol: threshold,
            asserted: true,
            passed: value.is_finite() && value.abs() >= threshold,
        });
        self
    }

    pub fn info(&mut self, label: &str, check: &str, value: f64) -> &mut Self {
        self.rows.push(ResidualRow {
            label: label.to_string(),
            check: check.to_string(),
            value,
            tol: f64::NAN,
            asserted: false,
            passed: true,
        });
        self
    }

    pub fn note(&mut self, text: impl Into<String>) -> &mut Self {
        self.notes.push(text.into());
        self
    }

    /// Appends every row of `other` with its label prefixed.
    pub fn absorb(&mut self, prefix: &str, other: StructureReport) {
        for mut row in other.rows {
            row.label = format!("{prefix}{}", row.label);
            self.rows.push(row);
        }
        for n in other.notes {
            self.notes.push(format!("{prefix}{n}"));
        }
        if other.hypotheses_met == Some(false) {
            self.hypotheses_met = Some(false);
        }
    }

    pub fn row(&self, label: &str) -> Option<&ResidualRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    pub fn value(&self, label: &str) -> Option<f64> {
        self.row(label).map(|r| r.value)
    }

    pub fn passed(&self) -> bool {
        self.rows.iter().filter(|r| r.asserted).all(|r| r.passed)
    }

    pub fn failures(&self) -> Vec<&ResidualRow> {
        self.rows.iter().filter(|r| r.asserted && !r.passed).collect()
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("== {} ==\n", self.name);
        if self.hypotheses_met == Some(false) {
            out.push_str("   (hypotheses not met)\n");
        }
        for r in &self.rows {
            let verdict = match (r.asserted, r.passed) {
                (false, _) => "info",
                (true, true) => "PASS",
                (true, false) => "FAIL",
            };
            out.push_str(&format!(
                "  [{verdict}] {:<40} {:>12.3e}  ({})\n",
                r.label, r.value, r.check
            ));
        }
        for n in &self.notes {
            out.push_str(&format!("  note: {n}\n"));
        }
        out
    }
}
