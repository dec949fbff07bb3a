//! Legend-level laws, the Leibniz audit and the cofiber-of-τ count identity.

mod ctau;
mod leibniz;
mod structure;

use std::fmt;

use crate::chartir::escape;
use crate::model::Bidegree;

pub use ctau::{calibrate_shift, ctau_check, CalibrationError, CtauCounts};
pub use leibniz::{leibniz_audit, leibniz_findings, LeibnizTriple, Verdict};
pub use structure::validate_structure;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
    Info,
}

impl Severity {
    pub fn as_str(self) -> &'static str {
        match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
            Severity::Info => "info",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Finding {
    pub chart: String,
    pub bidegree: Option<Bidegree>,
    pub rule: &'static str,
    pub severity: Severity,
    /// The offending edge, as `source>target` (or just the class for arrows).
    pub edge: Option<String>,
    pub message: String,
}

impl Finding {
    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// Space-separated record: severity, rule, chart, bidegree, edge, message.
    pub fn to_record(&self) -> String {
        format!(
            "finding {} {} {} {} {} {}",
            self.severity.as_str(),
            self.rule,
            self.chart,
            self.bidegree
                .map_or("-".to_string(), |b| format!("{},{}", b.stem, b.filtration)),
            self.edge.as_deref().unwrap_or("-"),
            escape(&self.message)
        )
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} [{}] {}",
            self.severity.as_str(),
            self.rule,
            self.chart
        )?;
        if let Some(b) = self.bidegree {
            write!(f, " {b}")?;
        }
        if let Some(e) = &self.edge {
            write!(f, " {e}")?;
        }
        write!(f, ": {}", self.message)
    }
}

/// Sorts findings canonically and renders them one per line.
pub fn report(findings: &[Finding], records: bool) -> String {
    let mut sorted = findings.to_vec();
    sorted.sort();
    let mut out = String::new();
    for f in &sorted {
        out.push_str(&if records {
            f.to_record()
        } else {
            f.to_string()
        });
        out.push('\n');
    }
    out
}
