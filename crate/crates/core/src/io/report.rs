use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subcat::{Budgets, Verdict};

pub const REPORT_VERSION: u32 = 1;

/// The verdict of one check as it appears in reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Pass,
    Fail,
    /// Undecided because an object, hull or cover lies beyond the caps or
    /// a budget ran out.
    OutOfCap,
    Refused,
}

impl Outcome {
    pub fn as_str(self) -> &'static str {
        match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::OutOfCap => "out-of-cap",
            Outcome::Refused => "refused",
        }
    }
}

impl From<Verdict> for Outcome {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => Outcome::Pass,
            Verdict::Fail => Outcome::Fail,
            Verdict::Partial => Outcome::OutOfCap,
            Verdict::Refused => Outcome::Refused,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub check: String,
    pub verdict: Outcome,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<String>,
    /// The unmet hypothesis of a refused check.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub missing_hypothesis: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub notes: Vec<String>,
    pub details: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub suite: String,
    pub seed: u64,
    pub budgets: Budgets,
    pub checks: Vec<CheckReport>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

impl Report {
    pub fn new(suite: &str, seed: u64, budgets: Budgets) -> Self {
        Report {
            version: REPORT_VERSION,
            suite: suite.to_string(),
            seed,
            budgets,
            checks: Vec::new(),
        }
    }

    pub fn verdicts(&self) -> Vec<(String, Outcome)> {
        self.checks.iter().map(|c| (c.name.clone(), c.verdict)).collect()
    }

    /// 0 when every check passes, 1 when any fails, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.verdict == Outcome::Fail) {
            1
        } else if self.checks.iter().all(|c| c.verdict == Outcome::Pass) {
            0
        } else {
            2
        }
    }
}

pub fn emit_report(r: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(r).expect("reports serialize");
            s.push('\n');
            s.into_bytes()
        }
        Format::Text => render_text(r).into_bytes(),
    }
}

pub fn parse_report(bytes: &[u8]) -> Result<Report> {
    let r: Report = serde_json::from_slice(bytes)
        .map_err(|e| Error::Parse(e.to_string()))?;
    if r.version != REPORT_VERSION {
        return Err(Error::Malformed(format!("report version {} is not supported", r.version)));
    }
    Ok(r)
}

fn render_text(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "suite {} (seed {}, report v{})", r.suite, r.seed, r.version);
    for c in &r.checks {
        let _ = writeln!(out, "  [{}] {} ({})", c.verdict.as_str(), c.name, c.check);
        if let Some(w) = &c.witness {
            let _ = writeln!(out, "      witness: {w}");
        }
        if let Some(h) = &c.missing_hypothesis {
            let _ = writeln!(out, "      missing hypothesis: {h}");
        }
        for n in &c.notes {
            let _ = writeln!(out, "      note: {n}");
        }
    }
    let count = |o: Outcome| r.checks.iter().filter(|c| c.verdict == o).count();
    let _ = writeln!(
        out,
        "{} checks: {} pass, {} fail, {} out-of-cap, {} refused",
        r.checks.len(),
        count(Outcome::Pass),
        count(Outcome::Fail),
        count(Outcome::OutOfCap),
        count(Outcome::Refused)
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_has_version_and_no_checks() {
        let r = Report::new("empty", 0, Budgets::default());
        let v: serde_json::Value = serde_json::from_slice(&emit_report(&r, Format::Json)).unwrap();
        assert_eq!(v["version"], REPORT_VERSION);
        assert_eq!(v["checks"], serde_json::json!([]));
        assert_eq!(r.exit_code(), 0);
    }

    #[test]
    fn failing_check_carries_its_witness_in_both_renderings() {
        let mut r = Report::new("s", 1, Budgets::default());
        r.checks.push(CheckReport {
            name: "c".into(),
            check: "closure".into(),
            verdict: Outcome::Fail,
            witness: Some("Coker(S -> D2) = S".into()),
            missing_hypothesis: None,
            notes: vec![],
            details: serde_json::json!({"objects": [1, 2]}),
        });
        let json = emit_report(&r, Format::Json);
        let back = parse_report(&json).unwrap();
        assert_eq!(back, r);
        let text = String::from_utf8(emit_report(&r, Format::Text)).unwrap();
        assert!(text.contains("[fail] c") && text.contains("Coker(S -> D2) = S"));
        assert_eq!(r.exit_code(), 1);
    }

    #[test]
    fn exit_code_two_for_refused_or_out_of_cap_only() {
        let mut r = Report::new("s", 1, Budgets::default());
        for v in [Outcome::Pass, Outcome::Refused, Outcome::OutOfCap] {
            r.checks.push(CheckReport {
                name: v.as_str().into(),
                check: "frobenius".into(),
                verdict: v,
                witness: None,
                missing_hypothesis: None,
                notes: vec![],
                details: serde_json::Value::Null,
            });
        }
        assert_eq!(r.exit_code(), 2);
    }
}
