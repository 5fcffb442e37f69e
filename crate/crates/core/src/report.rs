//! Stable report schema shared by the CLI and the regression suite.
//!
//! A run serializes as `{ "schema": "harmonia/1", ... }`; two runs with the
//! same specification and seed produce byte-identical JSON apart from the
//! `timestamp` field.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::oracle::OracleReport;

pub const SCHEMA: &str = "harmonia/1";

/// One executed check on one (model, field) pair.
#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub points: usize,
    pub max_residual: f64,
    pub tolerance: f64,
    pub fitted: BTreeMap<String, f64>,
    /// Raw verdict of the check itself.
    pub verdict: Verdict,
    /// Expected verdict in regression mode (absent in survey mode).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<Verdict>,
    /// Whether the outcome matches the expectation (regression) or the
    /// check passed (survey).
    pub ok: bool,
    /// Per-point residuals for the CSV dump; not part of the JSON schema.
    #[serde(skip)]
    pub residuals: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

/// All checks executed against one (model, field).
#[derive(Clone, Debug, Serialize)]
pub struct FieldReport {
    pub model: String,
    pub field: String,
    pub checks: Vec<CheckRecord>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub ok: usize,
    pub failed: usize,
}

/// A complete run.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: String,
    pub timestamp: u64,
    pub seed: u64,
    pub points: usize,
    pub regression: bool,
    pub oracle_gate: Vec<OracleReport>,
    pub oracle_ok: bool,
    pub runs: Vec<FieldReport>,
    pub summary: Summary,
    /// Wall-clock duration of the run; kept out of the JSON so reports with
    /// equal seeds stay byte-identical.
    #[serde(skip)]
    pub wall_ms: u64,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable report")
    }

    /// JSON with the timestamp zeroed, for determinism comparisons.
    pub fn to_json_without_timestamp(&self) -> String {
        let mut clone = self.clone();
        clone.timestamp = 0;
        clone.to_json()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("model,field,check,point,residual,tolerance,verdict\n");
        for run in &self.runs {
            for check in &run.checks {
                if check.residuals.is_empty() {
                    out.push_str(&format!(
                        "{},{},{},max,{:.6e},{:.3e},{:?}\n",
                        run.model,
                        run.field,
                        check.name,
                        check.max_residual,
                        check.tolerance,
                        check.verdict
                    ));
                } else {
                    for (i, r) in check.residuals.iter().enumerate() {
                        out.push_str(&format!(
                            "{},{},{},{},{:.6e},{:.3e},{:?}\n",
                            run.model, run.field, check.name, i, r, check.tolerance, check.verdict
                        ));
                    }
                }
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.oracle_gate.is_empty() {
            out.push_str("oracle gate:\n");
            for rep in &self.oracle_gate {
                out.push_str(&format!(
                    "  {:<40} discrepancy {:.3e} (tol {:.1e})  {}\n",
                    rep.quantity,
                    rep.discrepancy,
                    rep.tolerance,
                    if rep.pass { "pass" } else { "FAIL" }
                ));
            }
        }
        for run in &self.runs {
            for check in &run.checks {
                let expect = match check.expected {
                    Some(Verdict::Fail) => " [expected-fail]",
                    _ => "",
                };
                out.push_str(&format!(
                    "{:<16} {:<20} {:<18} pts {:>3}  max {:.3e} (tol {:.1e})  {}{}{}\n",
                    run.model,
                    run.field,
                    check.name,
                    check.points,
                    check.max_residual,
                    check.tolerance,
                    match check.verdict {
                        Verdict::Pass => "pass",
                        Verdict::Fail => "fail",
                    },
                    expect,
                    if check.ok { "" } else { "  << MISMATCH" }
                ));
            }
        }
        out.push_str(&format!(
            "summary: {}/{} ok in {} ms\n",
            self.summary.ok, self.summary.total, self.wall_ms
        ));
        out
    }
}
