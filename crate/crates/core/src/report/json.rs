use serde_json::json;

use super::{scenario_totals, step_totals, StoryFindings};
use crate::ontology::ConsistencyReport;
use crate::verifier::VerificationReport;

fn pretty(value: serde_json::Value) -> String {
    let mut out = serde_json::to_string_pretty(&value).expect("report serializes");
    out.push('\n');
    out
}

pub(super) fn consistency(label: &str, report: &ConsistencyReport) -> String {
    pretty(json!({
        "ontology": label,
        "consistent": report.is_consistent(),
        "errors": report.error_count(),
        "findings": report.findings,
    }))
}

pub(super) fn lint(results: &[StoryFindings]) -> String {
    let total: usize = results.iter().map(|r| r.findings.len()).sum();
    pretty(json!({
        "stories": results,
        "total_findings": total,
    }))
}

pub(super) fn run(reports: &[VerificationReport]) -> String {
    pretty(json!({
        "reports": reports,
        "totals": step_totals(reports),
        "scenarios": scenario_totals(reports),
    }))
}
