use std::fmt::Write;

use super::{plural, scenario_totals, step_totals, StoryFindings};
use crate::ontology::ConsistencyReport;
use crate::verifier::{ScenarioVerdict, StepStatus, VerificationReport};

struct Paint(bool);

impl Paint {
    fn code(&self, code: &str, text: &str) -> String {
        if self.0 {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_owned()
        }
    }

    fn status(&self, status: StepStatus) -> String {
        let symbol = status.symbol().to_string();
        match status {
            StepStatus::Pass => self.code("32", &symbol),
            StepStatus::Fail => self.code("31", &symbol),
            StepStatus::Untested => self.code("1", &symbol),
        }
    }

    fn verdict(&self, verdict: ScenarioVerdict) -> String {
        let text = verdict.to_string();
        match verdict {
            ScenarioVerdict::Pass => self.code("32", &text),
            ScenarioVerdict::Fail => self.code("31", &text),
            ScenarioVerdict::Untested => self.code("33", &text),
        }
    }
}

pub(super) fn consistency(label: &str, report: &ConsistencyReport, color: bool) -> String {
    let paint = Paint(color);
    let mut out = String::new();
    for finding in &report.findings {
        let _ = writeln!(out, "{}", paint.code("31", &finding.to_string()));
    }
    let state = if report.is_consistent() {
        paint.code("32", "consistent")
    } else {
        paint.code("31", "inconsistent")
    };
    let _ = writeln!(out, "ontology {label}: {state}, {}", plural(report.findings.len(), "finding"));
    out
}

pub(super) fn lint(results: &[StoryFindings], color: bool) -> String {
    let paint = Paint(color);
    let mut out = String::new();
    let mut total = 0;
    for result in results {
        total += result.findings.len();
        let _ = writeln!(
            out,
            "{} ({}): {}",
            result.source,
            result.story,
            plural(result.findings.len(), "finding")
        );
        for finding in &result.findings {
            let _ = writeln!(out, "  {}", paint.code("31", &finding.to_string()));
        }
    }
    let _ = writeln!(out, "total: {}", plural(total, "finding"));
    out
}

pub(super) fn run(reports: &[VerificationReport], color: bool) -> String {
    let paint = Paint(color);
    let mut out = String::new();
    for report in reports {
        let _ = writeln!(out, "User Story: {}", report.story);
        for scenario in &report.scenarios {
            let _ = writeln!(out, "  Scenario: {} [{}]", scenario.title, paint.verdict(scenario.overall));
            for step in &scenario.steps {
                let _ = writeln!(out, "    {} {}", paint.status(step.status), step.step);
                if let Some(finding) = &step.finding {
                    let _ = writeln!(out, "        {}: {}", finding.code, finding.message);
                }
            }
        }
        let _ = writeln!(out);
    }
    let scenarios = scenario_totals(reports);
    let steps = step_totals(reports);
    let _ = writeln!(
        out,
        "scenarios: {} passed, {} failed, {} untested",
        scenarios.pass, scenarios.fail, scenarios.untested
    );
    let _ = writeln!(
        out,
        "steps: {} passed, {} failed, {} untested",
        steps.pass, steps.fail, steps.untested
    );
    out
}
