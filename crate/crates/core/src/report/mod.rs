//! Report rendering. Every format is produced from the same in-memory
//! results, so tallies agree across formats.

mod json;
mod junit;
mod text;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::ontology::ConsistencyReport;
use crate::verifier::{Counts, Finding, ScenarioVerdict, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Junit,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "junit" => Ok(Format::Junit),
            other => Err(format!("unknown format `{other}` (expected text, json or junit)")),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Text => "text",
            Format::Json => "json",
            Format::Junit => "junit",
        })
    }
}

/// Lint findings for one story file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StoryFindings {
    pub source: String,
    pub story: String,
    pub findings: Vec<Finding>,
}

/// Scenario tallies across a set of reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct ScenarioCounts {
    pub pass: usize,
    pub fail: usize,
    pub untested: usize,
}

pub fn step_totals(reports: &[VerificationReport]) -> Counts {
    let mut total = Counts::default();
    for report in reports {
        total += report.counts;
    }
    total
}

pub fn scenario_totals(reports: &[VerificationReport]) -> ScenarioCounts {
    let mut counts = ScenarioCounts::default();
    for scenario in reports.iter().flat_map(|r| &r.scenarios) {
        match scenario.overall {
            ScenarioVerdict::Pass => counts.pass += 1,
            ScenarioVerdict::Fail => counts.fail += 1,
            ScenarioVerdict::Untested => counts.untested += 1,
        }
    }
    counts
}

pub fn render_consistency(label: &str, report: &ConsistencyReport, format: Format, color: bool) -> String {
    match format {
        Format::Text => text::consistency(label, report, color),
        Format::Json => json::consistency(label, report),
        Format::Junit => junit::consistency(label, report),
    }
}

pub fn render_lint(results: &[StoryFindings], format: Format, color: bool) -> String {
    match format {
        Format::Text => text::lint(results, color),
        Format::Json => json::lint(results),
        Format::Junit => junit::lint(results),
    }
}

pub fn render_run(reports: &[VerificationReport], format: Format, color: bool) -> String {
    match format {
        Format::Text => text::run(reports, color),
        Format::Json => json::run(reports),
        Format::Junit => junit::run(reports),
    }
}

fn plural(n: usize, word: &str) -> String {
    if n == 1 {
        format!("{n} {word}")
    } else {
        format!("{n} {word}s")
    }
}
