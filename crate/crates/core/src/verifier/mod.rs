//! Static linting of stories and scenario execution over prototypes.
//!
//! Execution walks a scenario's steps with a cursor on the current state.
//! Conditions and events are checked in the source state; right before the
//! first action the cursor follows the transition labeled with the scenario
//! title, and actions are checked in the target state. The first failing step
//! leaves every later step of that scenario untested.

mod execute;

use std::fmt;

use serde::Serialize;

use crate::ontology::OntologyModel;
use crate::prototype::Prototype;
use crate::story::{bind_steps, BoundScenario, Step, UserStory};

pub use execute::{execute_scenario, execute_story, is_navigation, is_text_assertion};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StepStatus {
    Pass,
    Fail,
    Untested,
}

impl StepStatus {
    /// `V`, `X` or `?`.
    pub fn symbol(self) -> char {
        match self {
            StepStatus::Pass => 'V',
            StepStatus::Fail => 'X',
            StepStatus::Untested => '?',
        }
    }
}

impl fmt::Display for StepStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StepStatus::Pass => "pass",
            StepStatus::Fail => "fail",
            StepStatus::Untested => "untested",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FindingCode {
    UnknownBehavior,
    ClauseMismatch,
    WidgetNotFound,
    StateNotFound,
    IncompatibleElement,
    TransitionNotFound,
}

impl FindingCode {
    /// Codes that concern a single interaction element rather than the
    /// dialog as a whole.
    pub fn is_element_level(self) -> bool {
        matches!(
            self,
            FindingCode::IncompatibleElement
                | FindingCode::WidgetNotFound
                | FindingCode::StateNotFound
                | FindingCode::ClauseMismatch
        )
    }
}

impl fmt::Display for FindingCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Where a finding was raised. `step` is the 1-based position in the
/// scenario.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepLocus {
    pub scenario: String,
    pub step: usize,
    pub line: usize,
}

/// A problem with one step.
///
/// Which optional fields are set depends on the code: `behavior` for all but
/// `UnknownBehavior`; `element` and `state` for widget lookups; `widget_class`
/// and `allowed` only for `IncompatibleElement`; `state` alone names the
/// source state of a missing transition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub code: FindingCode,
    pub locus: StepLocus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub behavior: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub element: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub widget_class: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub allowed: Vec<String>,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at `{}` step {} (line {}): {}",
            self.code, self.locus.scenario, self.locus.step, self.locus.line, self.message
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepResult {
    pub step: Step,
    pub behavior: Option<String>,
    pub element_arg: Option<String>,
    pub value_args: Vec<String>,
    pub status: StepStatus,
    pub finding: Option<Finding>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioVerdict {
    Pass,
    Fail,
    /// Not executed at all (a fail-fast run stopped earlier).
    Untested,
}

impl fmt::Display for ScenarioVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ScenarioVerdict::Pass => "PASS",
            ScenarioVerdict::Fail => "FAIL",
            ScenarioVerdict::Untested => "UNTESTED",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScenarioResult {
    pub title: String,
    pub steps: Vec<StepResult>,
    pub overall: ScenarioVerdict,
}

impl ScenarioResult {
    /// Result for a scenario that was skipped; every step is untested.
    pub fn not_run(scenario: &BoundScenario) -> ScenarioResult {
        let steps = scenario
            .steps
            .iter()
            .map(execute::unexecuted)
            .collect();
        ScenarioResult {
            title: scenario.title.clone(),
            steps,
            overall: ScenarioVerdict::Untested,
        }
    }

    pub fn statuses(&self) -> Vec<StepStatus> {
        self.steps.iter().map(|s| s.status).collect()
    }

    pub fn failure(&self) -> Option<&Finding> {
        self.steps.iter().find_map(|s| s.finding.as_ref())
    }

    pub fn counts(&self) -> Counts {
        let mut counts = Counts::default();
        for step in &self.steps {
            counts.add(step.status);
        }
        counts
    }
}

/// Step tallies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub untested: usize,
}

impl Counts {
    pub fn add(&mut self, status: StepStatus) {
        match status {
            StepStatus::Pass => self.pass += 1,
            StepStatus::Fail => self.fail += 1,
            StepStatus::Untested => self.untested += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.pass + self.fail + self.untested
    }
}

impl std::ops::AddAssign for Counts {
    fn add_assign(&mut self, rhs: Counts) {
        self.pass += rhs.pass;
        self.fail += rhs.fail;
        self.untested += rhs.untested;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub story: String,
    pub scenarios: Vec<ScenarioResult>,
    pub counts: Counts,
}

impl VerificationReport {
    pub fn new(story: impl Into<String>, scenarios: Vec<ScenarioResult>) -> VerificationReport {
        let mut counts = Counts::default();
        for scenario in &scenarios {
            counts += scenario.counts();
        }
        VerificationReport {
            story: story.into(),
            scenarios,
            counts,
        }
    }

    pub fn passed(&self) -> bool {
        self.scenarios.iter().all(|s| s.overall == ScenarioVerdict::Pass)
    }
}

/// Ontology-only checks: unbindable steps and steps whose clause the bound
/// behavior does not allow.
pub fn lint(story: &UserStory, model: &OntologyModel) -> Vec<Finding> {
    let mut findings = Vec::new();
    for scenario in bind_steps(story, model) {
        for (i, binding) in scenario.steps.iter().enumerate() {
            findings.extend(execute::binding_findings(model, &scenario.title, i, binding));
        }
    }
    findings
}

/// [`lint`] plus element resolution against the prototype, following the
/// same state cursor execution would. Missing transitions are not reported.
pub fn lint_against_prototype(story: &UserStory, model: &OntologyModel, proto: &Prototype) -> Vec<Finding> {
    let mut findings = Vec::new();
    for scenario in bind_steps(story, model) {
        let mut walk = execute::Walk::new(model, proto, &scenario.title);
        for (i, binding) in scenario.steps.iter().enumerate() {
            findings.extend(
                walk.step(i, binding)
                    .into_iter()
                    .filter(|f| f.code != FindingCode::TransitionNotFound),
            );
        }
    }
    findings
}

#[cfg(test)]
mod tests;
