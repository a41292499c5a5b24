use super::{
    Finding, FindingCode, ScenarioResult, ScenarioVerdict, StepLocus, StepResult, StepStatus,
    VerificationReport,
};
use crate::ontology::{ClauseRole, OntologyModel};
use crate::prototype::{find_transition, find_widget, same_name, Prototype, State};
use crate::story::{bind_steps, BoundScenario, BoundStep, UnknownBehavior, UserStory};

const NAVIGATE: &str = "goTo";
const ASSERT_TEXT: &str = "willBeDisplayed";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Semantics {
    /// Moves the cursor to the state named by the element argument.
    Navigate,
    /// Looks for a widget whose name or `text` equals the argument.
    AssertText,
    /// Resolves the element argument to a widget in the current state.
    Element,
}

/// Whether the behavior moves the cursor to the state its element argument
/// names.
pub fn is_navigation(model: &OntologyModel, behavior_id: &str) -> bool {
    model.behaves_as(behavior_id, NAVIGATE)
}

/// Whether the behavior checks for a widget by name or displayed text.
pub fn is_text_assertion(model: &OntologyModel, behavior_id: &str) -> bool {
    model.behaves_as(behavior_id, ASSERT_TEXT)
}

fn semantics(model: &OntologyModel, behavior_id: &str) -> Semantics {
    if is_navigation(model, behavior_id) {
        Semantics::Navigate
    } else if is_text_assertion(model, behavior_id) {
        Semantics::AssertText
    } else {
        Semantics::Element
    }
}

fn finding(code: FindingCode, scenario: &str, index: usize, line: usize, message: String) -> Finding {
    Finding {
        code,
        locus: StepLocus {
            scenario: scenario.to_owned(),
            step: index + 1,
            line,
        },
        behavior: None,
        element: None,
        state: None,
        widget_class: None,
        allowed: Vec::new(),
        message,
    }
}

/// Findings that need only the ontology.
pub(super) fn binding_findings(
    model: &OntologyModel,
    scenario: &str,
    index: usize,
    binding: &Result<BoundStep, UnknownBehavior>,
) -> Vec<Finding> {
    let bound = match binding {
        Ok(bound) => bound,
        Err(unknown) => {
            return vec![finding(
                FindingCode::UnknownBehavior,
                scenario,
                index,
                unknown.step.line,
                format!("no behavior in the ontology matches `{}`", unknown.step.text),
            )]
        }
    };
    let Ok(behavior) = model.behavior(&bound.behavior_id) else {
        return Vec::new();
    };
    if behavior.allows_role(bound.step.clause) {
        return Vec::new();
    }
    let roles: Vec<String> = behavior.roles.iter().map(ToString::to_string).collect();
    let mut f = finding(
        FindingCode::ClauseMismatch,
        scenario,
        index,
        bound.step.line,
        format!(
            "`{}` is used as {} ({}) but only allows {}",
            behavior.id,
            bound.step.clause,
            bound.step.keyword,
            roles.join(", ")
        ),
    );
    f.behavior = Some(behavior.id.clone());
    vec![f]
}

/// Step-by-step evaluation of one scenario with a state cursor.
pub(super) struct Walk<'a> {
    model: &'a OntologyModel,
    proto: &'a Prototype,
    scenario: &'a str,
    // None once the current state can no longer be known
    cursor: Option<&'a State>,
    transitioned: bool,
}

impl<'a> Walk<'a> {
    pub(super) fn new(model: &'a OntologyModel, proto: &'a Prototype, scenario: &'a str) -> Self {
        Walk {
            model,
            proto,
            scenario,
            cursor: proto.initial(),
            transitioned: false,
        }
    }

    /// All findings for one step, in check order, updating the cursor.
    pub(super) fn step(&mut self, index: usize, binding: &Result<BoundStep, UnknownBehavior>) -> Vec<Finding> {
        let mut findings = binding_findings(self.model, self.scenario, index, binding);
        let Ok(bound) = binding else {
            return findings;
        };
        let line = bound.step.line;

        if bound.step.clause == ClauseRole::Action && !self.transitioned {
            self.transitioned = true;
            if let Some(source) = self.cursor {
                match find_transition(self.proto, &source.name, self.scenario) {
                    Some(t) => self.cursor = self.proto.state(&t.target),
                    None => {
                        let mut f = finding(
                            FindingCode::TransitionNotFound,
                            self.scenario,
                            index,
                            line,
                            format!(
                                "state `{}` has no transition for scenario `{}`",
                                source.name, self.scenario
                            ),
                        );
                        f.state = Some(source.name.clone());
                        findings.push(f);
                        self.cursor = None;
                    }
                }
            }
        }

        let Ok(behavior) = self.model.behavior(&bound.behavior_id) else {
            return findings;
        };
        let element_finding = |code, message: String| {
            let mut f = finding(code, self.scenario, index, line, message);
            f.behavior = Some(behavior.id.clone());
            f
        };

        match semantics(self.model, &behavior.id) {
            Semantics::Navigate => {
                let Some(target) = bound.element_arg.as_deref() else {
                    return findings;
                };
                match self.proto.state(target) {
                    Some(state) => self.cursor = Some(state),
                    None => {
                        let mut f = element_finding(
                            FindingCode::StateNotFound,
                            format!("prototype has no state named `{target}`"),
                        );
                        f.element = Some(target.to_owned());
                        f.state = Some(target.to_owned());
                        findings.push(f);
                        self.cursor = None;
                    }
                }
            }
            Semantics::AssertText => {
                let (Some(state), Some(expected)) = (
                    self.cursor,
                    bound.element_arg.as_deref().or(bound.value_args.first().map(String::as_str)),
                ) else {
                    return findings;
                };
                let candidates: Vec<_> = state
                    .widgets
                    .iter()
                    .filter(|w| (!expected.is_empty() && same_name(&w.name, expected)) || w.text() == Some(expected))
                    .collect();
                let satisfied = candidates
                    .iter()
                    .any(|w| self.model.element_satisfies(&w.element_class, &behavior.id) == Ok(true));
                if !satisfied {
                    let mut f = match candidates.first() {
                        Some(w) => {
                            let mut f = element_finding(
                                FindingCode::IncompatibleElement,
                                format!(
                                    "`{}` in `{}` is a {}, but `{}` needs one of {}",
                                    w.name,
                                    state.name,
                                    w.element_class,
                                    behavior.id,
                                    join(&behavior.allowed_elements)
                                ),
                            );
                            f.widget_class = Some(w.element_class.clone());
                            f.allowed = behavior.allowed_elements.iter().cloned().collect();
                            f
                        }
                        None => element_finding(
                            FindingCode::WidgetNotFound,
                            format!("no widget named or reading `{expected}` in state `{}`", state.name),
                        ),
                    };
                    f.element = Some(expected.to_owned());
                    f.state = Some(state.name.clone());
                    findings.push(f);
                }
            }
            Semantics::Element => {
                let (Some(state), Some(name)) = (self.cursor, bound.element_arg.as_deref()) else {
                    return findings;
                };
                let mut f = match find_widget(state, name) {
                    None => element_finding(
                        FindingCode::WidgetNotFound,
                        format!("no widget named `{name}` in state `{}`", state.name),
                    ),
                    Some(widget) => {
                        if self.model.element_satisfies(&widget.element_class, &behavior.id) == Ok(true) {
                            return findings;
                        }
                        let mut f = element_finding(
                            FindingCode::IncompatibleElement,
                            format!(
                                "`{}` is a {}, but `{}` needs one of {}",
                                widget.name,
                                widget.element_class,
                                behavior.id,
                                join(&behavior.allowed_elements)
                            ),
                        );
                        f.widget_class = Some(widget.element_class.clone());
                        f.allowed = behavior.allowed_elements.iter().cloned().collect();
                        f
                    }
                };
                f.element = Some(name.to_owned());
                f.state = Some(state.name.clone());
                findings.push(f);
            }
        }
        findings
    }
}

fn join(set: &std::collections::BTreeSet<String>) -> String {
    set.iter().cloned().collect::<Vec<_>>().join(", ")
}

pub(super) fn unexecuted(binding: &Result<BoundStep, UnknownBehavior>) -> StepResult {
    match binding {
        Ok(bound) => StepResult {
            step: bound.step.clone(),
            behavior: Some(bound.behavior_id.clone()),
            element_arg: bound.element_arg.clone(),
            value_args: bound.value_args.clone(),
            status: StepStatus::Untested,
            finding: None,
        },
        Err(unknown) => StepResult {
            step: unknown.step.clone(),
            behavior: None,
            element_arg: None,
            value_args: Vec::new(),
            status: StepStatus::Untested,
            finding: None,
        },
    }
}

pub fn execute_scenario(scenario: &BoundScenario, model: &OntologyModel, proto: &Prototype) -> ScenarioResult {
    let mut walk = Walk::new(model, proto, &scenario.title);
    let mut failed = false;
    let steps = scenario
        .steps
        .iter()
        .enumerate()
        .map(|(i, binding)| {
            let mut result = unexecuted(binding);
            if !failed {
                match walk.step(i, binding).into_iter().next() {
                    Some(f) => {
                        failed = true;
                        result.status = StepStatus::Fail;
                        result.finding = Some(f);
                    }
                    None => result.status = StepStatus::Pass,
                }
            }
            result
        })
        .collect();
    ScenarioResult {
        title: scenario.title.clone(),
        steps,
        overall: if failed { ScenarioVerdict::Fail } else { ScenarioVerdict::Pass },
    }
}

/// Runs every scenario from a fresh cursor, in source order.
pub fn execute_story(story: &UserStory, model: &OntologyModel, proto: &Prototype) -> VerificationReport {
    let scenarios = bind_steps(story, model)
        .iter()
        .map(|scenario| execute_scenario(scenario, model, proto))
        .collect();
    VerificationReport::new(story.title.clone(), scenarios)
}
