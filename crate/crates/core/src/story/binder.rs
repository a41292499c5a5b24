//! Binds parsed steps to ontology behaviors.

use serde::Serialize;
use thiserror::Error;

use super::{Step, UserStory};
use crate::ontology::OntologyModel;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundStep {
    pub step: Step,
    pub behavior_id: String,
    pub template_index: usize,
    pub element_arg: Option<String>,
    pub value_args: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[error("line {}: no behavior matches `{}`", .step.line, .step.text)]
pub struct UnknownBehavior {
    pub step: Step,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundScenario {
    pub title: String,
    pub steps: Vec<Result<BoundStep, UnknownBehavior>>,
}

impl BoundScenario {
    pub fn unknown(&self) -> impl Iterator<Item = &UnknownBehavior> {
        self.steps.iter().filter_map(|s| s.as_ref().err())
    }
}

/// Roles are not checked here; a bound step may still sit under a clause
/// its behavior does not allow.
pub fn bind_step(step: &Step, model: &OntologyModel) -> Result<BoundStep, UnknownBehavior> {
    match model.match_step(&step.text) {
        Some((behavior, template_index, captures)) => Ok(BoundStep {
            step: step.clone(),
            behavior_id: behavior.id.clone(),
            template_index,
            element_arg: captures.element,
            value_args: captures.values,
        }),
        None => Err(UnknownBehavior { step: step.clone() }),
    }
}

pub fn bind_steps(story: &UserStory, model: &OntologyModel) -> Vec<BoundScenario> {
    story
        .scenarios
        .iter()
        .map(|scenario| BoundScenario {
            title: scenario.title.clone(),
            steps: scenario.steps.iter().map(|s| bind_step(s, model)).collect(),
        })
        .collect()
}
