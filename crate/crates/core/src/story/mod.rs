//! User stories: a title, one narrative and a list of scenarios made of
//! Given/When/Then steps.

mod binder;
mod parser;
mod writer;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::ontology::ClauseRole;

pub use binder::{bind_step, bind_steps, BoundScenario, BoundStep, UnknownBehavior};
pub use parser::parse_story;
pub use writer::serialize_story;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum StepKeyword {
    Given,
    When,
    Then,
    And,
}

impl StepKeyword {
    pub const ALL: [StepKeyword; 4] = [
        StepKeyword::Given,
        StepKeyword::When,
        StepKeyword::Then,
        StepKeyword::And,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            StepKeyword::Given => "Given",
            StepKeyword::When => "When",
            StepKeyword::Then => "Then",
            StepKeyword::And => "And",
        }
    }

    /// The role this keyword names directly, `None` for `And`.
    pub fn clause(self) -> Option<ClauseRole> {
        match self {
            StepKeyword::And => None,
            other => ClauseRole::from_keyword(other.as_str()),
        }
    }

    pub fn for_clause(role: ClauseRole) -> StepKeyword {
        match role {
            ClauseRole::Condition => StepKeyword::Given,
            ClauseRole::Event => StepKeyword::When,
            ClauseRole::Action => StepKeyword::Then,
        }
    }
}

impl fmt::Display for StepKeyword {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Narrative {
    pub role: String,
    pub feature: String,
    pub benefit: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub keyword: StepKeyword,
    /// Resolved role; an `And` step inherits the nearest preceding non-`And`.
    pub clause: ClauseRole,
    pub text: String,
    /// 1-based source line, 0 when the step was not read from a file.
    pub line: usize,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.keyword, self.text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Scenario {
    pub title: String,
    pub line: usize,
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UserStory {
    pub title: String,
    pub narrative: Narrative,
    pub scenarios: Vec<Scenario>,
}

impl UserStory {
    /// Copy with every source position zeroed, for structural comparison.
    pub fn without_positions(&self) -> UserStory {
        let mut story = self.clone();
        for scenario in &mut story.scenarios {
            scenario.line = 0;
            for step in &mut scenario.steps {
                step.line = 0;
            }
        }
        story
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl SyntaxError {
    pub(crate) fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        SyntaxError {
            line,
            column,
            message: message.into(),
        }
    }
}
