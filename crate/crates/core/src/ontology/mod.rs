//! The behavior ontology: interaction-element classes, data properties and
//! behaviors, plus the queries the binder and verifier need.

mod consistency;
mod document;
mod template;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use consistency::{check_consistency, ConsistencyReport, Finding, FindingCode, Locus, Severity};
pub use document::{BehaviorEntry, ClassEntry, DataPropertyEntry, OntologyDocument, TemplateEntry};
pub use template::{Arity, Captures, PhraseTemplate, SlotKind, TemplateError};

/// Ontology shipped with the crate.
pub const DEFAULT_ONTOLOGY: &str = include_str!("../../fixtures/default.onto.json");

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ElementClass {
    pub id: String,
    pub display_name: String,
    pub parents: BTreeSet<String>,
    pub is_abstract: bool,
}

/// Range of a data property. Unrecognized names are kept so the consistency
/// checker can report them instead of failing the parse.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Datatype {
    String,
    Base64Binary,
    HexBinary,
    Integer,
    Boolean,
    Date,
    Unsupported(String),
}

impl Datatype {
    pub fn parse(name: &str) -> Datatype {
        match name {
            "String" => Datatype::String,
            "Base64Binary" => Datatype::Base64Binary,
            "HexBinary" => Datatype::HexBinary,
            "Integer" => Datatype::Integer,
            "Boolean" => Datatype::Boolean,
            "Date" => Datatype::Date,
            other => Datatype::Unsupported(other.to_owned()),
        }
    }

    pub fn as_str(&self) -> &str {
        match self {
            Datatype::String => "String",
            Datatype::Base64Binary => "Base64Binary",
            Datatype::HexBinary => "HexBinary",
            Datatype::Integer => "Integer",
            Datatype::Boolean => "Boolean",
            Datatype::Date => "Date",
            Datatype::Unsupported(name) => name,
        }
    }

    pub fn is_supported(&self) -> bool {
        !matches!(self, Datatype::Unsupported(_))
    }
}

impl fmt::Display for Datatype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataPropertyDef {
    pub id: String,
    pub range: Datatype,
    pub applies_to: BTreeSet<String>,
}

/// The part of a dialog transition a step plays. `Given`, `When` and `Then`
/// are the fixed surface keywords for the three roles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClauseRole {
    Condition,
    Event,
    Action,
}

impl ClauseRole {
    pub const ALL: [ClauseRole; 3] = [ClauseRole::Condition, ClauseRole::Event, ClauseRole::Action];

    pub fn keyword(self) -> &'static str {
        match self {
            ClauseRole::Condition => "Given",
            ClauseRole::Event => "When",
            ClauseRole::Action => "Then",
        }
    }

    pub fn from_keyword(keyword: &str) -> Option<ClauseRole> {
        ClauseRole::ALL.into_iter().find(|r| r.keyword() == keyword)
    }
}

impl fmt::Display for ClauseRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for ClauseRole {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Condition" => Ok(ClauseRole::Condition),
            "Event" => Ok(ClauseRole::Event),
            "Action" => Ok(ClauseRole::Action),
            other => Err(format!("unknown clause role `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BehaviorDef {
    pub id: String,
    pub templates: Vec<PhraseTemplate>,
    pub roles: BTreeSet<ClauseRole>,
    pub allowed_elements: BTreeSet<String>,
    pub equivalence_group: Option<String>,
}

impl BehaviorDef {
    pub fn allows_role(&self, role: ClauseRole) -> bool {
        self.roles.contains(&role)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OntologyModel {
    pub version: String,
    pub classes: BTreeMap<String, ElementClass>,
    pub data_properties: BTreeMap<String, DataPropertyDef>,
    pub behaviors: BTreeMap<String, BehaviorDef>,
}

#[derive(Debug, Error)]
pub enum OntologyError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("malformed ontology at {at}: {message}")]
    Malformed { at: String, message: String },
    #[error("ontology is inconsistent ({} error(s))", .0.error_count())]
    Consistency(ConsistencyReport),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LookupError {
    #[error("unknown element class `{0}`")]
    UnknownClass(String),
    #[error("unknown behavior `{0}`")]
    UnknownBehavior(String),
}

/// Parses and checks an ontology document. Any error-severity finding makes
/// this fail with [`OntologyError::Consistency`].
pub fn load_ontology(source: &str) -> Result<OntologyModel, OntologyError> {
    let model = OntologyModel::parse_unchecked(source)?;
    let report = check_consistency(&model);
    if report.is_consistent() {
        Ok(model)
    } else {
        Err(OntologyError::Consistency(report))
    }
}

/// The shipped default ontology.
pub fn default_ontology() -> OntologyModel {
    load_ontology(DEFAULT_ONTOLOGY).expect("shipped ontology is consistent")
}

impl OntologyModel {
    /// Parses a document into a model without running the consistency
    /// checker. Cross-references may dangle.
    pub fn parse_unchecked(source: &str) -> Result<OntologyModel, OntologyError> {
        let doc: OntologyDocument =
            serde_json::from_str(source).map_err(|e| OntologyError::Syntax {
                line: e.line(),
                column: e.column(),
                message: e.to_string(),
            })?;
        doc.into_model()
    }

    pub fn to_document(&self) -> OntologyDocument {
        OntologyDocument::from_model(self)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("document serializes")
    }

    pub fn class(&self, id: &str) -> Result<&ElementClass, LookupError> {
        self.classes
            .get(id)
            .ok_or_else(|| LookupError::UnknownClass(id.to_owned()))
    }

    pub fn behavior(&self, id: &str) -> Result<&BehaviorDef, LookupError> {
        self.behaviors
            .get(id)
            .ok_or_else(|| LookupError::UnknownBehavior(id.to_owned()))
    }

    /// The class itself plus all of its ancestors.
    pub fn subclass_closure(&self, class_id: &str) -> Result<BTreeSet<String>, LookupError> {
        self.class(class_id)?;
        Ok(self.ancestors_or_self(class_id))
    }

    // Undeclared parents are included but not expanded; cycles terminate.
    fn ancestors_or_self(&self, class_id: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut pending = vec![class_id.to_owned()];
        while let Some(id) = pending.pop() {
            if !seen.insert(id.clone()) {
                continue;
            }
            if let Some(class) = self.classes.get(&id) {
                pending.extend(class.parents.iter().filter(|p| !seen.contains(*p)).cloned());
            }
        }
        seen
    }

    pub fn is_subclass_of(&self, class_id: &str, ancestor: &str) -> bool {
        self.ancestors_or_self(class_id).contains(ancestor)
    }

    /// True iff the class, or one of its ancestors, is in the behavior's
    /// allowed set.
    pub fn element_satisfies(&self, widget_class: &str, behavior_id: &str) -> Result<bool, LookupError> {
        let behavior = self.behavior(behavior_id)?;
        let closure = self.subclass_closure(widget_class)?;
        Ok(closure.iter().any(|c| behavior.allowed_elements.contains(c)))
    }

    /// Every declared class that satisfies the given allowed set.
    pub fn satisfying_classes(&self, allowed: &BTreeSet<String>) -> BTreeSet<String> {
        self.classes
            .keys()
            .filter(|id| self.ancestors_or_self(id).iter().any(|c| allowed.contains(c)))
            .cloned()
            .collect()
    }

    pub fn equivalence_groups(&self) -> BTreeMap<&str, Vec<&BehaviorDef>> {
        let mut groups: BTreeMap<&str, Vec<&BehaviorDef>> = BTreeMap::new();
        for behavior in self.behaviors.values() {
            if let Some(group) = &behavior.equivalence_group {
                groups.entry(group.as_str()).or_default().push(behavior);
            }
        }
        groups
    }

    /// Other behaviors in the same equivalence group, excluding `behavior_id`.
    pub fn equivalents(&self, behavior_id: &str) -> Vec<&BehaviorDef> {
        let Some(group) = self
            .behaviors
            .get(behavior_id)
            .and_then(|b| b.equivalence_group.as_deref())
        else {
            return Vec::new();
        };
        self.behaviors
            .values()
            .filter(|b| b.id != behavior_id && b.equivalence_group.as_deref() == Some(group))
            .collect()
    }

    /// Whether `behavior_id` is `target` or an equivalent of it.
    pub fn behaves_as(&self, behavior_id: &str, target: &str) -> bool {
        behavior_id == target || self.equivalents(target).iter().any(|b| b.id == behavior_id)
    }

    /// Finds the first template (in behavior id order) matching the step
    /// text. On a consistent ontology there is at most one.
    pub fn match_step(&self, text: &str) -> Option<(&BehaviorDef, usize, Captures)> {
        self.behaviors.values().find_map(|behavior| {
            behavior
                .templates
                .iter()
                .enumerate()
                .find_map(|(i, t)| t.match_text(text).map(|c| (behavior, i, c)))
        })
    }

    pub fn is_concrete(&self, class_id: &str) -> bool {
        self.classes.get(class_id).is_some_and(|c| !c.is_abstract)
    }
}
