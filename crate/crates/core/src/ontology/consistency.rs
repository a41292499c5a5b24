//! Structural consistency checks over an [`OntologyModel`].
//!
//! This is not a description-logic reasoner. It covers the fragment the model
//! can express: the class hierarchy, property and behavior references,
//! datatype ranges, equivalence groups and template ambiguity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use super::OntologyModel;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum FindingCode {
    Cycle,
    UnknownClass,
    UnknownPropertyTarget,
    EquivMismatch,
    AmbiguousTemplate,
    EmptyRoleset,
    BadDatatype,
}

impl FindingCode {
    pub const ALL: [FindingCode; 7] = [
        FindingCode::Cycle,
        FindingCode::UnknownClass,
        FindingCode::UnknownPropertyTarget,
        FindingCode::EquivMismatch,
        FindingCode::AmbiguousTemplate,
        FindingCode::EmptyRoleset,
        FindingCode::BadDatatype,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FindingCode::Cycle => "CYCLE",
            FindingCode::UnknownClass => "UNKNOWN_CLASS",
            FindingCode::UnknownPropertyTarget => "UNKNOWN_PROPERTY_TARGET",
            FindingCode::EquivMismatch => "EQUIV_MISMATCH",
            FindingCode::AmbiguousTemplate => "AMBIGUOUS_TEMPLATE",
            FindingCode::EmptyRoleset => "EMPTY_ROLESET",
            FindingCode::BadDatatype => "BAD_DATATYPE",
        }
    }
}

impl fmt::Display for FindingCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Locus {
    Class { id: String },
    DataProperty { id: String },
    Behavior { id: String },
    Template { behavior: String, index: usize },
    EquivalenceGroup { id: String },
}

impl fmt::Display for Locus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Locus::Class { id } => write!(f, "class {id}"),
            Locus::DataProperty { id } => write!(f, "data property {id}"),
            Locus::Behavior { id } => write!(f, "behavior {id}"),
            Locus::Template { behavior, index } => write!(f, "behavior {behavior} template #{index}"),
            Locus::EquivalenceGroup { id } => write!(f, "equivalence group {id}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub code: FindingCode,
    pub severity: Severity,
    pub locus: Locus,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}] {}: {}", self.code, self.severity_str(), self.locus, self.message)
    }
}

impl Finding {
    fn error(code: FindingCode, locus: Locus, message: String) -> Finding {
        Finding {
            code,
            severity: Severity::Error,
            locus,
            message,
        }
    }

    fn severity_str(&self) -> &'static str {
        match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ConsistencyReport {
    pub findings: Vec<Finding>,
}

impl ConsistencyReport {
    pub fn is_consistent(&self) -> bool {
        self.error_count() == 0
    }

    pub fn error_count(&self) -> usize {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
            .count()
    }

    pub fn codes(&self) -> BTreeSet<FindingCode> {
        self.findings.iter().map(|f| f.code).collect()
    }
}

pub fn check_consistency(model: &OntologyModel) -> ConsistencyReport {
    let mut findings = Vec::new();
    unknown_parents(model, &mut findings);
    cycles(model, &mut findings);
    property_targets(model, &mut findings);
    behavior_targets(model, &mut findings);
    empty_rolesets(model, &mut findings);
    equivalence_groups(model, &mut findings);
    ambiguous_templates(model, &mut findings);
    ConsistencyReport { findings }
}

fn unknown_parents(model: &OntologyModel, out: &mut Vec<Finding>) {
    for class in model.classes.values() {
        for parent in &class.parents {
            if !model.classes.contains_key(parent) {
                out.push(Finding::error(
                    FindingCode::UnknownClass,
                    Locus::Class { id: class.id.clone() },
                    format!("parent `{parent}` is not a declared class"),
                ));
            }
        }
    }
}

fn cycles(model: &OntologyModel, out: &mut Vec<Finding>) {
    for component in strongly_connected(model) {
        let self_loop = component.len() == 1
            && model.classes[&component[0]].parents.contains(&component[0]);
        if component.len() > 1 || self_loop {
            let mut members = component;
            members.sort();
            out.push(Finding::error(
                FindingCode::Cycle,
                Locus::Class { id: members[0].clone() },
                format!("inheritance cycle through {}", members.join(", ")),
            ));
        }
    }
}

// Tarjan's algorithm over declared parent edges.
fn strongly_connected(model: &OntologyModel) -> Vec<Vec<String>> {
    struct Tarjan<'a> {
        model: &'a OntologyModel,
        next: usize,
        index: BTreeMap<&'a str, usize>,
        low: BTreeMap<&'a str, usize>,
        stack: Vec<&'a str>,
        on_stack: BTreeSet<&'a str>,
        out: Vec<Vec<String>>,
    }

    impl<'a> Tarjan<'a> {
        fn visit(&mut self, v: &'a str) {
            self.index.insert(v, self.next);
            self.low.insert(v, self.next);
            self.next += 1;
            self.stack.push(v);
            self.on_stack.insert(v);

            for w in &self.model.classes[v].parents {
                let Some((w, _)) = self.model.classes.get_key_value(w) else {
                    continue;
                };
                let w = w.as_str();
                if !self.index.contains_key(w) {
                    self.visit(w);
                    let low = self.low[v].min(self.low[w]);
                    self.low.insert(v, low);
                } else if self.on_stack.contains(w) {
                    let low = self.low[v].min(self.index[w]);
                    self.low.insert(v, low);
                }
            }

            if self.low[v] == self.index[v] {
                let mut component = Vec::new();
                while let Some(w) = self.stack.pop() {
                    self.on_stack.remove(w);
                    component.push(w.to_owned());
                    if w == v {
                        break;
                    }
                }
                self.out.push(component);
            }
        }
    }

    let mut t = Tarjan {
        model,
        next: 0,
        index: BTreeMap::new(),
        low: BTreeMap::new(),
        stack: Vec::new(),
        on_stack: BTreeSet::new(),
        out: Vec::new(),
    };
    for id in model.classes.keys() {
        if !t.index.contains_key(id.as_str()) {
            t.visit(id);
        }
    }
    t.out
}

fn property_targets(model: &OntologyModel, out: &mut Vec<Finding>) {
    for property in model.data_properties.values() {
        for target in &property.applies_to {
            if !model.classes.contains_key(target) {
                out.push(Finding::error(
                    FindingCode::UnknownPropertyTarget,
                    Locus::DataProperty { id: property.id.clone() },
                    format!("applies to undeclared class `{target}`"),
                ));
            }
        }
        if !property.range.is_supported() {
            out.push(Finding::error(
                FindingCode::BadDatatype,
                Locus::DataProperty { id: property.id.clone() },
                format!(
                    "range `{}` is not one of String, Base64Binary, HexBinary, Integer, Boolean, Date",
                    property.range
                ),
            ));
        }
    }
}

fn behavior_targets(model: &OntologyModel, out: &mut Vec<Finding>) {
    for behavior in model.behaviors.values() {
        for class in &behavior.allowed_elements {
            if !model.classes.contains_key(class) {
                out.push(Finding::error(
                    FindingCode::UnknownClass,
                    Locus::Behavior { id: behavior.id.clone() },
                    format!("allowed element `{class}` is not a declared class"),
                ));
            }
        }
    }
}

fn empty_rolesets(model: &OntologyModel, out: &mut Vec<Finding>) {
    for behavior in model.behaviors.values() {
        if behavior.roles.is_empty() {
            out.push(Finding::error(
                FindingCode::EmptyRoleset,
                Locus::Behavior { id: behavior.id.clone() },
                "behavior has no clause roles".to_owned(),
            ));
        }
    }
}

fn equivalence_groups(model: &OntologyModel, out: &mut Vec<Finding>) {
    for (group, members) in model.equivalence_groups() {
        let Some((first, rest)) = members.split_first() else {
            continue;
        };
        let first_elements = model.satisfying_classes(&first.allowed_elements);
        let first_arity: BTreeSet<_> = first.templates.iter().map(|t| t.arity()).collect();
        let mut mismatch = |what: &str, other: &str| {
            out.push(Finding::error(
                FindingCode::EquivMismatch,
                Locus::EquivalenceGroup { id: group.to_owned() },
                format!("`{}` and `{other}` differ in {what}", first.id),
            ));
        };
        for other in rest {
            if other.roles != first.roles {
                mismatch("clause roles", &other.id);
            }
            if model.satisfying_classes(&other.allowed_elements) != first_elements {
                mismatch("allowed elements", &other.id);
            }
            let arity: BTreeSet<_> = other.templates.iter().map(|t| t.arity()).collect();
            if arity != first_arity {
                mismatch("placeholder arity", &other.id);
            }
        }
    }
}

fn ambiguous_templates(model: &OntologyModel, out: &mut Vec<Finding>) {
    let mut by_keys: BTreeMap<&[String], Vec<(&str, usize)>> = BTreeMap::new();
    for behavior in model.behaviors.values() {
        for (i, template) in behavior.templates.iter().enumerate() {
            by_keys
                .entry(template.match_keys())
                .or_default()
                .push((behavior.id.as_str(), i));
        }
    }
    for clash in by_keys.values().filter(|v| v.len() > 1) {
        let (behavior, index) = clash[0];
        let names: Vec<String> = clash.iter().map(|(b, i)| format!("{b}#{i}")).collect();
        out.push(Finding::error(
            FindingCode::AmbiguousTemplate,
            Locus::Template {
                behavior: behavior.to_owned(),
                index,
            },
            format!("templates {} accept the same step text", names.join(", ")),
        ));
    }
}
