//! UI prototypes: a presentation (states holding typed widgets) and a dialog
//! (transitions between states, each labeled with the scenario that drives
//! it). Stored as `*.proto.json`.
//!
//! State and widget names are matched case-insensitively; scenario titles on
//! transitions are matched exactly.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use base64::Engine;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ontology::{Datatype, OntologyModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Platform {
    Web,
    Mobile,
    Desktop,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PropertyValue {
    Boolean(bool),
    Integer(i64),
    Text(String),
}

impl PropertyValue {
    pub fn as_text(&self) -> Option<&str> {
        match self {
            PropertyValue::Text(s) => Some(s),
            _ => None,
        }
    }

    pub fn conforms_to(&self, datatype: &Datatype) -> bool {
        match (datatype, self) {
            (Datatype::String, PropertyValue::Text(_)) => true,
            (Datatype::Base64Binary, PropertyValue::Text(s)) => {
                base64::engine::general_purpose::STANDARD.decode(s).is_ok()
            }
            (Datatype::HexBinary, PropertyValue::Text(s)) => {
                s.len() % 2 == 0 && s.bytes().all(|b| b.is_ascii_hexdigit())
            }
            (Datatype::Integer, PropertyValue::Integer(_)) => true,
            (Datatype::Integer, PropertyValue::Text(s)) => s.trim().parse::<i64>().is_ok(),
            (Datatype::Boolean, PropertyValue::Boolean(_)) => true,
            (Datatype::Date, PropertyValue::Text(s)) => {
                chrono::NaiveDate::parse_from_str(s, "%Y-%m-%d").is_ok()
            }
            _ => false,
        }
    }
}

impl fmt::Display for PropertyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PropertyValue::Boolean(b) => write!(f, "{b}"),
            PropertyValue::Integer(i) => write!(f, "{i}"),
            PropertyValue::Text(s) => write!(f, "{s:?}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Widget {
    pub name: String,
    #[serde(rename = "class")]
    pub element_class: String,
    #[serde(default)]
    pub properties: BTreeMap<String, PropertyValue>,
}

impl Widget {
    pub fn text(&self) -> Option<&str> {
        self.properties.get("text").and_then(PropertyValue::as_text)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct State {
    pub name: String,
    #[serde(default)]
    pub widgets: Vec<Widget>,
}

impl State {
    pub fn widget(&self, name: &str) -> Option<&Widget> {
        find_widget(self, name)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transition {
    #[serde(rename = "scenario")]
    pub scenario_title: String,
    pub source: String,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Prototype {
    pub name: String,
    pub platforms: BTreeSet<Platform>,
    pub initial_state: String,
    pub states: Vec<State>,
    #[serde(default)]
    pub transitions: Vec<Transition>,
}

pub(crate) fn same_name(a: &str, b: &str) -> bool {
    a == b || a.to_lowercase() == b.to_lowercase()
}

/// Case-insensitive exact lookup. An empty name never matches.
pub fn find_widget<'a>(state: &'a State, name: &str) -> Option<&'a Widget> {
    if name.is_empty() {
        return None;
    }
    state.widgets.iter().find(|w| same_name(&w.name, name))
}

pub fn find_transition<'a>(proto: &'a Prototype, source: &str, scenario_title: &str) -> Option<&'a Transition> {
    proto
        .transitions
        .iter()
        .find(|t| same_name(&t.source, source) && t.scenario_title == scenario_title)
}

impl Prototype {
    pub fn state(&self, name: &str) -> Option<&State> {
        if name.is_empty() {
            return None;
        }
        self.states.iter().find(|s| same_name(&s.name, name))
    }

    pub fn initial(&self) -> Option<&State> {
        self.state(&self.initial_state)
    }

    /// States no chain of transitions reaches from the initial state, in
    /// declaration order.
    pub fn unreachable_states(&self) -> Vec<&str> {
        let mut reached: BTreeSet<String> = BTreeSet::new();
        let mut queue = VecDeque::new();
        if let Some(initial) = self.initial() {
            queue.push_back(initial.name.to_lowercase());
        }
        while let Some(name) = queue.pop_front() {
            if !reached.insert(name.clone()) {
                continue;
            }
            for t in &self.transitions {
                if t.source.to_lowercase() == name {
                    queue.push_back(t.target.to_lowercase());
                }
            }
        }
        self.states
            .iter()
            .filter(|s| !reached.contains(&s.name.to_lowercase()))
            .map(|s| s.name.as_str())
            .collect()
    }

    /// Non-fatal notes about an otherwise valid prototype.
    pub fn warnings(&self) -> Vec<String> {
        self.unreachable_states()
            .into_iter()
            .map(|s| format!("state `{s}` is unreachable from initial state `{}`", self.initial_state))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("prototype serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum IssueCode {
    NoPlatform,
    EmptyName,
    DuplicateState,
    DuplicateWidget,
    UnknownClass,
    AbstractClass,
    UnknownProperty,
    PropertyNotApplicable,
    BadDatatype,
    UnknownInitialState,
    DanglingTransition,
    DuplicateTransition,
}

impl fmt::Display for IssueCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("code serializes");
        f.write_str(s.as_str().unwrap_or_default())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Issue {
    pub code: IssueCode,
    pub at: String,
    pub message: String,
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at {}: {}", self.code, self.at, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid prototype: {}", .issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
pub struct ValidationError {
    pub issues: Vec<Issue>,
}

impl ValidationError {
    pub fn codes(&self) -> BTreeSet<IssueCode> {
        self.issues.iter().map(|i| i.code).collect()
    }
}

#[derive(Debug, Error)]
pub enum PrototypeError {
    #[error("syntax error at {line}:{column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Validation(#[from] ValidationError),
}

pub fn load_prototype(source: &str, model: &OntologyModel) -> Result<Prototype, PrototypeError> {
    let proto: Prototype = serde_json::from_str(source).map_err(|e| PrototypeError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    validate(&proto, model)?;
    Ok(proto)
}

/// Checks every prototype invariant against the ontology, collecting all
/// issues rather than stopping at the first.
pub fn validate(proto: &Prototype, model: &OntologyModel) -> Result<(), ValidationError> {
    let mut issues = Vec::new();
    let mut issue = |code, at: String, message: String| issues.push(Issue { code, at, message });

    if proto.platforms.is_empty() {
        issue(IssueCode::NoPlatform, "platforms".into(), "a prototype targets at least one platform".into());
    }

    let mut state_names = BTreeSet::new();
    for state in &proto.states {
        let at = format!("states/{}", state.name);
        if state.name.trim().is_empty() {
            issue(IssueCode::EmptyName, "states".into(), "state with empty name".into());
        } else if !state_names.insert(state.name.to_lowercase()) {
            issue(IssueCode::DuplicateState, at.clone(), "state name is declared twice".into());
        }

        let mut widget_names = BTreeSet::new();
        for widget in &state.widgets {
            let at = format!("{at}/{}", widget.name);
            if widget.name.trim().is_empty() {
                issue(IssueCode::EmptyName, at.clone(), "widget with empty name".into());
            } else if !widget_names.insert(widget.name.to_lowercase()) {
                issue(IssueCode::DuplicateWidget, at.clone(), "widget name is not unique in its state".into());
            }

            let class = &widget.element_class;
            let Ok(closure) = model.subclass_closure(class) else {
                issue(IssueCode::UnknownClass, at.clone(), format!("`{class}` is not a declared element class"));
                continue;
            };
            if !model.is_concrete(class) {
                issue(IssueCode::AbstractClass, at.clone(), format!("`{class}` is abstract and cannot be instantiated"));
            }
            for (key, value) in &widget.properties {
                let Some(property) = model.data_properties.get(key) else {
                    issue(IssueCode::UnknownProperty, at.clone(), format!("`{key}` is not a declared data property"));
                    continue;
                };
                if property.applies_to.is_disjoint(&closure) {
                    issue(
                        IssueCode::PropertyNotApplicable,
                        at.clone(),
                        format!("`{key}` does not apply to `{class}`"),
                    );
                }
                if !value.conforms_to(&property.range) {
                    issue(
                        IssueCode::BadDatatype,
                        at.clone(),
                        format!("`{key}` = {value} is not a valid {}", property.range),
                    );
                }
            }
        }
    }

    if proto.state(&proto.initial_state).is_none() {
        issue(
            IssueCode::UnknownInitialState,
            "initial_state".into(),
            format!("`{}` is not a declared state", proto.initial_state),
        );
    }

    let mut labels = BTreeSet::new();
    for (i, t) in proto.transitions.iter().enumerate() {
        let at = format!("transitions/{i}");
        for endpoint in [&t.source, &t.target] {
            if proto.state(endpoint).is_none() {
                issue(IssueCode::DanglingTransition, at.clone(), format!("`{endpoint}` is not a declared state"));
            }
        }
        if !labels.insert((t.source.to_lowercase(), t.scenario_title.clone())) {
            issue(
                IssueCode::DuplicateTransition,
                at,
                format!("`{}` already has a transition for scenario `{}`", t.source, t.scenario_title),
            );
        }
    }

    if issues.is_empty() {
        Ok(())
    } else {
        Err(ValidationError { issues })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::default_ontology;

    const FLIGHT: &str = include_str!("../fixtures/flight_search.proto.json");

    fn flight() -> Prototype {
        load_prototype(FLIGHT, &default_ontology()).unwrap()
    }

    fn with_widget(class: &str, properties: serde_json::Value) -> String {
        serde_json::json!({
            "name": "p", "platforms": ["Web"], "initial_state": "S",
            "states": [{"name": "S", "widgets": [{"name": "w", "class": class, "properties": properties}]}]
        })
        .to_string()
    }

    fn issue_codes(src: &str) -> BTreeSet<IssueCode> {
        match load_prototype(src, &default_ontology()) {
            Err(PrototypeError::Validation(e)) => e.codes(),
            other => panic!("expected validation error, got {other:?}"),
        }
    }

    #[test]
    fn flight_fixture_loads() {
        let p = flight();
        assert_eq!(p.states.len(), 2);
        assert_eq!(p.initial_state, "Find Flights");
        assert!(p.unreachable_states().is_empty());
    }

    #[test]
    fn widget_lookup_is_case_insensitive() {
        let p = flight();
        let state = p.state("find flights").unwrap();
        assert_eq!(find_widget(state, "Search").unwrap().element_class, "Button");
        assert_eq!(find_widget(state, "search"), find_widget(state, "Search"));
        assert!(find_widget(state, "").is_none());
        assert!(find_widget(state, "Departure").is_none());
    }

    #[test]
    fn transition_lookup() {
        let p = flight();
        let t = find_transition(&p, "Find Flights", "One-Way Tickets Search").unwrap();
        assert_eq!(t.target, "Choose Flights");
        assert!(find_transition(&p, "Choose Flights", "One-Way Tickets Search").is_none());
    }

    #[test]
    fn abstract_widget_is_rejected() {
        assert_eq!(issue_codes(&with_widget("Input_Control", serde_json::json!({}))), BTreeSet::from([IssueCode::AbstractClass]));
    }

    #[test]
    fn unknown_widget_class() {
        assert_eq!(issue_codes(&with_widget("Slider", serde_json::json!({}))), BTreeSet::from([IssueCode::UnknownClass]));
    }

    #[test]
    fn hex_symbol_must_be_hex() {
        let src = with_widget("Icon", serde_json::json!({"symbol": "GG"}));
        assert_eq!(issue_codes(&src), BTreeSet::from([IssueCode::BadDatatype]));
        let odd = with_widget("Icon", serde_json::json!({"symbol": "ABC"}));
        assert_eq!(issue_codes(&odd), BTreeSet::from([IssueCode::BadDatatype]));
        let ok = with_widget("Icon", serde_json::json!({"symbol": "E2AD"}));
        assert!(load_prototype(&ok, &default_ontology()).is_ok());
    }

    #[test]
    fn base64_image() {
        let ok = with_widget("Image_Carousel", serde_json::json!({"image": "aGVsbG8="}));
        assert!(load_prototype(&ok, &default_ontology()).is_ok());
        let bad = with_widget("Image_Carousel", serde_json::json!({"image": "not base64!"}));
        assert_eq!(issue_codes(&bad), BTreeSet::from([IssueCode::BadDatatype]));
    }

    #[test]
    fn property_must_apply_to_class() {
        let src = with_widget("Button", serde_json::json!({"message": "hi"}));
        assert_eq!(issue_codes(&src), BTreeSet::from([IssueCode::PropertyNotApplicable]));
        // `value` is declared on the abstract parent
        let inherited = with_widget("Text_Field", serde_json::json!({"value": "x"}));
        assert!(load_prototype(&inherited, &default_ontology()).is_ok());
        let unknown = with_widget("Button", serde_json::json!({"colour": "red"}));
        assert_eq!(issue_codes(&unknown), BTreeSet::from([IssueCode::UnknownProperty]));
    }

    #[test]
    fn duplicate_transition_is_rejected() {
        let mut p = flight();
        p.transitions.push(p.transitions[0].clone());
        let err = validate(&p, &default_ontology()).unwrap_err();
        assert_eq!(err.codes(), BTreeSet::from([IssueCode::DuplicateTransition]));
    }

    #[test]
    fn dangling_endpoints_and_initial_state() {
        let mut p = flight();
        p.transitions[0].target = "Checkout".into();
        p.initial_state = "Home".into();
        p.platforms.clear();
        let err = validate(&p, &default_ontology()).unwrap_err();
        assert_eq!(
            err.codes(),
            BTreeSet::from([IssueCode::DanglingTransition, IssueCode::UnknownInitialState, IssueCode::NoPlatform])
        );
    }

    #[test]
    fn duplicate_widget_names_fold_case() {
        let mut p = flight();
        let mut w = p.states[0].widgets[0].clone();
        w.name = w.name.to_uppercase();
        p.states[0].widgets.push(w);
        assert_eq!(validate(&p, &default_ontology()).unwrap_err().codes(), BTreeSet::from([IssueCode::DuplicateWidget]));
    }

    #[test]
    fn unreachable_state_is_a_warning() {
        let mut p = flight();
        p.states.push(State { name: "Orphan".into(), widgets: vec![] });
        assert!(validate(&p, &default_ontology()).is_ok());
        assert_eq!(p.unreachable_states(), vec!["Orphan"]);
        assert_eq!(p.warnings().len(), 1);
    }

    #[test]
    fn syntax_error_position() {
        match load_prototype("{\n\"name\": }", &default_ontology()) {
            Err(PrototypeError::Syntax { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn typed_values() {
        assert!(PropertyValue::Integer(2).conforms_to(&Datatype::Integer));
        assert!(PropertyValue::Text("2".into()).conforms_to(&Datatype::Integer));
        assert!(!PropertyValue::Text("two".into()).conforms_to(&Datatype::Integer));
        assert!(PropertyValue::Boolean(true).conforms_to(&Datatype::Boolean));
        assert!(PropertyValue::Text("2016-12-15".into()).conforms_to(&Datatype::Date));
        assert!(!PropertyValue::Text("12/15/2016".into()).conforms_to(&Datatype::Date));
        assert!(!PropertyValue::Text("x".into()).conforms_to(&Datatype::Unsupported("Float".into())));
    }
}
