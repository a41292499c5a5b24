//! JSON form of an ontology (`*.onto.json`).

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{
    BehaviorDef, ClauseRole, DataPropertyDef, Datatype, ElementClass, OntologyError,
    OntologyModel, PhraseTemplate, SlotKind,
};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OntologyDocument {
    pub version: String,
    pub classes: Vec<ClassEntry>,
    #[serde(default)]
    pub data_properties: Vec<DataPropertyEntry>,
    #[serde(default)]
    pub behaviors: Vec<BehaviorEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassEntry {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub display_name: Option<String>,
    #[serde(default)]
    pub parents: Vec<String>,
    #[serde(default, rename = "abstract")]
    pub is_abstract: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataPropertyEntry {
    pub id: String,
    pub range: String,
    pub applies_to: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BehaviorEntry {
    pub id: String,
    pub templates: Vec<TemplateEntry>,
    pub roles: Vec<ClauseRole>,
    pub allowed_elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub equivalent_to: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TemplateEntry {
    pub pattern: String,
    #[serde(default)]
    pub slots: BTreeMap<String, SlotKind>,
}

fn default_display_name(id: &str) -> String {
    id.replace('_', " ")
}

fn malformed(at: String, message: impl Into<String>) -> OntologyError {
    OntologyError::Malformed {
        at,
        message: message.into(),
    }
}

fn check_id(section: &str, id: &str, seen: &mut BTreeSet<String>) -> Result<(), OntologyError> {
    if id.trim().is_empty() {
        return Err(malformed(section.to_owned(), "entry with empty id"));
    }
    if !seen.insert(id.to_owned()) {
        return Err(malformed(format!("{section}/{id}"), "duplicate id"));
    }
    Ok(())
}

impl OntologyDocument {
    pub fn into_model(self) -> Result<OntologyModel, OntologyError> {
        let mut seen = BTreeSet::new();
        let mut classes = BTreeMap::new();
        for entry in self.classes {
            check_id("classes", &entry.id, &mut seen)?;
            let display_name = entry
                .display_name
                .unwrap_or_else(|| default_display_name(&entry.id));
            classes.insert(
                entry.id.clone(),
                ElementClass {
                    id: entry.id,
                    display_name,
                    parents: entry.parents.into_iter().collect(),
                    is_abstract: entry.is_abstract,
                },
            );
        }

        let mut seen = BTreeSet::new();
        let mut data_properties = BTreeMap::new();
        for entry in self.data_properties {
            check_id("data_properties", &entry.id, &mut seen)?;
            data_properties.insert(
                entry.id.clone(),
                DataPropertyDef {
                    id: entry.id,
                    range: Datatype::parse(&entry.range),
                    applies_to: entry.applies_to.into_iter().collect(),
                },
            );
        }

        let mut seen = BTreeSet::new();
        let mut behaviors = BTreeMap::new();
        for entry in self.behaviors {
            check_id("behaviors", &entry.id, &mut seen)?;
            let at = format!("behaviors/{}", entry.id);
            if entry.templates.is_empty() {
                return Err(malformed(at, "behavior has no templates"));
            }
            if entry.allowed_elements.is_empty() {
                return Err(malformed(at, "behavior has no allowed elements"));
            }
            let templates = entry
                .templates
                .into_iter()
                .enumerate()
                .map(|(i, t)| {
                    PhraseTemplate::new(t.pattern, t.slots)
                        .map_err(|e| malformed(format!("{at}/templates/{i}"), e.to_string()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            behaviors.insert(
                entry.id.clone(),
                BehaviorDef {
                    id: entry.id,
                    templates,
                    roles: entry.roles.into_iter().collect(),
                    allowed_elements: entry.allowed_elements.into_iter().collect(),
                    equivalence_group: entry.equivalent_to,
                },
            );
        }

        Ok(OntologyModel {
            version: self.version,
            classes,
            data_properties,
            behaviors,
        })
    }

    pub fn from_model(model: &OntologyModel) -> OntologyDocument {
        OntologyDocument {
            version: model.version.clone(),
            classes: model
                .classes
                .values()
                .map(|c| ClassEntry {
                    id: c.id.clone(),
                    display_name: Some(c.display_name.clone()),
                    parents: c.parents.iter().cloned().collect(),
                    is_abstract: c.is_abstract,
                })
                .collect(),
            data_properties: model
                .data_properties
                .values()
                .map(|p| DataPropertyEntry {
                    id: p.id.clone(),
                    range: p.range.as_str().to_owned(),
                    applies_to: p.applies_to.iter().cloned().collect(),
                })
                .collect(),
            behaviors: model
                .behaviors
                .values()
                .map(|b| BehaviorEntry {
                    id: b.id.clone(),
                    templates: b
                        .templates
                        .iter()
                        .map(|t| TemplateEntry {
                            pattern: t.pattern().to_owned(),
                            slots: t.slots().clone(),
                        })
                        .collect(),
                    roles: b.roles.iter().copied().collect(),
                    allowed_elements: b.allowed_elements.iter().cloned().collect(),
                    equivalent_to: b.equivalence_group.clone(),
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str) -> Result<OntologyModel, OntologyError> {
        OntologyModel::parse_unchecked(src)
    }

    #[test]
    fn duplicate_class_id_is_malformed() {
        let err = parse(r#"{"version":"0","classes":[{"id":"A"},{"id":"A"}]}"#).unwrap_err();
        assert!(matches!(err, OntologyError::Malformed { ref at, .. } if at == "classes/A"), "{err}");
    }

    #[test]
    fn unknown_role_is_a_syntax_error() {
        let err = parse(
            r#"{"version":"0","classes":[{"id":"A"}],"behaviors":[{"id":"b",
            "templates":[{"pattern":"x"}],"roles":["Outcome"],"allowed_elements":["A"]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, OntologyError::Syntax { .. }), "{err}");
    }

    #[test]
    fn bad_template_names_its_location() {
        let err = parse(
            r#"{"version":"0","classes":[{"id":"A"}],"behaviors":[{"id":"b",
            "templates":[{"pattern":"say \"hi\""}],"roles":["Event"],"allowed_elements":["A"]}]}"#,
        )
        .unwrap_err();
        match err {
            OntologyError::Malformed { at, .. } => assert_eq!(at, "behaviors/b/templates/0"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_fields_are_rejected() {
        assert!(matches!(
            parse(r#"{"version":"0","classes":[],"extra":1}"#),
            Err(OntologyError::Syntax { .. })
        ));
    }

    #[test]
    fn empty_collections_are_malformed() {
        let no_templates = r#"{"version":"0","classes":[{"id":"A"}],"behaviors":[{"id":"b",
            "templates":[],"roles":["Event"],"allowed_elements":["A"]}]}"#;
        let no_elements = r#"{"version":"0","classes":[{"id":"A"}],"behaviors":[{"id":"b",
            "templates":[{"pattern":"x"}],"roles":["Event"],"allowed_elements":[]}]}"#;
        assert!(matches!(parse(no_templates), Err(OntologyError::Malformed { .. })));
        assert!(matches!(parse(no_elements), Err(OntologyError::Malformed { .. })));
    }
}
