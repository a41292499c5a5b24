use super::*;
use crate::ontology::default_ontology;
use crate::prototype::load_prototype;
use crate::story::parse_story;

const STORY: &str = include_str!("../../fixtures/flight_search.story");
const PROTO: &str = include_str!("../../fixtures/flight_search.proto.json");
const TEXT_FIELD_PROTO: &str = include_str!("../../fixtures/mutations/flight_search_text_field.proto.json");
const MISSING_STATE: &str = include_str!("../../fixtures/mutations/flight_search_missing_state.story");

use StepStatus::{Fail, Pass, Untested};

fn run(story: &str, proto: &str) -> VerificationReport {
    let model = default_ontology();
    let proto = load_prototype(proto, &model).unwrap();
    execute_story(&parse_story(story).unwrap(), &model, &proto)
}

fn replace_step(old: &str, new: &str) -> String {
    assert!(STORY.contains(old));
    STORY.replace(old, new)
}

#[test]
fn flight_story_lints_clean() {
    let model = default_ontology();
    let story = parse_story(STORY).unwrap();
    assert!(lint(&story, &model).is_empty());
    let proto = load_prototype(PROTO, &model).unwrap();
    assert!(lint_against_prototype(&story, &model, &proto).is_empty());
}

#[test]
fn outcome_under_given_is_a_clause_mismatch() {
    let story = parse_story(include_str!("../../fixtures/mutations/clause_mismatch.story")).unwrap();
    let findings = lint(&story, &default_ontology());
    assert_eq!(findings.len(), 1);
    assert_eq!(findings[0].code, FindingCode::ClauseMismatch);
    assert_eq!(findings[0].behavior.as_deref(), Some("willBeDisplayed"));
    assert_eq!(findings[0].locus.step, 1);
}

#[test]
fn unknown_step_is_reported_with_its_position() {
    let src = replace_step(r#"When I choose "One way""#, r#"When I frobnicate "X""#);
    let findings = lint(&parse_story(&src).unwrap(), &default_ontology());
    assert_eq!(findings.len(), 1);
    assert_eq!(findings[0].code, FindingCode::UnknownBehavior);
    assert_eq!((findings[0].locus.step, findings[0].locus.line), (2, 8));
}

#[test]
fn retyped_search_button_is_incompatible() {
    let model = default_ontology();
    let proto = load_prototype(TEXT_FIELD_PROTO, &model).unwrap();
    let findings = lint_against_prototype(&parse_story(STORY).unwrap(), &model, &proto);
    assert_eq!(findings.len(), 1);
    let f = &findings[0];
    assert_eq!(f.code, FindingCode::IncompatibleElement);
    assert_eq!(f.locus.step, 7);
    assert_eq!(f.widget_class.as_deref(), Some("Text_Field"));
    assert_eq!(f.allowed, vec!["Button", "Link", "Menu", "Menu_Item"]);
}

#[test]
fn absent_widget() {
    let model = default_ontology();
    let proto = load_prototype(PROTO, &model).unwrap();
    let src = replace_step(r#"referring to "Depart""#, r#"referring to "Departure""#);
    let findings = lint_against_prototype(&parse_story(&src).unwrap(), &model, &proto);
    assert_eq!(findings.len(), 1);
    assert_eq!(findings[0].code, FindingCode::WidgetNotFound);
    assert_eq!(findings[0].element.as_deref(), Some("Departure"));
    assert_eq!(findings[0].state.as_deref(), Some("Find Flights"));
}

#[test]
fn flight_scenario_passes() {
    let report = run(STORY, PROTO);
    assert_eq!(report.scenarios.len(), 1);
    let result = &report.scenarios[0];
    assert_eq!(result.statuses(), vec![Pass; 8]);
    assert_eq!(result.overall, ScenarioVerdict::Pass);
    assert_eq!(report.counts, Counts { pass: 8, fail: 0, untested: 0 });
    assert!(report.passed());
}

#[test]
fn text_field_mutation_fails_at_click() {
    let report = run(STORY, TEXT_FIELD_PROTO);
    let result = &report.scenarios[0];
    assert_eq!(result.statuses(), vec![Pass, Pass, Pass, Pass, Pass, Pass, Fail, Untested]);
    assert_eq!(result.failure().unwrap().code, FindingCode::IncompatibleElement);
    assert_eq!(result.overall, ScenarioVerdict::Fail);
    assert!(result.steps[7].finding.is_none());
}

#[test]
fn missing_state_fails_first_step() {
    let report = run(MISSING_STATE, PROTO);
    let result = &report.scenarios[0];
    let mut expected = vec![Fail];
    expected.extend([Untested; 7]);
    assert_eq!(result.statuses(), expected);
    assert_eq!(result.failure().unwrap().code, FindingCode::StateNotFound);
    assert_eq!(report.counts, Counts { pass: 0, fail: 1, untested: 7 });
}

#[test]
fn scenario_without_transition() {
    let src = STORY.replace("Scenario: One-Way Tickets Search", "Scenario: Round Trip Search");
    let result = &run(&src, PROTO).scenarios[0];
    assert_eq!(result.statuses()[..8], [Pass, Pass, Pass, Pass, Pass, Pass, Pass, Fail]);
    let f = result.failure().unwrap();
    assert_eq!(f.code, FindingCode::TransitionNotFound);
    assert_eq!(f.state.as_deref(), Some("Find Flights"));

    // not reported by lint: it is a dialog-level problem
    let model = default_ontology();
    let proto = load_prototype(PROTO, &model).unwrap();
    assert!(lint_against_prototype(&parse_story(&src).unwrap(), &model, &proto).is_empty());
}

#[test]
fn expected_text_must_be_a_text_widget() {
    let src = replace_step(
        r#"Then will be displayed "Choose Flights""#,
        r#"Then will be displayed "Flight list""#,
    );
    let result = &run(&src, PROTO).scenarios[0];
    assert_eq!(result.failure().unwrap().code, FindingCode::WidgetNotFound);

    // "Search" exists only before the transition
    let src = replace_step(r#"Then will be displayed "Choose Flights""#, r#"Then will be displayed "Search""#);
    assert_eq!(run(&src, PROTO).scenarios[0].failure().unwrap().code, FindingCode::WidgetNotFound);
}

#[test]
fn expected_text_on_wrong_class_is_incompatible() {
    let proto = PROTO.replace(
        r#""name": "Choose Flights",
          "class": "Text""#,
        r#""name": "Choose Flights",
          "class": "Label""#,
    );
    assert_ne!(proto, PROTO);
    let result = &run(STORY, &proto).scenarios[0];
    let f = result.failure().unwrap();
    assert_eq!(f.code, FindingCode::IncompatibleElement);
    assert_eq!(f.locus.step, 8);
}

#[test]
fn scenarios_are_isolated() {
    let second = "\nScenario: One-Way Tickets Search\nGiven I go to \"Find Flights\"\nWhen I click on \"Search\"\n\
        Then will be displayed \"Choose Flights\"\n";
    let src = format!("{MISSING_STATE}{second}");
    let report = run(&src, PROTO);
    assert_eq!(report.scenarios.len(), 2);
    assert_eq!(report.scenarios[0].overall, ScenarioVerdict::Fail);
    assert_eq!(report.scenarios[1].statuses(), vec![Pass; 3]);
    assert_eq!(report.counts, Counts { pass: 3, fail: 1, untested: 7 });
}

#[test]
fn clause_mismatch_fails_execution_too() {
    let story = parse_story(include_str!("../../fixtures/mutations/clause_mismatch.story")).unwrap();
    let model = default_ontology();
    let proto = load_prototype(PROTO, &model).unwrap();
    let report = execute_story(&story, &model, &proto);
    assert_eq!(report.scenarios[0].statuses(), vec![Fail, Untested, Untested]);
    assert_eq!(report.scenarios[0].failure().unwrap().code, FindingCode::ClauseMismatch);
}

#[test]
fn is_displayed_checks_window_widgets() {
    let model = default_ontology();
    let proto = PROTO.replace(
        r#"{
          "name": "Depart","#,
        r#"{
          "name": "Main",
          "class": "Browser_Window"
        },
        {
          "name": "Depart","#,
    );
    assert_ne!(proto, PROTO);
    let src = replace_step(r#"When I choose "One way""#, "And \"Main\" is displayed\nWhen I choose \"One way\"");
    let result = &run(&src, &proto).scenarios[0];
    assert_eq!(result.statuses(), vec![Pass; 9]);

    let src = replace_step(r#"When I choose "One way""#, "And \"Search\" is displayed\nWhen I choose \"One way\"");
    let result = &run(&src, &proto).scenarios[0];
    assert_eq!(result.failure().unwrap().code, FindingCode::IncompatibleElement);
    let _ = model;
}

#[test]
fn not_run_marks_everything_untested() {
    let model = default_ontology();
    let story = parse_story(STORY).unwrap();
    let bound = crate::story::bind_steps(&story, &model);
    let result = ScenarioResult::not_run(&bound[0]);
    assert_eq!(result.statuses(), vec![Untested; 8]);
    assert_eq!(result.overall, ScenarioVerdict::Untested);
    assert_eq!(result.steps[6].behavior.as_deref(), Some("clickOn"));
}

#[test]
fn results_are_shareable() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<VerificationReport>();
    assert_send_sync::<crate::prototype::Prototype>();
}
