//! Seeded generators for prototypes and stories, built from the phrase
//! templates of an ontology. Used by property tests and the acceptance
//! suite; the same seed always yields the same corpus.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ontology::{BehaviorDef, ClauseRole, OntologyModel};
use crate::prototype::{Platform, PropertyValue, Prototype, State, Transition, Widget};
use crate::story::{parse_story, serialize_story, Narrative, Scenario, Step, StepKeyword, UserStory};
use crate::verifier::{is_navigation, is_text_assertion};

const STATE_NAMES: &[&str] = &["Home", "Search", "Results", "Login", "Cart", "Profile", "Settings", "Checkout"];
const WIDGET_NAMES: &[&str] = &[
    "Submit", "Name", "Email", "From", "To", "Date", "Accept", "Main", "Help", "Logo", "Menu", "Next",
    "Search", "Home", "Total", "Options",
];
const WORDS: &[&str] = &["alpha", "beta", "42", "Welcome", "Done", "Total", "Home", "Results", "", "x y"];
pub const SCENARIO_TITLES: &[&str] = &["Sign in", "Search items", "Open cart", "Pay", "Go back"];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn pick<'a, R: Rng>(rng: &mut R, items: &[&'a str]) -> &'a str {
    items.choose(rng).copied().unwrap_or("")
}

/// A valid prototype of one to four states with random concrete widgets
/// and transitions labeled from [`SCENARIO_TITLES`].
pub fn random_prototype<R: Rng>(rng: &mut R, model: &OntologyModel) -> Prototype {
    let concrete: Vec<&str> = model
        .classes
        .values()
        .filter(|c| !c.is_abstract)
        .map(|c| c.id.as_str())
        .collect();
    let text_holders: BTreeSet<String> = model
        .data_properties
        .get("text")
        .map(|p| model.satisfying_classes(&p.applies_to))
        .unwrap_or_default();

    let count = rng.gen_range(1..=4);
    let names: Vec<&str> = STATE_NAMES.choose_multiple(rng, count).copied().collect();
    let mut states = Vec::new();
    for name in &names {
        let widget_count = rng.gen_range(0..=6);
        let mut widgets = Vec::new();
        for widget_name in WIDGET_NAMES.choose_multiple(rng, widget_count) {
            let class = pick(rng, &concrete);
            let mut properties = BTreeMap::new();
            if text_holders.contains(class) && rng.gen_bool(0.6) {
                let text = if rng.gen_bool(0.5) { pick(rng, WORDS) } else { widget_name };
                properties.insert("text".to_owned(), PropertyValue::Text(text.to_owned()));
            }
            widgets.push(Widget {
                name: (*widget_name).to_owned(),
                element_class: class.to_owned(),
                properties,
            });
        }
        states.push(State {
            name: (*name).to_owned(),
            widgets,
        });
    }

    let mut transitions = Vec::new();
    for source in &names {
        for title in SCENARIO_TITLES {
            if rng.gen_bool(0.4) {
                transitions.push(Transition {
                    scenario_title: (*title).to_owned(),
                    source: (*source).to_owned(),
                    target: pick(rng, &names).to_owned(),
                });
            }
        }
    }

    let platforms = [Platform::Web, Platform::Mobile, Platform::Desktop];
    let platform_count = rng.gen_range(1..=platforms.len());
    Prototype {
        name: format!("generated {}", rng.gen::<u16>()),
        platforms: platforms.choose_multiple(rng, platform_count).copied().collect(),
        initial_state: names[0].to_owned(),
        states,
        transitions,
    }
}

/// Names a step argument might plausibly refer to: states, widgets and
/// widget texts of `proto`, plus one name that matches nothing.
fn argument_pool(proto: &Prototype) -> Vec<String> {
    let mut pool: Vec<String> = Vec::new();
    for state in &proto.states {
        pool.push(state.name.clone());
        for widget in &state.widgets {
            pool.push(widget.name.clone());
            if let Some(text) = widget.text() {
                pool.push(text.to_owned());
            }
        }
    }
    pool.push("Nowhere".to_owned());
    pool
}

fn random_values<R: Rng>(rng: &mut R, count: usize, pool: &[String]) -> Vec<String> {
    (0..count)
        .map(|_| {
            if rng.gen_bool(0.5) {
                pool.choose(rng).cloned().unwrap_or_default()
            } else {
                pick(rng, WORDS).to_owned()
            }
        })
        .collect()
}

/// Renders one of the behavior's templates. `target` fills the element
/// slot, or the first value slot when there is none.
fn render<R: Rng>(rng: &mut R, behavior: &BehaviorDef, target: Option<&str>, pool: &[String]) -> String {
    let template = behavior.templates.choose(rng).expect("behaviors have templates");
    let arity = template.arity();
    let mut values = random_values(rng, arity.values, pool);
    let element = (arity.elements == 1).then(|| match target {
        Some(t) => t.to_owned(),
        None => {
            let arg = pool.choose(rng).cloned().unwrap_or_default();
            if rng.gen_bool(0.2) {
                arg.to_uppercase()
            } else {
                arg
            }
        }
    });
    if let (None, Some(t), Some(first)) = (&element, target, values.first_mut()) {
        *first = t.to_owned();
    }
    template
        .render(element.as_deref(), &values)
        .expect("arguments built from the template's arity")
}

/// A step the verifier accepts in `state`, with the state it leaves the
/// cursor in. `None` if no behavior for `role` has a usable target here.
fn fitting_step<'p, R: Rng>(
    rng: &mut R,
    model: &OntologyModel,
    proto: &'p Prototype,
    state: &'p State,
    role: ClauseRole,
    pool: &[String],
) -> Option<(String, &'p State)> {
    let mut options: Vec<(&BehaviorDef, String, &'p State)> = Vec::new();
    for behavior in model.behaviors.values().filter(|b| b.allows_role(role)) {
        if is_navigation(model, &behavior.id) {
            for target in &proto.states {
                options.push((behavior, target.name.clone(), target));
            }
            continue;
        }
        for widget in &state.widgets {
            if model.element_satisfies(&widget.element_class, &behavior.id) != Ok(true) {
                continue;
            }
            options.push((behavior, widget.name.clone(), state));
            if is_text_assertion(model, &behavior.id) {
                if let Some(text) = widget.text().filter(|t| !t.is_empty()) {
                    options.push((behavior, text.to_owned(), state));
                }
            }
        }
    }
    let (behavior, target, next) = options.choose(rng)?;
    Some((render(rng, behavior, Some(target), pool), *next))
}

/// A scenario with one to three steps per clause. Half of the time the
/// steps follow the prototype (right widgets, a title with a matching
/// transition) so the scenario can pass; otherwise, and for a few steps even
/// then, behaviors and arguments are arbitrary.
pub fn random_scenario<R: Rng>(rng: &mut R, model: &OntologyModel, proto: &Prototype) -> Scenario {
    let pool = argument_pool(proto);
    let all: Vec<&BehaviorDef> = model.behaviors.values().collect();
    let guided = rng.gen_bool(0.5);
    let mut cursor = proto.initial();
    let mut title = pick(rng, SCENARIO_TITLES).to_owned();
    let mut steps = Vec::new();
    for role in ClauseRole::ALL {
        if role == ClauseRole::Action {
            if let Some(state) = cursor {
                let outgoing: Vec<&Transition> = proto
                    .transitions
                    .iter()
                    .filter(|t| t.source.to_lowercase() == state.name.to_lowercase())
                    .collect();
                match outgoing.choose(rng) {
                    Some(t) if guided => {
                        title = t.scenario_title.clone();
                        cursor = proto.state(&t.target);
                    }
                    _ => cursor = None,
                }
            }
        }
        let count = if role == ClauseRole::Action { rng.gen_range(1..=2) } else { rng.gen_range(1..=3) };
        for i in 0..count {
            let fitted = match cursor {
                Some(state) if guided && rng.gen_bool(0.95) => fitting_step(rng, model, proto, state, role, &pool),
                _ => None,
            };
            let text = match fitted {
                Some((text, next)) => {
                    cursor = Some(next);
                    text
                }
                None => {
                    let fitting: Vec<&BehaviorDef> = all.iter().copied().filter(|b| b.allows_role(role)).collect();
                    let behavior = if fitting.is_empty() || rng.gen_bool(0.05) {
                        *all.choose(rng).expect("ontology has behaviors")
                    } else {
                        *fitting.choose(rng).expect("non-empty")
                    };
                    render(rng, behavior, None, &pool)
                }
            };
            steps.push(Step {
                keyword: if i == 0 { StepKeyword::for_clause(role) } else { StepKeyword::And },
                clause: role,
                text,
                line: 0,
            });
        }
    }
    Scenario { title, line: 0, steps }
}

/// A story of one to three scenarios over `proto`, with line numbers as
/// if read from its canonical text.
pub fn random_story<R: Rng>(rng: &mut R, model: &OntologyModel, proto: &Prototype) -> UserStory {
    let count = rng.gen_range(1..=3);
    let scenarios = (0..count).map(|_| random_scenario(rng, model, proto)).collect();
    let story = UserStory {
        title: format!("Generated story {}", rng.gen::<u16>()),
        narrative: Narrative {
            role: pick(rng, &["user", "admin", "visitor"]).to_owned(),
            feature: "to use the application".to_owned(),
            benefit: "I get things done".to_owned(),
        },
        scenarios,
    };
    parse_story(&serialize_story(&story)).expect("generated stories are well formed")
}

/// The step text rewritten with each equivalence sibling of the behavior it
/// binds to, keeping the captured arguments. Empty when the step does not
/// bind or its behavior has no siblings.
pub fn equivalent_phrasings(model: &OntologyModel, text: &str) -> Vec<(String, String)> {
    let Some((behavior, _, captures)) = model.match_step(text) else {
        return Vec::new();
    };
    let mut out = Vec::new();
    for sibling in model.equivalents(&behavior.id) {
        for template in &sibling.templates {
            if let Some(rendered) = template.render(captures.element.as_deref(), &captures.values) {
                out.push((sibling.id.clone(), rendered));
            }
        }
    }
    out
}

/// Replaces every step that has an equivalent phrasing with a randomly
/// chosen one. Positions are kept, so results compare step for step.
pub fn swap_equivalents<R: Rng>(rng: &mut R, model: &OntologyModel, story: &UserStory) -> UserStory {
    let mut swapped = story.clone();
    for step in swapped.scenarios.iter_mut().flat_map(|s| s.steps.iter_mut()) {
        if let Some((_, text)) = equivalent_phrasings(model, &step.text).choose(rng) {
            step.text = text.clone();
        }
    }
    swapped
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ontology::default_ontology;
    use crate::prototype::validate;

    #[test]
    fn generated_prototypes_validate() {
        let model = default_ontology();
        let mut rng = rng(7);
        for _ in 0..200 {
            let proto = random_prototype(&mut rng, &model);
            validate(&proto, &model).unwrap();
        }
    }

    #[test]
    fn same_seed_same_story() {
        let model = default_ontology();
        let make = || {
            let mut rng = rng(11);
            let proto = random_prototype(&mut rng, &model);
            random_story(&mut rng, &model, &proto)
        };
        assert_eq!(make(), make());
    }

    #[test]
    fn generated_steps_bind() {
        let model = default_ontology();
        let mut rng = rng(3);
        for _ in 0..50 {
            let proto = random_prototype(&mut rng, &model);
            let story = random_story(&mut rng, &model, &proto);
            for step in story.scenarios.iter().flat_map(|s| &s.steps) {
                assert!(model.match_step(&step.text).is_some(), "{}", step.text);
            }
        }
    }

    #[test]
    fn phrasings_bind_to_the_sibling() {
        let model = default_ontology();
        let variants = equivalent_phrasings(&model, "I set \"abc\" in the field \"Name\"");
        assert!(!variants.is_empty());
        for (id, text) in variants {
            let (behavior, _, captures) = model.match_step(&text).unwrap();
            assert_eq!(behavior.id, id);
            assert_eq!(captures.element.as_deref(), Some("Name"));
        }
    }
}
