use std::fmt::Write;

use super::UserStory;

/// Canonical text form of a story. Parsing the output gives back the same
/// structure.
pub fn serialize_story(story: &UserStory) -> String {
    let mut out = String::new();
    // writing to a String cannot fail
    let _ = writeln!(out, "User Story: {}", story.title);
    let _ = writeln!(out, "Narrative:");
    let _ = writeln!(out, "As a {}", story.narrative.role);
    let _ = writeln!(out, "I want {}", story.narrative.feature);
    let _ = writeln!(out, "So that {}", story.narrative.benefit);
    for scenario in &story.scenarios {
        let _ = writeln!(out, "Scenario: {}", scenario.title);
        for step in &scenario.steps {
            let _ = writeln!(out, "{} {}", step.keyword, step.text);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::story::parse_story;

    #[test]
    fn canonical_text_is_stable() {
        let src = "User Story: S\nNarrative:\nAs a u\nI want f\nSo that b\nScenario: T\n\
            Given I go to \"A\"\nWhen I click on \"B\"\nAnd I click on \"C\"\nThen will be displayed \"D\"\n";
        let story = parse_story(src).unwrap();
        assert_eq!(serialize_story(&story), src);
    }
}
