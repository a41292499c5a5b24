use std::iter::Peekable;

use super::{Narrative, Scenario, Step, StepKeyword, SyntaxError, UserStory};
use crate::ontology::ClauseRole;

#[derive(Debug, Clone, Copy)]
struct Line<'a> {
    number: usize,
    column: usize,
    text: &'a str,
}

impl Line<'_> {
    fn error(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError::new(self.number, self.column, message)
    }
}

struct Lines<'a, I: Iterator<Item = Line<'a>>> {
    inner: Peekable<I>,
    end: usize,
}

impl<'a, I: Iterator<Item = Line<'a>>> Lines<'a, I> {
    fn eof(&self, message: impl Into<String>) -> SyntaxError {
        SyntaxError::new(self.end, 1, message)
    }

    /// Consumes a line starting with `prefix` and returns the trimmed rest.
    fn expect(&mut self, prefix: &str, what: &str, allow_empty: bool) -> Result<(Line<'a>, &'a str), SyntaxError> {
        let Some(line) = self.inner.next() else {
            return Err(self.eof(format!("unexpected end of input, expected {what}")));
        };
        let Some(rest) = line.text.strip_prefix(prefix) else {
            return Err(line.error(format!("expected {what}")));
        };
        let rest = rest.trim();
        if !allow_empty && rest.is_empty() {
            return Err(line.error(format!("{what} is empty")));
        }
        if allow_empty && !rest.is_empty() {
            return Err(line.error(format!("unexpected text after `{}`", prefix.trim_end())));
        }
        Ok((line, rest))
    }
}

/// Parses a `.story` document holding exactly one user story.
pub fn parse_story(source: &str) -> Result<UserStory, SyntaxError> {
    let source = source.strip_prefix('\u{feff}').unwrap_or(source);
    let total = source.lines().count();
    let lines = source.lines().enumerate().filter_map(|(i, raw)| {
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            return None;
        }
        Some(Line {
            number: i + 1,
            column: raw.chars().take_while(|c| c.is_whitespace()).count() + 1,
            text,
        })
    });
    let mut lines = Lines {
        inner: lines.peekable(),
        end: total + 1,
    };

    let (_, title) = lines.expect("User Story:", "`User Story:` title", false)?;
    lines.expect("Narrative:", "`Narrative:`", true)?;
    let role = match lines.inner.peek() {
        Some(line) if line.text.starts_with("As an ") => lines.expect("As an ", "narrative role (`As a ...`)", false)?.1,
        _ => lines.expect("As a ", "narrative role (`As a ...`)", false)?.1,
    };
    let (_, feature) = lines.expect("I want ", "narrative feature (`I want ...`)", false)?;
    let (_, benefit) = lines.expect("So that ", "narrative benefit (`So that ...`)", false)?;

    let mut scenarios = Vec::new();
    while lines.inner.peek().is_some() {
        scenarios.push(parse_scenario(&mut lines)?);
    }
    if scenarios.is_empty() {
        return Err(lines.eof("a user story needs at least one `Scenario:`"));
    }

    Ok(UserStory {
        title: title.to_owned(),
        narrative: Narrative {
            role: role.to_owned(),
            feature: feature.to_owned(),
            benefit: benefit.to_owned(),
        },
        scenarios,
    })
}

fn parse_scenario<'a, I: Iterator<Item = Line<'a>>>(lines: &mut Lines<'a, I>) -> Result<Scenario, SyntaxError> {
    if let Some(line) = lines.inner.peek() {
        if line.text.starts_with("User Story:") {
            return Err(line.error("a story file holds exactly one `User Story:`"));
        }
    }
    let (header, title) = lines.expect("Scenario:", "`Scenario:`", false)?;

    let mut steps: Vec<Step> = Vec::new();
    while let Some(line) = lines.inner.peek().copied() {
        if line.text.starts_with("Scenario:") || line.text.starts_with("User Story:") {
            break;
        }
        lines.inner.next();
        let (keyword, text) = split_keyword(&line)?;
        let clause = match keyword.clause() {
            Some(clause) => clause,
            None => match steps.last() {
                Some(prev) => prev.clause,
                None => return Err(line.error("the first step of a scenario cannot be `And`")),
            },
        };
        steps.push(Step {
            keyword,
            clause,
            text: text.to_owned(),
            line: line.number,
        });
    }

    let missing: Vec<String> = ClauseRole::ALL
        .into_iter()
        .filter(|role| !steps.iter().any(|s| s.clause == *role))
        .map(|role| format!("{} ({role})", role.keyword()))
        .collect();
    if !missing.is_empty() {
        return Err(header.error(format!(
            "scenario `{title}` has no {} step; every scenario needs at least one Condition, Event and Action",
            missing.join(" or ")
        )));
    }

    Ok(Scenario {
        title: title.to_owned(),
        line: header.number,
        steps,
    })
}

fn split_keyword<'a>(line: &Line<'a>) -> Result<(StepKeyword, &'a str), SyntaxError> {
    for keyword in StepKeyword::ALL {
        let Some(rest) = line.text.strip_prefix(keyword.as_str()) else {
            continue;
        };
        if rest.is_empty() {
            return Err(line.error(format!("`{keyword}` step has no text")));
        }
        if rest.starts_with(char::is_whitespace) {
            return Ok((keyword, rest.trim()));
        }
    }
    Err(line.error("expected a step (Given, When, Then, And) or `Scenario:`"))
}
