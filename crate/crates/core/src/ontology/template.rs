//! Phrase templates: the surface text a behavior is written with.
//!
//! A pattern is literal text with placeholders of the form `"{name}"`. The
//! double quotes around a placeholder are part of the surface syntax and are
//! the only double quotes allowed in a pattern. Each placeholder is typed by
//! the template's slot map as either an `element` (names a widget or state)
//! or a `value` (a data argument).
//!
//! Matching splits a step on its double quotes: the quoted runs become the
//! captured arguments and the unquoted runs must equal the template's
//! literals. Literal comparison folds case and collapses whitespace; captured
//! arguments are kept byte-for-byte.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotKind {
    Element,
    Value,
}

impl fmt::Display for SlotKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotKind::Element => f.write_str("element"),
            SlotKind::Value => f.write_str("value"),
        }
    }
}

/// Number of element and value placeholders in a template.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arity {
    pub elements: usize,
    pub values: usize,
}

impl fmt::Display for Arity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} element / {} value", self.elements, self.values)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TemplateError {
    #[error("pattern is empty")]
    Empty,
    #[error("double quote at byte {0} does not open a placeholder")]
    StrayQuote(usize),
    #[error("brace at byte {0} is outside a quoted placeholder")]
    StrayBrace(usize),
    #[error("placeholder starting at byte {0} is not closed with `}}\"`")]
    Unterminated(usize),
    #[error("placeholder name `{0}` is not an identifier")]
    BadName(String),
    #[error("placeholder `{0}` appears more than once")]
    DuplicateName(String),
    #[error("placeholder `{0}` has no entry in slots")]
    UntypedSlot(String),
    #[error("slot `{0}` is declared but never used in the pattern")]
    UnusedSlot(String),
    #[error("more than one element placeholder ({0})")]
    MultipleElements(String),
}

/// Arguments captured from a step that matched a template.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Captures {
    pub element: Option<String>,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhraseTemplate {
    pattern: String,
    slots: BTreeMap<String, SlotKind>,
    // literal runs around the placeholders; always `placeholders.len() + 1`
    literals: Vec<String>,
    placeholders: Vec<String>,
    keys: Vec<String>,
}

impl PhraseTemplate {
    pub fn new(
        pattern: impl Into<String>,
        slots: BTreeMap<String, SlotKind>,
    ) -> Result<Self, TemplateError> {
        let pattern = pattern.into();
        if pattern.trim().is_empty() {
            return Err(TemplateError::Empty);
        }

        let mut literals = Vec::new();
        let mut placeholders: Vec<String> = Vec::new();
        let mut literal = String::new();
        let mut chars = pattern.char_indices().peekable();

        while let Some((at, c)) = chars.next() {
            match c {
                '"' => {
                    if !matches!(chars.next(), Some((_, '{'))) {
                        return Err(TemplateError::StrayQuote(at));
                    }
                    let mut name = String::new();
                    let mut closed = false;
                    for (_, c) in chars.by_ref() {
                        if c == '}' {
                            closed = true;
                            break;
                        }
                        name.push(c);
                    }
                    if !closed || !matches!(chars.next(), Some((_, '"'))) {
                        return Err(TemplateError::Unterminated(at));
                    }
                    if name.is_empty()
                        || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                    {
                        return Err(TemplateError::BadName(name));
                    }
                    if placeholders.contains(&name) {
                        return Err(TemplateError::DuplicateName(name));
                    }
                    if !slots.contains_key(&name) {
                        return Err(TemplateError::UntypedSlot(name));
                    }
                    literals.push(std::mem::take(&mut literal));
                    placeholders.push(name);
                }
                '{' | '}' => return Err(TemplateError::StrayBrace(at)),
                _ => literal.push(c),
            }
        }
        literals.push(literal);

        if let Some(unused) = slots.keys().find(|k| !placeholders.contains(k)) {
            return Err(TemplateError::UnusedSlot(unused.clone()));
        }
        let elements: Vec<&str> = slots
            .iter()
            .filter(|(_, kind)| **kind == SlotKind::Element)
            .map(|(name, _)| name.as_str())
            .collect();
        if elements.len() > 1 {
            return Err(TemplateError::MultipleElements(elements.join(", ")));
        }

        let last = literals.len() - 1;
        let keys = literals
            .iter()
            .enumerate()
            .map(|(i, lit)| normalize_literal(lit, i == 0, i == last))
            .collect();

        Ok(PhraseTemplate {
            pattern,
            slots,
            literals,
            placeholders,
            keys,
        })
    }

    pub fn pattern(&self) -> &str {
        &self.pattern
    }

    pub fn slots(&self) -> &BTreeMap<String, SlotKind> {
        &self.slots
    }

    /// Placeholder names in order of appearance.
    pub fn placeholders(&self) -> &[String] {
        &self.placeholders
    }

    /// Normalized literal runs. Two templates with equal keys accept exactly
    /// the same set of step texts.
    pub fn match_keys(&self) -> &[String] {
        &self.keys
    }

    pub fn arity(&self) -> Arity {
        let elements = self
            .slots
            .values()
            .filter(|k| **k == SlotKind::Element)
            .count();
        Arity {
            elements,
            values: self.slots.len() - elements,
        }
    }

    pub fn element_slot(&self) -> Option<&str> {
        self.slots
            .iter()
            .find(|(_, kind)| **kind == SlotKind::Element)
            .map(|(name, _)| name.as_str())
    }

    pub fn match_text(&self, text: &str) -> Option<Captures> {
        let parts: Vec<&str> = text.split('"').collect();
        if parts.len() != self.keys.len() + self.placeholders.len() {
            return None;
        }
        let last = parts.len() - 1;
        let mut captures = Captures::default();
        for (i, part) in parts.iter().enumerate() {
            if i % 2 == 0 {
                if normalize_literal(part, i == 0, i == last) != self.keys[i / 2] {
                    return None;
                }
            } else {
                let name = &self.placeholders[i / 2];
                match self.slots[name] {
                    SlotKind::Element => captures.element = Some((*part).to_owned()),
                    SlotKind::Value => captures.values.push((*part).to_owned()),
                }
            }
        }
        Some(captures)
    }

    /// Writes the template out with the given arguments. Value arguments fill
    /// value placeholders in order of appearance. Returns `None` if the
    /// arguments do not fit the template's arity.
    pub fn render(&self, element: Option<&str>, values: &[String]) -> Option<String> {
        let arity = self.arity();
        if arity.values != values.len() || (arity.elements == 1) != element.is_some() {
            return None;
        }
        let mut values = values.iter();
        let mut out = String::with_capacity(self.pattern.len());
        for (i, name) in self.placeholders.iter().enumerate() {
            out.push_str(&self.literals[i]);
            out.push('"');
            match self.slots[name] {
                SlotKind::Element => out.push_str(element?),
                SlotKind::Value => out.push_str(values.next()?),
            }
            out.push('"');
        }
        out.push_str(self.literals.last().map(String::as_str).unwrap_or(""));
        Some(out)
    }

    pub fn slot_names(&self) -> BTreeSet<&str> {
        self.slots.keys().map(String::as_str).collect()
    }
}

fn normalize_literal(text: &str, first: bool, last: bool) -> String {
    let mut out = String::with_capacity(text.len());
    let mut in_space = false;
    for c in text.chars() {
        if c.is_whitespace() {
            in_space = true;
            continue;
        }
        if in_space && (!out.is_empty() || !first) {
            out.push(' ');
        }
        in_space = false;
        out.extend(c.to_lowercase());
    }
    if in_space && !last && (!out.is_empty() || !first) {
        out.push(' ');
    }
    out
}
