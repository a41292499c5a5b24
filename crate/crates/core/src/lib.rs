//! Checks BDD user stories against a behavior ontology of UI interaction
//! elements and runs their scenarios over declarative UI prototypes.
//!
//! The pipeline is: load an [`ontology::OntologyModel`], parse a story with
//! [`story::parse_story`], bind its steps to behaviors, then either
//! [`verifier::lint`] it or execute it against a [`prototype::Prototype`]
//! with [`verifier::execute_story`].

pub mod corpus;
pub mod ontology;
pub mod prototype;
pub mod report;
pub mod story;
pub mod verifier;
