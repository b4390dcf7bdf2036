//! Reasoning toolkit for ologisms: ontology logs whose types also carry
//! syllogistic premisses.
//!
//! - [`olog`]: types, aspects, paths, facts, propositions, validation
//! - [`syll`]: the diagrammatic syllogistic calculus
//! - [`eqtheory`]: equality of parallel paths modulo facts
//! - [`deduce`]: closure of the premisses and contradiction detection
//! - [`model`]: finite set-theoretic models and their checker
//! - [`oracle`]: brute-force semantics on small universes
//! - [`dsl`]: text format for ologisms and models

pub mod olog;
pub mod deduce;
pub mod dsl;
pub mod eqtheory;
pub mod model;
pub mod oracle;
pub mod syll;

#[cfg(test)]
mod fixtures;

pub use olog::{
    reading, validate, Aspect, Diagnostic, DiagnosticCode, Fact, Form, Ologism, PathWord, Proposition, Statement,
    TypeDecl, TypeId,
};
