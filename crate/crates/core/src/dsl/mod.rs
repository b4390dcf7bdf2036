//! Text format for ologisms (`.olgm`) and models (`.olgmodel`).
//!
//! An ologism document:
//!
//! ```text
//! ologism "animals" {
//!   type D "a dog"
//!   type M "a mammal"
//!   aspect has : D -> M
//!   A D M
//!   fact "loop" : has = is
//! }
//! ```
//!
//! A model document:
//!
//! ```text
//! model "m1" for "animals" {
//!   set D = {rex, fido}
//!   map has : rex -> rex, fido -> rex
//! }
//! ```

use std::fmt;

use serde::Serialize;

use crate::model::Model;
use crate::olog::{Ologism, PathWord};

mod lexer;
mod parser;
mod serialize;

pub use serialize::{serialize_model, serialize_ologism, SerializeError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A problem found in a document, with its 1-based position.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SourceDiagnostic {
    pub severity: Severity,
    pub code: String,
    pub message: String,
    pub line: usize,
    pub column: usize,
}

impl SourceDiagnostic {
    pub fn error(code: &str, message: impl Into<String>, line: usize, column: usize) -> Self {
        SourceDiagnostic {
            severity: Severity::Error,
            code: code.to_string(),
            message: message.into(),
            line,
            column,
        }
    }

    pub fn warning(code: &str, message: impl Into<String>, line: usize, column: usize) -> Self {
        SourceDiagnostic {
            severity: Severity::Warning,
            ..Self::error(code, message, line, column)
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for SourceDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{}:{}: {kind}[{}]: {}", self.line, self.column, self.code, self.message)
    }
}

/// Result of parsing: the value when there are no errors, plus every
/// diagnostic (warnings included) in source order.
#[derive(Debug, Clone)]
pub struct Parsed<T> {
    pub value: Option<T>,
    pub diagnostics: Vec<SourceDiagnostic>,
}

impl<T> Parsed<T> {
    fn new((value, diagnostics): (Option<T>, Vec<SourceDiagnostic>)) -> Self {
        Parsed { value, diagnostics }
    }

    pub fn into_result(self) -> Result<T, Vec<SourceDiagnostic>> {
        self.value.ok_or(self.diagnostics)
    }
}

/// Parses an ologism document, keeping warnings.
pub fn parse_ologism_report(source: &str) -> Parsed<Ologism> {
    Parsed::new(parser::parse_ologism(source))
}

pub fn parse_ologism(source: &str) -> Result<Ologism, Vec<SourceDiagnostic>> {
    parse_ologism_report(source).into_result()
}

/// Parses bare items (as found between the braces of a document) and adds
/// them to a copy of `base`.
pub fn parse_items(source: &str, base: &Ologism) -> Result<Ologism, Vec<SourceDiagnostic>> {
    Parsed::new(parser::parse_items(source, base)).into_result()
}

/// Parses bare items and removes each of them from a copy of `base`.
pub fn retract_items(source: &str, base: &Ologism) -> Result<Ologism, Vec<SourceDiagnostic>> {
    Parsed::new(parser::retract_items(source, base)).into_result()
}

/// Parses an equation `path = path` between parallel paths of `base`,
/// written as the two sides of a fact.
pub fn parse_equation(source: &str, base: &Ologism) -> Result<(PathWord, PathWord), Vec<SourceDiagnostic>> {
    let (value, diagnostics) = parser::parse_equation(source, base);
    value.ok_or(diagnostics)
}

pub fn parse_model_report(source: &str) -> Parsed<Model> {
    Parsed::new(parser::parse_model(source))
}

pub fn parse_model(source: &str) -> Result<Model, Vec<SourceDiagnostic>> {
    parse_model_report(source).into_result()
}
