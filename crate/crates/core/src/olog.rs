//! Domain types shared by every other module: types, aspects, path words,
//! facts, categorical propositions and the ologism that bundles them.
//!
//! The distinguished bullet node of an ologism and the arcs touching it are
//! never materialized. A premiss is stored as a [`Proposition`]; the bullet
//! structure is reconstructed only when a document is drawn.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// The reserved aspect name interpreted as inclusion.
pub const IS: &str = "is";

/// Short identifier of a type, unique within one ologism.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct TypeId(String);

impl TypeId {
    pub fn new(id: impl Into<String>) -> Self {
        TypeId(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for TypeId {
    fn from(s: &str) -> Self {
        TypeId(s.to_string())
    }
}

impl From<String> for TypeId {
    fn from(s: String) -> Self {
        TypeId(s)
    }
}

impl Borrow<str> for TypeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for TypeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TypeDecl {
    pub id: TypeId,
    /// The boxed singular indefinite phrase, e.g. "a mammal".
    pub label: String,
}

impl TypeDecl {
    pub fn new(id: impl Into<TypeId>, label: impl Into<String>) -> Self {
        TypeDecl {
            id: id.into(),
            label: label.into(),
        }
    }
}

/// A labelled functional arrow between two types.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Aspect {
    pub name: String,
    pub source: TypeId,
    pub target: TypeId,
}

impl Aspect {
    pub fn new(name: impl Into<String>, source: impl Into<TypeId>, target: impl Into<TypeId>) -> Self {
        Aspect {
            name: name.into(),
            source: source.into(),
            target: target.into(),
        }
    }

    /// An `is` aspect, the arrow form of a universal affirmative.
    pub fn is(source: impl Into<TypeId>, target: impl Into<TypeId>) -> Self {
        Aspect::new(IS, source, target)
    }

    pub fn is_flag(&self) -> bool {
        self.name == IS
    }
}

impl fmt::Display for Aspect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : {} -> {}", self.name, self.source, self.target)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("cannot compose: path ends at `{left_end}` but the next path starts at `{right_start}`")]
pub struct CompositionError {
    pub left_end: TypeId,
    pub right_start: TypeId,
}

/// A path of aspects. The empty word on a node is its identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct PathWord {
    source: TypeId,
    target: TypeId,
    arcs: Vec<Aspect>,
}

impl PathWord {
    pub fn empty(node: impl Into<TypeId>) -> Self {
        let node = node.into();
        PathWord {
            source: node.clone(),
            target: node,
            arcs: Vec::new(),
        }
    }

    pub fn single(aspect: Aspect) -> Self {
        PathWord {
            source: aspect.source.clone(),
            target: aspect.target.clone(),
            arcs: vec![aspect],
        }
    }

    /// Builds a path, checking that consecutive arcs compose and that the
    /// endpoints agree with the arcs.
    pub fn new(source: TypeId, target: TypeId, arcs: Vec<Aspect>) -> Result<Self, CompositionError> {
        let mut at = source.clone();
        for arc in &arcs {
            if arc.source != at {
                return Err(CompositionError {
                    left_end: at,
                    right_start: arc.source.clone(),
                });
            }
            at = arc.target.clone();
        }
        if at != target {
            return Err(CompositionError {
                left_end: at,
                right_start: target,
            });
        }
        Ok(PathWord { source, target, arcs })
    }

    /// Builds a nonempty path from its arcs alone.
    pub fn from_arcs(arcs: Vec<Aspect>) -> Result<Self, CompositionError> {
        let first = arcs.first().expect("from_arcs needs at least one arc");
        let last = arcs.last().expect("nonempty");
        PathWord::new(first.source.clone(), last.target.clone(), arcs)
    }

    pub fn source(&self) -> &TypeId {
        &self.source
    }

    pub fn target(&self) -> &TypeId {
        &self.target
    }

    pub fn arcs(&self) -> &[Aspect] {
        &self.arcs
    }

    pub fn len(&self) -> usize {
        self.arcs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arcs.is_empty()
    }

    pub fn is_parallel(&self, other: &PathWord) -> bool {
        self.source == other.source && self.target == other.target
    }

    /// Concatenation `self ; next`.
    pub fn compose(&self, next: &PathWord) -> Result<PathWord, CompositionError> {
        if self.target != next.source {
            return Err(CompositionError {
                left_end: self.target.clone(),
                right_start: next.source.clone(),
            });
        }
        let mut arcs = self.arcs.clone();
        arcs.extend(next.arcs.iter().cloned());
        Ok(PathWord {
            source: self.source.clone(),
            target: next.target.clone(),
            arcs,
        })
    }
}

impl fmt::Display for PathWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.arcs.is_empty() {
            return write!(f, "id({})", self.source);
        }
        write!(f, "(")?;
        for (i, arc) in self.arcs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", arc.name)?;
        }
        write!(f, ")")
    }
}

/// A declared equality between two parallel paths.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Fact {
    pub name: Option<String>,
    pub lhs: PathWord,
    pub rhs: PathWord,
}

impl Fact {
    pub fn new(name: Option<String>, lhs: PathWord, rhs: PathWord) -> Self {
        Fact { name, lhs, rhs }
    }

    pub fn is_parallel(&self) -> bool {
        self.lhs.is_parallel(&self.rhs)
    }

    /// Name for messages: the declared name, or the equation itself.
    pub fn describe(&self) -> String {
        match &self.name {
            Some(n) => n.clone(),
            None => format!("{} = {}", self.lhs, self.rhs),
        }
    }
}

/// The four forms of categorical proposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Form {
    A,
    E,
    I,
    O,
}

impl Form {
    pub const ALL: [Form; 4] = [Form::A, Form::E, Form::I, Form::O];

    pub fn is_universal(self) -> bool {
        matches!(self, Form::A | Form::E)
    }

    pub fn is_particular(self) -> bool {
        !self.is_universal()
    }

    /// E and I are symmetric in their two terms.
    pub fn is_symmetric(self) -> bool {
        matches!(self, Form::E | Form::I)
    }

    pub fn letter(self) -> char {
        match self {
            Form::A => 'A',
            Form::E => 'E',
            Form::I => 'I',
            Form::O => 'O',
        }
    }

    pub fn from_letter(c: char) -> Option<Form> {
        match c {
            'A' => Some(Form::A),
            'E' => Some(Form::E),
            'I' => Some(Form::I),
            'O' => Some(Form::O),
            _ => None,
        }
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// A categorical proposition in canonical form: E and I store their terms
/// in lexicographic order, A and O keep the given order.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Proposition {
    form: Form,
    subject: TypeId,
    predicate: TypeId,
}

impl Proposition {
    pub fn new(form: Form, subject: impl Into<TypeId>, predicate: impl Into<TypeId>) -> Self {
        let (mut subject, mut predicate) = (subject.into(), predicate.into());
        if form.is_symmetric() && predicate < subject {
            std::mem::swap(&mut subject, &mut predicate);
        }
        Proposition {
            form,
            subject,
            predicate,
        }
    }

    pub fn a(s: impl Into<TypeId>, p: impl Into<TypeId>) -> Self {
        Proposition::new(Form::A, s, p)
    }

    pub fn e(s: impl Into<TypeId>, p: impl Into<TypeId>) -> Self {
        Proposition::new(Form::E, s, p)
    }

    pub fn i(s: impl Into<TypeId>, p: impl Into<TypeId>) -> Self {
        Proposition::new(Form::I, s, p)
    }

    pub fn o(s: impl Into<TypeId>, p: impl Into<TypeId>) -> Self {
        Proposition::new(Form::O, s, p)
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn subject(&self) -> &TypeId {
        &self.subject
    }

    pub fn predicate(&self) -> &TypeId {
        &self.predicate
    }

    /// Re-canonicalizes; a no-op for values built through [`Proposition::new`].
    pub fn canonical(&self) -> Proposition {
        Proposition::new(self.form, self.subject.clone(), self.predicate.clone())
    }

    /// `O(X,X)`, read "Some X is not X".
    pub fn is_contradiction(&self) -> bool {
        self.form == Form::O && self.subject == self.predicate
    }

    /// `I(X,X)`, read "Some X exists".
    pub fn is_existential_import(&self) -> bool {
        self.form == Form::I && self.subject == self.predicate
    }

    pub fn mentions(&self, t: &TypeId) -> bool {
        &self.subject == t || &self.predicate == t
    }

    /// Parses the literal syntax `A:S,P`.
    pub fn parse_literal(s: &str) -> Result<Proposition, LiteralError> {
        Statement::parse_literal(s).map(|st| st.proposition())
    }

    /// The literal syntax `A:S,P`.
    pub fn literal(&self) -> String {
        format!("{}:{},{}", self.form, self.subject, self.predicate)
    }
}

impl fmt::Display for Proposition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.form, self.subject, self.predicate)
    }
}

/// A proposition with its terms in the order they were written. E and I
/// statements with swapped terms are distinct statements of the same
/// proposition; diagram manipulation and derivation trees work on these.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Statement {
    pub form: Form,
    pub subject: TypeId,
    pub predicate: TypeId,
}

impl Statement {
    pub fn new(form: Form, subject: impl Into<TypeId>, predicate: impl Into<TypeId>) -> Self {
        Statement {
            form,
            subject: subject.into(),
            predicate: predicate.into(),
        }
    }

    pub fn proposition(&self) -> Proposition {
        Proposition::new(self.form, self.subject.clone(), self.predicate.clone())
    }

    /// The same statement with its terms swapped.
    pub fn swapped(&self) -> Statement {
        Statement::new(self.form, self.predicate.clone(), self.subject.clone())
    }

    pub fn parse_literal(s: &str) -> Result<Statement, LiteralError> {
        let bad = || LiteralError(s.to_string());
        let (form, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let mut chars = form.trim().chars();
        let form = match (chars.next(), chars.next()) {
            (Some(c), None) => Form::from_letter(c).ok_or_else(bad)?,
            _ => return Err(bad()),
        };
        let (subject, predicate) = rest.split_once(',').ok_or_else(bad)?;
        let (subject, predicate) = (subject.trim(), predicate.trim());
        if !is_identifier(subject) || !is_identifier(predicate) {
            return Err(bad());
        }
        Ok(Statement::new(form, subject, predicate))
    }

    pub fn literal(&self) -> String {
        format!("{}:{},{}", self.form, self.subject, self.predicate)
    }
}

impl From<&Proposition> for Statement {
    fn from(p: &Proposition) -> Self {
        Statement::new(p.form(), p.subject().clone(), p.predicate().clone())
    }
}

impl From<Proposition> for Statement {
    fn from(p: Proposition) -> Self {
        Statement::from(&p)
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({},{})", self.form, self.subject, self.predicate)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("malformed proposition literal `{0}` (expected e.g. `A:S,P`)")]
pub struct LiteralError(pub String);

/// `[A-Za-z_][A-Za-z0-9_]*`
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown type `{0}`")]
pub struct LookupError(pub TypeId);

/// An olog extended with syllogistic premisses.
///
/// Universal affirmative premisses live twice: as `A` propositions in
/// `premisses` and as `is` aspects. [`validate`] checks that the two agree.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Ologism {
    pub name: String,
    pub types: Vec<TypeDecl>,
    pub aspects: Vec<Aspect>,
    pub facts: Vec<Fact>,
    pub premisses: Vec<Proposition>,
}

impl Ologism {
    pub fn new(name: impl Into<String>) -> Self {
        Ologism {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn with_type(mut self, id: &str, label: &str) -> Self {
        self.add_type(TypeDecl::new(id, label));
        self
    }

    pub fn with_aspect(mut self, name: &str, source: &str, target: &str) -> Self {
        self.add_aspect(Aspect::new(name, source, target));
        self
    }

    pub fn with_premiss(mut self, prop: Proposition) -> Self {
        self.add_premiss(prop);
        self
    }

    pub fn with_fact(mut self, fact: Fact) -> Self {
        self.facts.push(fact);
        self
    }

    pub fn add_type(&mut self, decl: TypeDecl) {
        self.types.push(decl);
    }

    /// Adds an aspect; an `is` aspect also records its `A` premiss.
    pub fn add_aspect(&mut self, aspect: Aspect) {
        if aspect.is_flag() {
            let prop = Proposition::a(aspect.source.clone(), aspect.target.clone());
            if !self.premisses.contains(&prop) {
                self.premisses.push(prop);
            }
        }
        if !self.aspects.contains(&aspect) {
            self.aspects.push(aspect);
        }
    }

    /// Adds a premiss; an `A` premiss also declares its `is` aspect.
    pub fn add_premiss(&mut self, prop: Proposition) {
        if prop.form() == Form::A {
            let aspect = Aspect::is(prop.subject().clone(), prop.predicate().clone());
            if !self.aspects.contains(&aspect) {
                self.aspects.push(aspect);
            }
        }
        if !self.premisses.contains(&prop) {
            self.premisses.push(prop);
        }
    }

    /// Removes a premiss (and its `is` aspect). Returns whether it was present.
    pub fn retract_premiss(&mut self, prop: &Proposition) -> bool {
        let before = self.premisses.len();
        self.premisses.retain(|p| p != prop);
        if prop.form() == Form::A {
            self.aspects
                .retain(|a| !(a.is_flag() && &a.source == prop.subject() && &a.target == prop.predicate()));
        }
        self.premisses.len() != before
    }

    pub fn type_decl(&self, id: &TypeId) -> Option<&TypeDecl> {
        self.types.iter().find(|t| &t.id == id)
    }

    pub fn has_type(&self, id: &TypeId) -> bool {
        self.type_decl(id).is_some()
    }

    pub fn type_ids(&self) -> Vec<TypeId> {
        let set: BTreeSet<TypeId> = self.types.iter().map(|t| t.id.clone()).collect();
        set.into_iter().collect()
    }

    pub fn label(&self, id: &TypeId) -> Result<&str, LookupError> {
        self.type_decl(id)
            .map(|t| t.label.as_str())
            .ok_or_else(|| LookupError(id.clone()))
    }

    pub fn premisses_of(&self, form: Form) -> impl Iterator<Item = &Proposition> {
        self.premisses.iter().filter(move |p| p.form() == form)
    }

    pub fn premiss_set(&self) -> BTreeSet<Proposition> {
        self.premisses.iter().cloned().collect()
    }

    /// Aspects other than `is`.
    pub fn general_aspects(&self) -> impl Iterator<Item = &Aspect> {
        self.aspects.iter().filter(|a| !a.is_flag())
    }

    /// True when the document carries only `is` aspects and propositions.
    pub fn is_only(&self) -> bool {
        self.facts.is_empty() && self.aspects.iter().all(Aspect::is_flag)
    }

    pub fn aspects_named<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Aspect> + 'a {
        self.aspects.iter().filter(move |a| a.name == name)
    }

    /// Same content with every collection sorted and deduplicated.
    pub fn canonical(&self) -> Ologism {
        let mut types = self.types.clone();
        types.sort_by(|a, b| a.id.cmp(&b.id).then_with(|| a.label.cmp(&b.label)));
        types.dedup();
        let aspects: BTreeSet<Aspect> = self.aspects.iter().cloned().collect();
        let facts: BTreeSet<Fact> = self.facts.iter().cloned().collect();
        let premisses: BTreeSet<Proposition> = self.premisses.iter().map(Proposition::canonical).collect();
        Ologism {
            name: self.name.clone(),
            types,
            aspects: aspects.into_iter().collect(),
            facts: facts.into_iter().collect(),
            premisses: premisses.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DiagnosticCode {
    EmptyTypeId,
    EmptyLabel,
    DuplicateType,
    ReservedTypeId,
    InvalidIdentifier,
    UnknownType,
    DuplicateAspect,
    BrokenPath,
    NonParallelFact,
    OrphanUniversalAffirmative,
    OrphanIsAspect,
}

impl fmt::Display for DiagnosticCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A structural problem found by [`validate`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub message: String,
}

impl Diagnostic {
    fn new(code: DiagnosticCode, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            message: message.into(),
        }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

/// Checks every structural invariant of an ologism. The result is empty for
/// a well-formed document and is deterministic in the document order.
pub fn validate(ologism: &Ologism) -> Vec<Diagnostic> {
    use DiagnosticCode::*;
    let mut out = Vec::new();

    let mut seen = BTreeSet::new();
    for t in &ologism.types {
        if t.id.as_str().is_empty() {
            out.push(Diagnostic::new(EmptyTypeId, "type with empty identifier"));
        } else if !seen.insert(t.id.clone()) {
            out.push(Diagnostic::new(DuplicateType, format!("type `{}` declared twice", t.id)));
        }
        if t.label.trim().is_empty() {
            out.push(Diagnostic::new(EmptyLabel, format!("type `{}` has an empty label", t.id)));
        }
    }
    let declared = |t: &TypeId| seen.contains(t);

    let mut aspects = BTreeSet::new();
    for a in &ologism.aspects {
        for end in [&a.source, &a.target] {
            if !declared(end) {
                out.push(Diagnostic::new(
                    UnknownType,
                    format!("aspect `{a}` refers to undeclared type `{end}`"),
                ));
            }
        }
        if !aspects.insert(a) {
            out.push(Diagnostic::new(DuplicateAspect, format!("aspect `{a}` declared twice")));
        }
    }

    for fact in &ologism.facts {
        for side in [&fact.lhs, &fact.rhs] {
            if let Some(problem) = path_problem(side, &aspects) {
                out.push(Diagnostic::new(
                    BrokenPath,
                    format!("fact `{}`: {problem}", fact.describe()),
                ));
            }
        }
        if !fact.is_parallel() {
            out.push(Diagnostic::new(
                NonParallelFact,
                format!(
                    "fact `{}` equates {} : {} -> {} with {} : {} -> {}",
                    fact.describe(),
                    fact.lhs,
                    fact.lhs.source(),
                    fact.lhs.target(),
                    fact.rhs,
                    fact.rhs.source(),
                    fact.rhs.target()
                ),
            ));
        }
    }

    for p in &ologism.premisses {
        for t in [p.subject(), p.predicate()] {
            if !declared(t) {
                out.push(Diagnostic::new(
                    UnknownType,
                    format!("premiss {p} refers to undeclared type `{t}`"),
                ));
            }
        }
        if p.form() == Form::A && !aspects.contains(&Aspect::is(p.subject().clone(), p.predicate().clone())) {
            out.push(Diagnostic::new(
                OrphanUniversalAffirmative,
                format!("premiss {p} has no matching `is` aspect"),
            ));
        }
    }
    let universals: BTreeSet<&Proposition> = ologism.premisses_of(Form::A).collect();
    for a in ologism.aspects.iter().filter(|a| a.is_flag()) {
        let prop = Proposition::a(a.source.clone(), a.target.clone());
        if !universals.contains(&prop) {
            out.push(Diagnostic::new(
                OrphanIsAspect,
                format!("aspect `{a}` has no matching A premiss"),
            ));
        }
    }
    out
}

fn path_problem(path: &PathWord, aspects: &BTreeSet<&Aspect>) -> Option<String> {
    for arc in path.arcs() {
        if !aspects.contains(arc) {
            return Some(format!("path uses undeclared aspect `{arc}`"));
        }
    }
    // PathWord::new enforces composability, but fields may be hand-built by deserializers.
    PathWord::new(path.source().clone(), path.target().clone(), path.arcs().to_vec())
        .err()
        .map(|e| e.to_string())
}

/// Drops a leading indefinite article: "a bird" -> "bird".
pub fn strip_article(label: &str) -> &str {
    for article in ["a ", "an ", "A ", "An "] {
        if let Some(rest) = label.strip_prefix(article) {
            return rest;
        }
    }
    label
}

/// English rendering of a proposition over the labels of an ologism.
pub fn reading(prop: &Proposition, ologism: &Ologism) -> Result<String, LookupError> {
    reading_of(prop.form(), prop.subject(), prop.predicate(), ologism)
}

/// As [`reading`], for an explicitly oriented pair of terms.
pub fn reading_of(form: Form, subject: &TypeId, predicate: &TypeId, ologism: &Ologism) -> Result<String, LookupError> {
    let s = strip_article(ologism.label(subject)?);
    let p = ologism.label(predicate)?;
    Ok(match form {
        Form::A => format!("Every {s} is {p}"),
        Form::E => format!("Every {s} is not {p}"),
        Form::I => format!("Some {s} is {p}"),
        Form::O => format!("Some {s} is not {p}"),
    })
}

/// Label of every declared type, keyed by id.
pub fn labels(ologism: &Ologism) -> BTreeMap<TypeId, String> {
    ologism
        .types
        .iter()
        .map(|t| (t.id.clone(), t.label.clone()))
        .collect()
}
