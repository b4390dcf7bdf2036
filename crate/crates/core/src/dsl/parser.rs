//! Recursive-descent parser. Parsing happens in two phases: the token
//! stream becomes a list of raw items carrying source positions, then the
//! items are resolved against an ologism (empty for a whole document, the
//! current one for incremental edits).

use std::collections::{BTreeMap, BTreeSet};

use super::lexer::{lex, Token, TokenKind};
use super::SourceDiagnostic;
use crate::model::Model;
use crate::olog::{Aspect, Fact, Form, Ologism, PathWord, Proposition, TypeDecl, TypeId, IS};

const ITEM_KEYWORDS: [&str; 7] = ["type", "aspect", "A", "E", "I", "O", "fact"];
const ENTRY_KEYWORDS: [&str; 2] = ["set", "map"];

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Spanned {
    pub text: String,
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone)]
pub(crate) enum RawPath {
    Identity(Spanned),
    Names(Vec<Spanned>),
}

#[derive(Debug, Clone)]
pub(crate) enum RawItem {
    Type {
        id: Spanned,
        label: String,
    },
    Aspect {
        name: Spanned,
        source: Spanned,
        target: Spanned,
    },
    Premiss {
        form: Form,
        at: Spanned,
        subject: Spanned,
        predicate: Spanned,
    },
    Fact {
        at: Spanned,
        name: Option<String>,
        lhs: RawPath,
        rhs: RawPath,
    },
}

#[derive(Debug, Clone)]
enum RawEntry {
    Set { type_id: Spanned, elements: Vec<Spanned> },
    Map { name: Spanned, pairs: Vec<(Spanned, Spanned)> },
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    diags: Vec<SourceDiagnostic>,
    stop_words: &'static [&'static str],
}

impl Parser {
    fn new(source: &str, stop_words: &'static [&'static str]) -> Self {
        let (tokens, diags) = lex(source);
        Parser {
            tokens,
            pos: 0,
            diags,
            stop_words,
        }
    }

    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn error_here(&mut self, expected: &str) {
        let t = self.peek().clone();
        self.diags.push(SourceDiagnostic::error(
            "UnexpectedToken",
            format!("expected {expected}, found {}", t.kind.describe()),
            t.line,
            t.column,
        ));
    }

    fn eat(&mut self, kind: TokenKind, expected: &str) -> Option<Token> {
        if self.peek().kind == kind {
            Some(self.bump())
        } else {
            self.error_here(expected);
            None
        }
    }

    /// A keyword opening a new line starts the next item, so it never
    /// fills a missing argument of the current one.
    fn starts_item(&self) -> bool {
        let t = self.peek();
        let new_line = self.pos == 0 || self.tokens[self.pos - 1].line < t.line;
        matches!(&t.kind, TokenKind::Ident(s) if new_line && self.stop_words.contains(&s.as_str()))
    }

    fn ident(&mut self, expected: &str) -> Option<Spanned> {
        if self.starts_item() {
            self.error_here(expected);
            return None;
        }
        match self.peek().kind.clone() {
            TokenKind::Ident(text) => {
                let t = self.bump();
                Some(Spanned {
                    text,
                    line: t.line,
                    column: t.column,
                })
            }
            _ => {
                self.error_here(expected);
                None
            }
        }
    }

    fn string(&mut self, expected: &str) -> Option<String> {
        match self.peek().kind.clone() {
            TokenKind::Str(s) => {
                self.bump();
                Some(s)
            }
            _ => {
                self.error_here(expected);
                None
            }
        }
    }

    fn keyword(&mut self, word: &str) -> Option<Token> {
        match &self.peek().kind {
            TokenKind::Ident(s) if s == word => Some(self.bump()),
            _ => {
                self.error_here(&format!("`{word}`"));
                None
            }
        }
    }

    fn at_keyword(&self, keywords: &[&str]) -> Option<String> {
        match &self.peek().kind {
            TokenKind::Ident(s) if keywords.contains(&s.as_str()) => Some(s.clone()),
            _ => None,
        }
    }

    /// After an error, skips to the next keyword that starts a later line,
    /// or to a closing brace.
    fn recover(&mut self, from_line: usize, keywords: &[&str]) {
        loop {
            let t = self.peek();
            match &t.kind {
                TokenKind::Eof | TokenKind::RBrace => return,
                TokenKind::Ident(s) if t.line > from_line && keywords.contains(&s.as_str()) => return,
                _ => {
                    self.bump();
                }
            }
        }
    }

    fn items(&mut self, until_brace: bool) -> Vec<RawItem> {
        let mut out = Vec::new();
        loop {
            let t = self.peek().clone();
            match &t.kind {
                TokenKind::Eof => break,
                TokenKind::RBrace if until_brace => break,
                _ => {}
            }
            let item = match self.at_keyword(&ITEM_KEYWORDS) {
                Some(k) => self.item(&k),
                None => {
                    self.error_here("`type`, `aspect`, `A`, `E`, `I`, `O` or `fact`");
                    None
                }
            };
            match item {
                Some(item) => out.push(item),
                None => {
                    // Make progress even when the error is at the recovery point.
                    if self.pos < self.tokens.len() - 1 && self.peek().line == t.line && self.peek().column == t.column {
                        self.bump();
                    }
                    self.recover(t.line, &ITEM_KEYWORDS);
                }
            }
        }
        out
    }

    fn item(&mut self, keyword: &str) -> Option<RawItem> {
        let kw = self.bump();
        let at = Spanned {
            text: keyword.to_string(),
            line: kw.line,
            column: kw.column,
        };
        match keyword {
            "type" => {
                let id = self.ident("a type identifier")?;
                let label = self.string("a quoted label")?;
                Some(RawItem::Type { id, label })
            }
            "aspect" => {
                let name = self.ident("an aspect name")?;
                self.eat(TokenKind::Colon, "`:`")?;
                let source = self.ident("a source type")?;
                self.eat(TokenKind::Arrow, "`->`")?;
                let target = self.ident("a target type")?;
                Some(RawItem::Aspect { name, source, target })
            }
            "fact" => {
                let name = match self.peek().kind.clone() {
                    TokenKind::Str(s) => {
                        self.bump();
                        Some(s)
                    }
                    _ => None,
                };
                self.eat(TokenKind::Colon, "`:`")?;
                let lhs = self.path()?;
                self.eat(TokenKind::Equals, "`=`")?;
                let rhs = self.path()?;
                Some(RawItem::Fact { at, name, lhs, rhs })
            }
            letter => {
                let form = Form::from_letter(letter.chars().next()?)?;
                let subject = self.ident("a subject type")?;
                let predicate = self.ident("a predicate type")?;
                Some(RawItem::Premiss {
                    form,
                    at,
                    subject,
                    predicate,
                })
            }
        }
    }

    fn path(&mut self) -> Option<RawPath> {
        let first = self.ident("an aspect name or `id(...)`")?;
        if first.text == "id" && self.peek().kind == TokenKind::LParen {
            self.bump();
            let node = self.ident("a type identifier")?;
            self.eat(TokenKind::RParen, "`)`")?;
            return Some(RawPath::Identity(node));
        }
        let mut names = vec![first];
        while self.peek().kind == TokenKind::Semi {
            self.bump();
            names.push(self.ident("an aspect name")?);
        }
        Some(RawPath::Names(names))
    }

    fn element(&mut self) -> Option<Spanned> {
        if self.starts_item() {
            self.error_here("an element (identifier or string)");
            return None;
        }
        let t = self.peek().clone();
        let text = match t.kind {
            TokenKind::Ident(s) | TokenKind::Str(s) => s,
            _ => {
                self.error_here("an element (identifier or string)");
                return None;
            }
        };
        self.bump();
        Some(Spanned {
            text,
            line: t.line,
            column: t.column,
        })
    }

    fn entries(&mut self) -> Vec<RawEntry> {
        let mut out = Vec::new();
        loop {
            let t = self.peek().clone();
            if matches!(t.kind, TokenKind::Eof | TokenKind::RBrace) {
                break;
            }
            let entry = match self.at_keyword(&ENTRY_KEYWORDS) {
                Some(k) => self.entry(&k),
                None => {
                    self.error_here("`set` or `map`");
                    None
                }
            };
            match entry {
                Some(e) => out.push(e),
                None => {
                    if self.peek().line == t.line && self.peek().column == t.column {
                        self.bump();
                    }
                    self.recover(t.line, &ENTRY_KEYWORDS);
                }
            }
        }
        out
    }

    fn entry(&mut self, keyword: &str) -> Option<RawEntry> {
        self.bump();
        if keyword == "set" {
            let type_id = self.ident("a type identifier")?;
            self.eat(TokenKind::Equals, "`=`")?;
            self.eat(TokenKind::LBrace, "`{`")?;
            let mut elements = Vec::new();
            if self.peek().kind != TokenKind::RBrace {
                elements.push(self.element()?);
                while self.peek().kind == TokenKind::Comma {
                    self.bump();
                    elements.push(self.element()?);
                }
            }
            self.eat(TokenKind::RBrace, "`,` or `}`")?;
            Some(RawEntry::Set { type_id, elements })
        } else {
            let name = self.ident("an aspect name")?;
            self.eat(TokenKind::Colon, "`:`")?;
            let mut pairs = Vec::new();
            loop {
                let x = self.element()?;
                self.eat(TokenKind::Arrow, "`->`")?;
                let y = self.element()?;
                pairs.push((x, y));
                if self.peek().kind != TokenKind::Comma {
                    break;
                }
                self.bump();
            }
            Some(RawEntry::Map { name, pairs })
        }
    }

    fn finish(&mut self) {
        if self.peek().kind != TokenKind::Eof {
            self.error_here("end of input");
        }
    }
}

/// Parses a whole ologism document.
pub(crate) fn parse_ologism(source: &str) -> (Option<Ologism>, Vec<SourceDiagnostic>) {
    let mut p = Parser::new(source, &ITEM_KEYWORDS);
    let mut name = String::new();
    let mut items = Vec::new();
    let header = p.keyword("ologism").and_then(|_| p.string("a quoted document name"));
    if let Some(n) = header {
        name = n;
        if p.eat(TokenKind::LBrace, "`{`").is_some() {
            items = p.items(true);
            if p.eat(TokenKind::RBrace, "`}`").is_some() {
                p.finish();
            }
        }
    }
    let mut diags = p.diags;
    let (ologism, resolve_diags) = resolve(&items, Ologism::new(name));
    diags.extend(resolve_diags);
    finish(ologism, diags)
}

/// Parses bare items (no document header) and adds them to `base`.
pub(crate) fn parse_items(source: &str, base: &Ologism) -> (Option<Ologism>, Vec<SourceDiagnostic>) {
    let mut p = Parser::new(source, &ITEM_KEYWORDS);
    let items = p.items(false);
    let mut diags = p.diags;
    let (ologism, resolve_diags) = resolve(&items, base.clone());
    diags.extend(resolve_diags);
    finish(ologism, diags)
}

/// Parses bare items and removes each of them from `base`.
pub(crate) fn retract_items(source: &str, base: &Ologism) -> (Option<Ologism>, Vec<SourceDiagnostic>) {
    let mut p = Parser::new(source, &ITEM_KEYWORDS);
    let items = p.items(false);
    let mut diags = p.diags;
    let mut o = base.clone();
    for item in &items {
        retract(item, &mut o, &mut diags);
    }
    finish(o, diags)
}

fn finish<T>(value: T, mut diags: Vec<SourceDiagnostic>) -> (Option<T>, Vec<SourceDiagnostic>) {
    diags.sort_by_key(|d| (d.line, d.column));
    let ok = !diags.iter().any(SourceDiagnostic::is_error);
    (ok.then_some(value), diags)
}

fn err(diags: &mut Vec<SourceDiagnostic>, code: &str, message: String, at: &Spanned) {
    diags.push(SourceDiagnostic::error(code, message, at.line, at.column));
}

fn check_type(o: &Ologism, t: &Spanned, diags: &mut Vec<SourceDiagnostic>) -> bool {
    let known = o.has_type(&TypeId::from(t.text.as_str()));
    if !known {
        err(diags, "UnknownType", format!("type `{}` is not declared", t.text), t);
    }
    known
}

fn resolve(items: &[RawItem], mut o: Ologism) -> (Ologism, Vec<SourceDiagnostic>) {
    let mut diags = Vec::new();
    for item in items {
        if let RawItem::Type { id, label } = item {
            if id.text == IS {
                err(&mut diags, "ReservedTypeId", "`is` cannot be a type identifier".into(), id);
            } else if o.has_type(&TypeId::from(id.text.as_str())) {
                err(&mut diags, "DuplicateType", format!("type `{}` is declared twice", id.text), id);
            } else if label.trim().is_empty() {
                err(&mut diags, "EmptyLabel", format!("type `{}` has an empty label", id.text), id);
            } else {
                o.add_type(TypeDecl::new(id.text.as_str(), label.as_str()));
            }
        }
    }
    for item in items {
        match item {
            RawItem::Aspect { name, source, target } if name.text == IS => {
                add_premiss(&mut o, Form::A, name, source, target, &mut diags);
            }
            RawItem::Aspect { name, source, target } => {
                let ok_s = check_type(&o, source, &mut diags);
                let ok_t = check_type(&o, target, &mut diags);
                if ok_s && ok_t {
                    let a = Aspect::new(name.text.as_str(), source.text.as_str(), target.text.as_str());
                    if o.aspects.contains(&a) {
                        err(&mut diags, "DuplicateAspect", format!("aspect `{a}` is declared twice"), name);
                    } else {
                        o.add_aspect(a);
                    }
                }
            }
            RawItem::Premiss {
                form,
                at,
                subject,
                predicate,
            } => add_premiss(&mut o, *form, at, subject, predicate, &mut diags),
            _ => {}
        }
    }
    for item in items {
        if let RawItem::Fact { at, name, lhs, rhs } = item {
            if let Some(fact) = resolve_fact(&o, at, name, lhs, rhs, &mut diags) {
                if o.facts.iter().any(|f| f.lhs == fact.lhs && f.rhs == fact.rhs) {
                    err(&mut diags, "DuplicateFact", format!("fact `{}` is declared twice", fact.describe()), at);
                } else {
                    o.facts.push(fact);
                }
            }
        }
    }
    (o, diags)
}

fn add_premiss(
    o: &mut Ologism,
    form: Form,
    at: &Spanned,
    subject: &Spanned,
    predicate: &Spanned,
    diags: &mut Vec<SourceDiagnostic>,
) {
    let ok_s = check_type(o, subject, diags);
    let ok_p = check_type(o, predicate, diags);
    if !(ok_s && ok_p) {
        return;
    }
    let prop = Proposition::new(form, subject.text.as_str(), predicate.text.as_str());
    if o.premisses.contains(&prop) {
        err(diags, "DuplicatePremiss", format!("premiss {prop} is declared twice"), at);
    } else {
        o.add_premiss(prop);
    }
}

/// All readings of a raw path as a chain of declared aspects.
fn path_candidates(o: &Ologism, path: &RawPath, diags: &mut Vec<SourceDiagnostic>) -> Vec<PathWord> {
    match path {
        RawPath::Identity(node) => {
            if check_type(o, node, diags) {
                vec![PathWord::empty(node.text.as_str())]
            } else {
                Vec::new()
            }
        }
        RawPath::Names(names) => {
            let mut missing = false;
            let options: Vec<Vec<&Aspect>> = names
                .iter()
                .map(|n| {
                    let found: Vec<&Aspect> = o.aspects_named(&n.text).collect();
                    if found.is_empty() {
                        missing = true;
                        err(diags, "UnknownAspect", format!("aspect `{}` is not declared", n.text), n);
                    }
                    found
                })
                .collect();
            if missing {
                return Vec::new();
            }
            let mut chains: Vec<Vec<Aspect>> = options[0].iter().map(|a| vec![(*a).clone()]).collect();
            for step in &options[1..] {
                chains = chains
                    .into_iter()
                    .flat_map(|c| {
                        let end = c.last().expect("chains are nonempty").target.clone();
                        step.iter().filter(move |a| a.source == end).map(move |a| {
                            let mut c2 = c.clone();
                            c2.push((*a).clone());
                            c2
                        })
                    })
                    .collect();
            }
            if chains.is_empty() {
                err(
                    diags,
                    "BrokenPath",
                    format!(
                        "aspects {} do not compose into a path",
                        names.iter().map(|n| n.text.as_str()).collect::<Vec<_>>().join(" ; ")
                    ),
                    &names[0],
                );
            }
            chains
                .into_iter()
                .map(|c| PathWord::from_arcs(c).expect("chains compose"))
                .collect()
        }
    }
}

fn resolve_fact(
    o: &Ologism,
    at: &Spanned,
    name: &Option<String>,
    lhs: &RawPath,
    rhs: &RawPath,
    diags: &mut Vec<SourceDiagnostic>,
) -> Option<Fact> {
    let ls = path_candidates(o, lhs, diags);
    let rs = path_candidates(o, rhs, diags);
    if ls.is_empty() || rs.is_empty() {
        return None;
    }
    let pairs: Vec<(&PathWord, &PathWord)> = ls
        .iter()
        .flat_map(|l| rs.iter().map(move |r| (l, r)))
        .filter(|(l, r)| l.is_parallel(r))
        .collect();
    match pairs.as_slice() {
        [(l, r)] => Some(Fact::new(name.clone(), (*l).clone(), (*r).clone())),
        [] => {
            let (l, r) = (&ls[0], &rs[0]);
            err(
                diags,
                "NonParallelFact",
                format!(
                    "{l} goes from {} to {} but {r} goes from {} to {}",
                    l.source(),
                    l.target(),
                    r.source(),
                    r.target()
                ),
                at,
            );
            None
        }
        _ => {
            err(
                diags,
                "AmbiguousPath",
                format!("the fact can be read in {} ways; rename aspects to disambiguate", pairs.len()),
                at,
            );
            None
        }
    }
}

fn retract(item: &RawItem, o: &mut Ologism, diags: &mut Vec<SourceDiagnostic>) {
    match item {
        RawItem::Type { id, .. } => {
            let t = TypeId::from(id.text.as_str());
            let used = o.aspects.iter().any(|a| a.source == t || a.target == t)
                || o.premisses.iter().any(|p| p.mentions(&t));
            if !o.has_type(&t) {
                err(diags, "NotDeclared", format!("type `{t}` is not declared"), id);
            } else if used {
                err(diags, "TypeInUse", format!("type `{t}` is still used"), id);
            } else {
                o.types.retain(|d| d.id != t);
            }
        }
        RawItem::Aspect { name, source, target } if name.text == IS => {
            retract_premiss(o, Form::A, name, source, target, diags)
        }
        RawItem::Aspect { name, source, target } => {
            let a = Aspect::new(name.text.as_str(), source.text.as_str(), target.text.as_str());
            if !o.aspects.contains(&a) {
                err(diags, "NotDeclared", format!("aspect `{a}` is not declared"), name);
            } else if o.facts.iter().any(|f| f.lhs.arcs().contains(&a) || f.rhs.arcs().contains(&a)) {
                err(diags, "AspectInUse", format!("aspect `{a}` is used by a fact"), name);
            } else {
                o.aspects.retain(|x| *x != a);
            }
        }
        RawItem::Premiss {
            form,
            at,
            subject,
            predicate,
        } => retract_premiss(o, *form, at, subject, predicate, diags),
        RawItem::Fact { at, name, lhs, rhs } => {
            let Some(fact) = resolve_fact(o, at, name, lhs, rhs, diags) else {
                return;
            };
            let before = o.facts.len();
            o.facts.retain(|f| {
                let same = (f.lhs == fact.lhs && f.rhs == fact.rhs) || (f.lhs == fact.rhs && f.rhs == fact.lhs);
                !(same && (fact.name.is_none() || f.name == fact.name))
            });
            if o.facts.len() == before {
                err(diags, "NotDeclared", format!("fact `{}` is not declared", fact.describe()), at);
            }
        }
    }
}

fn retract_premiss(
    o: &mut Ologism,
    form: Form,
    at: &Spanned,
    subject: &Spanned,
    predicate: &Spanned,
    diags: &mut Vec<SourceDiagnostic>,
) {
    let prop = Proposition::new(form, subject.text.as_str(), predicate.text.as_str());
    if form == Form::A {
        let a = Aspect::is(prop.subject().clone(), prop.predicate().clone());
        if o.facts.iter().any(|f| f.lhs.arcs().contains(&a) || f.rhs.arcs().contains(&a)) {
            err(diags, "AspectInUse", format!("aspect `{a}` is used by a fact"), at);
            return;
        }
    }
    if !o.retract_premiss(&prop) {
        err(diags, "NotDeclared", format!("premiss {prop} is not declared"), at);
    }
}

/// Parses a model document. Names are checked against an ologism only when
/// the model is checked.
pub(crate) fn parse_model(source: &str) -> (Option<Model>, Vec<SourceDiagnostic>) {
    let mut p = Parser::new(source, &ENTRY_KEYWORDS);
    let mut model = Model::default();
    let mut entries = Vec::new();
    let header = (|| {
        p.keyword("model")?;
        let name = p.string("a quoted model name")?;
        p.keyword("for")?;
        let ologism = p.string("a quoted ologism name")?;
        p.eat(TokenKind::LBrace, "`{`")?;
        Some((name, ologism))
    })();
    if let Some((name, ologism)) = header {
        model.name = name;
        model.ologism = ologism;
        entries = p.entries();
        if p.eat(TokenKind::RBrace, "`}`").is_some() {
            p.finish();
        }
    }
    let mut diags = p.diags;
    for entry in entries {
        match entry {
            RawEntry::Set { type_id, elements } => {
                let t = TypeId::from(type_id.text.as_str());
                if model.carriers.contains_key(&t) {
                    err(&mut diags, "DuplicateSet", format!("set `{t}` is given twice"), &type_id);
                    continue;
                }
                let mut set = BTreeSet::new();
                for e in elements {
                    if !set.insert(e.text.clone()) {
                        diags.push(SourceDiagnostic::warning(
                            "DuplicateElement",
                            format!("element `{}` is listed twice", e.text),
                            e.line,
                            e.column,
                        ));
                    }
                }
                model.carriers.insert(t, set);
            }
            RawEntry::Map { name, pairs } => {
                if model.maps.contains_key(&name.text) {
                    err(&mut diags, "DuplicateMap", format!("map `{}` is given twice", name.text), &name);
                    continue;
                }
                let mut map: BTreeMap<String, String> = BTreeMap::new();
                for (x, y) in pairs {
                    match map.get(&x.text) {
                        Some(prev) if *prev != y.text => err(
                            &mut diags,
                            "ConflictingMapping",
                            format!("`{}` is sent to both `{prev}` and `{}`", x.text, y.text),
                            &x,
                        ),
                        Some(_) => diags.push(SourceDiagnostic::warning(
                            "DuplicateMapping",
                            format!("`{}` is mapped twice", x.text),
                            x.line,
                            x.column,
                        )),
                        None => {
                            map.insert(x.text, y.text);
                        }
                    }
                }
                model.maps.insert(name.text, map);
            }
        }
    }
    finish(model, diags)
}

/// Parses `path = path` and resolves both sides against `o`.
pub(crate) fn parse_equation(source: &str, o: &Ologism) -> (Option<(PathWord, PathWord)>, Vec<SourceDiagnostic>) {
    let mut p = Parser::new(source, &[]);
    let start = p.peek().clone();
    let at = Spanned {
        text: String::new(),
        line: start.line,
        column: start.column,
    };
    let sides = (|| {
        let lhs = p.path()?;
        p.eat(TokenKind::Equals, "`=`")?;
        let rhs = p.path()?;
        p.finish();
        Some((lhs, rhs))
    })();
    let mut diags = p.diags;
    let resolved = match sides {
        Some((lhs, rhs)) if diags.is_empty() => {
            resolve_fact(o, &at, &None, &lhs, &rhs, &mut diags).map(|f| (f.lhs, f.rhs))
        }
        _ => None,
    };
    let (value, diags) = finish(resolved, diags);
    (value.flatten(), diags)
}
