//! Canonical text output. Parsing the output gives back an equal ologism up
//! to the order of declarations.

use std::fmt::Write;

use thiserror::Error;

use crate::model::Model;
use crate::olog::{is_identifier, Form, Ologism, PathWord, IS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerializeError {
    #[error("`{0}` is not a valid identifier")]
    InvalidIdentifier(String),
    #[error("`is` cannot be a type identifier")]
    ReservedTypeId,
    #[error("string {0:?} contains a line break")]
    Unrepresentable(String),
}

fn quote(s: &str) -> Result<String, SerializeError> {
    if s.contains(['\n', '\r']) {
        return Err(SerializeError::Unrepresentable(s.to_string()));
    }
    Ok(format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\"")))
}

fn ident(s: &str) -> Result<&str, SerializeError> {
    if is_identifier(s) {
        Ok(s)
    } else {
        Err(SerializeError::InvalidIdentifier(s.to_string()))
    }
}

fn type_ident(s: &str) -> Result<&str, SerializeError> {
    if s == IS {
        Err(SerializeError::ReservedTypeId)
    } else {
        ident(s)
    }
}

fn element(s: &str) -> Result<String, SerializeError> {
    if is_identifier(s) {
        Ok(s.to_string())
    } else {
        quote(s)
    }
}

fn path(p: &PathWord) -> Result<String, SerializeError> {
    if p.is_empty() {
        return Ok(format!("id({})", type_ident(p.source().as_str())?));
    }
    let names = p
        .arcs()
        .iter()
        .map(|a| ident(&a.name).map(str::to_string))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(names.join(" ; "))
}

/// Writes the canonical form: types, aspects, then `A`, `E`, `I`, `O`
/// premisses, then facts, each group sorted.
pub fn serialize_ologism(o: &Ologism) -> Result<String, SerializeError> {
    let mut out = String::new();
    writeln!(out, "ologism {} {{", quote(&o.name)?).unwrap();
    let mut types: Vec<_> = o.types.iter().collect();
    types.sort_by(|a, b| a.id.cmp(&b.id));
    for t in types {
        writeln!(out, "  type {} {}", type_ident(t.id.as_str())?, quote(&t.label)?).unwrap();
    }
    let mut aspects: Vec<_> = o.general_aspects().collect();
    aspects.sort();
    for a in aspects {
        writeln!(
            out,
            "  aspect {} : {} -> {}",
            ident(&a.name)?,
            type_ident(a.source.as_str())?,
            type_ident(a.target.as_str())?
        )
        .unwrap();
    }
    for form in Form::ALL {
        let mut props: Vec<_> = o.premisses_of(form).collect();
        props.sort();
        props.dedup();
        for p in props {
            writeln!(
                out,
                "  {} {} {}",
                form.letter(),
                type_ident(p.subject().as_str())?,
                type_ident(p.predicate().as_str())?
            )
            .unwrap();
        }
    }
    let mut facts: Vec<_> = o.facts.iter().collect();
    facts.sort();
    for f in facts {
        let name = match &f.name {
            Some(n) => format!(" {}", quote(n)?),
            None => String::new(),
        };
        writeln!(out, "  fact{name} : {} = {}", path(&f.lhs)?, path(&f.rhs)?).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}

pub fn serialize_model(m: &Model) -> Result<String, SerializeError> {
    let mut out = String::new();
    writeln!(out, "model {} for {} {{", quote(&m.name)?, quote(&m.ologism)?).unwrap();
    for (t, set) in &m.carriers {
        let elems = set.iter().map(|e| element(e)).collect::<Result<Vec<_>, _>>()?;
        writeln!(out, "  set {} = {{{}}}", type_ident(t.as_str())?, elems.join(", ")).unwrap();
    }
    for (name, map) in &m.maps {
        if map.is_empty() {
            continue;
        }
        let pairs = map
            .iter()
            .map(|(x, y)| Ok(format!("{} -> {}", element(x)?, element(y)?)))
            .collect::<Result<Vec<_>, SerializeError>>()?;
        writeln!(out, "  map {} : {}", ident(name)?, pairs.join(", ")).unwrap();
    }
    out.push_str("}\n");
    Ok(out)
}
