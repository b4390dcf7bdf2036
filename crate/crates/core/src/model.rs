//! Finite set-theoretic models of ologisms and the checker that compares a
//! model against a document.
//!
//! A model assigns a finite set of element names to every type and a
//! finite function to every aspect. `is` aspects are inclusions: their maps
//! may be left out, and when given they must be identities.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::deduce;
use crate::olog::{Fact, Form, LookupError, Ologism, PathWord, Proposition, TypeId, IS};

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Model {
    /// Name of the ologism this model is meant for.
    pub ologism: String,
    pub name: String,
    pub carriers: BTreeMap<TypeId, BTreeSet<String>>,
    /// Aspect name to its function, element to element.
    pub maps: BTreeMap<String, BTreeMap<String, String>>,
}

impl Model {
    pub fn new(name: impl Into<String>, ologism: impl Into<String>) -> Self {
        Model {
            name: name.into(),
            ologism: ologism.into(),
            ..Default::default()
        }
    }

    pub fn with_set<I, S>(mut self, t: &str, elements: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.carriers
            .insert(TypeId::from(t), elements.into_iter().map(Into::into).collect());
        self
    }

    pub fn with_map<I, S, T>(mut self, aspect: &str, pairs: I) -> Self
    where
        I: IntoIterator<Item = (S, T)>,
        S: Into<String>,
        T: Into<String>,
    {
        self.maps.insert(
            aspect.to_string(),
            pairs.into_iter().map(|(x, y)| (x.into(), y.into())).collect(),
        );
        self
    }

    pub fn carrier(&self, t: &TypeId) -> Result<&BTreeSet<String>, LookupError> {
        self.carriers.get(t).ok_or_else(|| LookupError(t.clone()))
    }
}

/// Which propositions a model is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Against {
    Premisses,
    Closure,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    MissingCarrier { type_id: TypeId },
    UnknownAspect { name: String },
    AmbiguousAspect { name: String },
    MapNotTotal { aspect: String, element: String },
    DomainOutsideSource { aspect: String, element: String },
    ImageOutsideTarget { aspect: String, element: String, image: String },
    IsNotInclusion { source: TypeId, target: TypeId, element: String },
    FactBroken { fact: String, witness: String },
    PrescriptionBroken { prop: Proposition, witness: Option<String> },
    /// A derived proposition fails although every premiss holds.
    SoundnessAlarm { prop: Proposition },
}

impl Violation {
    /// Variant name, for machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::MissingCarrier { .. } => "MissingCarrier",
            Violation::UnknownAspect { .. } => "UnknownAspect",
            Violation::AmbiguousAspect { .. } => "AmbiguousAspect",
            Violation::MapNotTotal { .. } => "MapNotTotal",
            Violation::DomainOutsideSource { .. } => "DomainOutsideSource",
            Violation::ImageOutsideTarget { .. } => "ImageOutsideTarget",
            Violation::IsNotInclusion { .. } => "IsNotInclusion",
            Violation::FactBroken { .. } => "FactBroken",
            Violation::PrescriptionBroken { .. } => "PrescriptionBroken",
            Violation::SoundnessAlarm { .. } => "SoundnessAlarm",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::MissingCarrier { type_id } => write!(f, "no set is given for type `{type_id}`"),
            Violation::UnknownAspect { name } => write!(f, "map `{name}` does not name an aspect"),
            Violation::AmbiguousAspect { name } => write!(f, "map `{name}` names several aspects"),
            Violation::MapNotTotal { aspect, element } => {
                write!(f, "map `{aspect}` is undefined on `{element}`")
            }
            Violation::DomainOutsideSource { aspect, element } => {
                write!(f, "map `{aspect}` is defined on `{element}`, outside its source set")
            }
            Violation::ImageOutsideTarget { aspect, element, image } => {
                write!(f, "map `{aspect}` sends `{element}` to `{image}`, outside its target set")
            }
            Violation::IsNotInclusion { source, target, element } => {
                write!(f, "`is` from {source} to {target} is not an inclusion at `{element}`")
            }
            Violation::FactBroken { fact, witness } => {
                write!(f, "fact `{fact}` fails at `{witness}`")
            }
            Violation::PrescriptionBroken { prop, witness: Some(w) } => {
                write!(f, "{prop} fails, witness `{w}`")
            }
            Violation::PrescriptionBroken { prop, witness: None } => write!(f, "{prop} fails"),
            Violation::SoundnessAlarm { prop } => {
                write!(f, "internal inconsistency: derived {prop} fails in a model of the premisses")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct ViolationReport {
    pub violations: Vec<Violation>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Set-theoretic truth of a proposition: A is inclusion, E disjointness,
/// I overlap and O non-inclusion.
pub fn satisfies(model: &Model, prop: &Proposition) -> Result<bool, LookupError> {
    Ok(counterexample(model, prop)?.is_none())
}

/// `None` when `prop` holds; otherwise the witness of its failure, if the
/// failure has one (A and E do, I and O do not).
fn counterexample(model: &Model, prop: &Proposition) -> Result<Option<Option<String>>, LookupError> {
    let s = model.carrier(prop.subject())?;
    let p = model.carrier(prop.predicate())?;
    Ok(match prop.form() {
        Form::A => s.difference(p).next().map(|x| Some(x.clone())),
        Form::E => s.intersection(p).next().map(|x| Some(x.clone())),
        Form::I => s.intersection(p).next().is_none().then_some(None),
        Form::O => s.is_subset(p).then_some(None),
    })
}

pub fn check_model(ologism: &Ologism, model: &Model, against: Against) -> ViolationReport {
    let mut out = structural_violations(ologism, model);
    let complete = !out.iter().any(|v| matches!(v, Violation::MissingCarrier { .. }));
    if complete {
        let premisses = deduce::premisses_of(ologism);
        let premiss_breaks = prescription_violations(model, &premisses);
        match against {
            Against::Premisses => out.extend(premiss_breaks),
            Against::Closure => {
                let theory = deduce::close(ologism);
                let closure_breaks = prescription_violations(model, &theory.propositions());
                if premiss_breaks.is_empty() {
                    out.extend(closure_breaks.iter().filter_map(|v| match v {
                        Violation::PrescriptionBroken { prop, .. } => {
                            Some(Violation::SoundnessAlarm { prop: prop.clone() })
                        }
                        _ => None,
                    }));
                }
                out.extend(closure_breaks);
            }
        }
    }
    ViolationReport { violations: out }
}

fn prescription_violations(model: &Model, props: &BTreeSet<Proposition>) -> Vec<Violation> {
    props
        .iter()
        .filter_map(|prop| match counterexample(model, prop) {
            Ok(Some(witness)) => Some(Violation::PrescriptionBroken {
                prop: prop.clone(),
                witness,
            }),
            _ => None,
        })
        .collect()
}

fn structural_violations(ologism: &Ologism, model: &Model) -> Vec<Violation> {
    let mut out = Vec::new();
    for t in ologism.type_ids() {
        if !model.carriers.contains_key(&t) {
            out.push(Violation::MissingCarrier { type_id: t });
        }
    }
    let empty = BTreeSet::new();
    let carrier = |t: &TypeId| model.carriers.get(t).unwrap_or(&empty);

    for name in model.maps.keys() {
        if name == IS {
            continue;
        }
        match ologism.aspects_named(name).count() {
            0 => out.push(Violation::UnknownAspect { name: name.clone() }),
            1 => {}
            _ => out.push(Violation::AmbiguousAspect { name: name.clone() }),
        }
    }

    for aspect in ologism.general_aspects() {
        let (src, tgt) = (carrier(&aspect.source), carrier(&aspect.target));
        let map = model.maps.get(&aspect.name);
        for x in src {
            match map.and_then(|m| m.get(x)) {
                None => out.push(Violation::MapNotTotal {
                    aspect: aspect.name.clone(),
                    element: x.clone(),
                }),
                Some(y) if !tgt.contains(y) => out.push(Violation::ImageOutsideTarget {
                    aspect: aspect.name.clone(),
                    element: x.clone(),
                    image: y.clone(),
                }),
                Some(_) => {}
            }
        }
        for x in map.into_iter().flat_map(|m| m.keys()) {
            if !src.contains(x) {
                out.push(Violation::DomainOutsideSource {
                    aspect: aspect.name.clone(),
                    element: x.clone(),
                });
            }
        }
    }

    let is_map = model.maps.get(IS);
    for aspect in ologism.aspects.iter().filter(|a| a.is_flag()) {
        let tgt = carrier(&aspect.target);
        for x in carrier(&aspect.source) {
            let moved = is_map.and_then(|m| m.get(x)).is_some_and(|y| y != x);
            if moved || !tgt.contains(x) {
                out.push(Violation::IsNotInclusion {
                    source: aspect.source.clone(),
                    target: aspect.target.clone(),
                    element: x.clone(),
                });
            }
        }
    }

    for fact in &ologism.facts {
        if let Some(witness) = fact_witness(model, fact, carrier(fact.lhs.source())) {
            out.push(Violation::FactBroken {
                fact: fact.describe(),
                witness,
            });
        }
    }
    out
}

/// First element on which both composites are defined and differ.
fn fact_witness(model: &Model, fact: &Fact, domain: &BTreeSet<String>) -> Option<String> {
    domain
        .iter()
        .find(|x| match (evaluate(model, &fact.lhs, x), evaluate(model, &fact.rhs, x)) {
            (Some(a), Some(b)) => a != b,
            _ => false,
        })
        .cloned()
}

/// Image of `x` under the composite of `path`; `is` arcs act as identity.
pub fn evaluate(model: &Model, path: &PathWord, x: &str) -> Option<String> {
    let mut at = x.to_string();
    for arc in path.arcs() {
        if arc.is_flag() {
            continue;
        }
        at = model.maps.get(&arc.name)?.get(&at)?.clone();
    }
    Some(at)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{custodian, custodian_model, has_mother};

    fn mother_model() -> Model {
        Model::new("family", "has mother")
            .with_set("P", ["Michael", "Diana", "John", "Mary", "Susan"])
            .with_set("R", ["(Susan,Juan)", "(Elen1,Albert)", "(Elen2,Jerry)"])
            .with_set("W", ["Susan", "Elen1", "Elen2", "Clare"])
            .with_map(
                "hasAsParents",
                [
                    ("Michael", "(Susan,Juan)"),
                    ("Diana", "(Susan,Juan)"),
                    ("John", "(Elen1,Albert)"),
                    ("Mary", "(Elen2,Jerry)"),
                    ("Susan", "(Elen2,Jerry)"),
                ],
            )
            .with_map(
                "w",
                [("(Susan,Juan)", "Susan"), ("(Elen1,Albert)", "Elen1"), ("(Elen2,Jerry)", "Elen2")],
            )
            .with_map(
                "hasAsMother",
                [
                    ("Michael", "Susan"),
                    ("Diana", "Susan"),
                    ("John", "Elen1"),
                    ("Mary", "Elen2"),
                    ("Susan", "Elen2"),
                ],
            )
    }

    #[test]
    fn prescriptions() {
        let m = Model::new("m", "o").with_set("A", ["0", "1"]).with_set("B", ["0"]);
        assert!(satisfies(&m, &Proposition::o("A", "B")).unwrap());
        assert!(!satisfies(&m, &Proposition::a("A", "B")).unwrap());
        assert!(satisfies(&m, &Proposition::i("B", "A")).unwrap());

        let m = Model::new("m", "o").with_set("A", Vec::<String>::new()).with_set("B", ["0"]);
        assert!(satisfies(&m, &Proposition::a("A", "B")).unwrap());
        assert!(!satisfies(&m, &Proposition::i("A", "B")).unwrap());
        assert!(!satisfies(&m, &Proposition::o("A", "A")).unwrap());
        assert!(satisfies(&m, &Proposition::o("X", "A")).is_err());
    }

    #[test]
    fn custodian_model_satisfies_closure() {
        let m = custodian_model();
        assert!(satisfies(&m, &Proposition::e("C", "I")).unwrap());
        assert_eq!(check_model(&custodian(), &m, Against::Closure), ViolationReport::default());
        assert_eq!(check_model(&custodian(), &m, Against::Premisses), ViolationReport::default());
    }

    #[test]
    fn mother_model_and_its_mutation() {
        let o = has_mother();
        let m = mother_model();
        assert!(check_model(&o, &m, Against::Closure).is_empty());

        let mut broken = m.clone();
        broken
            .maps
            .get_mut("hasAsMother")
            .unwrap()
            .insert("Susan".into(), "Elen1".into());
        assert_eq!(
            check_model(&o, &broken, Against::Premisses).violations,
            vec![Violation::FactBroken {
                fact: "mother".into(),
                witness: "Susan".into()
            }]
        );
    }

    #[test]
    fn structural_problems() {
        let o = has_mother();
        let mut m = mother_model();
        m.maps.get_mut("w").unwrap().remove("(Elen2,Jerry)");
        m.maps.get_mut("hasAsParents").unwrap().insert("John".into(), "(Nobody,Else)".into());
        m.maps.insert("hasAsFather".into(), BTreeMap::new());
        m.carriers.remove(&TypeId::from("W"));
        let v = check_model(&o, &m, Against::Premisses).violations;
        assert!(v.contains(&Violation::MissingCarrier { type_id: "W".into() }));
        assert!(v.contains(&Violation::UnknownAspect { name: "hasAsFather".into() }));
        assert!(v.contains(&Violation::MapNotTotal {
            aspect: "w".into(),
            element: "(Elen2,Jerry)".into()
        }));
        assert!(v.contains(&Violation::ImageOutsideTarget {
            aspect: "hasAsParents".into(),
            element: "John".into(),
            image: "(Nobody,Else)".into()
        }));
    }

    #[test]
    fn is_maps_must_be_inclusions() {
        let o = Ologism::new("t")
            .with_type("X", "an x")
            .with_type("Y", "a y")
            .with_premiss(Proposition::a("X", "Y"));
        let m = Model::new("m", "t").with_set("X", ["a"]).with_set("Y", ["a", "b"]);
        assert!(check_model(&o, &m, Against::Premisses).is_empty());
        let m2 = m.clone().with_map("is", [("a", "b")]);
        assert!(check_model(&o, &m2, Against::Premisses)
            .violations
            .iter()
            .any(|v| matches!(v, Violation::IsNotInclusion { .. })));
        let m3 = Model::new("m", "t").with_set("X", ["a", "c"]).with_set("Y", ["a"]);
        let v = check_model(&o, &m3, Against::Premisses).violations;
        assert!(v.contains(&Violation::IsNotInclusion {
            source: "X".into(),
            target: "Y".into(),
            element: "c".into()
        }));
    }
}
