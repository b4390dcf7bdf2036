//! The worked documents used across unit tests.

use crate::model::Model;
use crate::olog::{Aspect, Fact, Ologism, PathWord, Proposition};

pub(crate) fn animals() -> Ologism {
    Ologism::new("animals")
        .with_type("B", "a bird")
        .with_type("V", "a vertebrate")
        .with_type("A", "an animal that is able to fly")
        .with_type("M", "a mammal")
        .with_premiss(Proposition::a("B", "V"))
        .with_premiss(Proposition::a("M", "V"))
        .with_premiss(Proposition::e("B", "M"))
        .with_premiss(Proposition::i("M", "A"))
        .with_premiss(Proposition::o("B", "A"))
}

pub(crate) fn custodian() -> Ologism {
    Ologism::new("custodian")
        .with_type("C", "a custodian")
        .with_type("I", "an inspector")
        .with_type("H", "a helper")
        .with_premiss(Proposition::i("C", "C"))
        .with_premiss(Proposition::i("I", "I"))
        .with_premiss(Proposition::e("C", "I"))
        .with_premiss(Proposition::a("I", "H"))
        .with_aspect("has", "C", "H")
}

pub(crate) fn has_mother() -> Ologism {
    let parents = Aspect::new("hasAsParents", "P", "R");
    let w = Aspect::new("w", "R", "W");
    let mother = Aspect::new("hasAsMother", "P", "W");
    Ologism::new("has mother")
        .with_type("P", "a person")
        .with_type("R", "a pair (w, m) where w is a woman and m is a man")
        .with_type("W", "a woman")
        .with_aspect("hasAsParents", "P", "R")
        .with_aspect("w", "R", "W")
        .with_aspect("hasAsMother", "P", "W")
        .with_fact(Fact::new(
            Some("mother".into()),
            PathWord::single(mother),
            PathWord::from_arcs(vec![parents, w]).unwrap(),
        ))
}

pub(crate) fn custodian_model() -> Model {
    Model::new("custodian model", "custodian")
        .with_set("C", ["C10", "C11", "C12", "C13"])
        .with_set("I", ["H10I1", "H11I2", "H12I3", "H13I4"])
        .with_set("H", ["H01", "H02", "H03", "H10I1", "H11I2", "H12I3", "H13I4"])
        .with_map(
            "has",
            [("C10", "H01"), ("C11", "H02"), ("C12", "H12I3"), ("C13", "H11I2")],
        )
}
