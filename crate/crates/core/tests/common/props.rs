//! Property checks shared by the proptest suite and the acceptance gate.
//! Each returns a description of the first failure.

use std::collections::BTreeSet;

use ologism::deduce::{close, close_premisses};
use ologism::dsl::{parse_ologism, serialize_ologism};
use ologism::eqtheory::CongruenceIndex;
use ologism::syll::{bullet_count, diagram_of, reverse, SyllProofTree};
use ologism::{Aspect, Fact, Form, Ologism, PathWord, Proposition, Statement, TypeDecl, TypeId};
use rand::seq::SliceRandom;
use rand::Rng;

use super::{all_paths, naive_closure, union_find_classes};

pub type Check = Result<(), String>;

fn closure_set(o: &Ologism) -> BTreeSet<Proposition> {
    close(o).propositions()
}

pub fn closure_matches_naive(o: &Ologism) -> Check {
    let theory = close(o);
    let naive = naive_closure(&o.type_ids(), &ologism::deduce::premisses_of(o));
    if theory.propositions() != naive {
        return Err(format!(
            "closure differs from naive fixpoint: extra {:?}, missing {:?}",
            theory.propositions().difference(&naive).collect::<Vec<_>>(),
            naive.difference(&theory.propositions()).collect::<Vec<_>>()
        ));
    }
    let premisses = ologism::deduce::premisses_of(o);
    for (p, d) in &theory.derivations {
        d.replay(&premisses).map_err(|e| format!("derivation of {p} does not replay: {e}"))?;
    }
    Ok(())
}

pub fn closure_idempotent(o: &Ologism) -> Check {
    let once = closure_set(o);
    let twice = close_premisses(&o.type_ids(), &once).propositions();
    if once == twice {
        Ok(())
    } else {
        Err(format!("closing twice adds {:?}", twice.difference(&once).collect::<Vec<_>>()))
    }
}

pub fn closure_monotone(o: &Ologism, extra: &Proposition) -> Check {
    let before = closure_set(o);
    let mut bigger = ologism::deduce::premisses_of(o);
    bigger.insert(extra.clone());
    let after = close_premisses(&o.type_ids(), &bigger).propositions();
    match before.difference(&after).next() {
        None => Ok(()),
        Some(lost) => Err(format!("adding {extra} loses {lost}")),
    }
}

pub fn reversal_involution(s: &Statement) -> Check {
    let d = diagram_of(s);
    if reverse(&reverse(&d)) != d {
        return Err(format!("reversing {d} twice changes it"));
    }
    if bullet_count(&reverse(&d)) != bullet_count(&d) {
        return Err(format!("reversing {d} changes its bullets"));
    }
    Ok(())
}

/// Every inner node has as many bullets as its children together, and the
/// whole tree replays.
pub fn bullets_conserved(tree: &SyllProofTree) -> Check {
    tree.replay().map_err(|e| e.to_string())?;
    fn walk(t: &SyllProofTree) -> Check {
        if !t.children.is_empty() {
            let below: usize = t.children.iter().map(|c| bullet_count(&c.root)).sum();
            if below != bullet_count(&t.root) {
                return Err(format!("{} has {} bullets, its parts {below}", t.root, bullet_count(&t.root)));
            }
        }
        t.children.iter().try_for_each(walk)
    }
    walk(tree)
}

/// Reflexivity, symmetry and transitivity of `equal`, agreement with an
/// independent union-find, and compatibility with composition.
pub fn congruence_laws(o: &Ologism, bound: usize) -> Check {
    let index = CongruenceIndex::new(o).map_err(|e| e.to_string())?;
    let types = o.type_ids();
    for s in &types {
        for t in &types {
            let classes = index.classes(s, t, bound).map_err(|e| e.to_string())?;
            let oracle = union_find_classes(o, s, t, bound);
            if classes != oracle {
                return Err(format!("classes {s} -> {t} differ from union-find: {classes:?} vs {oracle:?}"));
            }
            let words = all_paths(o, s, t, bound);
            let class_of = |w: &PathWord| classes.iter().position(|c| c.contains(w));
            for p in &words {
                for q in &words {
                    let eq = index.equal(p, q, Some(bound)).map_err(|e| e.to_string())?.is_equal();
                    let back = index.equal(q, p, Some(bound)).map_err(|e| e.to_string())?.is_equal();
                    if eq != back {
                        return Err(format!("equal({p}, {q}) is not symmetric"));
                    }
                    if eq != (class_of(p) == class_of(q)) {
                        return Err(format!("equal({p}, {q}) = {eq} disagrees with the classes"));
                    }
                    if p == q && !eq {
                        return Err(format!("{p} is not equal to itself"));
                    }
                }
            }
        }
    }
    // Composing equal paths with a common arc keeps them equal (with room).
    for fact in &o.facts {
        for a in o.aspects.iter().filter(|a| a.source == *fact.lhs.target()) {
            let next = PathWord::single(a.clone());
            let (p, q) = (fact.lhs.compose(&next).unwrap(), fact.rhs.compose(&next).unwrap());
            let room = p.len().max(q.len()).max(bound);
            if !index.equal(&p, &q, Some(room)).map_err(|e| e.to_string())?.is_equal() {
                return Err(format!("{p} and {q} are not equal after composing {a}"));
            }
        }
    }
    Ok(())
}

pub fn round_trips(o: &Ologism) -> Check {
    let text = serialize_ologism(o).map_err(|e| e.to_string())?;
    let back = parse_ologism(&text).map_err(|d| format!("{d:?}\n{text}"))?;
    if back.canonical() != o.canonical() {
        return Err(format!("round trip changed the document:\n{text}"));
    }
    let again = serialize_ologism(&back).map_err(|e| e.to_string())?;
    if again != text {
        return Err(format!("serialization is not stable:\n{text}\n{again}"));
    }
    Ok(())
}

const LABEL_PIECES: [&str; 8] = ["a thing", "an \"odd\" one", "a path \\ sep", "ünïcode", "a", "x y z", "#hash", "{b}"];

/// A random valid document with general aspects, `is` aspects, premisses of
/// every form and facts between parallel paths.
pub fn random_document(rng: &mut impl Rng) -> Ologism {
    let k = rng.gen_range(1..=5);
    let mut o = Ologism::new(format!("doc {}", rng.gen_range(0..100)));
    let types: Vec<TypeId> = (0..k).map(|i| TypeId::from(format!("T{i}"))).collect();
    for t in &types {
        let label = format!("{} {t}", LABEL_PIECES.choose(rng).unwrap());
        o.add_type(TypeDecl::new(t.clone(), label));
    }
    for i in 0..rng.gen_range(0..=5) {
        let (s, t) = (types.choose(rng).unwrap(), types.choose(rng).unwrap());
        o.add_aspect(Aspect::new(format!("f{i}"), s.clone(), t.clone()));
    }
    for _ in 0..rng.gen_range(0..=6) {
        let form = Form::ALL[rng.gen_range(0..4)];
        let p = Proposition::new(form, types.choose(rng).unwrap().clone(), types.choose(rng).unwrap().clone());
        if !o.premisses.contains(&p) {
            o.add_premiss(p);
        }
    }
    let general = Ologism {
        aspects: o.general_aspects().cloned().collect(),
        ..Ologism::new("")
    };
    for i in 0..rng.gen_range(0..=2) {
        let (s, t) = (types.choose(rng).unwrap(), types.choose(rng).unwrap());
        let paths = all_paths(&general, s, t, 2);
        if paths.len() < 2 {
            continue;
        }
        let pair: Vec<&PathWord> = paths.choose_multiple(rng, 2).collect();
        let (l, r) = (pair[0].clone(), pair[1].clone());
        if o.facts.iter().any(|f| (f.lhs == l && f.rhs == r) || (f.lhs == r && f.rhs == l)) {
            continue;
        }
        let name = rng.gen_bool(0.5).then(|| format!("fact {i}"));
        o.facts.push(Fact::new(name, l, r));
    }
    o
}

const FUZZ_TOKENS: [&str; 24] = [
    "ologism", "\"x\"", "{", "}", "type", "aspect", "A", "E", "I", "O", "fact", ":", "->", "=", ";", "id", "(", ")",
    "T0", "T1", "f", "is", "\"", "\n",
];

/// Random token soup, sometimes spliced into a valid document.
pub fn fuzz_input(rng: &mut impl Rng, valid: &str) -> String {
    let mut out = String::new();
    if rng.gen_bool(0.5) {
        let cut = rng.gen_range(0..=valid.len());
        let cut = (0..=cut).rev().find(|&c| valid.is_char_boundary(c)).unwrap_or(0);
        out.push_str(&valid[..cut]);
    }
    for _ in 0..rng.gen_range(0..40) {
        if rng.gen_bool(0.1) {
            out.push(char::from_u32(rng.gen_range(0..0x2FFF)).unwrap_or('?'));
        } else {
            out.push_str(FUZZ_TOKENS.choose(rng).unwrap());
        }
        out.push(if rng.gen_bool(0.8) { ' ' } else { '\n' });
    }
    out
}

/// The parser returns (no panic), and errors carry positions inside the input.
pub fn parser_survives(input: &str) -> Check {
    let lines = input.lines().count().max(1) + 1;
    for result in [parse_ologism(input).err(), ologism::dsl::parse_model(input).err()] {
        for d in result.unwrap_or_default() {
            if d.line == 0 || d.line > lines || d.column == 0 {
                return Err(format!("diagnostic {d} points outside the input"));
            }
        }
    }
    Ok(())
}
