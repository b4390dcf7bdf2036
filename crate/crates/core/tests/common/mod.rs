//! Shared helpers: sample documents and independent reference oracles.

#![allow(dead_code)]

pub mod props;

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use ologism::dsl::{parse_model, parse_ologism};
use ologism::model::Model;
use ologism::{Form, Ologism, PathWord, Proposition, TypeId};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn sample_path(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../samples").join(file)
}

pub fn sample(file: &str) -> Ologism {
    let text = std::fs::read_to_string(sample_path(file)).expect("sample exists");
    parse_ologism(&text).unwrap_or_else(|d| panic!("{file}: {d:?}"))
}

pub fn sample_model(file: &str) -> Model {
    let text = std::fs::read_to_string(sample_path(file)).expect("sample exists");
    parse_model(&text).unwrap_or_else(|d| panic!("{file}: {d:?}"))
}

/// The fixed corpus of random is-only documents shared by the semantic suites.
pub fn random_corpus(count: u64) -> Vec<Ologism> {
    (0..count)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            ologism::oracle::random_is_only_ologism(&mut rng, 5, 8)
        })
        .collect()
}

/// Closure by a naive global fixpoint: every rule against every pair of
/// facts until nothing changes, with E and I kept in both orientations.
pub fn naive_closure(types: &[TypeId], premisses: &BTreeSet<Proposition>) -> BTreeSet<Proposition> {
    type Fact = (char, String, String);
    let mut terms: BTreeSet<String> = types.iter().map(|t| t.as_str().to_string()).collect();
    let mut facts: BTreeSet<Fact> = BTreeSet::new();
    for p in premisses {
        let (s, q) = (p.subject().as_str().to_string(), p.predicate().as_str().to_string());
        terms.insert(s.clone());
        terms.insert(q.clone());
        facts.insert((p.form().letter(), s, q));
    }
    for t in &terms {
        facts.insert(('A', t.clone(), t.clone()));
    }
    loop {
        let mut new = BTreeSet::new();
        for (f, a, b) in &facts {
            if *f == 'E' || *f == 'I' {
                new.insert((*f, b.clone(), a.clone()));
            }
            for (g, c, d) in &facts {
                let out = match (f, g) {
                    ('A', 'A') if b == c => Some(('A', a, d)),
                    ('E', 'A') if b == d => Some(('E', a, c)),
                    ('A', 'E') if b == c => Some(('E', a, d)),
                    ('I', 'A') if b == c => Some(('I', a, d)),
                    ('A', 'I') if a == c => Some(('I', b, d)),
                    ('I', 'E') if b == c => Some(('O', a, d)),
                    ('A', 'O') if a == c => Some(('O', b, d)),
                    ('O', 'A') if b == d => Some(('O', a, c)),
                    _ => None,
                };
                if let Some((form, x, y)) = out {
                    new.insert((form, x.clone(), y.clone()));
                }
            }
        }
        let before = facts.len();
        facts.extend(new);
        if facts.len() == before {
            break;
        }
    }
    facts
        .into_iter()
        .map(|(f, s, p)| Proposition::new(Form::from_letter(f).unwrap(), s, p))
        .collect()
}

/// Congruence classes of the paths from `source` to `target` of length at
/// most `bound`, by union-find over single rewrites that stay in bound.
pub fn union_find_classes(o: &Ologism, source: &TypeId, target: &TypeId, bound: usize) -> Vec<BTreeSet<PathWord>> {
    let words = all_paths(o, source, target, bound);
    let index: BTreeMap<&PathWord, usize> = words.iter().enumerate().map(|(i, w)| (w, i)).collect();
    let mut parent: Vec<usize> = (0..words.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while parent[r] != r {
            r = parent[r];
        }
        parent[x] = r;
        r
    }
    for (i, w) in words.iter().enumerate() {
        for fact in &o.facts {
            for (l, r) in [(&fact.lhs, &fact.rhs), (&fact.rhs, &fact.lhs)] {
                let arcs = w.arcs();
                for pos in 0..=arcs.len() {
                    let end = pos + l.len();
                    if end > arcs.len() || arcs[pos..end] != *l.arcs() {
                        continue;
                    }
                    // An empty side only matches at its own node.
                    let node = if pos == 0 { w.source().clone() } else { arcs[pos - 1].target.clone() };
                    if node != *l.source() {
                        continue;
                    }
                    let mut out = arcs[..pos].to_vec();
                    out.extend(r.arcs().iter().cloned());
                    out.extend(arcs[end..].iter().cloned());
                    let Ok(next) = PathWord::new(source.clone(), target.clone(), out) else {
                        continue;
                    };
                    if let Some(&j) = index.get(&next) {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a] = b;
                    }
                }
            }
        }
    }
    let mut classes: BTreeMap<usize, BTreeSet<PathWord>> = BTreeMap::new();
    for (i, w) in words.iter().enumerate() {
        let root = find(&mut parent, i);
        classes.entry(root).or_default().insert(w.clone());
    }
    let mut out: Vec<_> = classes.into_values().collect();
    out.sort();
    out
}

/// Every path of at most `bound` aspects from `source` to `target`.
pub fn all_paths(o: &Ologism, source: &TypeId, target: &TypeId, bound: usize) -> Vec<PathWord> {
    let mut out = Vec::new();
    let mut frontier = vec![PathWord::empty(source.clone())];
    for len in 0..=bound {
        let mut next = Vec::new();
        for p in &frontier {
            if p.target() == target {
                out.push(p.clone());
            }
            if len < bound {
                for a in o.aspects.iter().filter(|a| a.source == *p.target()) {
                    next.push(p.compose(&PathWord::single(a.clone())).unwrap());
                }
            }
        }
        frontier = next;
    }
    out
}

/// Small ologisms over types `T0..`, premisses of every form.
pub fn arb_is_only(max_types: usize, max_premisses: usize) -> impl Strategy<Value = Ologism> {
    (1..=max_types).prop_flat_map(move |k| {
        let prop = (0..4usize, 0..k, 0..k)
            .prop_map(|(f, s, p)| Proposition::new(Form::ALL[f], format!("T{s}"), format!("T{p}")));
        proptest::collection::vec(prop, 0..=max_premisses).prop_map(move |ps| {
            let mut o = Ologism::new("generated");
            for i in 0..k {
                o = o.with_type(&format!("T{i}"), &format!("a t{i}"));
            }
            for p in ps {
                if !o.premisses.contains(&p) {
                    o.add_premiss(p);
                }
            }
            o
        })
    })
}
