//! Brute-force semantics on small universes.
//!
//! For documents made only of types, `is` aspects and propositions, every
//! assignment of subsets of an `n`-element universe to the types is
//! enumerated. Documents with general aspects or facts are explored by
//! seeded random sampling instead.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::deduce;
use crate::model::{check_model, Against, Model};
use crate::olog::{Form, Ologism, PathWord, Proposition, TypeDecl, TypeId};

/// Largest number of bits `types * universe` an exhaustive run may use.
pub const MAX_ASSIGNMENT_BITS: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OracleConfig {
    pub universe_size: usize,
    /// Largest number of types accepted by exhaustive enumeration.
    pub type_cap: usize,
    pub seed: u64,
    pub sample_count: usize,
    /// Attempts per sample before giving up on finding a model.
    pub retry_cap: usize,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            universe_size: 3,
            type_cap: 6,
            seed: 0,
            sample_count: 1000,
            retry_cap: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{types} types over a universe of {universe} is too large for exhaustive enumeration")]
    Scale { types: usize, universe: usize },
    #[error("exhaustive enumeration needs a document with only `is` aspects and propositions")]
    NotIsOnly,
}

/// A subset of the universe for each type, as bit masks.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    pub universe: usize,
    pub types: Vec<TypeId>,
    pub sets: Vec<u64>,
}

impl Assignment {
    /// The same assignment as a [`Model`] with elements named `0..n`.
    pub fn to_model(&self, ologism: &Ologism) -> Model {
        let mut m = Model::new("counter-model", ologism.name.clone());
        for (t, &bits) in self.types.iter().zip(&self.sets) {
            let elements = (0..self.universe).filter(|i| bits >> i & 1 == 1).map(|i| i.to_string());
            m.carriers.insert(t.clone(), elements.collect());
        }
        m
    }
}

/// A proposition over type indices.
#[derive(Debug, Clone, Copy)]
struct Compiled {
    form: Form,
    s: usize,
    p: usize,
}

impl Compiled {
    fn holds(self, sets: &[u64]) -> bool {
        let (s, p) = (sets[self.s], sets[self.p]);
        match self.form {
            Form::A => s & !p == 0,
            Form::E => s & p == 0,
            Form::I => s & p != 0,
            Form::O => s & !p != 0,
        }
    }
}

struct Compiler {
    types: Vec<TypeId>,
    index: BTreeMap<TypeId, usize>,
}

impl Compiler {
    fn new(ologism: &Ologism, extra: &BTreeSet<Proposition>) -> Self {
        let mut all: BTreeSet<TypeId> = ologism.type_ids().into_iter().collect();
        for p in deduce::premisses_of(ologism).iter().chain(extra) {
            all.insert(p.subject().clone());
            all.insert(p.predicate().clone());
        }
        let types: Vec<TypeId> = all.into_iter().collect();
        let index = types.iter().enumerate().map(|(i, t)| (t.clone(), i)).collect();
        Compiler { types, index }
    }

    fn compile(&self, p: &Proposition) -> Compiled {
        Compiled {
            form: p.form(),
            s: self.index[p.subject()],
            p: self.index[p.predicate()],
        }
    }
}

fn check_scale(types: usize, config: &OracleConfig) -> Result<(), OracleError> {
    if types > config.type_cap || types * config.universe_size > MAX_ASSIGNMENT_BITS || config.universe_size > 64 {
        return Err(OracleError::Scale {
            types,
            universe: config.universe_size,
        });
    }
    Ok(())
}

/// Calls `visit` on every assignment satisfying the premisses, in counter
/// order. Stops early when `visit` returns false.
fn for_each_model(
    ologism: &Ologism,
    config: &OracleConfig,
    extra: &BTreeSet<Proposition>,
    mut visit: impl FnMut(&Compiler, &[u64]) -> bool,
) -> Result<(), OracleError> {
    if !ologism.is_only() {
        return Err(OracleError::NotIsOnly);
    }
    let compiler = Compiler::new(ologism, extra);
    let t = compiler.types.len();
    check_scale(t, config)?;
    let n = config.universe_size;
    let premisses: Vec<Compiled> = deduce::premisses_of(ologism).iter().map(|p| compiler.compile(p)).collect();
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut sets = vec![0u64; t];
    for code in 0u64..(1u64 << (n * t)) {
        for (k, set) in sets.iter_mut().enumerate() {
            *set = (code >> (k * n)) & mask;
        }
        if premisses.iter().all(|p| p.holds(&sets)) && !visit(&compiler, &sets) {
            break;
        }
    }
    Ok(())
}

/// Every model over the universe `{0, .., n-1}`, in a fixed order.
pub fn enumerate_models(ologism: &Ologism, config: &OracleConfig) -> Result<Vec<Assignment>, OracleError> {
    let mut out = Vec::new();
    for_each_model(ologism, config, &BTreeSet::new(), |c, sets| {
        out.push(Assignment {
            universe: config.universe_size,
            types: c.types.clone(),
            sets: sets.to_vec(),
        });
        true
    })?;
    Ok(out)
}

pub fn count_models(ologism: &Ologism, config: &OracleConfig) -> Result<usize, OracleError> {
    let mut count = 0;
    for_each_model(ologism, config, &BTreeSet::new(), |_, _| {
        count += 1;
        true
    })?;
    Ok(count)
}

pub fn has_model(ologism: &Ologism, config: &OracleConfig) -> Result<bool, OracleError> {
    let mut found = false;
    for_each_model(ologism, config, &BTreeSet::new(), |_, _| {
        found = true;
        false
    })?;
    Ok(found)
}

/// Every proposition over the given types, in canonical form.
pub fn all_propositions(types: &[TypeId]) -> BTreeSet<Proposition> {
    let mut out = BTreeSet::new();
    for s in types {
        for p in types {
            for form in Form::ALL {
                out.insert(Proposition::new(form, s.clone(), p.clone()));
            }
        }
    }
    out
}

/// Propositions over the declared types satisfied by every model; all of
/// them when there is no model.
pub fn semantic_consequences(ologism: &Ologism, config: &OracleConfig) -> Result<BTreeSet<Proposition>, OracleError> {
    let compiler = Compiler::new(ologism, &BTreeSet::new());
    let mut alive: Vec<(Proposition, Compiled)> = all_propositions(&compiler.types)
        .into_iter()
        .map(|p| {
            let c = compiler.compile(&p);
            (p, c)
        })
        .collect();
    for_each_model(ologism, config, &BTreeSet::new(), |_, sets| {
        alive.retain(|(_, c)| c.holds(sets));
        !alive.is_empty()
    })?;
    Ok(alive.into_iter().map(|(p, _)| p).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum SoundnessVerdict {
    Pass { models_checked: usize, exhaustive: bool },
    Fail { prop: Proposition, counter_model: Model },
    /// Sampling could not find enough models within the retry cap.
    Inconclusive { models_checked: usize, reason: String },
}

impl SoundnessVerdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, SoundnessVerdict::Pass { .. })
    }
}

/// Checks that every model satisfies the closure of the premisses.
pub fn check_soundness(ologism: &Ologism, config: &OracleConfig) -> SoundnessVerdict {
    check_soundness_of(ologism, &deduce::close(ologism).propositions(), config)
}

/// As [`check_soundness`], for an arbitrary claimed set of consequences.
pub fn check_soundness_of(
    ologism: &Ologism,
    claimed: &BTreeSet<Proposition>,
    config: &OracleConfig,
) -> SoundnessVerdict {
    let exhaustive = ologism.is_only() && {
        let types = Compiler::new(ologism, claimed).types.len();
        check_scale(types, config).is_ok()
    };
    if exhaustive {
        exhaustive_soundness(ologism, claimed, config)
    } else {
        sampled_soundness(ologism, claimed, config)
    }
}

fn exhaustive_soundness(ologism: &Ologism, claimed: &BTreeSet<Proposition>, config: &OracleConfig) -> SoundnessVerdict {
    let mut checked = 0;
    let mut failure = None;
    let result = for_each_model(ologism, config, claimed, |c, sets| {
        checked += 1;
        for p in claimed {
            if !c.compile(p).holds(sets) {
                let a = Assignment {
                    universe: config.universe_size,
                    types: c.types.clone(),
                    sets: sets.to_vec(),
                };
                failure = Some((p.clone(), a));
                return false;
            }
        }
        true
    });
    match (result, failure) {
        (Err(e), _) => SoundnessVerdict::Inconclusive {
            models_checked: checked,
            reason: e.to_string(),
        },
        (Ok(()), Some((prop, a))) => SoundnessVerdict::Fail {
            prop,
            counter_model: a.to_model(ologism),
        },
        (Ok(()), None) => SoundnessVerdict::Pass {
            models_checked: checked,
            exhaustive: true,
        },
    }
}

fn sampled_soundness(ologism: &Ologism, claimed: &BTreeSet<Proposition>, config: &OracleConfig) -> SoundnessVerdict {
    let sampler = Sampler::new(ologism, config.universe_size.max(1));
    for i in 0..config.sample_count {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(i as u64);
        let Some(model) = sampler.sample(&mut rng, config.retry_cap) else {
            return SoundnessVerdict::Inconclusive {
                models_checked: i,
                reason: format!("no model found for sample {i} within {} attempts", config.retry_cap),
            };
        };
        for p in claimed {
            if !crate::model::satisfies(&model, p).unwrap_or(false) {
                return SoundnessVerdict::Fail {
                    prop: p.clone(),
                    counter_model: model,
                };
            }
        }
    }
    SoundnessVerdict::Pass {
        models_checked: config.sample_count,
        exhaustive: false,
    }
}

/// Random models of a document with general aspects and facts.
///
/// Carriers are random subsets closed upward along `is` aspects; maps are
/// random functions. An aspect that forms one whole side of a fact and
/// occurs in no other fact is defined as the composite of the other side,
/// so such facts hold by construction. Candidates failing any check are
/// rejected.
pub struct Sampler<'a> {
    ologism: &'a Ologism,
    universe: usize,
    types: Vec<TypeId>,
    derived: BTreeMap<String, PathWord>,
}

impl<'a> Sampler<'a> {
    pub fn new(ologism: &'a Ologism, universe: usize) -> Self {
        let mut uses: BTreeMap<&str, usize> = BTreeMap::new();
        for f in &ologism.facts {
            for arc in f.lhs.arcs().iter().chain(f.rhs.arcs()) {
                *uses.entry(arc.name.as_str()).or_default() += 1;
            }
        }
        let mut derived = BTreeMap::new();
        for f in &ologism.facts {
            for (side, other) in [(&f.lhs, &f.rhs), (&f.rhs, &f.lhs)] {
                if let [arc] = side.arcs() {
                    let unique = ologism.aspects_named(&arc.name).count() == 1;
                    if !arc.is_flag() && unique && uses[arc.name.as_str()] == 1 && !derived.contains_key(&arc.name) {
                        derived.insert(arc.name.clone(), other.clone());
                        break;
                    }
                }
            }
        }
        Sampler {
            ologism,
            universe,
            types: ologism.type_ids(),
            derived,
        }
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng, retry_cap: usize) -> Option<Model> {
        (0..retry_cap).find_map(|_| {
            let m = self.candidate(rng)?;
            check_model(self.ologism, &m, Against::Premisses).is_empty().then_some(m)
        })
    }

    fn candidate(&self, rng: &mut ChaCha8Rng) -> Option<Model> {
        let mut sets: BTreeMap<TypeId, BTreeSet<String>> = self
            .types
            .iter()
            .map(|t| {
                let s = (0..self.universe).filter(|_| rng.gen_bool(0.5)).map(|i| format!("e{i}"));
                (t.clone(), s.collect())
            })
            .collect();
        loop {
            let mut changed = false;
            for a in self.ologism.aspects.iter().filter(|a| a.is_flag()) {
                let src = sets.get(&a.source).cloned().unwrap_or_default();
                let tgt = sets.entry(a.target.clone()).or_default();
                for x in src {
                    changed |= tgt.insert(x);
                }
            }
            if !changed {
                break;
            }
        }
        let mut m = Model::new("sample", self.ologism.name.clone());
        m.carriers = sets;
        for a in self.ologism.general_aspects() {
            if self.derived.contains_key(&a.name) {
                continue;
            }
            let targets: Vec<String> = m.carriers[&a.target].iter().cloned().collect();
            let mut map = BTreeMap::new();
            for x in &m.carriers[&a.source] {
                map.insert(x.clone(), targets.choose(rng)?.clone());
            }
            m.maps.insert(a.name.clone(), map);
        }
        for (name, path) in &self.derived {
            let aspect = self.ologism.aspects_named(name).next()?;
            let map = m.carriers[&aspect.source]
                .iter()
                .map(|x| Some((x.clone(), crate::model::evaluate(&m, path, x)?)))
                .collect::<Option<BTreeMap<_, _>>>()?;
            m.maps.insert(name.clone(), map);
        }
        Some(m)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompletenessVerdict {
    pub universe_size: usize,
    pub consistent: bool,
    pub semantic: BTreeSet<Proposition>,
    pub closure: BTreeSet<Proposition>,
    /// Semantic consequences missing from the closure.
    pub gap: BTreeSet<Proposition>,
    /// The part of the gap that is still a semantic consequence one
    /// element up; `None` when that universe is too large to enumerate.
    pub gap_at_next: Option<BTreeSet<Proposition>>,
}

impl CompletenessVerdict {
    pub fn is_pass(&self) -> bool {
        self.gap.is_empty()
    }

    /// Gap restricted to contradictions `O(X,X)`.
    pub fn gap_contradictions(&self) -> BTreeSet<Proposition> {
        self.gap.iter().filter(|p| p.is_contradiction()).cloned().collect()
    }
}

pub fn check_completeness(ologism: &Ologism, config: &OracleConfig) -> Result<CompletenessVerdict, OracleError> {
    let semantic = semantic_consequences(ologism, config)?;
    let consistent = has_model(ologism, config)?;
    let closure = deduce::close(ologism).propositions();
    let gap: BTreeSet<Proposition> = semantic.difference(&closure).cloned().collect();
    let gap_at_next = if gap.is_empty() {
        Some(BTreeSet::new())
    } else {
        let next = OracleConfig {
            universe_size: config.universe_size + 1,
            ..config.clone()
        };
        semantic_consequences(ologism, &next)
            .ok()
            .map(|s| gap.intersection(&s).cloned().collect())
    };
    Ok(CompletenessVerdict {
        universe_size: config.universe_size,
        consistent,
        semantic,
        closure,
        gap,
        gap_at_next,
    })
}

/// A random document with `is` aspects and propositions only: at most
/// `max_types` types `T0, T1, ..` and at most `max_premisses` premisses of
/// any form, diagonal ones included.
pub fn random_is_only_ologism(rng: &mut impl Rng, max_types: usize, max_premisses: usize) -> Ologism {
    let k = rng.gen_range(1..=max_types);
    let mut o = Ologism::new("random");
    for i in 0..k {
        o.add_type(TypeDecl::new(format!("T{i}"), format!("a t{i}")));
    }
    for _ in 0..rng.gen_range(0..=max_premisses) {
        let form = Form::ALL[rng.gen_range(0..4)];
        let s = format!("T{}", rng.gen_range(0..k));
        let p = format!("T{}", rng.gen_range(0..k));
        o.add_premiss(Proposition::new(form, s, p));
    }
    o
}
