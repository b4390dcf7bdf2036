//! Closure of an ologism's premisses under its deductive equipment.
//!
//! The rules, over oriented statements:
//!
//! ```text
//! R1  A(X,Y), A(Y,Z) ⊢ A(X,Z)      R5  A(Y,X), I(Y,Z) ⊢ I(X,Z)
//! R2  E(X,Y), A(Z,Y) ⊢ E(X,Z)      R6  I(X,Y), E(Y,Z) ⊢ O(X,Z)
//! R3  A(X,Y), E(Y,Z) ⊢ E(X,Z)      R7  A(Y,X), O(Y,Z) ⊢ O(X,Z)
//! R4  I(X,Y), A(Y,Z) ⊢ I(X,Z)      R8  O(X,Y), A(Z,Y) ⊢ O(X,Z)
//! ```
//!
//! plus symmetry of E and I and the identities A(X,X). The closure is
//! computed in three layers (A; then E and I; then O), which reaches the
//! same fixpoint as applying every rule at once because no rule consumes a
//! later layer to produce an earlier one.
//!
//! Inside a layer, candidates are finalized in order of derivation depth,
//! so every stored derivation has minimal depth. Ties are broken by rule,
//! then operands, then conclusion.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, HashMap, HashSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::olog::{Form, Ologism, Proposition, Statement, TypeId};

/// Inference rules. The derived order is the tie-break order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Rule {
    Identity,
    Premiss,
    R1,
    R2,
    R3,
    R4,
    R5,
    R6,
    R7,
    R8,
    Symmetry,
}

impl Rule {
    const LAYERS: [&'static [Rule]; 3] = [
        &[Rule::R1],
        &[Rule::R2, Rule::R3, Rule::R4, Rule::R5, Rule::Symmetry],
        &[Rule::R6, Rule::R7, Rule::R8],
    ];

    /// Applies a binary rule to two oriented statements.
    pub fn apply(self, first: &Statement, second: &Statement) -> Option<Statement> {
        use Form::*;
        let (f, g) = (first, second);
        let st = |form, s: &TypeId, p: &TypeId| Some(Statement::new(form, s.clone(), p.clone()));
        match (self, f.form, g.form) {
            (Rule::R1, A, A) if f.predicate == g.subject => st(A, &f.subject, &g.predicate),
            (Rule::R2, E, A) if f.predicate == g.predicate => st(E, &f.subject, &g.subject),
            (Rule::R3, A, E) if f.predicate == g.subject => st(E, &f.subject, &g.predicate),
            (Rule::R4, I, A) if f.predicate == g.subject => st(I, &f.subject, &g.predicate),
            (Rule::R5, A, I) if f.subject == g.subject => st(I, &f.predicate, &g.predicate),
            (Rule::R6, I, E) if f.predicate == g.subject => st(O, &f.subject, &g.predicate),
            (Rule::R7, A, O) if f.subject == g.subject => st(O, &f.predicate, &g.predicate),
            (Rule::R8, O, A) if f.predicate == g.predicate => st(O, &f.subject, &g.subject),
            _ => None,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A derivation tree of one oriented statement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Derivation {
    pub conclusion: Statement,
    pub rule: Rule,
    pub children: Vec<Derivation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DerivationError {
    #[error("{rule} does not yield {conclusion} from its operands")]
    BadStep { rule: Rule, conclusion: Statement },
    #[error("{0} is used as a premiss but is not one")]
    NotAPremiss(Statement),
}

impl Derivation {
    pub fn proposition(&self) -> Proposition {
        self.conclusion.proposition()
    }

    pub fn depth(&self) -> usize {
        self.children.iter().map(|c| c.depth() + 1).max().unwrap_or(0)
    }

    /// Checks every step, and that premiss leaves belong to `premisses`.
    pub fn replay(&self, premisses: &BTreeSet<Proposition>) -> Result<(), DerivationError> {
        for child in &self.children {
            child.replay(premisses)?;
        }
        let c = &self.conclusion;
        let ok = match (self.rule, self.children.as_slice()) {
            (Rule::Identity, []) => c.form == Form::A && c.subject == c.predicate,
            (Rule::Premiss, []) => {
                if !premisses.contains(&c.proposition()) {
                    return Err(DerivationError::NotAPremiss(c.clone()));
                }
                true
            }
            (Rule::Symmetry, [x]) => c.form.is_symmetric() && x.conclusion.swapped() == *c,
            (rule, [x, y]) => rule.apply(&x.conclusion, &y.conclusion).as_ref() == Some(c),
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(DerivationError::BadStep {
                rule: self.rule,
                conclusion: c.clone(),
            })
        }
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, depth: usize) -> fmt::Result {
        writeln!(f, "{:indent$}{}    [{}]", "", self.conclusion, self.rule, indent = depth * 2)?;
        for child in &self.children {
            child.write_indented(f, depth + 1)?;
        }
        Ok(())
    }
}

impl fmt::Display for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

/// The logical theory of an ologism: the four closed sets of propositions
/// with one minimal-depth derivation each. The derivation of an E or I
/// proposition concludes it in its canonical orientation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Theory {
    pub alpha_star: BTreeSet<Proposition>,
    pub epsilon_star: BTreeSet<Proposition>,
    pub iota_star: BTreeSet<Proposition>,
    pub o_star: BTreeSet<Proposition>,
    pub premisses: BTreeSet<Proposition>,
    pub derivations: BTreeMap<Proposition, Derivation>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{0} is not derivable")]
pub struct NotDerivable(pub Proposition);

impl Theory {
    pub fn star(&self, form: Form) -> &BTreeSet<Proposition> {
        match form {
            Form::A => &self.alpha_star,
            Form::E => &self.epsilon_star,
            Form::I => &self.iota_star,
            Form::O => &self.o_star,
        }
    }

    pub fn contains(&self, prop: &Proposition) -> bool {
        self.star(prop.form()).contains(prop)
    }

    /// Every proposition of the theory, in canonical order.
    pub fn propositions(&self) -> BTreeSet<Proposition> {
        Form::ALL.iter().flat_map(|f| self.star(*f).iter().cloned()).collect()
    }

    pub fn len(&self) -> usize {
        Form::ALL.iter().map(|f| self.star(*f).len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Propositions that are neither premisses nor identities.
    pub fn derived(&self) -> BTreeSet<Proposition> {
        self.propositions()
            .into_iter()
            .filter(|p| !self.premisses.contains(p) && !is_identity(p))
            .collect()
    }
}

fn is_identity(p: &Proposition) -> bool {
    p.form() == Form::A && p.subject() == p.predicate()
}

type Key = (usize, Rule, Vec<Statement>, Statement);

struct Closure {
    done: HashMap<Statement, Derivation>,
    by_subject: HashMap<(Form, TypeId), Vec<Statement>>,
    by_predicate: HashMap<(Form, TypeId), Vec<Statement>>,
    queue: BinaryHeap<Reverse<Key>>,
    active: HashSet<Rule>,
}

impl Closure {
    fn new() -> Self {
        Closure {
            done: HashMap::new(),
            by_subject: HashMap::new(),
            by_predicate: HashMap::new(),
            queue: BinaryHeap::new(),
            active: HashSet::new(),
        }
    }

    fn with_subject(&self, form: Form, t: &TypeId) -> &[Statement] {
        self.by_subject.get(&(form, t.clone())).map_or(&[], Vec::as_slice)
    }

    fn with_predicate(&self, form: Form, t: &TypeId) -> &[Statement] {
        self.by_predicate.get(&(form, t.clone())).map_or(&[], Vec::as_slice)
    }

    fn push(&mut self, rule: Rule, operands: Vec<Statement>) {
        let conclusion = match (rule, operands.as_slice()) {
            (Rule::Symmetry, [x]) => x.swapped(),
            (_, [x, y]) => match rule.apply(x, y) {
                Some(c) => c,
                None => return,
            },
            _ => unreachable!("axioms are seeded directly"),
        };
        if self.done.contains_key(&conclusion) {
            return;
        }
        let depth = 1 + operands.iter().map(|o| self.done[o].depth()).max().unwrap_or(0);
        self.queue.push(Reverse((depth, rule, operands, conclusion)));
    }

    fn seed(&mut self, rule: Rule, s: Statement) {
        if !self.done.contains_key(&s) {
            self.queue.push(Reverse((0, rule, Vec::new(), s)));
        }
    }

    /// Queues every active rule instance that uses `s` together with
    /// finalized statements.
    fn expand(&mut self, s: &Statement) {
        use Form::*;
        let (a, b) = (&s.subject, &s.predicate);
        let mut out: Vec<(Rule, Vec<Statement>)> = Vec::new();
        let mut pair = |rule: Rule, others: &[Statement], s_first: bool| {
            for o in others {
                let ops = if s_first { vec![s.clone(), o.clone()] } else { vec![o.clone(), s.clone()] };
                out.push((rule, ops));
            }
        };
        match s.form {
            A => {
                pair(Rule::R1, self.with_subject(A, b), true);
                pair(Rule::R1, self.with_predicate(A, a), false);
                pair(Rule::R2, self.with_predicate(E, b), false);
                pair(Rule::R3, self.with_subject(E, b), true);
                pair(Rule::R4, self.with_predicate(I, a), false);
                pair(Rule::R5, self.with_subject(I, a), true);
                pair(Rule::R7, self.with_subject(O, a), true);
                pair(Rule::R8, self.with_predicate(O, b), false);
            }
            E => {
                pair(Rule::R2, self.with_predicate(A, b), true);
                pair(Rule::R3, self.with_predicate(A, a), false);
                pair(Rule::R6, self.with_predicate(I, a), false);
                out.push((Rule::Symmetry, vec![s.clone()]));
            }
            I => {
                pair(Rule::R4, self.with_subject(A, b), true);
                pair(Rule::R5, self.with_subject(A, a), false);
                pair(Rule::R6, self.with_subject(E, b), true);
                out.push((Rule::Symmetry, vec![s.clone()]));
            }
            O => {
                pair(Rule::R7, self.with_subject(A, a), false);
                pair(Rule::R8, self.with_predicate(A, b), true);
            }
        }
        for (rule, ops) in out {
            if self.active.contains(&rule) {
                self.push(rule, ops);
            }
        }
    }

    fn run(&mut self) {
        while let Some(Reverse((_, rule, operands, conclusion))) = self.queue.pop() {
            if self.done.contains_key(&conclusion) {
                continue;
            }
            let children = operands.iter().map(|o| self.done[o].clone()).collect();
            let derivation = Derivation {
                conclusion: conclusion.clone(),
                rule,
                children,
            };
            self.done.insert(conclusion.clone(), derivation);
            self.by_subject
                .entry((conclusion.form, conclusion.subject.clone()))
                .or_default()
                .push(conclusion.clone());
            self.by_predicate
                .entry((conclusion.form, conclusion.predicate.clone()))
                .or_default()
                .push(conclusion.clone());
            self.expand(&conclusion);
        }
    }

    fn activate(&mut self, rules: &[Rule]) {
        self.active.extend(rules.iter().copied());
        let mut finalized: Vec<Statement> = self.done.keys().cloned().collect();
        finalized.sort();
        for s in &finalized {
            self.expand(s);
        }
    }
}

/// The premisses of `ologism`, including those carried by `is` aspects.
pub fn premisses_of(ologism: &Ologism) -> BTreeSet<Proposition> {
    let mut out = ologism.premiss_set();
    out.extend(
        ologism
            .aspects
            .iter()
            .filter(|a| a.is_flag())
            .map(|a| Proposition::a(a.source.clone(), a.target.clone())),
    );
    out
}

pub fn close(ologism: &Ologism) -> Theory {
    close_premisses(&ologism.type_ids(), &premisses_of(ologism))
}

/// Closure of a bare premiss set over the given types. Terms of the
/// premisses are added to the types if missing.
pub fn close_premisses(types: &[TypeId], premisses: &BTreeSet<Proposition>) -> Theory {
    let mut all_types: BTreeSet<TypeId> = types.iter().cloned().collect();
    for p in premisses {
        all_types.insert(p.subject().clone());
        all_types.insert(p.predicate().clone());
    }

    let mut c = Closure::new();
    let seeds = |form: Form| premisses.iter().filter(move |p| p.form() == form).map(Statement::from);
    for (layer, rules) in Rule::LAYERS.iter().enumerate() {
        c.activate(rules);
        match layer {
            0 => {
                for t in &all_types {
                    c.seed(Rule::Identity, Statement::new(Form::A, t.clone(), t.clone()));
                }
                for s in seeds(Form::A) {
                    c.seed(Rule::Premiss, s);
                }
            }
            1 => {
                for s in seeds(Form::E).chain(seeds(Form::I)) {
                    c.seed(Rule::Premiss, s);
                }
            }
            _ => {
                for s in seeds(Form::O) {
                    c.seed(Rule::Premiss, s);
                }
            }
        }
        c.run();
    }

    // E and I hold in both orientations; each proposition keeps the
    // derivation of its canonical orientation.
    let derivations: BTreeMap<Proposition, Derivation> = c
        .done
        .into_iter()
        .filter(|(s, _)| Statement::from(s.proposition()) == *s)
        .map(|(s, d)| (s.proposition(), d))
        .collect();

    let mut theory = Theory {
        alpha_star: BTreeSet::new(),
        epsilon_star: BTreeSet::new(),
        iota_star: BTreeSet::new(),
        o_star: BTreeSet::new(),
        premisses: premisses.clone(),
        derivations,
    };
    for p in theory.derivations.keys().cloned().collect::<Vec<_>>() {
        match p.form() {
            Form::A => theory.alpha_star.insert(p),
            Form::E => theory.epsilon_star.insert(p),
            Form::I => theory.iota_star.insert(p),
            Form::O => theory.o_star.insert(p),
        };
    }
    theory
}

/// Every type X with O(X,X) in the theory, with its derivation.
pub fn contradictions(theory: &Theory) -> Vec<(TypeId, Derivation)> {
    theory
        .o_star
        .iter()
        .filter(|p| p.is_contradiction())
        .map(|p| (p.subject().clone(), theory.derivations[p].clone()))
        .collect()
}

pub fn explain<'a>(theory: &'a Theory, prop: &Proposition) -> Result<&'a Derivation, NotDerivable> {
    theory
        .derivations
        .get(&prop.canonical())
        .ok_or_else(|| NotDerivable(prop.canonical()))
}
