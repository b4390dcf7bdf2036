//! Equality of parallel paths modulo the facts of an olog.
//!
//! Two paths are equal when one rewrites into the other by replacing one
//! side of a fact with the other side, at any position, any number of
//! times. The word problem is undecidable in general, so the search is
//! bounded by a maximal word length and a cap on explored words; failing to
//! connect two words is reported as "not equal within bound", never as a
//! proof of inequality.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::olog::{Aspect, Ologism, PathWord, TypeId};

pub const DEFAULT_CAP: usize = 100_000;
pub const MIN_BOUND: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EqError {
    /// Each side is rendered as `path : source -> target`.
    #[error("paths are not parallel: {lhs} and {rhs}")]
    NotParallel { lhs: String, rhs: String },
    #[error("unknown type `{0}`")]
    UnknownType(TypeId),
    #[error("path uses undeclared aspect `{0}`")]
    UnknownAspect(String),
    #[error("more than {cap} paths from {from} to {to} within length {bound}")]
    CapExceeded {
        from: TypeId,
        to: TypeId,
        bound: usize,
        cap: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

/// One rewrite: at arc offset `position`, one side of `fact` was replaced
/// by the other, giving `result`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RewriteStep {
    pub fact: String,
    pub direction: Direction,
    pub position: usize,
    pub result: PathWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Equality {
    Equal { trace: Vec<RewriteStep> },
    NotEqualWithinBound { bound: usize, explored: usize, cap_reached: bool },
}

impl Equality {
    pub fn is_equal(&self) -> bool {
        matches!(self, Equality::Equal { .. })
    }
}

/// A fact side as a sequence of arc indices, remembering its node when empty.
#[derive(Debug, Clone)]
struct Side {
    arcs: Vec<u32>,
    node: TypeId,
}

#[derive(Debug, Clone)]
struct Equation {
    name: String,
    lhs: Side,
    rhs: Side,
}

/// The facts of an olog compiled for rewriting. Immutable once built.
#[derive(Debug, Clone)]
pub struct CongruenceIndex {
    aspects: Vec<Aspect>,
    ids: HashMap<Aspect, u32>,
    types: BTreeSet<TypeId>,
    equations: Vec<Equation>,
    cap: usize,
}

type Word = Vec<u32>;

impl CongruenceIndex {
    pub fn new(ologism: &Ologism) -> Result<Self, EqError> {
        let aspects: Vec<Aspect> = ologism.aspects.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let ids = aspects.iter().enumerate().map(|(i, a)| (a.clone(), i as u32)).collect();
        let mut index = CongruenceIndex {
            aspects,
            ids,
            types: ologism.type_ids().into_iter().collect(),
            equations: Vec::new(),
            cap: DEFAULT_CAP,
        };
        for fact in &ologism.facts {
            let side = |p: &PathWord| -> Result<Side, EqError> {
                Ok(Side {
                    arcs: index.encode(p)?,
                    node: p.source().clone(),
                })
            };
            let eq = Equation {
                name: fact.describe(),
                lhs: side(&fact.lhs)?,
                rhs: side(&fact.rhs)?,
            };
            index.equations.push(eq);
        }
        Ok(index)
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    /// `max(2 * longest fact side + 2, 8)`.
    pub fn default_bound(&self) -> usize {
        let longest = self
            .equations
            .iter()
            .map(|e| e.lhs.arcs.len().max(e.rhs.arcs.len()))
            .max()
            .unwrap_or(0);
        (2 * longest + 2).max(MIN_BOUND)
    }

    fn encode(&self, p: &PathWord) -> Result<Word, EqError> {
        for t in [p.source(), p.target()] {
            if !self.types.contains(t) {
                return Err(EqError::UnknownType(t.clone()));
            }
        }
        p.arcs()
            .iter()
            .map(|a| self.ids.get(a).copied().ok_or_else(|| EqError::UnknownAspect(a.to_string())))
            .collect()
    }

    fn decode(&self, source: &TypeId, word: &[u32]) -> PathWord {
        let arcs: Vec<Aspect> = word.iter().map(|&i| self.aspects[i as usize].clone()).collect();
        match arcs.last() {
            Some(last) => PathWord::new(source.clone(), last.target.clone(), arcs).expect("rewrites keep words composable"),
            None => PathWord::empty(source.clone()),
        }
    }

    /// The node a word is at before its `pos`-th arc.
    fn node_at<'a>(&'a self, source: &'a TypeId, word: &[u32], pos: usize) -> &'a TypeId {
        if pos == 0 {
            source
        } else {
            &self.aspects[word[pos - 1] as usize].target
        }
    }

    /// Every word one rewrite away from `word`, with length at most `bound`.
    fn neighbours(&self, source: &TypeId, word: &[u32], bound: usize) -> Vec<(usize, Direction, usize, Word)> {
        let mut out = Vec::new();
        for (k, eq) in self.equations.iter().enumerate() {
            for (dir, from, to) in [
                (Direction::LeftToRight, &eq.lhs, &eq.rhs),
                (Direction::RightToLeft, &eq.rhs, &eq.lhs),
            ] {
                let n = from.arcs.len();
                if n > word.len() || word.len() - n + to.arcs.len() > bound {
                    continue;
                }
                for pos in 0..=(word.len() - n) {
                    let matches = if n == 0 {
                        self.node_at(source, word, pos) == &from.node
                    } else {
                        word[pos..pos + n] == from.arcs[..]
                    };
                    if matches {
                        let mut next = Vec::with_capacity(word.len() - n + to.arcs.len());
                        next.extend_from_slice(&word[..pos]);
                        next.extend_from_slice(&to.arcs);
                        next.extend_from_slice(&word[pos + n..]);
                        out.push((k, dir, pos, next));
                    }
                }
            }
        }
        out
    }

    fn check_parallel(p: &PathWord, q: &PathWord) -> Result<(), EqError> {
        if p.is_parallel(q) {
            return Ok(());
        }
        let signature = |w: &PathWord| format!("{w} : {} -> {}", w.source(), w.target());
        Err(EqError::NotParallel { lhs: signature(p), rhs: signature(q) })
    }

    /// Breadth-first search from `p` to `q`; the trace is a shortest one.
    /// `bound` defaults to [`default_bound`](Self::default_bound), raised to
    /// the lengths of `p` and `q`.
    pub fn equal(&self, p: &PathWord, q: &PathWord, bound: Option<usize>) -> Result<Equality, EqError> {
        Self::check_parallel(p, q)?;
        let (start, goal) = (self.encode(p)?, self.encode(q)?);
        let bound = bound.unwrap_or_else(|| self.default_bound()).max(start.len()).max(goal.len());
        let source = p.source();

        let mut parent: HashMap<Word, Option<(Word, usize, Direction, usize)>> = HashMap::new();
        parent.insert(start.clone(), None);
        let mut queue = VecDeque::from([start]);
        let mut cap_reached = false;
        while let Some(word) = queue.pop_front() {
            if word == goal {
                return Ok(Equality::Equal {
                    trace: self.trace(source, &parent, word),
                });
            }
            for (k, dir, pos, next) in self.neighbours(source, &word, bound) {
                if parent.contains_key(&next) {
                    continue;
                }
                if parent.len() >= self.cap {
                    cap_reached = true;
                    break;
                }
                parent.insert(next.clone(), Some((word.clone(), k, dir, pos)));
                queue.push_back(next);
            }
            if cap_reached {
                break;
            }
        }
        if !cap_reached && parent.contains_key(&goal) {
            return Ok(Equality::Equal {
                trace: self.trace(source, &parent, goal),
            });
        }
        Ok(Equality::NotEqualWithinBound {
            bound,
            explored: parent.len(),
            cap_reached,
        })
    }

    fn trace(
        &self,
        source: &TypeId,
        parent: &HashMap<Word, Option<(Word, usize, Direction, usize)>>,
        mut word: Word,
    ) -> Vec<RewriteStep> {
        let mut steps = Vec::new();
        while let Some(Some((prev, k, dir, pos))) = parent.get(&word) {
            steps.push(RewriteStep {
                fact: self.equations[*k].name.clone(),
                direction: *dir,
                position: *pos,
                result: self.decode(source, &word),
            });
            word = prev.clone();
        }
        steps.reverse();
        steps
    }

    /// All paths from `source` to `target` with at most `bound` arcs, in
    /// order of length then arc order.
    pub fn paths(&self, source: &TypeId, target: &TypeId, bound: usize) -> Result<Vec<PathWord>, EqError> {
        Ok(self
            .words(source, target, bound)?
            .iter()
            .map(|w| self.decode(source, w))
            .collect())
    }

    fn words(&self, source: &TypeId, target: &TypeId, bound: usize) -> Result<Vec<Word>, EqError> {
        for t in [source, target] {
            if !self.types.contains(t) {
                return Err(EqError::UnknownType(t.clone()));
            }
        }
        let mut out = Vec::new();
        let mut layer: Vec<(Word, TypeId)> = vec![(Vec::new(), source.clone())];
        let mut total = 1usize;
        for len in 0..=bound {
            for (w, end) in &layer {
                if end == target {
                    out.push(w.clone());
                }
            }
            if len == bound {
                break;
            }
            let mut next = Vec::new();
            for (w, end) in &layer {
                for (i, a) in self.aspects.iter().enumerate() {
                    if &a.source == end {
                        let mut w2 = w.clone();
                        w2.push(i as u32);
                        next.push((w2, a.target.clone()));
                    }
                }
            }
            total += next.len();
            if total > self.cap {
                return Err(EqError::CapExceeded {
                    from: source.clone(),
                    to: target.clone(),
                    bound,
                    cap: self.cap,
                });
            }
            layer = next;
        }
        Ok(out)
    }

    /// Partition of the paths from `source` to `target` of length at most
    /// `bound` into classes of equal paths, using only intermediate words
    /// within the bound.
    pub fn classes(&self, source: &TypeId, target: &TypeId, bound: usize) -> Result<Vec<BTreeSet<PathWord>>, EqError> {
        let words = self.words(source, target, bound)?;
        let mut assigned: HashSet<Word> = HashSet::new();
        let mut classes: Vec<BTreeSet<PathWord>> = Vec::new();
        for w in words {
            if assigned.contains(&w) {
                continue;
            }
            assigned.insert(w.clone());
            let mut component = vec![w.clone()];
            let mut queue = VecDeque::from([w]);
            while let Some(x) = queue.pop_front() {
                for (_, _, _, y) in self.neighbours(source, &x, bound) {
                    if assigned.insert(y.clone()) {
                        component.push(y.clone());
                        queue.push_back(y);
                    }
                }
            }
            classes.push(component.iter().map(|x| self.decode(source, x)).collect());
        }
        classes.sort();
        Ok(classes)
    }
}

/// Decides `p = q` modulo the facts of `ologism`, searching through words
/// of at most `bound` arcs (see [`CongruenceIndex::equal`]).
pub fn equal_paths(ologism: &Ologism, p: &PathWord, q: &PathWord, bound: Option<usize>) -> Result<Equality, EqError> {
    CongruenceIndex::new(ologism)?.equal(p, q, bound)
}

pub fn congruent_closure_classes(
    ologism: &Ologism,
    source: &TypeId,
    target: &TypeId,
    bound: usize,
) -> Result<Vec<BTreeSet<PathWord>>, EqError> {
    CongruenceIndex::new(ologism)?.classes(source, target, bound)
}

/// Replays a trace from `p`, returning the final word.
pub fn replay_trace(ologism: &Ologism, p: &PathWord, trace: &[RewriteStep]) -> Result<PathWord, String> {
    let facts: BTreeMap<String, &crate::olog::Fact> = ologism.facts.iter().map(|f| (f.describe(), f)).collect();
    let mut current = p.clone();
    for step in trace {
        let fact = facts.get(&step.fact).ok_or_else(|| format!("unknown fact `{}`", step.fact))?;
        let (from, to) = match step.direction {
            Direction::LeftToRight => (&fact.lhs, &fact.rhs),
            Direction::RightToLeft => (&fact.rhs, &fact.lhs),
        };
        let arcs = current.arcs();
        let n = from.len();
        if step.position + n > arcs.len() || arcs[step.position..step.position + n] != *from.arcs() {
            return Err(format!("step at {} does not match {}", step.position, from));
        }
        let mut next = arcs[..step.position].to_vec();
        next.extend(to.arcs().iter().cloned());
        next.extend(arcs[step.position + n..].iter().cloned());
        let rebuilt = PathWord::new(current.source().clone(), current.target().clone(), next)
            .map_err(|e| e.to_string())?;
        if rebuilt != step.result {
            return Err(format!("step produced {rebuilt}, trace says {}", step.result));
        }
        current = rebuilt;
    }
    Ok(current)
}
